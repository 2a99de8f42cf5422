/*
 * Copyright 2026 The pnsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "pnsim/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <utility>

namespace pnsim {

namespace {

// FFTW_ESTIMATE keeps plan selection deterministic run to run, which the
// byte-identical output guarantee depends on.
class plan_cache {
public:
    ~plan_cache() {
        for (auto& [key, plan] : plans_) {
            fftw_destroy_plan(plan);
        }
    }

    fftw_plan get(std::size_t n, fft_direction dir) {
        std::lock_guard lock(mutex_);
        const auto key = std::make_pair(n, dir);
        if (auto it = plans_.find(key); it != plans_.end()) {
            return it->second;
        }
        auto* in = fftw_alloc_complex(n);
        auto* out = fftw_alloc_complex(n);
        const int sign = dir == fft_direction::forward ? FFTW_FORWARD : FFTW_BACKWARD;
        fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), in, out, sign,
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(in);
        fftw_free(out);
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::pair<std::size_t, fft_direction>, fftw_plan> plans_;
};

plan_cache& plans() {
    static plan_cache cache;
    return cache;
}

}  // namespace

void raw_dft(std::span<const cf64> in, std::span<cf64> out, fft_direction dir) {
    if (in.size() != out.size()) {
        throw domain_error("dft: input and output sizes differ");
    }
    if (in.empty()) {
        return;
    }
    fftw_plan plan = plans().get(in.size(), dir);
    // Plans are out-of-place; an aliased call goes through a copy.
    cvec scratch;
    const cf64* src_ptr = in.data();
    if (src_ptr == out.data()) {
        scratch.assign(in.begin(), in.end());
        src_ptr = scratch.data();
    }
    // FFTW takes a non-const input pointer but does not write to it for
    // out-of-place plans.
    auto* src = reinterpret_cast<fftw_complex*>(const_cast<cf64*>(src_ptr));
    auto* dst = reinterpret_cast<fftw_complex*>(out.data());
    fftw_execute_dft(plan, src, dst);
}

void unitary_dft(std::span<const cf64> in, std::span<cf64> out, fft_direction dir) {
    raw_dft(in, out, dir);
    const double scale = 1.0 / std::sqrt(static_cast<double>(in.size()));
    for (auto& v : out) {
        v *= scale;
    }
}

}  // namespace pnsim
