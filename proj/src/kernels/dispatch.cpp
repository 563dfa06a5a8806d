// Copyright 2026 the ecoprof authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cstdlib>
#include <string_view>

#include "kernels_impl.hpp"

namespace ecoprof::kernels {
namespace {

const KernelSet kScalarKernels{
    "scalar",
    detail::scalar_trapezoid,
    detail::scalar_sum,
    detail::scalar_squared_deviation,
    detail::scalar_first_non_increasing,
    detail::scalar_first_negative,
};

const KernelSet& select_kernels() {
    if (const char* forced = std::getenv("ECOPROF_KERNELS")) {
        const std::string_view name(forced);
        for (const KernelSet* set : available_kernels()) {
            if (name == set->name) {
                return *set;
            }
        }
    }
    if (const KernelSet* set = avx2_kernels()) {
        return *set;
    }
    if (const KernelSet* set = neon_kernels()) {
        return *set;
    }
    return kScalarKernels;
}

}  // namespace

const KernelSet& scalar_kernels() { return kScalarKernels; }

const KernelSet* avx2_kernels() {
#if defined(ECOPROF_HAVE_AVX2)
    static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return supported ? &detail::kAvx2Kernels : nullptr;
#else
    return nullptr;
#endif
}

const KernelSet* neon_kernels() {
#if defined(ECOPROF_HAVE_NEON)
    return &detail::kNeonKernels;
#else
    return nullptr;
#endif
}

std::vector<const KernelSet*> available_kernels() {
    std::vector<const KernelSet*> sets{&kScalarKernels};
    if (const KernelSet* set = avx2_kernels()) {
        sets.push_back(set);
    }
    if (const KernelSet* set = neon_kernels()) {
        sets.push_back(set);
    }
    return sets;
}

const KernelSet& active_kernels() {
    static const KernelSet& active = select_kernels();
    return active;
}

double trapezoid(std::span<const double> t, std::span<const double> p) {
    return active_kernels().trapezoid(t.data(), p.data(), std::min(t.size(), p.size()));
}

double sum(std::span<const double> x) { return active_kernels().sum(x.data(), x.size()); }

double squared_deviation(std::span<const double> x, double mean) {
    return active_kernels().squared_deviation(x.data(), x.size(), mean);
}

std::size_t first_non_increasing(std::span<const double> t) {
    return active_kernels().first_non_increasing(t.data(), t.size());
}

std::size_t first_negative(std::span<const double> x) {
    return active_kernels().first_negative(x.data(), x.size());
}

}  // namespace ecoprof::kernels
