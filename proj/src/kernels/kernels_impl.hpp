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

#pragma once

#include "ecoprof/kernels.hpp"

namespace ecoprof::kernels::detail {

// Knuth two-sum: s + e == a + b exactly.
inline void two_sum(double a, double b, double& s, double& e) {
    s = a + b;
    const double z = s - a;
    e = (a - (s - z)) + (b - z);
}

double scalar_trapezoid(const double* t, const double* p, std::size_t n);
double scalar_sum(const double* x, std::size_t n);
double scalar_squared_deviation(const double* x, std::size_t n, double mean);
std::size_t scalar_first_non_increasing(const double* t, std::size_t n);
std::size_t scalar_first_negative(const double* x, std::size_t n);

#if defined(ECOPROF_HAVE_AVX2)
extern const KernelSet kAvx2Kernels;
#endif
#if defined(ECOPROF_HAVE_NEON)
extern const KernelSet kNeonKernels;
#endif

}  // namespace ecoprof::kernels::detail
