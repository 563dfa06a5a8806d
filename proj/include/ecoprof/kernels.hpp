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

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

// Data-parallel inner loops over power traces. Each instruction set provides
// the same table of kernels; the fastest one the running CPU supports is
// picked once at first use. Set ECOPROF_KERNELS=scalar to force the
// reference implementation.
namespace ecoprof::kernels {

struct KernelSet {
    const char* name;

    // Trapezoidal integral of p over t, in (unit of p) x (unit of t).
    double (*trapezoid)(const double* t, const double* p, std::size_t n);
    double (*sum)(const double* x, std::size_t n);
    // Sum of (x[i] - mean)^2.
    double (*squared_deviation)(const double* x, std::size_t n, double mean);
    // First i >= 1 with !(t[i] > t[i-1]); n when t is strictly increasing.
    std::size_t (*first_non_increasing)(const double* t, std::size_t n);
    // First i with x[i] < 0; n when none.
    std::size_t (*first_negative)(const double* x, std::size_t n);
};

const KernelSet& scalar_kernels();

// nullptr when the variant was not compiled in or the CPU lacks support.
const KernelSet* avx2_kernels();
const KernelSet* neon_kernels();

/// Every kernel set usable on this machine, scalar first.
std::vector<const KernelSet*> available_kernels();

const KernelSet& active_kernels();

double trapezoid(std::span<const double> t, std::span<const double> p);
double sum(std::span<const double> x);
double squared_deviation(std::span<const double> x, double mean);
std::size_t first_non_increasing(std::span<const double> t);
std::size_t first_negative(std::span<const double> x);

}  // namespace ecoprof::kernels
