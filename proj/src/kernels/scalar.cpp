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

#include <cmath>

#include "kernels_impl.hpp"

namespace ecoprof::kernels::detail {

// Compensated: each p*dt product and each addition keeps its rounding
// error, so the result is as if computed in twice the working precision.
double scalar_trapezoid(const double* t, const double* p, std::size_t n) {
    double s = 0.0;
    double c = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double dt = t[i] - t[i - 1];
        for (const double x : {p[i - 1], p[i]}) {
            const double prod = x * dt;
            const double prod_err = std::fma(x, dt, -prod);
            double e = 0.0;
            two_sum(s, prod, s, e);
            c += e + prod_err;
        }
    }
    return 0.5 * (s + c);
}

double scalar_sum(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += x[i];
    }
    return acc;
}

double scalar_squared_deviation(const double* x, std::size_t n, double mean) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - mean;
        acc += d * d;
    }
    return acc;
}

std::size_t scalar_first_non_increasing(const double* t, std::size_t n) {
    for (std::size_t i = 1; i < n; ++i) {
        if (!(t[i] > t[i - 1])) {
            return i;
        }
    }
    return n;
}

std::size_t scalar_first_negative(const double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        if (x[i] < 0.0) {
            return i;
        }
    }
    return n;
}

}  // namespace ecoprof::kernels::detail
