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

#include <arm_neon.h>

#include <cmath>

#include "kernels_impl.hpp"

namespace ecoprof::kernels::detail {
namespace {

double neon_trapezoid(const double* t, const double* p, std::size_t n) {
    if (n < 2) {
        return 0.0;
    }
    const std::size_t segments = n - 1;
    float64x2_t sum = vdupq_n_f64(0.0);
    float64x2_t comp = vdupq_n_f64(0.0);
    const auto accumulate = [&](float64x2_t x, float64x2_t dt) {
        const float64x2_t prod = vmulq_f64(x, dt);
        // vfmsq(a, b, c) = a - b*c, so this is -(prod - x*dt).
        const float64x2_t prod_err = vnegq_f64(vfmsq_f64(prod, x, dt));
        const float64x2_t s = vaddq_f64(sum, prod);
        const float64x2_t z = vsubq_f64(s, sum);
        const float64x2_t e = vaddq_f64(vsubq_f64(sum, vsubq_f64(s, z)), vsubq_f64(prod, z));
        sum = s;
        comp = vaddq_f64(comp, vaddq_f64(e, prod_err));
    };
    std::size_t i = 0;
    for (; i + 2 <= segments; i += 2) {
        const float64x2_t dt = vsubq_f64(vld1q_f64(t + i + 1), vld1q_f64(t + i));
        accumulate(vld1q_f64(p + i), dt);
        accumulate(vld1q_f64(p + i + 1), dt);
    }
    double s = 0.0;
    double c = 0.0;
    const double lanes[2] = {vgetq_lane_f64(sum, 0), vgetq_lane_f64(sum, 1)};
    const double lane_comp[2] = {vgetq_lane_f64(comp, 0), vgetq_lane_f64(comp, 1)};
    for (int k = 0; k < 2; ++k) {
        double e = 0.0;
        two_sum(s, lanes[k], s, e);
        c += e + lane_comp[k];
    }
    for (; i < segments; ++i) {
        const double dt = t[i + 1] - t[i];
        for (const double x : {p[i], p[i + 1]}) {
            const double prod = x * dt;
            const double prod_err = std::fma(x, dt, -prod);
            double e = 0.0;
            two_sum(s, prod, s, e);
            c += e + prod_err;
        }
    }
    return 0.5 * (s + c);
}

double neon_sum(const double* x, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        acc = vaddq_f64(acc, vld1q_f64(x + i));
    }
    double total = vaddvq_f64(acc);
    for (; i < n; ++i) {
        total += x[i];
    }
    return total;
}

double neon_squared_deviation(const double* x, std::size_t n, double mean) {
    const float64x2_t m = vdupq_n_f64(mean);
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t d = vsubq_f64(vld1q_f64(x + i), m);
        acc = vaddq_f64(acc, vmulq_f64(d, d));
    }
    double total = vaddvq_f64(acc);
    for (; i < n; ++i) {
        const double d = x[i] - mean;
        total += d * d;
    }
    return total;
}

}  // namespace

// The scans exit early and gain little from two-lane vectors.
const KernelSet kNeonKernels{
    "neon",
    neon_trapezoid,
    neon_sum,
    neon_squared_deviation,
    scalar_first_non_increasing,
    scalar_first_negative,
};

}  // namespace ecoprof::kernels::detail
