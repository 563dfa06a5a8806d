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

#include <immintrin.h>

#include <cmath>

#include "kernels_impl.hpp"

namespace ecoprof::kernels::detail {
namespace {

inline double horizontal_add(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d pair = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

double avx2_trapezoid(const double* t, const double* p, std::size_t n) {
    if (n < 2) {
        return 0.0;
    }
    const std::size_t segments = n - 1;
    __m256d sum = _mm256_setzero_pd();
    __m256d comp = _mm256_setzero_pd();
    const auto accumulate = [&](__m256d x, __m256d dt) {
        const __m256d prod = _mm256_mul_pd(x, dt);
        const __m256d prod_err = _mm256_fmsub_pd(x, dt, prod);
        const __m256d s = _mm256_add_pd(sum, prod);
        const __m256d z = _mm256_sub_pd(s, sum);
        const __m256d e = _mm256_add_pd(_mm256_sub_pd(sum, _mm256_sub_pd(s, z)), _mm256_sub_pd(prod, z));
        sum = s;
        comp = _mm256_add_pd(comp, _mm256_add_pd(e, prod_err));
    };
    std::size_t i = 0;
    for (; i + 4 <= segments; i += 4) {
        const __m256d dt = _mm256_sub_pd(_mm256_loadu_pd(t + i + 1), _mm256_loadu_pd(t + i));
        accumulate(_mm256_loadu_pd(p + i), dt);
        accumulate(_mm256_loadu_pd(p + i + 1), dt);
    }
    alignas(32) double lanes[4];
    alignas(32) double lane_comp[4];
    _mm256_store_pd(lanes, sum);
    _mm256_store_pd(lane_comp, comp);
    double s = 0.0;
    double c = 0.0;
    for (int k = 0; k < 4; ++k) {
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

double avx2_sum(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    }
    double total = horizontal_add(acc);
    for (; i < n; ++i) {
        total += x[i];
    }
    return total;
}

double avx2_squared_deviation(const double* x, std::size_t n, double mean) {
    const __m256d m = _mm256_set1_pd(mean);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), m);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
    }
    double total = horizontal_add(acc);
    for (; i < n; ++i) {
        const double d = x[i] - mean;
        total += d * d;
    }
    return total;
}

std::size_t avx2_first_non_increasing(const double* t, std::size_t n) {
    if (n < 2) {
        return n;
    }
    std::size_t i = 1;
    for (; i + 4 <= n; i += 4) {
        // NGT_UQ is true for NaN, matching !(a > b) in the scalar kernel.
        const __m256d bad = _mm256_cmp_pd(_mm256_loadu_pd(t + i), _mm256_loadu_pd(t + i - 1),
                                          _CMP_NGT_UQ);
        const int mask = _mm256_movemask_pd(bad);
        if (mask != 0) {
            return i + static_cast<std::size_t>(__builtin_ctz(static_cast<unsigned>(mask)));
        }
    }
    for (; i < n; ++i) {
        if (!(t[i] > t[i - 1])) {
            return i;
        }
    }
    return n;
}

std::size_t avx2_first_negative(const double* x, std::size_t n) {
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const int mask = _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(x + i), zero, _CMP_LT_OQ));
        if (mask != 0) {
            return i + static_cast<std::size_t>(__builtin_ctz(static_cast<unsigned>(mask)));
        }
    }
    for (; i < n; ++i) {
        if (x[i] < 0.0) {
            return i;
        }
    }
    return n;
}

}  // namespace

const KernelSet kAvx2Kernels{
    "avx2",
    avx2_trapezoid,
    avx2_sum,
    avx2_squared_deviation,
    avx2_first_non_increasing,
    avx2_first_negative,
};

}  // namespace ecoprof::kernels::detail
