/*
 * Copyright 2026 The cutlocus Authors. All rights reserved.
 * This file is licensed to you under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License. You may obtain a copy
 * of the License at http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software distributed under
 * the License is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR REPRESENTATIONS
 * OF ANY KIND, either express or implied. See the License for the specific language
 * governing permissions and limitations under the License.
 */

// Built with -mavx2 -mfma; only reached after a runtime CPU check.

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "kernels_internal.hpp"

namespace cutlocus::kernels {

namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d pair = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

inline double hmax(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d pair = _mm_max_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_max_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

double dot(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(&x[i]), _mm256_loadu_pd(&y[i]), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(&x[i + 4]), _mm256_loadu_pd(&y[i + 4]), acc1);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(&x[i]), _mm256_loadu_pd(&y[i]), acc0);
    double sum = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) sum += x[i] * y[i];
    return sum;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
    const std::size_t n = x.size();
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(&y[i], _mm256_fmadd_pd(va, _mm256_loadu_pd(&x[i]), _mm256_loadu_pd(&y[i])));
    for (; i < n; ++i) y[i] += a * x[i];
}

void xpby(std::span<const double> x, double b, std::span<double> y) {
    const std::size_t n = x.size();
    const __m256d vb = _mm256_set1_pd(b);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(&y[i], _mm256_fmadd_pd(vb, _mm256_loadu_pd(&y[i]), _mm256_loadu_pd(&x[i])));
    for (; i < n; ++i) y[i] = x[i] + b * y[i];
}

void multiply(std::span<const double> d, std::span<const double> r, std::span<double> z) {
    const std::size_t n = d.size();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(&z[i], _mm256_mul_pd(_mm256_loadu_pd(&d[i]), _mm256_loadu_pd(&r[i])));
    for (; i < n; ++i) z[i] = d[i] * r[i];
}

void spmv(const CsrView& a, std::span<const double> x, std::span<double> y) {
    const std::size_t rows = a.row_ptr.size() - 1;
    const double* xs = x.data();
    for (std::size_t r = 0; r < rows; ++r) {
        auto k = static_cast<std::size_t>(a.row_ptr[r]);
        const auto end = static_cast<std::size_t>(a.row_ptr[r + 1]);
        __m256d acc = _mm256_setzero_pd();
        for (; k + 4 <= end; k += 4) {
            const __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(&a.col[k]));
            const __m256d xv = _mm256_i32gather_pd(xs, idx, 8);
            acc = _mm256_fmadd_pd(_mm256_loadu_pd(&a.val[k]), xv, acc);
        }
        double sum = hsum(acc);
        for (; k < end; ++k) sum += a.val[k] * xs[a.col[k]];
        y[r] = sum;
    }
}

double density_update(std::span<const double> mu, std::span<const double> q, double dt,
                      double floor, std::span<double> mu_out) {
    const std::size_t n = mu.size();
    const __m256d vdt = _mm256_set1_pd(dt);
    const __m256d vfloor = _mm256_set1_pd(floor);
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d sign = _mm256_set1_pd(-0.0);
    __m256d worst = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d m = _mm256_loadu_pd(&mu[i]);
        const __m256d rate = _mm256_mul_pd(vdt, _mm256_sub_pd(_mm256_loadu_pd(&q[i]), one));
        const __m256d next = _mm256_max_pd(vfloor, _mm256_fmadd_pd(m, rate, m));
        const __m256d change = _mm256_div_pd(_mm256_andnot_pd(sign, _mm256_sub_pd(next, m)), m);
        worst = _mm256_max_pd(worst, change);
        _mm256_storeu_pd(&mu_out[i], next);
    }
    double w = hmax(worst);
    for (; i < n; ++i) {
        const double next = std::max(floor, mu[i] + mu[i] * (dt * (q[i] - 1.0)));
        w = std::max(w, std::abs(next - mu[i]) / mu[i]);
        mu_out[i] = next;
    }
    return w;
}

constexpr KernelTable kAvx2{Isa::Avx2, dot, axpy, xpby, multiply, spmv, density_update};

} // namespace

const KernelTable* detail::avx2_table() { return &kAvx2; }

} // namespace cutlocus::kernels
