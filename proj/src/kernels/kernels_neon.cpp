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

#include <arm_neon.h>

#include <algorithm>
#include <cmath>

#include "kernels_internal.hpp"

namespace cutlocus::kernels {

namespace {

double dot(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc0 = vfmaq_f64(acc0, vld1q_f64(&x[i]), vld1q_f64(&y[i]));
        acc1 = vfmaq_f64(acc1, vld1q_f64(&x[i + 2]), vld1q_f64(&y[i + 2]));
    }
    double sum = vaddvq_f64(vaddq_f64(acc0, acc1));
    for (; i < n; ++i) sum += x[i] * y[i];
    return sum;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
    const std::size_t n = x.size();
    const float64x2_t va = vdupq_n_f64(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(&y[i], vfmaq_f64(vld1q_f64(&y[i]), va, vld1q_f64(&x[i])));
    for (; i < n; ++i) y[i] += a * x[i];
}

void xpby(std::span<const double> x, double b, std::span<double> y) {
    const std::size_t n = x.size();
    const float64x2_t vb = vdupq_n_f64(b);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(&y[i], vfmaq_f64(vld1q_f64(&x[i]), vb, vld1q_f64(&y[i])));
    for (; i < n; ++i) y[i] = x[i] + b * y[i];
}

void multiply(std::span<const double> d, std::span<const double> r, std::span<double> z) {
    const std::size_t n = d.size();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(&z[i], vmulq_f64(vld1q_f64(&d[i]), vld1q_f64(&r[i])));
    for (; i < n; ++i) z[i] = d[i] * r[i];
}

void spmv(const CsrView& a, std::span<const double> x, std::span<double> y) {
    const std::size_t rows = a.row_ptr.size() - 1;
    for (std::size_t r = 0; r < rows; ++r) {
        auto k = static_cast<std::size_t>(a.row_ptr[r]);
        const auto end = static_cast<std::size_t>(a.row_ptr[r + 1]);
        float64x2_t acc = vdupq_n_f64(0.0);
        for (; k + 2 <= end; k += 2) {
            const double gathered[2] = {x[static_cast<std::size_t>(a.col[k])],
                                        x[static_cast<std::size_t>(a.col[k + 1])]};
            acc = vfmaq_f64(acc, vld1q_f64(&a.val[k]), vld1q_f64(gathered));
        }
        double sum = vaddvq_f64(acc);
        for (; k < end; ++k) sum += a.val[k] * x[static_cast<std::size_t>(a.col[k])];
        y[r] = sum;
    }
}

double density_update(std::span<const double> mu, std::span<const double> q, double dt,
                      double floor, std::span<double> mu_out) {
    const std::size_t n = mu.size();
    const float64x2_t vdt = vdupq_n_f64(dt);
    const float64x2_t vfloor = vdupq_n_f64(floor);
    const float64x2_t one = vdupq_n_f64(1.0);
    float64x2_t worst = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t m = vld1q_f64(&mu[i]);
        const float64x2_t rate = vmulq_f64(vdt, vsubq_f64(vld1q_f64(&q[i]), one));
        const float64x2_t next = vmaxq_f64(vfloor, vfmaq_f64(m, m, rate));
        worst = vmaxq_f64(worst, vdivq_f64(vabsq_f64(vsubq_f64(next, m)), m));
        vst1q_f64(&mu_out[i], next);
    }
    double w = vmaxvq_f64(worst);
    for (; i < n; ++i) {
        const double next = std::max(floor, mu[i] + mu[i] * (dt * (q[i] - 1.0)));
        w = std::max(w, std::abs(next - mu[i]) / mu[i]);
        mu_out[i] = next;
    }
    return w;
}

constexpr KernelTable kNeon{Isa::Neon, dot, axpy, xpby, multiply, spmv, density_update};

} // namespace

const KernelTable* detail::neon_table() { return &kNeon; }

} // namespace cutlocus::kernels
