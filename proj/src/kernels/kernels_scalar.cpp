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

#include <algorithm>
#include <cmath>

#include "kernels_internal.hpp"

namespace cutlocus::kernels {

namespace {

double dot(std::span<const double> x, std::span<const double> y) {
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) sum += x[i] * y[i];
    return sum;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

void xpby(std::span<const double> x, double b, std::span<double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + b * y[i];
}

void multiply(std::span<const double> d, std::span<const double> r, std::span<double> z) {
    for (std::size_t i = 0; i < d.size(); ++i) z[i] = d[i] * r[i];
}

void spmv(const CsrView& a, std::span<const double> x, std::span<double> y) {
    const std::size_t rows = a.row_ptr.size() - 1;
    for (std::size_t r = 0; r < rows; ++r) {
        double sum = 0.0;
        for (auto k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k)
            sum += a.val[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(a.col[static_cast<std::size_t>(k)])];
        y[r] = sum;
    }
}

double density_update(std::span<const double> mu, std::span<const double> q, double dt,
                      double floor, std::span<double> mu_out) {
    double worst = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        const double next = std::max(floor, mu[i] + mu[i] * (dt * (q[i] - 1.0)));
        worst = std::max(worst, std::abs(next - mu[i]) / mu[i]);
        mu_out[i] = next;
    }
    return worst;
}

constexpr KernelTable kScalar{Isa::Scalar, dot, axpy, xpby, multiply, spmv, density_update};

} // namespace

const KernelTable& scalar_table() { return kScalar; }

} // namespace cutlocus::kernels
