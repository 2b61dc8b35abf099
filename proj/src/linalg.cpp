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

#include "cutlocus/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace cutlocus {

CsrMatrix CsrMatrix::from_pairs(std::size_t n, std::span<const std::array<Index, 2>> pairs) {
    std::vector<std::int32_t> degree(n, 1);
    for (const auto& p : pairs) {
        ++degree[static_cast<std::size_t>(p[0])];
        ++degree[static_cast<std::size_t>(p[1])];
    }
    CsrMatrix m;
    m.row_ptr_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) m.row_ptr_[i + 1] = m.row_ptr_[i] + degree[i];
    m.col_.assign(static_cast<std::size_t>(m.row_ptr_[n]), 0);
    std::vector<std::int32_t> fill(m.row_ptr_.begin(), m.row_ptr_.end() - 1);
    for (std::size_t i = 0; i < n; ++i) m.col_[static_cast<std::size_t>(fill[i]++)] = static_cast<std::int32_t>(i);
    for (const auto& p : pairs) {
        m.col_[static_cast<std::size_t>(fill[static_cast<std::size_t>(p[0])]++)] = p[1];
        m.col_[static_cast<std::size_t>(fill[static_cast<std::size_t>(p[1])]++)] = p[0];
    }
    for (std::size_t i = 0; i < n; ++i)
        std::sort(m.col_.begin() + m.row_ptr_[i], m.col_.begin() + m.row_ptr_[i + 1]);
    m.val_.assign(m.col_.size(), 0.0);
    return m;
}

std::int32_t CsrMatrix::position(Index i, Index j) const {
    const auto begin = col_.begin() + row_ptr_[static_cast<std::size_t>(i)];
    const auto end = col_.begin() + row_ptr_[static_cast<std::size_t>(i) + 1];
    const auto it = std::lower_bound(begin, end, j);
    if (it == end || *it != j) return -1;
    return static_cast<std::int32_t>(it - col_.begin());
}

double CsrMatrix::at(Index i, Index j) const {
    const auto pos = position(i, j);
    return pos < 0 ? 0.0 : val_[static_cast<std::size_t>(pos)];
}

void CsrMatrix::set_zero() { std::fill(val_.begin(), val_.end(), 0.0); }

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    kernels::active().spmv(view(), x, y);
}

double projected_relative_residual(const CsrMatrix& a, std::span<const double> b,
                                   std::span<const double> x) {
    const auto& k = kernels::active();
    std::vector<double> r(b.size());
    a.multiply(x, r);
    double mean = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] -= b[i];
        mean += r[i];
    }
    mean /= static_cast<double>(r.size());
    for (double& v : r) v -= mean;
    const double bnorm = std::sqrt(k.dot(b, b));
    const double rnorm = std::sqrt(k.dot(r, r));
    return bnorm > 0.0 ? rnorm / bnorm : rnorm;
}

SolveReport solve_grounded(const CsrMatrix& a, std::span<const double> b, Index ground,
                           std::span<double> x, const SolveOptions& options) {
    const std::size_t n = a.rows();
    if (b.size() != n || x.size() != n)
        throw DimensionMismatch("solve_grounded: matrix has " + std::to_string(n) +
                                " rows, rhs " + std::to_string(b.size()) + ", unknowns " +
                                std::to_string(x.size()));
    if (ground < 0 || static_cast<std::size_t>(ground) >= n)
        throw DimensionMismatch("solve_grounded: ground index out of range");

    const auto& k = kernels::active();
    const auto g = static_cast<std::size_t>(ground);

    const double bnorm = std::sqrt(k.dot(b, b));
    if (bnorm == 0.0) {
        std::fill(x.begin(), x.end(), 0.0);
        return {};
    }

    // Grounded copy: row and column `ground` replaced by the identity.
    CsrMatrix ag = a;
    auto vals = ag.values();
    const auto rp = ag.row_ptr();
    const auto cols = ag.cols();
    for (auto p = rp[g]; p < rp[g + 1]; ++p) {
        const auto j = cols[static_cast<std::size_t>(p)];
        vals[static_cast<std::size_t>(p)] = (static_cast<std::size_t>(j) == g) ? 1.0 : 0.0;
        if (static_cast<std::size_t>(j) != g) {
            const auto q = ag.position(j, ground);
            if (q >= 0) vals[static_cast<std::size_t>(q)] = 0.0;
        }
    }
    std::vector<double> bg(b.begin(), b.end());
    bg[g] = 0.0;
    x[g] = 0.0;

    std::vector<double> inv_diag(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = ag.at(static_cast<Index>(i), static_cast<Index>(i));
        inv_diag[i] = d > 0.0 ? 1.0 / d : 1.0;
    }

    std::vector<double> r(n), z(n), p(n), ap(n);
    auto restart = [&] {
        ag.multiply(x, r);
        for (std::size_t i = 0; i < n; ++i) r[i] = bg[i] - r[i];
    };

    SolveReport report;
    double target = 0.5 * options.rel_tol * bnorm;
    while (true) {
        restart();
        k.multiply(inv_diag, r, z);
        std::copy(z.begin(), z.end(), p.begin());
        double rz = k.dot(r, z);
        double rnorm = std::sqrt(k.dot(r, r));
        while (rnorm > target && report.iterations < options.max_iter) {
            ag.multiply(p, ap);
            const double pap = k.dot(p, ap);
            if (!(pap > 0.0)) break;
            const double alpha = rz / pap;
            k.axpy(alpha, p, x);
            k.axpy(-alpha, ap, r);
            k.multiply(inv_diag, r, z);
            const double rz_next = k.dot(r, z);
            k.xpby(z, rz_next / rz, p);
            rz = rz_next;
            rnorm = std::sqrt(k.dot(r, r));
            ++report.iterations;
        }
        report.relative_residual = projected_relative_residual(a, b, x);
        if (report.relative_residual <= options.rel_tol) return report;
        if (report.iterations >= options.max_iter || target < 1e-6 * options.rel_tol * bnorm) {
            throw NoConvergence("conjugate gradients stopped after " +
                                std::to_string(report.iterations) +
                                " iterations with relative residual " +
                                std::to_string(report.relative_residual));
        }
        target *= 0.1;
    }
}

} // namespace cutlocus
