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

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "cutlocus/kernels.hpp"
#include "cutlocus/mesh.hpp"

namespace cutlocus {

/// Square sparse matrix in CSR layout with sorted column indices.
class CsrMatrix {
public:
    CsrMatrix() = default;

    /// Symmetric pattern holding the diagonal plus both (i, j) and (j, i)
    /// for every listed pair; all values start at zero.
    static CsrMatrix from_pairs(std::size_t n, std::span<const std::array<Index, 2>> pairs);

    std::size_t rows() const noexcept { return row_ptr_.empty() ? 0 : row_ptr_.size() - 1; }
    std::size_t nonzeros() const noexcept { return col_.size(); }

    /// Storage slot of entry (i, j), or -1 when outside the pattern.
    std::int32_t position(Index i, Index j) const;
    double at(Index i, Index j) const;

    std::span<const std::int32_t> row_ptr() const noexcept { return row_ptr_; }
    std::span<const std::int32_t> cols() const noexcept { return col_; }
    std::span<const double> values() const noexcept { return val_; }
    std::span<double> values() noexcept { return val_; }

    void set_zero();
    kernels::CsrView view() const { return {row_ptr_, col_, val_}; }
    void multiply(std::span<const double> x, std::span<double> y) const;

private:
    std::vector<std::int32_t> row_ptr_;
    std::vector<std::int32_t> col_;
    std::vector<double> val_;
};

struct SolveOptions {
    double rel_tol = 1e-9;
    int max_iter = 20000;
};

struct SolveReport {
    int iterations = 0;
    /// ||A x - b - mean(A x - b)|| / ||b|| on the un-grounded system.
    double relative_residual = 0.0;
};

/// Solves A x = b for a symmetric positive semidefinite A whose kernel is
/// the constants, by fixing x[ground] = 0 and running Jacobi-preconditioned
/// conjugate gradients on the remaining unknowns. `x` holds the initial
/// guess on entry. Throws NoConvergence when the residual contract is not
/// met within `max_iter` iterations, DimensionMismatch on size errors.
SolveReport solve_grounded(const CsrMatrix& a, std::span<const double> b, Index ground,
                           std::span<double> x, const SolveOptions& options);

/// Residual measure used by `solve_grounded`.
double projected_relative_residual(const CsrMatrix& a, std::span<const double> b,
                                   std::span<const double> x);

} // namespace cutlocus
