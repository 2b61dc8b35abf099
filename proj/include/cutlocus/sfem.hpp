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

#include <span>
#include <vector>

#include "cutlocus/linalg.hpp"
#include "cutlocus/mesh.hpp"

namespace cutlocus {

/// Piecewise-constant transport density, one value per coarse triangle.
struct DensityField {
    std::vector<double> values;
};

/// Piecewise-linear Kantorovich potential, one value per refined vertex.
/// Grounded so that the source vertex carries 0 and u ~ -distance.
struct PotentialField {
    std::vector<double> values;
};

/// Dirac source: the whole mass sits on one refined vertex and balances the
/// uniform sink over the refined surface.
struct SourceSpec {
    Index source_vertex = 0;
    double total_mass = 0.0;
};

/// Source at the refined vertex closest to `point`, with mass equal to the
/// refined surface area.
SourceSpec make_source(const RefinedPair& pair, const ElementGeometry& refined_geom,
                       const Vec3& point);

struct LinearSystem {
    CsrMatrix matrix;
    std::vector<double> rhs;
    Index ground = 0;
};

/// Stiffness assembly for the P0-density / P1-potential pairing.
///
/// The sparsity pattern, the per-element matrices area * grad(phi_i) .
/// grad(phi_j) and their slots in the CSR storage are computed once, so
/// every later assembly for a new density is a weighted scatter.
class StiffnessAssembler {
public:
    StiffnessAssembler(const RefinedPair& pair, const ElementGeometry& refined_geom);

    /// A_ij = sum_t mu[parent(t)] area(t) grad(phi_i) . grad(phi_j).
    /// Throws DimensionMismatch when `mu` does not match the coarse mesh.
    void assemble(std::span<const double> mu, CsrMatrix& out) const;
    CsrMatrix assemble(std::span<const double> mu) const;

    const CsrMatrix& pattern() const noexcept { return pattern_; }

private:
    const RefinedPair* pair_;
    CsrMatrix pattern_;
    std::vector<std::array<double, 9>> local_;
    std::vector<std::array<std::int32_t, 9>> slots_;
};

CsrMatrix assemble_stiffness(const RefinedPair& pair, const ElementGeometry& refined_geom,
                             const DensityField& mu);

/// b_i = total_mass [i == source] - lumped_area(i).
std::vector<double> assemble_rhs(const RefinedPair& pair, const ElementGeometry& refined_geom,
                                 const SourceSpec& src);

/// Solution of the grounded system. Throws NoConvergence.
PotentialField solve_grounded(const LinearSystem& system, double rel_tol, int max_iter,
                              SolveReport* report = nullptr,
                              const PotentialField* initial_guess = nullptr);

/// |sum_k u_k grad(phi_k)| per refined triangle.
std::vector<double> gradient_norms(const RefinedPair& pair, const ElementGeometry& refined_geom,
                                   const PotentialField& u);

/// Area-weighted mean of the four children of every coarse triangle.
std::vector<double> aggregate_to_coarse(std::span<const double> refined_values,
                                        const RefinedPair& pair,
                                        const ElementGeometry& refined_geom);

} // namespace cutlocus
