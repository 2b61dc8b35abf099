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

#include "cutlocus/sfem.hpp"

#include <string>

namespace cutlocus {

SourceSpec make_source(const RefinedPair& pair, const ElementGeometry& refined_geom,
                       const Vec3& point) {
    SourceSpec src;
    src.source_vertex = nearest_vertex(pair.refined, point);
    src.total_mass = 0.0;
    for (double a : refined_geom.areas) src.total_mass += a;
    return src;
}

StiffnessAssembler::StiffnessAssembler(const RefinedPair& pair,
                                       const ElementGeometry& refined_geom)
    : pair_(&pair) {
    const auto& mesh = pair.refined;
    if (refined_geom.areas.size() != mesh.triangle_count())
        throw DimensionMismatch("element geometry does not match the refined mesh");
    const auto topo = build_edges(mesh);
    pattern_ = CsrMatrix::from_pairs(mesh.vertex_count(), topo.edges);

    const auto nt = mesh.triangle_count();
    local_.resize(nt);
    slots_.resize(nt);
    for (std::size_t t = 0; t < nt; ++t) {
        const auto& tri = mesh.triangles()[t];
        const auto& grad = refined_geom.gradients[t];
        const double area = refined_geom.areas[t];
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                const auto s = static_cast<std::size_t>(3 * i + j);
                local_[t][s] = area * grad[static_cast<std::size_t>(i)].dot(grad[static_cast<std::size_t>(j)]);
                slots_[t][s] = pattern_.position(tri[static_cast<std::size_t>(i)], tri[static_cast<std::size_t>(j)]);
            }
        }
    }
}

void StiffnessAssembler::assemble(std::span<const double> mu, CsrMatrix& out) const {
    if (mu.size() != pair_->coarse.triangle_count())
        throw DimensionMismatch("density has " + std::to_string(mu.size()) +
                                " values, coarse mesh has " +
                                std::to_string(pair_->coarse.triangle_count()) + " triangles");
    if (out.nonzeros() != pattern_.nonzeros()) out = pattern_;
    out.set_zero();
    auto vals = out.values();
    for (std::size_t t = 0; t < local_.size(); ++t) {
        const double w = mu[static_cast<std::size_t>(pair_->parent[t])];
        for (std::size_t s = 0; s < 9; ++s)
            vals[static_cast<std::size_t>(slots_[t][s])] += w * local_[t][s];
    }
}

CsrMatrix StiffnessAssembler::assemble(std::span<const double> mu) const {
    CsrMatrix out = pattern_;
    assemble(mu, out);
    return out;
}

CsrMatrix assemble_stiffness(const RefinedPair& pair, const ElementGeometry& refined_geom,
                             const DensityField& mu) {
    return StiffnessAssembler(pair, refined_geom).assemble(mu.values);
}

std::vector<double> assemble_rhs(const RefinedPair& pair, const ElementGeometry& refined_geom,
                                 const SourceSpec& src) {
    const auto& mesh = pair.refined;
    if (src.source_vertex < 0 || static_cast<std::size_t>(src.source_vertex) >= mesh.vertex_count())
        throw DimensionMismatch("source vertex out of range");
    auto b = lumped_vertex_areas(mesh, refined_geom);
    for (double& v : b) v = -v;
    b[static_cast<std::size_t>(src.source_vertex)] += src.total_mass;
    return b;
}

PotentialField solve_grounded(const LinearSystem& system, double rel_tol, int max_iter,
                              SolveReport* report, const PotentialField* initial_guess) {
    PotentialField u;
    if (initial_guess != nullptr && initial_guess->values.size() == system.rhs.size())
        u.values = initial_guess->values;
    else
        u.values.assign(system.rhs.size(), 0.0);
    const auto r = solve_grounded(system.matrix, system.rhs, system.ground, u.values,
                                  SolveOptions{rel_tol, max_iter});
    if (report != nullptr) *report = r;
    return u;
}

std::vector<double> gradient_norms(const RefinedPair& pair, const ElementGeometry& refined_geom,
                                   const PotentialField& u) {
    const auto& mesh = pair.refined;
    if (u.values.size() != mesh.vertex_count())
        throw DimensionMismatch("potential does not match the refined mesh");
    std::vector<double> out(mesh.triangle_count());
    for (std::size_t t = 0; t < out.size(); ++t) {
        const auto& tri = mesh.triangles()[t];
        const auto& g = refined_geom.gradients[t];
        const Vec3 grad = u.values[static_cast<std::size_t>(tri[0])] * g[0] +
                          u.values[static_cast<std::size_t>(tri[1])] * g[1] +
                          u.values[static_cast<std::size_t>(tri[2])] * g[2];
        out[t] = grad.norm();
    }
    return out;
}

std::vector<double> aggregate_to_coarse(std::span<const double> refined_values,
                                        const RefinedPair& pair,
                                        const ElementGeometry& refined_geom) {
    if (refined_values.size() != pair.refined.triangle_count())
        throw DimensionMismatch("refined values do not match the refined mesh");
    std::vector<double> sum(pair.coarse.triangle_count(), 0.0);
    std::vector<double> area(pair.coarse.triangle_count(), 0.0);
    for (std::size_t t = 0; t < refined_values.size(); ++t) {
        const auto c = static_cast<std::size_t>(pair.parent[t]);
        sum[c] += refined_geom.areas[t] * refined_values[t];
        area[c] += refined_geom.areas[t];
    }
    for (std::size_t c = 0; c < sum.size(); ++c) sum[c] /= area[c];
    return sum;
}

} // namespace cutlocus
