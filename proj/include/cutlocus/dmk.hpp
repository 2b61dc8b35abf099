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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cutlocus/linalg.hpp"
#include "cutlocus/sfem.hpp"

namespace cutlocus {

struct DmkConfig {
    double delta_t = 0.25;
    double mu_init = 1.0;
    /// Lower clamp on the density; unset means 1e-10 x the problem diameter.
    std::optional<double> mu_floor;
    double linear_rel_tol = 1e-9;
    /// Steady state once max_T |mu'_T - mu_T| / mu_T drops to this value.
    double conv_tol = 1e-6;
    int max_steps = 2000;
    /// Allowed per-step increase of the Lyapunov functional, relative to |L|.
    double lyapunov_slack = 1e-8;
    int max_linear_iter = 50000;

    /// Throws ParameterError on out-of-range values.
    void validate() const;
};

/// Discrete transport problem seen by the DMK iteration: a P0 density on
/// cells, a potential on nodes, a stiffness matrix linear in the density and
/// a balanced right-hand side. Implemented by the surface pairing and by
/// the 1-D circle oracle.
class TransportProblem {
public:
    virtual ~TransportProblem() = default;

    virtual std::size_t cell_count() const = 0;
    virtual std::size_t node_count() const = 0;
    /// Measure (area or length) of each density cell.
    virtual std::span<const double> cell_measures() const = 0;
    virtual void assemble(std::span<const double> mu, CsrMatrix& out) const = 0;
    virtual std::span<const double> rhs() const = 0;
    virtual Index ground() const = 0;
    /// Cellwise gradient magnitude of the potential.
    virtual void cell_gradient_norms(std::span<const double> u, std::span<double> q) const = 0;
    /// 1/2 integral of mu |grad u|^2.
    virtual double energy(std::span<const double> mu, std::span<const double> u) const = 0;
    /// Diameter used to scale the default density floor.
    virtual double length_scale() const = 0;
};

/// Surface instance: P0 density on the coarse mesh, P1 potential on the
/// refined mesh.
class SurfaceTransport final : public TransportProblem {
public:
    SurfaceTransport(const RefinedPair& pair, SourceSpec src);

    std::size_t cell_count() const override { return pair_->coarse.triangle_count(); }
    std::size_t node_count() const override { return pair_->refined.vertex_count(); }
    std::span<const double> cell_measures() const override { return coarse_areas_; }
    void assemble(std::span<const double> mu, CsrMatrix& out) const override;
    std::span<const double> rhs() const override { return rhs_; }
    Index ground() const override { return src_.source_vertex; }
    void cell_gradient_norms(std::span<const double> u, std::span<double> q) const override;
    double energy(std::span<const double> mu, std::span<const double> u) const override;
    double length_scale() const override { return diameter_; }

    const RefinedPair& pair() const noexcept { return *pair_; }
    const ElementGeometry& refined_geometry() const noexcept { return refined_geom_; }
    const SourceSpec& source() const noexcept { return src_; }

private:
    const RefinedPair* pair_;
    SourceSpec src_;
    ElementGeometry refined_geom_;
    StiffnessAssembler assembler_;
    std::vector<double> coarse_areas_;
    std::vector<double> rhs_;
    double diameter_;
};

struct DmkState {
    int step = 0;
    DensityField mu;
    PotentialField u;
    double energy = 0.0;
    double mass = 0.0;
    double lyapunov = 0.0;
    double max_rel_change = 0.0;
    int cg_iterations = 0;
};

struct IterationRecord {
    int step = 0;
    double lyapunov = 0.0;
    double energy = 0.0;
    double mass = 0.0;
    double max_rel_change = 0.0;
    double mu_min = 0.0;
    double mu_max = 0.0;
    int cg_iters = 0;
};

struct IterationLog {
    std::vector<IterationRecord> records;
    bool converged = false;

    /// Header plus one row per record; numbers in round-trip form.
    std::string to_csv() const;
    /// Largest L(k+1) - L(k) - slack * |L(k)| over k >= first_step.
    double worst_lyapunov_increase(double slack, int first_step = 2) const;
};

double resolved_mu_floor(const DmkConfig& cfg, const TransportProblem& problem);

/// The DMK density update for one cell.
inline double update_density(double mu, double q, double delta_t, double floor) {
    const double next = mu + mu * (delta_t * (q - 1.0));
    return next > floor ? next : floor;
}

/// Lyapunov functional parts for a density and its elliptic potential.
struct LyapunovParts {
    double energy = 0.0;
    double mass = 0.0;
    double total() const { return energy + mass; }
};
LyapunovParts lyapunov_value(const TransportProblem& problem, std::span<const double> mu,
                             std::span<const double> u);

/// Explicit-Euler DMK iteration on a transport problem.
class DmkSolver {
public:
    DmkSolver(const TransportProblem& problem, DmkConfig cfg);

    /// Constant density mu_init and its potential.
    DmkState init_state() const;
    /// mu' = max(floor, mu + dt mu (|grad u| - 1)) followed by a warm-started
    /// solve for u'.
    DmkState step(const DmkState& state) const;
    /// Iterates until the relative density change reaches conv_tol or
    /// max_steps is exhausted. Non-convergence is reported in the log.
    DmkState run(IterationLog& log) const;

    double mu_floor() const noexcept { return floor_; }
    const DmkConfig& config() const noexcept { return cfg_; }

private:
    void solve(DmkState& state) const;
    IterationRecord record(const DmkState& state) const;

    const TransportProblem* problem_;
    DmkConfig cfg_;
    double floor_;
};

struct DmkResult {
    DmkState state;
    IterationLog log;
};

DmkState init_state(const TransportProblem& problem, const DmkConfig& cfg);
DmkState dmk_step(const DmkState& state, const TransportProblem& problem, const DmkConfig& cfg);
DmkResult run_to_convergence(const TransportProblem& problem, const DmkConfig& cfg);

} // namespace cutlocus
