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

#include "cutlocus/dmk.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

namespace cutlocus {

void DmkConfig::validate() const {
    if (!(delta_t > 0.0 && delta_t <= 1.0)) throw ParameterError("delta_t must lie in (0, 1]");
    if (!(mu_init > 0.0)) throw ParameterError("mu_init must be > 0");
    if (mu_floor && !(*mu_floor > 0.0)) throw ParameterError("mu_floor must be > 0");
    if (!(linear_rel_tol > 0.0)) throw ParameterError("linear_rel_tol must be > 0");
    if (!(conv_tol > 0.0)) throw ParameterError("conv_tol must be > 0");
    if (max_steps < 0) throw ParameterError("max_steps must be >= 0");
    if (!(lyapunov_slack >= 0.0)) throw ParameterError("lyapunov_slack must be >= 0");
    if (max_linear_iter < 1) throw ParameterError("max_linear_iter must be >= 1");
}

SurfaceTransport::SurfaceTransport(const RefinedPair& pair, SourceSpec src)
    : pair_(&pair),
      src_(src),
      refined_geom_(element_geometry(pair.refined)),
      assembler_(pair, refined_geom_),
      coarse_areas_(pair.coarse.triangle_count(), 0.0),
      rhs_(assemble_rhs(pair, refined_geom_, src)),
      diameter_(pair.coarse.bounding_box_diagonal()) {
    if (!(src.total_mass > 0.0)) throw ParameterError("source mass must be > 0");
    for (std::size_t t = 0; t < refined_geom_.areas.size(); ++t)
        coarse_areas_[static_cast<std::size_t>(pair.parent[t])] += refined_geom_.areas[t];
}

void SurfaceTransport::assemble(std::span<const double> mu, CsrMatrix& out) const {
    assembler_.assemble(mu, out);
}

void SurfaceTransport::cell_gradient_norms(std::span<const double> u, std::span<double> q) const {
    const auto refined = gradient_norms(*pair_, refined_geom_,
                                        PotentialField{std::vector<double>(u.begin(), u.end())});
    const auto coarse = aggregate_to_coarse(refined, *pair_, refined_geom_);
    std::copy(coarse.begin(), coarse.end(), q.begin());
}

double SurfaceTransport::energy(std::span<const double> mu, std::span<const double> u) const {
    const auto& mesh = pair_->refined;
    double sum = 0.0;
    for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
        const auto& tri = mesh.triangles()[t];
        const auto& g = refined_geom_.gradients[t];
        const Vec3 grad = u[static_cast<std::size_t>(tri[0])] * g[0] +
                          u[static_cast<std::size_t>(tri[1])] * g[1] +
                          u[static_cast<std::size_t>(tri[2])] * g[2];
        sum += mu[static_cast<std::size_t>(pair_->parent[t])] * refined_geom_.areas[t] *
               grad.squaredNorm();
    }
    return 0.5 * sum;
}

double resolved_mu_floor(const DmkConfig& cfg, const TransportProblem& problem) {
    return cfg.mu_floor ? *cfg.mu_floor : 1e-10 * problem.length_scale();
}

LyapunovParts lyapunov_value(const TransportProblem& problem, std::span<const double> mu,
                             std::span<const double> u) {
    LyapunovParts parts;
    parts.energy = problem.energy(mu, u);
    const auto measures = problem.cell_measures();
    double mass = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) mass += mu[i] * measures[i];
    parts.mass = 0.5 * mass;
    return parts;
}

DmkSolver::DmkSolver(const TransportProblem& problem, DmkConfig cfg)
    : problem_(&problem), cfg_(std::move(cfg)), floor_(0.0) {
    cfg_.validate();
    floor_ = resolved_mu_floor(cfg_, problem);
}

void DmkSolver::solve(DmkState& state) const {
    CsrMatrix a;
    problem_->assemble(state.mu.values, a);
    if (state.u.values.size() != problem_->node_count())
        state.u.values.assign(problem_->node_count(), 0.0);
    const auto report = solve_grounded(a, problem_->rhs(), problem_->ground(), state.u.values,
                                       SolveOptions{cfg_.linear_rel_tol, cfg_.max_linear_iter});
    state.cg_iterations = report.iterations;
    const auto parts = lyapunov_value(*problem_, state.mu.values, state.u.values);
    state.energy = parts.energy;
    state.mass = parts.mass;
    state.lyapunov = parts.total();
}

DmkState DmkSolver::init_state() const {
    DmkState state;
    state.mu.values.assign(problem_->cell_count(), std::max(cfg_.mu_init, floor_));
    solve(state);
    return state;
}

DmkState DmkSolver::step(const DmkState& state) const {
    DmkState next;
    next.step = state.step + 1;
    std::vector<double> q(problem_->cell_count());
    problem_->cell_gradient_norms(state.u.values, q);
    next.mu.values.resize(q.size());
    next.max_rel_change = kernels::active().density_update(state.mu.values, q, cfg_.delta_t,
                                                           floor_, next.mu.values);
    next.u = state.u;
    solve(next);
    return next;
}

IterationRecord DmkSolver::record(const DmkState& state) const {
    const auto [lo, hi] = std::minmax_element(state.mu.values.begin(), state.mu.values.end());
    return {state.step,   state.lyapunov, state.energy, state.mass, state.max_rel_change,
            *lo,          *hi,            state.cg_iterations};
}

DmkState DmkSolver::run(IterationLog& log) const {
    log = {};
    DmkState state = init_state();
    log.records.push_back(record(state));
    for (int k = 0; k < cfg_.max_steps; ++k) {
        state = step(state);
        log.records.push_back(record(state));
        if (state.max_rel_change <= cfg_.conv_tol) {
            log.converged = true;
            break;
        }
    }
    return state;
}

DmkState init_state(const TransportProblem& problem, const DmkConfig& cfg) {
    return DmkSolver(problem, cfg).init_state();
}

DmkState dmk_step(const DmkState& state, const TransportProblem& problem, const DmkConfig& cfg) {
    return DmkSolver(problem, cfg).step(state);
}

DmkResult run_to_convergence(const TransportProblem& problem, const DmkConfig& cfg) {
    DmkResult result;
    result.state = DmkSolver(problem, cfg).run(result.log);
    return result;
}

namespace {

void append_number(std::string& out, double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, ptr);
}

} // namespace

std::string IterationLog::to_csv() const {
    std::string out = "step,lyapunov,energy,mass,max_rel_change,mu_min,mu_max,cg_iters\r\n";
    for (const auto& r : records) {
        out += std::to_string(r.step);
        for (double v : {r.lyapunov, r.energy, r.mass, r.max_rel_change, r.mu_min, r.mu_max}) {
            out += ',';
            append_number(out, v);
        }
        out += ',';
        out += std::to_string(r.cg_iters);
        out += "\r\n";
    }
    return out;
}

double IterationLog::worst_lyapunov_increase(double slack, int first_step) const {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < records.size(); ++i) {
        if (records[i - 1].step < first_step) continue;
        const double allowed = slack * std::abs(records[i - 1].lyapunov);
        worst = std::max(worst, records[i].lyapunov - records[i - 1].lyapunov - allowed);
    }
    return worst;
}

} // namespace cutlocus
