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

#include "cutlocus/oracles.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

#include "cutlocus/surfaces.hpp"

namespace cutlocus {

using std::numbers::pi;

double circle_density(double phi) { return pi - std::abs(phi); }

CircleTransport::CircleTransport(int n_segments, double radius)
    : n_(n_segments), radius_(radius), h_(0.0) {
    if (n_segments < 8) throw ParameterError("circle needs at least 8 segments");
    if (!(radius > 0.0)) throw ParameterError("circle radius must be > 0");
    h_ = 2.0 * pi * radius / n_;
    std::vector<std::array<Index, 2>> pairs;
    for (int i = 0; i < n_; ++i) {
        const Index j = (i + 1) % n_;
        pairs.push_back({std::min<Index>(i, j), std::max<Index>(i, j)});
    }
    pattern_ = CsrMatrix::from_pairs(static_cast<std::size_t>(n_), pairs);
    lengths_.assign(static_cast<std::size_t>(n_), h_);
    rhs_.assign(static_cast<std::size_t>(n_), -h_);
    rhs_[0] += 2.0 * pi * radius;
}

void CircleTransport::assemble(std::span<const double> mu, CsrMatrix& out) const {
    if (mu.size() != cell_count()) throw DimensionMismatch("density does not match the circle");
    if (out.nonzeros() != pattern_.nonzeros()) out = pattern_;
    out.set_zero();
    auto vals = out.values();
    for (Index i = 0; i < n_; ++i) {
        const Index j = (i + 1) % n_;
        const double k = mu[static_cast<std::size_t>(i)] / h_;
        vals[static_cast<std::size_t>(out.position(i, i))] += k;
        vals[static_cast<std::size_t>(out.position(j, j))] += k;
        vals[static_cast<std::size_t>(out.position(i, j))] -= k;
        vals[static_cast<std::size_t>(out.position(j, i))] -= k;
    }
}

void CircleTransport::cell_gradient_norms(std::span<const double> u, std::span<double> q) const {
    for (int i = 0; i < n_; ++i) {
        const auto j = static_cast<std::size_t>((i + 1) % n_);
        q[static_cast<std::size_t>(i)] = std::abs(u[j] - u[static_cast<std::size_t>(i)]) / h_;
    }
}

double CircleTransport::energy(std::span<const double> mu, std::span<const double> u) const {
    double sum = 0.0;
    for (int i = 0; i < n_; ++i) {
        const auto j = static_cast<std::size_t>((i + 1) % n_);
        const double g = (u[j] - u[static_cast<std::size_t>(i)]) / h_;
        sum += mu[static_cast<std::size_t>(i)] * h_ * g * g;
    }
    return 0.5 * sum;
}

double CircleTransport::node_angle(int i) const {
    double phi = 2.0 * pi * i / n_;
    if (phi > pi) phi -= 2.0 * pi;
    return phi;
}

double CircleTransport::segment_midpoint_angle(int i) const {
    double phi = 2.0 * pi * (i + 0.5) / n_;
    if (phi > pi) phi -= 2.0 * pi;
    return phi;
}

CircleSolution circle_dmk_1d(int n_segments, const DmkConfig& cfg, double radius) {
    const CircleTransport problem(n_segments, radius);
    auto result = run_to_convergence(problem, cfg);

    CircleSolution sol;
    sol.u = std::move(result.state.u.values);
    sol.mu = std::move(result.state.mu.values);
    sol.log = std::move(result.log);
    for (int i = 0; i < n_segments; ++i) {
        const auto s = static_cast<std::size_t>(i);
        sol.density_error = std::max(
            sol.density_error,
            std::abs(sol.mu[s] / radius - circle_density(problem.segment_midpoint_angle(i))) / pi);
        sol.potential_error = std::max(
            sol.potential_error,
            std::abs(sol.u[s] / radius - circle_potential(problem.node_angle(i))) / pi);
        sol.total_mass += sol.mu[s] * problem.segment_length();
    }
    return sol;
}

double sphere_density(double r) {
    if (!(r > 0.0 && r < pi)) throw DomainError("sphere density needs r in (0, pi)");
    return (1.0 + std::cos(r)) / std::sin(r);
}

double sphere_density_quadrature(double r) {
    if (!(r > 0.0 && r < pi)) throw DomainError("sphere density needs r in (0, pi)");
    auto g = [](double s) { return s == 0.0 ? 1.0 : std::sin(s) / s; };
    auto integrand = [&](double s) { return g(s) * s; };
    double error = 0.0;
    const double integral = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        integrand, r, pi, 15, 1e-14, &error);
    return integral / (g(r) * r);
}

double torus_outer_arc_angle(double r_max, double r_min) {
    const double outer = r_max + r_min;
    return pi * r_min / std::sqrt(outer * r_min);
}

TorusCutLocusReference torus_reference_curves(double r_max, double r_min, const Vec3& base_point,
                                              int samples_per_curve) {
    if (!(r_min > 0.0 && r_max > r_min)) throw ParameterError("torus requires r_max > r_min > 0");
    if (samples_per_curve < 2) throw ParameterError("need at least two samples per curve");
    const double outer = r_max + r_min;
    const double rho = std::hypot(base_point.x(), base_point.y());
    if (std::abs(rho - outer) > 1e-9 * outer || std::abs(base_point.z()) > 1e-9 * outer)
        throw ParameterError("base point is not on the outer equator");

    TorusCutLocusReference ref;
    ref.r_max = r_max;
    ref.r_min = r_min;
    ref.base_point = base_point;
    ref.alpha = torus_outer_arc_angle(r_max, r_min);
    const double beta = std::atan2(base_point.y(), base_point.x());
    ref.p1 = {outer * std::cos(beta + ref.alpha), outer * std::sin(beta + ref.alpha), 0.0};
    ref.p2 = {outer * std::cos(beta - ref.alpha), outer * std::sin(beta - ref.alpha), 0.0};

    const int n = samples_per_curve;
    const double inner = r_max - r_min;
    std::vector<Vec3> equator, meridian, arc;
    for (int k = 0; k <= n; ++k) {
        const double az = beta + 2.0 * pi * k / n;
        equator.emplace_back(inner * std::cos(az), inner * std::sin(az), 0.0);
    }
    const double opposite = beta + pi;
    for (int k = 0; k <= n; ++k) {
        const double th = 2.0 * pi * k / n;
        const double ring = r_max + r_min * std::cos(th);
        meridian.emplace_back(ring * std::cos(opposite), ring * std::sin(opposite),
                              r_min * std::sin(th));
    }
    for (int k = 0; k <= n; ++k) {
        const double az = beta + ref.alpha + (2.0 * pi - 2.0 * ref.alpha) * k / n;
        arc.emplace_back(outer * std::cos(az), outer * std::sin(az), 0.0);
    }
    ref.curves.add("inner_equator", std::move(equator));
    ref.curves.add("opposite_meridian", std::move(meridian));
    ref.curves.add("outer_arc", std::move(arc));
    return ref;
}

std::vector<double> graph_distance(const SurfaceMesh& mesh, Index source_vertex) {
    const auto n = mesh.vertex_count();
    if (source_vertex < 0 || static_cast<std::size_t>(source_vertex) >= n)
        throw ParameterError("source vertex out of range");
    const auto topo = build_edges(mesh);
    std::vector<std::vector<std::pair<Index, double>>> adj(n);
    for (const auto& e : topo.edges) {
        const double w = (mesh.vertex(e[0]) - mesh.vertex(e[1])).norm();
        adj[static_cast<std::size_t>(e[0])].emplace_back(e[1], w);
        adj[static_cast<std::size_t>(e[1])].emplace_back(e[0], w);
    }
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(n, inf);
    using Item = std::pair<double, Index>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    dist[static_cast<std::size_t>(source_vertex)] = 0.0;
    queue.emplace(0.0, source_vertex);
    while (!queue.empty()) {
        const auto [d, v] = queue.top();
        queue.pop();
        if (d > dist[static_cast<std::size_t>(v)]) continue;
        for (const auto& [w, len] : adj[static_cast<std::size_t>(v)]) {
            const double nd = d + len;
            if (nd < dist[static_cast<std::size_t>(w)]) {
                dist[static_cast<std::size_t>(w)] = nd;
                queue.emplace(nd, w);
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        // Isolated vertices are not part of the surface.
        if (dist[i] == inf && !adj[i].empty())
            throw DisconnectedMesh("vertex " + std::to_string(i) + " is unreachable from the source");
    }
    return dist;
}

} // namespace cutlocus
