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

#include <vector>

#include "cutlocus/cutlocus.hpp"
#include "cutlocus/dmk.hpp"
#include "cutlocus/mesh.hpp"

namespace cutlocus {

// Closed-form transport on the unit circle with the source at angle 0:
// potential -|phi| and density pi - |phi|, phi in (-pi, pi].
inline double circle_potential(double phi) { return -std::abs(phi); }
double circle_density(double phi);

/// Circle of circumference 2 pi r split into `n` equal segments: P1
/// potential on the nodes, P0 density on the segments, source mass 2 pi r at
/// node 0 against a uniform lumped sink.
class CircleTransport final : public TransportProblem {
public:
    explicit CircleTransport(int n_segments, double radius = 1.0);

    std::size_t cell_count() const override { return static_cast<std::size_t>(n_); }
    std::size_t node_count() const override { return static_cast<std::size_t>(n_); }
    std::span<const double> cell_measures() const override { return lengths_; }
    void assemble(std::span<const double> mu, CsrMatrix& out) const override;
    std::span<const double> rhs() const override { return rhs_; }
    Index ground() const override { return 0; }
    void cell_gradient_norms(std::span<const double> u, std::span<double> q) const override;
    double energy(std::span<const double> mu, std::span<const double> u) const override;
    double length_scale() const override { return 2.0 * radius_; }

    int segments() const noexcept { return n_; }
    double segment_length() const noexcept { return h_; }
    /// Arc-length angle of node i, wrapped to (-pi, pi].
    double node_angle(int i) const;
    double segment_midpoint_angle(int i) const;

private:
    int n_;
    double radius_;
    double h_;
    CsrMatrix pattern_;
    std::vector<double> lengths_;
    std::vector<double> rhs_;
};

struct CircleSolution {
    std::vector<double> u;   // per node
    std::vector<double> mu;  // per segment
    IterationLog log;
    /// max |mu - (pi - |phi|)| / pi at segment midpoints.
    double density_error = 0.0;
    /// max |u + |phi|| / pi at nodes.
    double potential_error = 0.0;
    double total_mass = 0.0;  // sum of mu * length
};

/// Throws ParameterError when n_segments < 8.
CircleSolution circle_dmk_1d(int n_segments, const DmkConfig& cfg, double radius = 1.0);

/// Transport density on the unit sphere at geodesic distance r from the
/// source: (1 + cos r) / sin r. Throws DomainError outside (0, pi).
double sphere_density(double r);

/// The same density from the ray integral
/// rho(r) = 1 / (G(r) r) * integral_r^pi G(s) s ds with G(s) = sin(s) / s,
/// evaluated by adaptive Gauss-Kronrod quadrature.
double sphere_density_quadrature(double r);

struct TorusCutLocusReference {
    double r_max = 2.0;
    double r_min = 1.0;
    Vec3 base_point;
    /// Half-angle of the outer-equator gap around the base point.
    double alpha = 0.0;
    Vec3 p1;
    Vec3 p2;
    CurveSet curves;  // "inner_equator", "opposite_meridian", "outer_arc"
};

/// alpha = pi r_min / sqrt(R r_min) with R = r_max + r_min.
double torus_outer_arc_angle(double r_max, double r_min);

/// Cut locus of a point on the outer equator of a ring torus: the inner
/// equator, the meridian opposite the point and the outer-equator arc from
/// p1 to p2 on the far side. Throws ParameterError when the point is not on
/// the outer equator.
TorusCutLocusReference torus_reference_curves(double r_max, double r_min, const Vec3& base_point,
                                              int samples_per_curve = 512);

/// Dijkstra distance along mesh edges. Throws DisconnectedMesh.
std::vector<double> graph_distance(const SurfaceMesh& mesh, Index source_vertex);

} // namespace cutlocus
