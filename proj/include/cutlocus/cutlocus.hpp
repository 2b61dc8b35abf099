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
#include <string>
#include <vector>

#include "cutlocus/mesh.hpp"
#include "cutlocus/sfem.hpp"

namespace cutlocus {

enum class ThresholdMode {
    Absolute,  ///< keep T when mu_T <= epsilon
    Relative,  ///< keep T when mu_T <= epsilon * median(mu)
};

std::string_view mode_name(ThresholdMode mode);

/// Coarse triangles where the transport density is close to zero.
struct CutLocusSet {
    std::vector<Index> triangle_indices;  // ascending
    double threshold_used = 0.0;          // value compared against mu_T
    double epsilon = 0.0;
    ThresholdMode mode = ThresholdMode::Absolute;
    /// Edge-connected component of each included triangle, numbered from 0
    /// in order of first appearance.
    std::vector<int> component_labels;

    bool empty() const noexcept { return triangle_indices.empty(); }
    int component_count() const;
    /// 0/1 per coarse triangle.
    std::vector<int> mask(std::size_t triangle_count) const;
};

double median(std::span<const double> values);

/// Throws ParameterError when epsilon <= 0, DimensionMismatch when the
/// density does not match the mesh.
CutLocusSet extract(const DensityField& mu, const SurfaceMesh& mesh, double epsilon,
                    ThresholdMode mode);

/// Reference geometry as polylines.
struct CurveSet {
    std::vector<std::string> names;
    std::vector<std::vector<Vec3>> curves;

    std::size_t size() const noexcept { return curves.size(); }
    void add(std::string name, std::vector<Vec3> points);
};

struct CurveComparison {
    /// Largest distance from an included triangle centroid to any curve.
    double max_centroid_to_curve = 0.0;
    /// Fraction of all curve sample points within `coverage_radius` of an
    /// included triangle.
    double coverage = 0.0;
    std::vector<double> per_curve_coverage;
    double coverage_radius = 0.0;
};

/// Chordal comparison in R^3; the coverage radius is twice the mean edge
/// length of `mesh`. Throws EmptyInput when the set or the curves are empty.
CurveComparison distance_to_curves(const CutLocusSet& set, const SurfaceMesh& mesh,
                                   const CurveSet& curves);

double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b);
double point_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

} // namespace cutlocus
