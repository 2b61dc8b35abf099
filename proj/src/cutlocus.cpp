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

#include "cutlocus/cutlocus.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace cutlocus {

std::string_view mode_name(ThresholdMode mode) {
    return mode == ThresholdMode::Absolute ? "abs" : "rel";
}

int CutLocusSet::component_count() const {
    if (component_labels.empty()) return 0;
    return *std::max_element(component_labels.begin(), component_labels.end()) + 1;
}

std::vector<int> CutLocusSet::mask(std::size_t triangle_count) const {
    std::vector<int> m(triangle_count, 0);
    for (Index t : triangle_indices) m[static_cast<std::size_t>(t)] = 1;
    return m;
}

double median(std::span<const double> values) {
    if (values.empty()) throw EmptyInput("median of an empty range");
    std::vector<double> v(values.begin(), values.end());
    const auto mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double upper = v[mid];
    if (v.size() % 2 == 1) return upper;
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

CutLocusSet extract(const DensityField& mu, const SurfaceMesh& mesh, double epsilon,
                    ThresholdMode mode) {
    if (!(epsilon > 0.0)) throw ParameterError("epsilon must be > 0");
    if (mu.values.size() != mesh.triangle_count())
        throw DimensionMismatch("density does not match the coarse mesh");

    CutLocusSet set;
    set.epsilon = epsilon;
    set.mode = mode;
    set.threshold_used = mode == ThresholdMode::Absolute ? epsilon : epsilon * median(mu.values);

    std::vector<int> included(mesh.triangle_count(), -1);
    for (std::size_t t = 0; t < mu.values.size(); ++t) {
        if (mu.values[t] <= set.threshold_used) {
            included[t] = static_cast<int>(set.triangle_indices.size());
            set.triangle_indices.push_back(static_cast<Index>(t));
        }
    }
    if (set.triangle_indices.empty()) return set;

    const auto topo = build_edges(mesh);
    set.component_labels.assign(set.triangle_indices.size(), -1);
    int next_label = 0;
    std::deque<Index> queue;
    for (std::size_t i = 0; i < set.triangle_indices.size(); ++i) {
        if (set.component_labels[i] >= 0) continue;
        set.component_labels[i] = next_label;
        queue.push_back(set.triangle_indices[i]);
        while (!queue.empty()) {
            const Index t = queue.front();
            queue.pop_front();
            for (Index e : topo.tri_edges[static_cast<std::size_t>(t)]) {
                for (Index nb : topo.edge_tris[static_cast<std::size_t>(e)]) {
                    if (nb < 0 || nb == t) continue;
                    const int slot = included[static_cast<std::size_t>(nb)];
                    if (slot < 0 || set.component_labels[static_cast<std::size_t>(slot)] >= 0)
                        continue;
                    set.component_labels[static_cast<std::size_t>(slot)] = next_label;
                    queue.push_back(nb);
                }
            }
        }
        ++next_label;
    }
    return set;
}

void CurveSet::add(std::string name, std::vector<Vec3> points) {
    if (points.size() < 2) throw ParameterError("a curve needs at least two points");
    names.push_back(std::move(name));
    curves.push_back(std::move(points));
}

double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
    const Vec3 ab = b - a;
    const double len2 = ab.squaredNorm();
    double s = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
    s = std::clamp(s, 0.0, 1.0);
    return (p - (a + s * ab)).norm();
}

double point_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
    // Closest-point regions after Ericson, Real-Time Collision Detection 5.1.5.
    const Vec3 ab = b - a, ac = c - a, ap = p - a;
    const double d1 = ab.dot(ap), d2 = ac.dot(ap);
    if (d1 <= 0.0 && d2 <= 0.0) return ap.norm();
    const Vec3 bp = p - b;
    const double d3 = ab.dot(bp), d4 = ac.dot(bp);
    if (d3 >= 0.0 && d4 <= d3) return bp.norm();
    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return (p - (a + (d1 / (d1 - d3)) * ab)).norm();
    const Vec3 cp = p - c;
    const double d5 = ab.dot(cp), d6 = ac.dot(cp);
    if (d6 >= 0.0 && d5 <= d6) return cp.norm();
    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return (p - (a + (d2 / (d2 - d6)) * ac)).norm();
    const double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
        const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return (p - (b + w * (c - b))).norm();
    }
    const double denom = 1.0 / (va + vb + vc);
    const double v = vb * denom, w = vc * denom;
    return (p - (a + v * ab + w * ac)).norm();
}

CurveComparison distance_to_curves(const CutLocusSet& set, const SurfaceMesh& mesh,
                                   const CurveSet& curves) {
    if (set.empty()) throw EmptyInput("cut locus set is empty");
    if (curves.curves.empty()) throw EmptyInput("no reference curves");

    CurveComparison out;
    out.coverage_radius = 2.0 * build_edges(mesh).mean_edge_length(mesh);

    for (Index t : set.triangle_indices) {
        const Vec3 c = mesh.centroid(t);
        double best = std::numeric_limits<double>::infinity();
        for (const auto& curve : curves.curves)
            for (std::size_t k = 0; k + 1 < curve.size(); ++k)
                best = std::min(best, point_segment_distance(c, curve[k], curve[k + 1]));
        out.max_centroid_to_curve = std::max(out.max_centroid_to_curve, best);
    }

    std::size_t covered_total = 0, samples_total = 0;
    for (const auto& curve : curves.curves) {
        std::size_t covered = 0;
        for (const Vec3& p : curve) {
            for (Index t : set.triangle_indices) {
                const auto& tri = mesh.triangle(t);
                if (point_triangle_distance(p, mesh.vertex(tri[0]), mesh.vertex(tri[1]),
                                            mesh.vertex(tri[2])) <= out.coverage_radius) {
                    ++covered;
                    break;
                }
            }
        }
        out.per_curve_coverage.push_back(static_cast<double>(covered) /
                                         static_cast<double>(curve.size()));
        covered_total += covered;
        samples_total += curve.size();
    }
    out.coverage = static_cast<double>(covered_total) / static_cast<double>(samples_total);
    return out;
}

} // namespace cutlocus
