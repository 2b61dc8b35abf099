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
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "cutlocus/errors.hpp"

namespace cutlocus {

using Vec3 = Eigen::Vector3d;
using Index = std::int32_t;
using Triangle = std::array<Index, 3>;

/// Closed, consistently oriented triangle mesh embedded in R^3.
///
/// Instances are immutable once constructed through `SurfaceMesh::create`,
/// which enforces the manifold invariants: every edge shared by exactly two
/// triangles with opposite orientation, indices in range, and no triangle
/// with area below `area_epsilon()`.
class SurfaceMesh {
public:
    SurfaceMesh() = default;

    /// Validates and builds a mesh. Throws TopologyError or GeometryError.
    static SurfaceMesh create(std::vector<Vec3> vertices, std::vector<Triangle> triangles,
                              std::vector<Vec3> normal_hints = {});

    /// Builds without validation. Only for internal constructions whose
    /// invariants hold by construction (refinement, generators).
    static SurfaceMesh create_unchecked(std::vector<Vec3> vertices,
                                        std::vector<Triangle> triangles);

    const std::vector<Vec3>& vertices() const noexcept { return vertices_; }
    const std::vector<Triangle>& triangles() const noexcept { return triangles_; }
    const std::vector<Vec3>& normal_hints() const noexcept { return normal_hints_; }

    std::size_t vertex_count() const noexcept { return vertices_.size(); }
    std::size_t triangle_count() const noexcept { return triangles_.size(); }

    const Vec3& vertex(Index i) const { return vertices_[static_cast<std::size_t>(i)]; }
    const Triangle& triangle(Index t) const { return triangles_[static_cast<std::size_t>(t)]; }

    double bounding_box_diagonal() const;
    /// Triangles with area at or below this value are rejected as degenerate.
    double area_epsilon() const;
    double total_area() const;
    Vec3 centroid(Index t) const;

private:
    std::vector<Vec3> vertices_;
    std::vector<Triangle> triangles_;
    std::vector<Vec3> normal_hints_;
};

/// Undirected edges of a mesh and the triangle-to-edge incidence.
struct EdgeTopology {
    std::vector<std::array<Index, 2>> edges;       // (lo, hi), sorted lexicographically
    std::vector<std::array<Index, 3>> tri_edges;   // edge opposite to local vertex k
    std::vector<std::array<Index, 2>> edge_tris;   // the two triangles sharing the edge

    double mean_edge_length(const SurfaceMesh& mesh) const;
};

EdgeTopology build_edges(const SurfaceMesh& mesh);

/// Throws TopologyError describing the first violated manifold invariant.
void check_closed_manifold(std::span<const Triangle> triangles, std::size_t vertex_count);

/// V - E + F.
int euler_characteristic(const SurfaceMesh& mesh);

/// Coarse mesh, its uniform 1-to-4 refinement and the maps between them.
///
/// Refined triangle `4 * t + k` is the k-th child of coarse triangle `t`;
/// coarse vertex `i` keeps index `i` in the refined mesh and edge `e`'s
/// midpoint gets index `V + e`.
struct RefinedPair {
    SurfaceMesh coarse;
    SurfaceMesh refined;
    std::vector<Index> parent;            // refined triangle -> coarse triangle
    std::vector<Index> vertex_embedding;  // coarse vertex -> refined vertex

    static constexpr Index child(Index coarse_tri, int k) { return 4 * coarse_tri + k; }
};

/// Moves a point onto the analytic surface. Empty means "no lift".
using LiftFn = std::function<Vec3(const Vec3&)>;

/// Splits every triangle into four through its edge midpoints. Each midpoint
/// is computed once per edge and, when `lift` is set, moved by it.
RefinedPair conformal_refine(const SurfaceMesh& mesh, const LiftFn& lift = {});

/// Per-triangle area and constant gradients of the three P1 hat functions.
struct ElementGeometry {
    std::vector<double> areas;
    std::vector<std::array<Vec3, 3>> gradients;
    std::vector<Vec3> unit_normals;
};

/// Throws GeometryError on a degenerate triangle.
ElementGeometry element_geometry(const SurfaceMesh& mesh);

/// One-third area rule: sum of incident triangle areas divided by three.
std::vector<double> lumped_vertex_areas(const SurfaceMesh& mesh, const ElementGeometry& geom);

/// Index of the closest vertex; ties go to the smallest index.
Index nearest_vertex(const SurfaceMesh& mesh, const Vec3& point);

enum class MeshFormat { Off, Obj };

std::optional<MeshFormat> format_from_extension(const std::filesystem::path& path);

SurfaceMesh load_mesh(const std::filesystem::path& path, MeshFormat format);
SurfaceMesh load_mesh(const std::filesystem::path& path);
SurfaceMesh parse_off(std::string_view text);
SurfaceMesh parse_obj(std::string_view text);

/// Writes OFF with round-trip-exact coordinates through an atomic rename.
void save_off(const SurfaceMesh& mesh, const std::filesystem::path& path);
std::string format_off(const SurfaceMesh& mesh);

} // namespace cutlocus
