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

#include <functional>
#include <string>
#include <variant>

#include "cutlocus/mesh.hpp"

namespace cutlocus {

struct Sphere {
    double radius = 1.0;
};

/// Ring torus around the z axis: `r_max` is the distance from the axis to
/// the tube center, `r_min` the tube radius.
struct Torus {
    double r_max = 2.0;
    double r_min = 1.0;
};

struct Ellipsoid {
    double a = 1.0;
    double b = 1.0;
    double c = 1.0;
};

/// x^4 + y^4 + z^4 = 1.
struct Quartic {};

struct Implicit {
    std::function<double(const Vec3&)> residual;
    std::function<Vec3(const Vec3&)> gradient;
};

/// Analytic closed surface given as the zero set of a residual function.
class SurfaceDescriptor {
public:
    using Kind = std::variant<Sphere, Torus, Ellipsoid, Quartic, Implicit>;

    /// Throws ParameterError when the shape parameters are invalid.
    explicit SurfaceDescriptor(Kind kind);

    static SurfaceDescriptor sphere(double radius) { return SurfaceDescriptor(Sphere{radius}); }
    static SurfaceDescriptor torus(double r_max, double r_min) {
        return SurfaceDescriptor(Torus{r_max, r_min});
    }
    static SurfaceDescriptor ellipsoid(double a, double b, double c) {
        return SurfaceDescriptor(Ellipsoid{a, b, c});
    }
    static SurfaceDescriptor quartic() { return SurfaceDescriptor(Quartic{}); }

    const Kind& kind() const noexcept { return kind_; }
    std::string name() const;

    double residual(const Vec3& p) const;
    Vec3 gradient(const Vec3& p) const;

    /// Moves `p` onto the surface: closed form for sphere and torus, damped
    /// Newton along the residual gradient otherwise. Points already within
    /// tolerance are returned unchanged. Throws ProjectionError.
    Vec3 project(const Vec3& p) const;

    /// Largest |residual| accepted as "on the surface" by `project`.
    double projection_tolerance() const;

    LiftFn lift() const;

private:
    Kind kind_;
};

inline constexpr int kNewtonMaxIterations = 50;
inline constexpr double kNewtonTolerance = 1e-12;

/// Closed mesh of the surface. Sphere: icosahedron subdivided `resolution`
/// times. Torus: structured `resolution` x `resolution` grid. Ellipsoid and
/// quartic: subdivided icosphere mapped onto the surface.
/// Throws UnsupportedDescriptor for custom implicit surfaces.
SurfaceMesh generate_mesh(const SurfaceDescriptor& desc, int resolution);

/// Structured torus grid with `n_major` samples around the z axis and
/// `n_minor` around the tube; vertex 0 sits at (r_max + r_min, 0, 0).
SurfaceMesh generate_torus(const Torus& torus, int n_major, int n_minor);

/// Icosahedron on the unit sphere subdivided `levels` times.
SurfaceMesh generate_icosphere(int levels);

RefinedPair conformal_refine(const SurfaceMesh& mesh, const SurfaceDescriptor& lift);

} // namespace cutlocus
