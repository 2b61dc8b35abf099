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

#include "cutlocus/surfaces.hpp"

#include <cmath>
#include <numbers>

namespace cutlocus {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Vec3 project_torus(const Torus& t, const Vec3& p) {
    const double rho = std::hypot(p.x(), p.y());
    if (rho == 0.0) throw ProjectionError("point on the torus axis has no unique projection");
    const Vec3 center(t.r_max * p.x() / rho, t.r_max * p.y() / rho, 0.0);
    const Vec3 offset = p - center;
    const double len = offset.norm();
    if (len == 0.0) throw ProjectionError("point on the torus core circle has no unique projection");
    return center + (t.r_min / len) * offset;
}

Vec3 newton_project(const SurfaceDescriptor& desc, const Vec3& start) {
    Vec3 x = start;
    double f = desc.residual(x);
    for (int it = 0; it < kNewtonMaxIterations; ++it) {
        if (std::abs(f) <= kNewtonTolerance) return x;
        const Vec3 g = desc.gradient(x);
        const double g2 = g.squaredNorm();
        if (!(g2 > 0.0)) throw ProjectionError("vanishing residual gradient during projection");
        const Vec3 step = (f / g2) * g;
        double damping = 1.0;
        Vec3 trial = x - step;
        double f_trial = desc.residual(trial);
        while (std::abs(f_trial) >= std::abs(f) && damping > 1.0 / 1024.0) {
            damping *= 0.5;
            trial = x - damping * step;
            f_trial = desc.residual(trial);
        }
        x = trial;
        f = f_trial;
    }
    if (std::abs(f) <= kNewtonTolerance) return x;
    throw ProjectionError("Newton projection did not converge in " +
                          std::to_string(kNewtonMaxIterations) + " iterations (residual " +
                          std::to_string(f) + ")");
}

} // namespace

SurfaceDescriptor::SurfaceDescriptor(Kind kind) : kind_(std::move(kind)) {
    std::visit(Overloaded{
                   [](const Sphere& s) {
                       if (!(s.radius > 0.0)) throw ParameterError("sphere radius must be > 0");
                   },
                   [](const Torus& t) {
                       if (!(t.r_min > 0.0 && t.r_max > t.r_min))
                           throw ParameterError("torus requires r_max > r_min > 0");
                   },
                   [](const Ellipsoid& e) {
                       if (!(e.a > 0.0 && e.b > 0.0 && e.c > 0.0))
                           throw ParameterError("ellipsoid semi-axes must be > 0");
                   },
                   [](const Quartic&) {},
                   [](const Implicit& i) {
                       if (!i.residual || !i.gradient)
                           throw ParameterError("implicit surface needs residual and gradient");
                   },
               },
               kind_);
}

std::string SurfaceDescriptor::name() const {
    return std::visit(Overloaded{
                          [](const Sphere&) { return std::string("sphere"); },
                          [](const Torus&) { return std::string("torus"); },
                          [](const Ellipsoid&) { return std::string("ellipsoid"); },
                          [](const Quartic&) { return std::string("quartic"); },
                          [](const Implicit&) { return std::string("implicit"); },
                      },
                      kind_);
}

double SurfaceDescriptor::residual(const Vec3& p) const {
    return std::visit(Overloaded{
                          [&](const Sphere& s) { return p.norm() - s.radius; },
                          [&](const Torus& t) {
                              const double d = std::hypot(p.x(), p.y()) - t.r_max;
                              return d * d + p.z() * p.z() - t.r_min * t.r_min;
                          },
                          [&](const Ellipsoid& e) {
                              const double x = p.x() / e.a, y = p.y() / e.b, z = p.z() / e.c;
                              return x * x + y * y + z * z - 1.0;
                          },
                          [&](const Quartic&) {
                              const Vec3 q = p.cwiseProduct(p);
                              return q.squaredNorm() - 1.0;
                          },
                          [&](const Implicit& i) { return i.residual(p); },
                      },
                      kind_);
}

Vec3 SurfaceDescriptor::gradient(const Vec3& p) const {
    return std::visit(Overloaded{
                          [&](const Sphere&) -> Vec3 {
                              const double n = p.norm();
                              return n > 0.0 ? Vec3(p / n) : Vec3::Zero();
                          },
                          [&](const Torus& t) -> Vec3 {
                              const double rho = std::hypot(p.x(), p.y());
                              if (rho == 0.0) return Vec3::Zero();
                              const double s = 2.0 * (rho - t.r_max) / rho;
                              return {s * p.x(), s * p.y(), 2.0 * p.z()};
                          },
                          [&](const Ellipsoid& e) -> Vec3 {
                              return {2.0 * p.x() / (e.a * e.a), 2.0 * p.y() / (e.b * e.b),
                                      2.0 * p.z() / (e.c * e.c)};
                          },
                          [&](const Quartic&) -> Vec3 {
                              return 4.0 * p.cwiseProduct(p).cwiseProduct(p);
                          },
                          [&](const Implicit& i) -> Vec3 { return i.gradient(p); },
                      },
                      kind_);
}

double SurfaceDescriptor::projection_tolerance() const {
    return std::visit(Overloaded{
                          [](const Sphere& s) { return kNewtonTolerance * s.radius; },
                          [](const Torus& t) { return kNewtonTolerance * t.r_min * t.r_min; },
                          [](const auto&) { return kNewtonTolerance; },
                      },
                      kind_);
}

Vec3 SurfaceDescriptor::project(const Vec3& p) const {
    if (std::abs(residual(p)) <= projection_tolerance()) return p;
    return std::visit(Overloaded{
                          [&](const Sphere& s) -> Vec3 {
                              const double n = p.norm();
                              if (n == 0.0)
                                  throw ProjectionError("sphere center has no projection");
                              return (s.radius / n) * p;
                          },
                          [&](const Torus& t) -> Vec3 { return project_torus(t, p); },
                          [&](const auto&) -> Vec3 { return newton_project(*this, p); },
                      },
                      kind_);
}

LiftFn SurfaceDescriptor::lift() const {
    return [desc = *this](const Vec3& p) { return desc.project(p); };
}

RefinedPair conformal_refine(const SurfaceMesh& mesh, const SurfaceDescriptor& lift) {
    return conformal_refine(mesh, lift.lift());
}

SurfaceMesh generate_icosphere(int levels) {
    if (levels < 0) throw ParameterError("icosphere levels must be >= 0");
    const double phi = std::numbers::phi;
    std::vector<Vec3> v = {
        {-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
        {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
        {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1},
    };
    for (auto& p : v) p.normalize();
    std::vector<Triangle> f = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
        {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
        {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
        {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1},
    };
    SurfaceMesh mesh = SurfaceMesh::create(std::move(v), std::move(f));
    const auto unit = SurfaceDescriptor::sphere(1.0);
    for (int l = 0; l < levels; ++l) mesh = conformal_refine(mesh, unit).refined;
    return mesh;
}

SurfaceMesh generate_torus(const Torus& torus, int n_major, int n_minor) {
    SurfaceDescriptor check{torus};
    if (n_major < 3 || n_minor < 3) throw ParameterError("torus grid needs at least 3x3 samples");
    std::vector<Vec3> verts;
    verts.reserve(static_cast<std::size_t>(n_major) * static_cast<std::size_t>(n_minor));
    for (int i = 0; i < n_major; ++i) {
        const double az = 2.0 * std::numbers::pi * i / n_major;
        for (int j = 0; j < n_minor; ++j) {
            const double th = 2.0 * std::numbers::pi * j / n_minor;
            const double ring = torus.r_max + torus.r_min * std::cos(th);
            verts.emplace_back(ring * std::cos(az), ring * std::sin(az),
                               torus.r_min * std::sin(th));
        }
    }
    auto id = [n_minor, n_major](int i, int j) {
        return static_cast<Index>(((i % n_major) * n_minor) + (j % n_minor));
    };
    std::vector<Triangle> tris;
    tris.reserve(2 * verts.size());
    for (int i = 0; i < n_major; ++i) {
        for (int j = 0; j < n_minor; ++j) {
            const Index a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
            tris.push_back({a, b, c});
            tris.push_back({a, c, d});
        }
    }
    return SurfaceMesh::create(std::move(verts), std::move(tris));
}

SurfaceMesh generate_mesh(const SurfaceDescriptor& desc, int resolution) {
    if (resolution < 0) throw ParameterError("resolution must be >= 0");
    return std::visit(
        Overloaded{
            [&](const Sphere& s) {
                auto base = generate_icosphere(resolution);
                auto verts = base.vertices();
                for (auto& v : verts) v *= s.radius;
                return SurfaceMesh::create(std::move(verts), base.triangles());
            },
            [&](const Torus& t) { return generate_torus(t, resolution, resolution); },
            [&](const Ellipsoid& e) {
                auto base = generate_icosphere(resolution);
                auto verts = base.vertices();
                for (auto& v : verts) v = desc.project(Vec3(e.a * v.x(), e.b * v.y(), e.c * v.z()));
                return SurfaceMesh::create(std::move(verts), base.triangles());
            },
            [&](const Quartic&) {
                auto base = generate_icosphere(resolution);
                auto verts = base.vertices();
                for (auto& v : verts) {
                    const double s = std::pow(v.cwiseProduct(v).squaredNorm(), -0.25);
                    v = desc.project(s * v);
                }
                return SurfaceMesh::create(std::move(verts), base.triangles());
            },
            [&](const Implicit&) -> SurfaceMesh {
                throw UnsupportedDescriptor("custom implicit surfaces need a seed mesh");
            },
        },
        desc.kind());
}

} // namespace cutlocus
