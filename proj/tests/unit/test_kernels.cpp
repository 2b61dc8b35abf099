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

#include <doctest.h>

#include <cmath>
#include <random>

#include "cutlocus/kernels.hpp"
#include "cutlocus/linalg.hpp"
#include "cutlocus/sfem.hpp"
#include "cutlocus/surfaces.hpp"
#include "support.hpp"

using namespace cutlocus;
using kernels::Isa;

namespace {

std::vector<double> randn(std::size_t n, std::mt19937& rng) {
    std::normal_distribution<double> g;
    std::vector<double> v(n);
    for (auto& x : v) x = g(rng);
    return v;
}

double sum_abs_products(const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += std::abs(x[i] * y[i]);
    return s;
}

} // namespace

TEST_CASE("vector kernels match the scalar reference") {
    const auto& ref = kernels::scalar_table();
    for (Isa isa : {Isa::Avx2, Isa::Neon}) {
        if (!kernels::available(isa)) {
            MESSAGE(kernels::isa_name(isa) << " not available on this machine");
            continue;
        }
        const auto& vec = kernels::table(isa);
        CHECK(vec.isa == isa);
        std::mt19937 rng(31);
        // Lengths around the vector width exercise the tails.
        for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 33u, 1000u, 1023u}) {
            CAPTURE(n);
            const auto x = randn(n, rng), y = randn(n, rng);
            CHECK(std::abs(vec.dot(x, y) - ref.dot(x, y)) <= 1e-14 * (1.0 + sum_abs_products(x, y)));

            auto ya = y, yb = y;
            ref.axpy(0.37, x, ya);
            vec.axpy(0.37, x, yb);
            for (std::size_t i = 0; i < n; ++i) CHECK(yb[i] == doctest::Approx(ya[i]).epsilon(1e-15));

            ya = y;
            yb = y;
            ref.xpby(x, -1.25, ya);
            vec.xpby(x, -1.25, yb);
            for (std::size_t i = 0; i < n; ++i) CHECK(yb[i] == doctest::Approx(ya[i]).epsilon(1e-15));

            std::vector<double> za(n), zb(n);
            ref.multiply(x, y, za);
            vec.multiply(x, y, zb);
            CHECK(za == zb);

            auto mu = test::random_positive(n, rng, 1e-12, 5.0);
            auto q = test::random_positive(n, rng, 0.0, 2.0);
            std::vector<double> ma(n), mb(n);
            const double ca = ref.density_update(mu, q, 0.25, 1e-10, ma);
            const double cb = vec.density_update(mu, q, 0.25, 1e-10, mb);
            CHECK(cb == doctest::Approx(ca).epsilon(1e-14));
            for (std::size_t i = 0; i < n; ++i) CHECK(mb[i] == doctest::Approx(ma[i]).epsilon(1e-15));
        }

        const auto desc = SurfaceDescriptor::torus(2, 1);
        const auto pair = conformal_refine(generate_torus(Torus{2, 1}, 20, 10), desc);
        const auto geom = element_geometry(pair.refined);
        std::mt19937 r2(37);
        const auto a = assemble_stiffness(pair, geom,
                                          DensityField{test::random_positive(pair.coarse.triangle_count(), r2)});
        const auto x = randn(a.rows(), r2);
        std::vector<double> ya(a.rows()), yb(a.rows());
        ref.spmv(a.view(), x, ya);
        vec.spmv(a.view(), x, yb);
        for (std::size_t i = 0; i < ya.size(); ++i) {
            double scale = 0.0;
            for (auto k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k)
                scale += std::abs(a.values()[std::size_t(k)] * x[std::size_t(a.cols()[std::size_t(k)])]);
            CHECK(std::abs(ya[i] - yb[i]) <= 1e-14 * scale);
        }
    }
}

TEST_CASE("scalar reference kernels") {
    const auto& k = kernels::scalar_table();
    const std::vector<double> x{1, 2, 3}, y{4, 5, 6};
    CHECK(k.dot(x, y) == 32.0);
    std::vector<double> z = y;
    k.axpy(2.0, x, z);
    CHECK(z == std::vector<double>{6, 9, 12});
    z = y;
    k.xpby(x, 0.5, z);
    CHECK(z == std::vector<double>{3, 4.5, 6});
    k.multiply(x, y, z);
    CHECK(z == std::vector<double>{4, 10, 18});
    const std::vector<double> mu{1, 2, 1e-9}, q{0, 1, 0};
    const double change = k.density_update(mu, q, 0.5, 1e-9, z);
    CHECK(z == std::vector<double>{0.5, 2, 1e-9});
    CHECK(change == 0.5);
}

TEST_CASE("dispatch") {
    CHECK(kernels::available(Isa::Scalar));
    const auto before = kernels::active().isa;
    kernels::set_active(Isa::Scalar);
    CHECK(kernels::active().isa == Isa::Scalar);
    kernels::set_active(before);
    CHECK(kernels::active().isa == before);
    CHECK(kernels::table(Isa::Neon).isa == (kernels::available(Isa::Neon) ? Isa::Neon : Isa::Scalar));
}

TEST_CASE("solver output does not depend on the kernel table") {
    const auto desc = SurfaceDescriptor::sphere(1);
    const auto pair = conformal_refine(generate_icosphere(2), desc);
    const auto geom = element_geometry(pair.refined);
    const auto src = make_source(pair, geom, Vec3(0, 0, 1));
    const LinearSystem sys{
        assemble_stiffness(pair, geom, DensityField{std::vector<double>(pair.coarse.triangle_count(), 1.0)}),
        assemble_rhs(pair, geom, src), src.source_vertex};
    const auto before = kernels::active().isa;
    kernels::set_active(Isa::Scalar);
    const auto a = solve_grounded(sys, 1e-11, 5000);
    kernels::set_active(before);
    const auto b = solve_grounded(sys, 1e-11, 5000);
    double scale = 0.0, diff = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        scale = std::max(scale, std::abs(a.values[i]));
        diff = std::max(diff, std::abs(a.values[i] - b.values[i]));
    }
    CHECK(diff <= 1e-8 * scale);
}
