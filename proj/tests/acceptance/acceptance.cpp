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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero when any of them fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "common/dense_stiffness.hpp"
#include "cutlocus/cutlocus.hpp"
#include "cutlocus/kernels.hpp"
#include "cutlocus/oracles.hpp"
#include "cutlocus/run.hpp"
#include "cutlocus/sfem.hpp"
#include "cutlocus/surfaces.hpp"

using namespace cutlocus;
using std::numbers::pi;

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

constexpr double kCircleTol = 0.02;
constexpr double kCircleSeconds = 5.0;
constexpr double kSphereL1 = 0.10;
constexpr double kSphereBand = 0.3;
constexpr double kSphereArgminEdges = 2.0;
constexpr double kSphereSeconds = 300.0;
constexpr double kTorusEpsScale = 1e-3;
constexpr double kTorusCoverage = 0.8;
constexpr double kTorusDistanceEdges = 3.0;
constexpr double kTorusSeconds = 600.0;
constexpr double kGradientTol = 1.05;
constexpr double kPotentialTol = 1e-8;
constexpr double kDenseTol = 1e-12;
constexpr double kSmokeEps = 0.04;

struct Line {
    std::string name;
    bool pass = false;
    std::string detail;
};

std::vector<Line> lines;

void report(const std::string& name, bool pass, const std::string& detail) {
    std::printf("%s %s: %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    std::fflush(stdout);
    lines.push_back({name, pass, detail});
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Run {
    std::string name;
    RunConfig cfg;
    Pipeline p;
    double seconds = 0.0;
};

Run run_config(const std::string& name) {
    Run r;
    r.name = name;
    r.cfg = load_config(fs::path(CUTLOCUS_CONFIG_DIR) / (name + ".cfg"));
    const auto t0 = Clock::now();
    r.p = run_pipeline(r.cfg);
    r.seconds = seconds_since(t0);
    std::printf("  [%s] %zu coarse triangles, %d steps, converged=%d, %.1f s\n", name.c_str(),
                r.p.pair->coarse.triangle_count(), r.p.result.state.step,
                int(r.p.result.log.converged), r.seconds);
    return r;
}

// Dijkstra distance of every coarse triangle: mean over its corners, which
// keep their indices in the refined mesh.
std::vector<double> triangle_distances(const RefinedPair& pair, const std::vector<double>& d) {
    std::vector<double> out(pair.coarse.triangle_count());
    for (std::size_t t = 0; t < out.size(); ++t) {
        const auto& tri = pair.coarse.triangles()[t];
        out[t] = (d[std::size_t(tri[0])] + d[std::size_t(tri[1])] + d[std::size_t(tri[2])]) / 3.0;
    }
    return out;
}

void circle() {
    const auto t0 = Clock::now();
    const auto sol = circle_dmk_1d(200, DmkConfig{});
    const double s = seconds_since(t0);
    report("criterion 1 (circle)",
           sol.log.converged && sol.density_error <= kCircleTol &&
               sol.potential_error <= kCircleTol && s < kCircleSeconds,
           fmt("density error %.3g, potential error %.3g (tol %.2g), %.2f s", sol.density_error,
               sol.potential_error, kCircleTol, s));
}

void sphere(const Run& r) {
    const auto& pair = *r.p.pair;
    const auto& mu = r.p.result.state.mu.values;
    const auto src = r.p.source.source_vertex;
    const Vec3 p = pair.refined.vertex(src);
    const auto d = graph_distance(pair.refined, src);
    const Index anti = nearest_vertex(pair.refined, -p);
    const double scale = pi / d[std::size_t(anti)];
    auto rt = triangle_distances(pair, d);
    for (auto& x : rt) x *= scale;

    const auto areas = element_geometry(pair.coarse).areas;
    double num = 0.0, den = 0.0;
    for (std::size_t t = 0; t < mu.size(); ++t) {
        if (rt[t] < kSphereBand || rt[t] > pi - kSphereBand) continue;
        const double a = areas[t];
        const double rho = sphere_density(rt[t]);
        num += a * std::abs(mu[t] - rho);
        den += a * rho;
    }
    const double l1 = num / den;
    const auto tmin = std::size_t(std::min_element(mu.begin(), mu.end()) - mu.begin());
    const double h = build_edges(pair.coarse).mean_edge_length(pair.coarse);
    const double off = (pair.coarse.centroid(Index(tmin)) - (-p)).norm();
    report("criterion 2 (sphere)",
           r.p.result.log.converged && l1 <= kSphereL1 && off <= kSphereArgminEdges * h &&
               r.seconds < kSphereSeconds,
           fmt("relative L1 %.4f (tol %.2f), argmin %.3f from antipode (tol %.3f), %.1f s", l1,
               kSphereL1, off, kSphereArgminEdges * h, r.seconds));
}

void torus(const Run& r) {
    const auto& pair = *r.p.pair;
    const auto& mu = r.p.result.state.mu.values;
    const auto src = r.p.source.source_vertex;
    const auto d = triangle_distances(pair, graph_distance(pair.refined, src));

    // Density scale: median over the quarter of triangles nearest the source.
    auto sorted = d;
    std::sort(sorted.begin(), sorted.end());
    const double q1 = sorted[sorted.size() / 4];
    std::vector<double> near;
    for (std::size_t t = 0; t < mu.size(); ++t)
        if (d[t] <= q1) near.push_back(mu[t]);
    const double density_scale = median(near);
    const double eps = kTorusEpsScale * density_scale;

    const auto ref = torus_reference_curves(r.cfg.r_max, r.cfg.r_min, pair.refined.vertex(src));
    const DensityField field{mu};
    const auto set = extract(field, pair.coarse, eps, ThresholdMode::Absolute);
    std::string detail = fmt("density scale %.4g, eps %.4g, %zu triangles", density_scale, eps,
                             set.triangle_indices.size());
    bool pass = r.p.result.log.converged && r.seconds < kTorusSeconds;
    if (set.empty()) {
        pass = false;
        detail += ", empty set";
    } else {
        const auto cmp = distance_to_curves(set, pair.coarse, ref.curves);
        const double h = cmp.coverage_radius / 2.0;
        for (std::size_t c = 0; c < ref.curves.size(); ++c) {
            detail += fmt(", %s %.3f", ref.curves.names[c].c_str(), cmp.per_curve_coverage[c]);
            pass = pass && cmp.per_curve_coverage[c] >= kTorusCoverage;
        }
        detail += fmt(" (min %.2f), max distance %.3f (tol %.3f)", kTorusCoverage,
                      cmp.max_centroid_to_curve, kTorusDistanceEdges * h);
        pass = pass && cmp.max_centroid_to_curve <= kTorusDistanceEdges * h;
    }
    detail += fmt(", %.1f s", r.seconds);
    report("criterion 3 (torus cut locus)", pass, detail);

    const auto small = extract(field, pair.coarse, eps / 10.0, ThresholdMode::Absolute);
    double inner = 0.0, meridian = 0.0;
    if (!small.empty()) {
        const auto cmp = distance_to_curves(small, pair.coarse, ref.curves);
        inner = cmp.per_curve_coverage[0];
        meridian = cmp.per_curve_coverage[1];
    }
    report("criterion 4 (torus small epsilon)", inner < meridian,
           fmt("eps %.4g, %zu triangles, inner equator %.3f, meridian %.3f", eps / 10.0,
               small.triangle_indices.size(), inner, meridian));

    const double logged = r.p.result.log.records.back().mu_min;
    const double actual = *std::min_element(mu.begin(), mu.end());
    report("torus log consistency", logged == actual,
           fmt("logged mu_min %.6g, field minimum %.6g", logged, actual));
}

void optimality(const std::vector<const Run*>& runs) {
    bool pass = true;
    std::string detail;
    for (const Run* r : runs) {
        const auto& pair = *r->p.pair;
        const auto& st = r->p.result.state;
        if (!r->p.result.log.converged) {
            pass = false;
            detail += fmt("%s not converged; ", r->name.c_str());
            continue;
        }
        const auto geom = element_geometry(pair.refined);
        const auto q = aggregate_to_coarse(gradient_norms(pair, geom, st.u), pair, geom);
        double qmax = 0.0;
        for (std::size_t t = 0; t < q.size(); ++t)
            if (st.mu.values[t] > 10.0 * r->p.mu_floor) qmax = std::max(qmax, q[t]);
        const double umax = *std::max_element(st.u.values.begin(), st.u.values.end());
        pass = pass && qmax <= kGradientTol && umax <= kPotentialTol;
        detail += fmt("%s max|grad u| %.6f, max u %.3g; ", r->name.c_str(), qmax, umax);
    }
    detail += fmt("tol %.2f and %.0e", kGradientTol, kPotentialTol);
    report("criterion 5 (optimality)", pass, detail);
}

void lyapunov(const std::vector<const Run*>& runs) {
    bool pass = true;
    std::string detail;
    for (const Run* r : runs) {
        const double worst = r->p.result.log.worst_lyapunov_increase(r->cfg.dmk.lyapunov_slack);
        pass = pass && worst <= 0.0;
        detail += fmt("%s %.3g; ", r->name.c_str(), worst);
    }
    detail += "largest increase after step 2 must be <= 0";
    report("criterion 6 (Lyapunov monotone)", pass, detail);
}

SurfaceMesh tetrahedron() {
    return SurfaceMesh::create({{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}},
                               {{0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}});
}

std::vector<double> random_positive(std::size_t n, std::mt19937& rng) {
    std::uniform_real_distribution<double> d(0.1, 3.0);
    std::vector<double> v(n);
    for (auto& x : v) x = d(rng);
    return v;
}

void dense_stiffness() {
    std::mt19937 rng(101);
    const auto torus_desc = SurfaceDescriptor::torus(2, 1);
    std::vector<RefinedPair> pairs;
    pairs.push_back(conformal_refine(tetrahedron()));
    pairs.push_back(conformal_refine(generate_icosphere(0), SurfaceDescriptor::sphere(1)));
    pairs.push_back(conformal_refine(generate_torus(Torus{2, 1}, 6, 4), torus_desc));
    double worst = 0.0;
    bool sizes = true;
    int trials = 0;
    for (const auto& pair : pairs) {
        const auto n = pair.refined.vertex_count();
        sizes = sizes && n <= 100;
        const auto geom = element_geometry(pair.refined);
        for (int k = 0; k < 10; ++k, ++trials) {
            const DensityField mu{random_positive(pair.coarse.triangle_count(), rng)};
            const auto a = assemble_stiffness(pair, geom, mu);
            const auto dense = test::dense_cotangent_stiffness(pair, mu.values);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    worst = std::max(worst, std::abs(a.at(Index(i), Index(j)) - dense[i * n + j]));
        }
    }
    report("criterion 7 (dense stiffness)", sizes && worst <= kDenseTol,
           fmt("%d assemblies on %zu meshes, max entry difference %.3g (tol %.0e)", trials,
               pairs.size(), worst, kDenseTol));
}

void monotone_extraction(const SurfaceMesh& mesh) {
    std::mt19937 rng(103);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int failures = 0;
    for (int k = 0; k < 20; ++k) {
        std::vector<double> v(mesh.triangle_count());
        for (auto& x : v) x = u(rng);
        const DensityField mu{v};
        double e1 = u(rng) + 1e-9, e2 = u(rng) + 1e-9;
        if (e1 > e2) std::swap(e1, e2);
        for (auto mode : {ThresholdMode::Absolute, ThresholdMode::Relative}) {
            const auto a = extract(mu, mesh, e1, mode);
            const auto b = extract(mu, mesh, e2, mode);
            if (!std::includes(b.triangle_indices.begin(), b.triangle_indices.end(),
                               a.triangle_indices.begin(), a.triangle_indices.end()))
                ++failures;
        }
    }
    report("criterion 8 (monotone extraction)", failures == 0,
           fmt("20 random pairs in both modes, %d violations", failures));
}

void smoke(const Run& r, bool single_component) {
    const auto set = extract(r.p.result.state.mu, r.p.pair->coarse, kSmokeEps, ThresholdMode::Absolute);
    bool pass = r.p.result.log.converged && !set.empty();
    if (single_component) pass = pass && set.component_count() == 1;
    report("smoke " + r.name, pass,
           fmt("converged=%d, %zu triangles below %.2f, %d components", int(r.p.result.log.converged),
               set.triangle_indices.size(), kSmokeEps, set.component_count()));
}

void guarded(const std::string& name, const std::function<void()>& f) {
    try {
        f();
    } catch (const std::exception& e) {
        report(name, false, std::string("exception: ") + e.what());
    }
}

} // namespace

int main() {
    std::printf("kernels: %s\n", std::string(kernels::isa_name(kernels::active().isa)).c_str());
    guarded("criterion 1 (circle)", circle);
    guarded("criterion 7 (dense stiffness)", dense_stiffness);

    std::map<std::string, Run> runs;
    for (const char* name : {"sphere", "torus", "ellipsoid_p1", "ellipsoid_p2", "quartic"})
        guarded(std::string("run ") + name, [&] { runs.emplace(name, run_config(name)); });

    auto have = [&](const char* n) { return runs.count(n) != 0; };
    if (have("sphere")) guarded("criterion 2 (sphere)", [&] { sphere(runs.at("sphere")); });
    if (have("torus")) {
        guarded("criterion 3 (torus cut locus)", [&] { torus(runs.at("torus")); });
        guarded("criterion 8 (monotone extraction)",
                [&] { monotone_extraction(runs.at("torus").p.pair->coarse); });
    }
    std::vector<const Run*> all;
    for (const auto& [name, r] : runs) all.push_back(&r);
    guarded("criterion 5 (optimality)", [&] { optimality(all); });
    guarded("criterion 6 (Lyapunov monotone)", [&] { lyapunov(all); });
    if (have("ellipsoid_p1")) guarded("smoke ellipsoid_p1", [&] { smoke(runs.at("ellipsoid_p1"), true); });
    if (have("ellipsoid_p2")) guarded("smoke ellipsoid_p2", [&] { smoke(runs.at("ellipsoid_p2"), false); });
    if (have("quartic")) guarded("smoke quartic", [&] { smoke(runs.at("quartic"), false); });

    int failed = 0;
    for (const auto& l : lines) failed += l.pass ? 0 : 1;
    const bool complete = runs.size() == 5;
    std::printf("%zu checks, %d failed%s\n", lines.size(), failed, complete ? "" : ", runs missing");
    return failed == 0 && complete ? 0 : 1;
}
