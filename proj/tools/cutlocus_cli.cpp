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

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>

#include "cutlocus/io.hpp"
#include "cutlocus/oracles.hpp"
#include "cutlocus/run.hpp"

using namespace cutlocus;

namespace {

int run_command(const std::string& config_path, const CliOverrides& overrides) {
    RunConfig cfg;
    try {
        cfg = load_config(config_path);
        apply_overrides(cfg, overrides);
    } catch (const ConfigError& e) {
        std::cerr << config_path << ": " << e.what() << "\n";
        return kExitConfig;
    } catch (const IoError& e) {
        std::cerr << e.what() << "\n";
        return kExitIo;
    }
    const auto out = cmd_run(cfg);
    (out.exit_code == kExitOk ? std::cout : std::cerr) << out.message << "\n";
    for (const auto& f : out.files) std::cout << "wrote " << f.string() << "\n";
    return out.exit_code;
}

int oracle_circle(int n) {
    try {
        const auto sol = circle_dmk_1d(n, DmkConfig{});
        std::printf("segments %d  steps %zu  converged %s\n", n, sol.log.records.size() - 1,
                    sol.log.converged ? "yes" : "no");
        std::printf("max density error / pi    %.3e\n", sol.density_error);
        std::printf("max potential error / pi  %.3e\n", sol.potential_error);
        std::printf("total mass %.12g (pi^2 = %.12g)\n", sol.total_mass,
                    std::numbers::pi * std::numbers::pi);
        return sol.log.converged ? kExitOk : kExitNoConvergence;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    }
}

int oracle_sphere_check() {
    double worst = 0.0;
    std::printf("%8s %22s %22s\n", "r", "closed form", "quadrature");
    for (int k = 1; k < 20; ++k) {
        const double r = std::numbers::pi * k / 20.0;
        const double a = sphere_density(r), b = sphere_density_quadrature(r);
        worst = std::max(worst, std::abs(a - b) / std::abs(a));
        std::printf("%8.4f %22.15g %22.15g\n", r, a, b);
    }
    std::printf("max relative difference %.3e\n", worst);
    return worst <= 1e-10 ? kExitOk : 1;
}

int validate_mesh(const std::string& path) {
    try {
        const auto mesh = load_mesh(path);
        const auto topo = build_edges(mesh);
        std::printf("vertices %zu  triangles %zu  edges %zu\n", mesh.vertex_count(),
                    mesh.triangle_count(), topo.edges.size());
        std::printf("euler characteristic %d\n", euler_characteristic(mesh));
        std::printf("area %.12g  mean edge %.6g\n", mesh.total_area(),
                    topo.mean_edge_length(mesh));
        graph_distance(mesh, 0);
        std::printf("ok\n");
        return kExitOk;
    } catch (const IoError& e) {
        std::cerr << e.what() << "\n";
        return kExitIo;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return kExitMesh;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cut locus of a point on a closed surface from the optimal transport density"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<double> epsilon;
    std::string mode;
    std::optional<int> refine;
    std::string out_dir;
    auto* run = app.add_subcommand("run", "Run the DMK pipeline from a configuration file");
    run->add_option("--config", config_path, "Configuration file")->required();
    run->add_option("--epsilon", epsilon, "Extraction threshold");
    run->add_option("--mode", mode, "Threshold mode")->check(CLI::IsMember({"abs", "rel"}));
    run->add_option("--refine", refine, "Extra lifted refinements of the coarse mesh");
    run->add_option("--out", out_dir, "Output directory");

    auto* oracle = app.add_subcommand("oracle", "Closed-form checks");
    oracle->require_subcommand(1);
    int circle_n = 200;
    auto* circle = oracle->add_subcommand("circle", "DMK on the circle against pi - |phi|");
    circle->add_option("--n", circle_n, "Number of segments");
    auto* sphere = oracle->add_subcommand("sphere-check", "Sphere density against quadrature");

    std::string mesh_path;
    auto* validate = app.add_subcommand("validate-mesh", "Check an OFF/OBJ mesh");
    validate->add_option("path", mesh_path, "Mesh file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    if (run->parsed()) {
        CliOverrides o;
        o.epsilon = epsilon;
        if (!mode.empty()) o.mode = parse_mode(mode);
        o.refine = refine;
        if (!out_dir.empty()) o.output_dir = out_dir;
        return run_command(config_path, o);
    }
    if (circle->parsed()) return oracle_circle(circle_n);
    if (sphere->parsed()) return oracle_sphere_check();
    if (validate->parsed()) return validate_mesh(mesh_path);
    return kExitConfig;
}
