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

#include "cutlocus/run.hpp"

#include <system_error>

#include "cutlocus/atomic_file.hpp"
#include "cutlocus/oracles.hpp"
#include "cutlocus/surfaces.hpp"

namespace cutlocus {

RefinedPair build_pair(const RunConfig& cfg) {
    cfg.validate();
    LiftFn lift;
    SurfaceMesh mesh;
    if (cfg.descriptor) {
        const auto surface = cfg.surface();
        lift = surface.lift();
        if (*cfg.descriptor == "torus" && cfg.resolution_minor)
            mesh = generate_torus(Torus{cfg.r_max, cfg.r_min}, cfg.resolution, *cfg.resolution_minor);
        else
            mesh = generate_mesh(surface, cfg.resolution);
    } else {
        mesh = load_mesh(*cfg.mesh_path);
    }
    for (int k = 0; k < cfg.refine; ++k) mesh = conformal_refine(mesh, lift).refined;
    return conformal_refine(mesh, lift);
}

Pipeline run_pipeline(const RunConfig& cfg) {
    Pipeline p;
    p.pair = std::make_unique<RefinedPair>(build_pair(cfg));
    const auto& pair = *p.pair;

    const auto geom = element_geometry(pair.refined);
    if (cfg.source_vertex) {
        if (static_cast<std::size_t>(*cfg.source_vertex) >= pair.coarse.vertex_count())
            throw ConfigError("beyond the coarse vertex count", 0, "source_vertex");
        const auto& v = pair.coarse.vertex(*cfg.source_vertex);
        p.source = make_source(pair, geom, v);
    } else {
        p.source = make_source(pair, geom, *cfg.source_point);
    }
    graph_distance(pair.refined, p.source.source_vertex);

    const SurfaceTransport problem(pair, p.source);
    const DmkSolver solver(problem, cfg.dmk);
    p.mu_floor = solver.mu_floor();
    p.result.state = solver.run(p.result.log);
    if (cfg.epsilon) p.cut_locus = extract(p.result.state.mu, pair.coarse, *cfg.epsilon, cfg.mode);
    return p;
}

namespace {

std::vector<std::filesystem::path> write_outputs(const RunConfig& cfg, const Pipeline& p) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.output_dir, ec);
    if (ec) throw IoError("cannot create " + cfg.output_dir.string() + ": " + ec.message());

    std::vector<std::filesystem::path> files;
    const auto& pair = *p.pair;
    if (cfg.outputs.vtk) {
        const auto mask = p.cut_locus ? p.cut_locus->mask(pair.coarse.triangle_count())
                                      : std::vector<int>(pair.coarse.triangle_count(), 0);
        const auto vtk =
            export_vtk(pair, p.result.state.u, p.result.state.mu, mask, cfg.output_dir / "field");
        files.push_back(vtk.refined);
        files.push_back(vtk.coarse);
    }
    if (cfg.outputs.csv) {
        files.push_back(cfg.output_dir / "iterations.csv");
        write_file_atomic(files.back(), p.result.log.to_csv());
    }
    if (cfg.outputs.indices && p.cut_locus) {
        files.push_back(cfg.output_dir / "cutlocus.txt");
        write_file_atomic(files.back(), format_indices(*p.cut_locus));
    }
    return files;
}

} // namespace

RunOutcome cmd_run(const RunConfig& cfg) {
    RunOutcome out;
    try {
        const auto p = run_pipeline(cfg);
        out.log = p.result.log;
        out.files = write_outputs(cfg, p);
        if (!p.result.log.converged) {
            out.exit_code = kExitNoConvergence;
            out.message = "no steady state after " + std::to_string(cfg.dmk.max_steps) + " steps";
        } else {
            out.message = "converged after " + std::to_string(p.result.state.step) + " steps";
        }
        if (p.cut_locus)
            out.message += ", " + std::to_string(p.cut_locus->triangle_indices.size()) +
                           " cut-locus triangles";
    } catch (const ConfigError& e) {
        out.exit_code = kExitConfig;
        out.message = e.what();
    } catch (const ParameterError& e) {
        out.exit_code = kExitConfig;
        out.message = e.what();
    } catch (const IoError& e) {
        out.exit_code = kExitIo;
        out.message = e.what();
    } catch (const NoConvergence& e) {
        out.exit_code = kExitNoConvergence;
        out.message = e.what();
    } catch (const Error& e) {
        out.exit_code = kExitMesh;
        out.message = e.what();
    }
    return out;
}

} // namespace cutlocus
