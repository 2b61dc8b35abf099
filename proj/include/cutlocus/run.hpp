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

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cutlocus/cutlocus.hpp"
#include "cutlocus/dmk.hpp"
#include "cutlocus/io.hpp"

namespace cutlocus {

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,
    kExitMesh = 3,
    kExitNoConvergence = 4,
    kExitIo = 5,
};

/// Mesh pair, source and solver output of one run, kept in memory.
struct Pipeline {
    std::unique_ptr<RefinedPair> pair;
    SourceSpec source;
    double mu_floor = 0.0;
    DmkResult result;
    std::optional<CutLocusSet> cut_locus;
};

/// Builds or loads the coarse mesh, applies `cfg.refine` lifted refinements
/// and the final one-level split. Throws the mesh and I/O errors.
RefinedPair build_pair(const RunConfig& cfg);

/// Everything `cmd_run` computes, without writing files. Throws.
Pipeline run_pipeline(const RunConfig& cfg);

struct RunOutcome {
    int exit_code = kExitOk;
    std::string message;
    std::vector<std::filesystem::path> files;
    IterationLog log;
};

/// End-to-end run writing VTK, CSV and index files into the output
/// directory. Never throws; failures map to exit codes.
RunOutcome cmd_run(const RunConfig& cfg);

} // namespace cutlocus
