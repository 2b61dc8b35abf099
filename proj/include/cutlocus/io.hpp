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
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "cutlocus/cutlocus.hpp"
#include "cutlocus/dmk.hpp"
#include "cutlocus/mesh.hpp"
#include "cutlocus/sfem.hpp"
#include "cutlocus/surfaces.hpp"

namespace cutlocus {

struct OutputToggles {
    bool vtk = true;
    bool csv = true;
    bool indices = true;
};

/// One end-to-end run. Exactly one of `descriptor` and `mesh_path` is set.
struct RunConfig {
    std::optional<std::string> descriptor;  // sphere | torus | ellipsoid | quartic
    double radius = 1.0;
    double r_max = 2.0;
    double r_min = 1.0;
    double a = 1.0, b = 1.0, c = 1.0;
    int resolution = 3;
    /// Torus only: samples around the tube, defaults to `resolution`.
    std::optional<int> resolution_minor;

    std::optional<std::filesystem::path> mesh_path;

    std::optional<Vec3> source_point;
    std::optional<Index> source_vertex;

    /// Lifted uniform refinements applied to the coarse mesh before the run.
    int refine = 0;
    DmkConfig dmk;

    /// Extraction runs only when epsilon is set.
    std::optional<double> epsilon;
    ThresholdMode mode = ThresholdMode::Absolute;

    std::filesystem::path output_dir = "out";
    OutputToggles outputs;

    /// Throws ConfigError on violated invariants.
    void validate() const;
    /// Throws ConfigError when no descriptor is set, ParameterError on bad
    /// shape parameters.
    SurfaceDescriptor surface() const;
};

/// Flat `key = value` lines; `#` starts a comment. Values are numbers,
/// booleans, bare or quoted strings and vectors `(x, y, z)`. DMK settings
/// use the `dmk.` prefix. Throws ConfigError with the offending line and key.
RunConfig parse_config(std::string_view text);

/// Reads and parses `path`; a relative mesh path is taken relative to the
/// file's directory. Throws IoError, ConfigError.
RunConfig load_config(const std::filesystem::path& path);

struct CliOverrides {
    std::optional<double> epsilon;
    std::optional<ThresholdMode> mode;
    std::optional<int> refine;
    std::optional<std::filesystem::path> output_dir;
};

void apply_overrides(RunConfig& cfg, const CliOverrides& overrides);

/// "abs" / "rel". Throws ConfigError otherwise.
ThresholdMode parse_mode(std::string_view text);

// Legacy ASCII VTK unstructured grids.
std::string format_vtk_refined(const SurfaceMesh& refined, std::span<const double> potential,
                               std::span<const double> grad_norm);
std::string format_vtk_coarse(const SurfaceMesh& coarse, std::span<const double> density,
                              std::span<const int> mask);
/// Reference curves as polylines.
std::string format_vtk_curves(const CurveSet& curves);

struct VtkFiles {
    std::filesystem::path refined;
    std::filesystem::path coarse;
};

/// Writes `<stem>_refined.vtk` (point data "potential", cell data
/// "grad_norm") and `<stem>_coarse.vtk` (cell data "density" and
/// "cutlocus_mask"). Sizes are checked before anything is written; on any
/// failure no file is left behind. Throws DimensionMismatch, IoError.
VtkFiles export_vtk(const RefinedPair& pair, const PotentialField& u, const DensityField& mu,
                    std::span<const int> mask, const std::filesystem::path& stem);

/// One triangle index per line.
std::string format_indices(const CutLocusSet& set);

} // namespace cutlocus
