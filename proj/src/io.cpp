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

#include "cutlocus/io.hpp"

#include <charconv>
#include <functional>
#include <map>
#include <set>
#include <system_error>

#include "cutlocus/atomic_file.hpp"

namespace cutlocus {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

struct Entry {
    std::string key;
    std::string value;
    int line = 0;
};

double to_double(const Entry& e) {
    double v = 0.0;
    const char* end = e.value.data() + e.value.size();
    auto [ptr, ec] = std::from_chars(e.value.data(), end, v);
    if (ec != std::errc() || ptr != end)
        throw ConfigError("expected a number, got '" + e.value + "'", e.line, e.key);
    return v;
}

int to_int(const Entry& e) {
    int v = 0;
    const char* end = e.value.data() + e.value.size();
    auto [ptr, ec] = std::from_chars(e.value.data(), end, v);
    if (ec != std::errc() || ptr != end)
        throw ConfigError("expected an integer, got '" + e.value + "'", e.line, e.key);
    return v;
}

bool to_bool(const Entry& e) {
    if (e.value == "true" || e.value == "yes" || e.value == "1") return true;
    if (e.value == "false" || e.value == "no" || e.value == "0") return false;
    throw ConfigError("expected true or false, got '" + e.value + "'", e.line, e.key);
}

Vec3 to_vec3(const Entry& e) {
    std::string_view v = e.value;
    if (v.size() < 2 || v.front() != '(' || v.back() != ')')
        throw ConfigError("expected a vector (x, y, z)", e.line, e.key);
    v = v.substr(1, v.size() - 2);
    Vec3 out;
    for (int k = 0; k < 3; ++k) {
        const auto comma = v.find(',');
        if ((k < 2) != (comma != std::string_view::npos))
            throw ConfigError("expected three components", e.line, e.key);
        Entry part{e.key, std::string(trim(v.substr(0, comma))), e.line};
        out[k] = to_double(part);
        v = comma == std::string_view::npos ? std::string_view{} : v.substr(comma + 1);
    }
    return out;
}

std::string unquote(std::string_view v, int line, const std::string& key) {
    if (!v.empty() && (v.front() == '"' || v.front() == '\'')) {
        if (v.size() < 2 || v.back() != v.front())
            throw ConfigError("unterminated string", line, key);
        return std::string(v.substr(1, v.size() - 2));
    }
    return std::string(v);
}

// Comment start outside quotes.
std::size_t comment_start(std::string_view line) {
    char quote = 0;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quote) {
            if (ch == quote) quote = 0;
        } else if (ch == '"' || ch == '\'') {
            quote = ch;
        } else if (ch == '#') {
            return i;
        }
    }
    return line.size();
}

using Setter = std::function<void(RunConfig&, const Entry&)>;

const std::map<std::string, Setter, std::less<>>& setters() {
    static const std::map<std::string, Setter, std::less<>> table = {
        {"descriptor", [](RunConfig& c, const Entry& e) { c.descriptor = e.value; }},
        {"radius", [](RunConfig& c, const Entry& e) { c.radius = to_double(e); }},
        {"r_max", [](RunConfig& c, const Entry& e) { c.r_max = to_double(e); }},
        {"r_min", [](RunConfig& c, const Entry& e) { c.r_min = to_double(e); }},
        {"a", [](RunConfig& c, const Entry& e) { c.a = to_double(e); }},
        {"b", [](RunConfig& c, const Entry& e) { c.b = to_double(e); }},
        {"c", [](RunConfig& c, const Entry& e) { c.c = to_double(e); }},
        {"resolution", [](RunConfig& c, const Entry& e) { c.resolution = to_int(e); }},
        {"resolution_minor", [](RunConfig& c, const Entry& e) { c.resolution_minor = to_int(e); }},
        {"mesh", [](RunConfig& c, const Entry& e) { c.mesh_path = e.value; }},
        {"source", [](RunConfig& c, const Entry& e) { c.source_point = to_vec3(e); }},
        {"source_vertex", [](RunConfig& c, const Entry& e) { c.source_vertex = to_int(e); }},
        {"refine", [](RunConfig& c, const Entry& e) { c.refine = to_int(e); }},
        {"epsilon",
         [](RunConfig& c, const Entry& e) {
             c.epsilon = to_double(e);
             if (!(*c.epsilon > 0.0)) throw ConfigError("must be > 0", e.line, e.key);
         }},
        {"mode",
         [](RunConfig& c, const Entry& e) {
             try {
                 c.mode = parse_mode(e.value);
             } catch (const ConfigError& err) {
                 throw ConfigError(err.what(), e.line, e.key);
             }
         }},
        {"output", [](RunConfig& c, const Entry& e) { c.output_dir = e.value; }},
        {"write_vtk", [](RunConfig& c, const Entry& e) { c.outputs.vtk = to_bool(e); }},
        {"write_csv", [](RunConfig& c, const Entry& e) { c.outputs.csv = to_bool(e); }},
        {"write_indices", [](RunConfig& c, const Entry& e) { c.outputs.indices = to_bool(e); }},
        {"dmk.delta_t", [](RunConfig& c, const Entry& e) { c.dmk.delta_t = to_double(e); }},
        {"dmk.mu_init", [](RunConfig& c, const Entry& e) { c.dmk.mu_init = to_double(e); }},
        {"dmk.mu_floor", [](RunConfig& c, const Entry& e) { c.dmk.mu_floor = to_double(e); }},
        {"dmk.linear_rel_tol",
         [](RunConfig& c, const Entry& e) { c.dmk.linear_rel_tol = to_double(e); }},
        {"dmk.conv_tol", [](RunConfig& c, const Entry& e) { c.dmk.conv_tol = to_double(e); }},
        {"dmk.max_steps", [](RunConfig& c, const Entry& e) { c.dmk.max_steps = to_int(e); }},
        {"dmk.lyapunov_slack",
         [](RunConfig& c, const Entry& e) { c.dmk.lyapunov_slack = to_double(e); }},
        {"dmk.max_linear_iter",
         [](RunConfig& c, const Entry& e) { c.dmk.max_linear_iter = to_int(e); }},
    };
    return table;
}

void append_number(std::string& out, double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, ptr);
}

void append_points(std::string& out, std::span<const Vec3> points) {
    out += "POINTS " + std::to_string(points.size()) + " double\n";
    for (const auto& p : points) {
        append_number(out, p.x());
        out += ' ';
        append_number(out, p.y());
        out += ' ';
        append_number(out, p.z());
        out += '\n';
    }
}

void append_triangles(std::string& out, const SurfaceMesh& mesh) {
    const auto n = mesh.triangle_count();
    out += "CELLS " + std::to_string(n) + " " + std::to_string(4 * n) + "\n";
    for (const auto& t : mesh.triangles())
        out += "3 " + std::to_string(t[0]) + " " + std::to_string(t[1]) + " " +
               std::to_string(t[2]) + "\n";
    out += "CELL_TYPES " + std::to_string(n) + "\n";
    for (std::size_t i = 0; i < n; ++i) out += "5\n";
}

void append_scalars(std::string& out, const char* name, std::span<const double> values) {
    out += "SCALARS ";
    out += name;
    out += " double 1\nLOOKUP_TABLE default\n";
    for (double v : values) {
        append_number(out, v);
        out += '\n';
    }
}

std::string vtk_header(const char* title) {
    return std::string("# vtk DataFile Version 3.0\n") + title + "\nASCII\n";
}

} // namespace

ThresholdMode parse_mode(std::string_view text) {
    if (text == "abs" || text == "absolute") return ThresholdMode::Absolute;
    if (text == "rel" || text == "relative") return ThresholdMode::Relative;
    throw ConfigError("mode must be abs or rel, got '" + std::string(text) + "'");
}

void RunConfig::validate() const {
    if (descriptor.has_value() == mesh_path.has_value())
        throw ConfigError("exactly one of 'descriptor' and 'mesh' must be given");
    if (descriptor && *descriptor != "sphere" && *descriptor != "torus" &&
        *descriptor != "ellipsoid" && *descriptor != "quartic")
        throw ConfigError("unknown surface '" + *descriptor + "'", 0, "descriptor");
    if (source_point.has_value() == source_vertex.has_value())
        throw ConfigError("exactly one of 'source' and 'source_vertex' must be given");
    if (source_vertex && *source_vertex < 0)
        throw ConfigError("must be >= 0", 0, "source_vertex");
    if (refine < 0) throw ConfigError("must be >= 0", 0, "refine");
    if (resolution < 0) throw ConfigError("must be >= 0", 0, "resolution");
    if (resolution_minor && *resolution_minor < 3)
        throw ConfigError("must be >= 3", 0, "resolution_minor");
    if (epsilon && !(*epsilon > 0.0)) throw ConfigError("must be > 0", 0, "epsilon");
    try {
        dmk.validate();
    } catch (const ParameterError& e) {
        throw ConfigError(e.what());
    }
}

SurfaceDescriptor RunConfig::surface() const {
    if (!descriptor) throw ConfigError("no surface descriptor");
    if (*descriptor == "sphere") return SurfaceDescriptor::sphere(radius);
    if (*descriptor == "torus") return SurfaceDescriptor::torus(r_max, r_min);
    if (*descriptor == "ellipsoid") return SurfaceDescriptor::ellipsoid(a, b, c);
    if (*descriptor == "quartic") return SurfaceDescriptor::quartic();
    throw ConfigError("unknown surface '" + *descriptor + "'", 0, "descriptor");
}

RunConfig parse_config(std::string_view text) {
    RunConfig cfg;
    std::set<std::string, std::less<>> seen;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        line = trim(line.substr(0, comment_start(line)));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("expected 'key = value'", line_no);
        const std::string key(trim(line.substr(0, eq)));
        if (key.empty()) throw ConfigError("missing key", line_no);
        const auto raw = trim(line.substr(eq + 1));
        if (raw.empty()) throw ConfigError("missing value", line_no, key);

        const auto& table = setters();
        const auto it = table.find(key);
        if (it == table.end()) throw ConfigError("unknown key", line_no, key);
        if (!seen.insert(key).second) throw ConfigError("duplicate key", line_no, key);
        it->second(cfg, Entry{key, unquote(raw, line_no, key), line_no});
    }

    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    auto cfg = parse_config(read_file(path));
    if (cfg.mesh_path && cfg.mesh_path->is_relative())
        cfg.mesh_path = path.parent_path() / *cfg.mesh_path;
    return cfg;
}

void apply_overrides(RunConfig& cfg, const CliOverrides& o) {
    if (o.epsilon) cfg.epsilon = o.epsilon;
    if (o.mode) cfg.mode = *o.mode;
    if (o.refine) cfg.refine = *o.refine;
    if (o.output_dir) cfg.output_dir = *o.output_dir;
    cfg.validate();
}

std::string format_vtk_refined(const SurfaceMesh& refined, std::span<const double> potential,
                               std::span<const double> grad_norm) {
    if (potential.size() != refined.vertex_count())
        throw DimensionMismatch("potential does not match the refined mesh");
    if (grad_norm.size() != refined.triangle_count())
        throw DimensionMismatch("gradient norms do not match the refined mesh");
    std::string out = vtk_header("cutlocus refined mesh");
    out += "DATASET UNSTRUCTURED_GRID\n";
    append_points(out, refined.vertices());
    append_triangles(out, refined);
    out += "POINT_DATA " + std::to_string(refined.vertex_count()) + "\n";
    append_scalars(out, "potential", potential);
    out += "CELL_DATA " + std::to_string(refined.triangle_count()) + "\n";
    append_scalars(out, "grad_norm", grad_norm);
    return out;
}

std::string format_vtk_coarse(const SurfaceMesh& coarse, std::span<const double> density,
                              std::span<const int> mask) {
    if (density.size() != coarse.triangle_count())
        throw DimensionMismatch("density does not match the coarse mesh");
    if (mask.size() != coarse.triangle_count())
        throw DimensionMismatch("mask does not match the coarse mesh");
    std::string out = vtk_header("cutlocus coarse mesh");
    out += "DATASET UNSTRUCTURED_GRID\n";
    append_points(out, coarse.vertices());
    append_triangles(out, coarse);
    out += "CELL_DATA " + std::to_string(coarse.triangle_count()) + "\n";
    append_scalars(out, "density", density);
    out += "SCALARS cutlocus_mask int 1\nLOOKUP_TABLE default\n";
    for (int m : mask) out += std::to_string(m) + "\n";
    return out;
}

std::string format_vtk_curves(const CurveSet& curves) {
    std::vector<Vec3> points;
    std::size_t size = 0;
    for (const auto& c : curves.curves) {
        points.insert(points.end(), c.begin(), c.end());
        size += c.size() + 1;
    }
    std::string out = vtk_header("cutlocus reference curves");
    out += "DATASET POLYDATA\n";
    append_points(out, points);
    out += "LINES " + std::to_string(curves.size()) + " " + std::to_string(size) + "\n";
    std::size_t offset = 0;
    for (const auto& c : curves.curves) {
        out += std::to_string(c.size());
        for (std::size_t k = 0; k < c.size(); ++k) out += " " + std::to_string(offset + k);
        out += "\n";
        offset += c.size();
    }
    out += "CELL_DATA " + std::to_string(curves.size()) + "\n";
    out += "SCALARS curve_id int 1\nLOOKUP_TABLE default\n";
    for (std::size_t k = 0; k < curves.size(); ++k) out += std::to_string(k) + "\n";
    return out;
}

VtkFiles export_vtk(const RefinedPair& pair, const PotentialField& u, const DensityField& mu,
                    std::span<const int> mask, const std::filesystem::path& stem) {
    const auto geom = element_geometry(pair.refined);
    if (u.values.size() != pair.refined.vertex_count())
        throw DimensionMismatch("potential does not match the refined mesh");
    const auto grad = gradient_norms(pair, geom, u);
    const auto refined = format_vtk_refined(pair.refined, u.values, grad);
    const auto coarse = format_vtk_coarse(pair.coarse, mu.values, mask);

    VtkFiles files;
    files.refined = stem;
    files.refined += "_refined.vtk";
    files.coarse = stem;
    files.coarse += "_coarse.vtk";
    write_file_atomic(files.refined, refined);
    try {
        write_file_atomic(files.coarse, coarse);
    } catch (...) {
        std::error_code ignored;
        std::filesystem::remove(files.refined, ignored);
        throw;
    }
    return files;
}

std::string format_indices(const CutLocusSet& set) {
    std::string out;
    for (Index t : set.triangle_indices) out += std::to_string(t) + "\n";
    return out;
}

} // namespace cutlocus
