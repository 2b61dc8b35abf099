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

#include "cutlocus/mesh.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <unordered_map>

#include "cutlocus/atomic_file.hpp"

namespace cutlocus {

namespace {

std::uint64_t edge_key(Index a, Index b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
}

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
    return 0.5 * (b - a).cross(c - a).norm();
}

} // namespace

SurfaceMesh SurfaceMesh::create(std::vector<Vec3> vertices, std::vector<Triangle> triangles,
                                std::vector<Vec3> normal_hints) {
    const auto n = vertices.size();
    if (triangles.empty()) throw TopologyError("mesh has no triangles");
    for (std::size_t t = 0; t < triangles.size(); ++t) {
        const auto& tri = triangles[t];
        for (Index v : tri) {
            if (v < 0 || static_cast<std::size_t>(v) >= n)
                throw TopologyError("triangle " + std::to_string(t) + " references vertex " +
                                    std::to_string(v) + " out of range");
        }
        if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
            throw GeometryError("triangle " + std::to_string(t) + " repeats a vertex index");
    }
    for (const auto& v : vertices) {
        if (!v.allFinite()) throw GeometryError("non-finite vertex coordinate");
    }
    if (!normal_hints.empty() && normal_hints.size() != n)
        throw ParseError("normal hint count does not match vertex count");

    check_closed_manifold(triangles, n);

    SurfaceMesh mesh = create_unchecked(std::move(vertices), std::move(triangles));
    mesh.normal_hints_ = std::move(normal_hints);

    const double eps = mesh.area_epsilon();
    for (std::size_t t = 0; t < mesh.triangles_.size(); ++t) {
        const auto& tri = mesh.triangles_[t];
        if (triangle_area(mesh.vertex(tri[0]), mesh.vertex(tri[1]), mesh.vertex(tri[2])) <= eps)
            throw GeometryError("triangle " + std::to_string(t) + " is degenerate");
    }
    return mesh;
}

SurfaceMesh SurfaceMesh::create_unchecked(std::vector<Vec3> vertices,
                                          std::vector<Triangle> triangles) {
    SurfaceMesh mesh;
    mesh.vertices_ = std::move(vertices);
    mesh.triangles_ = std::move(triangles);
    return mesh;
}

double SurfaceMesh::bounding_box_diagonal() const {
    if (vertices_.empty()) return 0.0;
    Vec3 lo = vertices_.front();
    Vec3 hi = vertices_.front();
    for (const auto& v : vertices_) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
    }
    return (hi - lo).norm();
}

double SurfaceMesh::area_epsilon() const {
    const double d = bounding_box_diagonal();
    return 1e-14 * d * d;
}

double SurfaceMesh::total_area() const {
    double sum = 0.0;
    for (const auto& tri : triangles_)
        sum += triangle_area(vertex(tri[0]), vertex(tri[1]), vertex(tri[2]));
    return sum;
}

Vec3 SurfaceMesh::centroid(Index t) const {
    const auto& tri = triangle(t);
    return (vertex(tri[0]) + vertex(tri[1]) + vertex(tri[2])) / 3.0;
}

void check_closed_manifold(std::span<const Triangle> triangles, std::size_t vertex_count) {
    std::unordered_map<std::uint64_t, std::size_t> directed;
    directed.reserve(triangles.size() * 3);
    for (std::size_t t = 0; t < triangles.size(); ++t) {
        const auto& tri = triangles[t];
        for (int k = 0; k < 3; ++k) {
            const Index a = tri[k];
            const Index b = tri[(k + 1) % 3];
            if (static_cast<std::size_t>(std::max(a, b)) >= vertex_count)
                throw TopologyError("vertex index out of range");
            auto [it, inserted] = directed.emplace(edge_key(a, b), t);
            if (!inserted) {
                throw TopologyError("edge (" + std::to_string(a) + ", " + std::to_string(b) +
                                    ") appears twice with the same direction (triangles " +
                                    std::to_string(it->second) + " and " + std::to_string(t) +
                                    "): non-manifold edge or inconsistent orientation");
            }
        }
    }
    for (const auto& [key, t] : directed) {
        const auto a = static_cast<Index>(key >> 32);
        const auto b = static_cast<Index>(key & 0xffffffffu);
        if (!directed.contains(edge_key(b, a))) {
            throw TopologyError("boundary edge (" + std::to_string(a) + ", " + std::to_string(b) +
                                ") of triangle " + std::to_string(t) + " has no opposite");
        }
    }
}

EdgeTopology build_edges(const SurfaceMesh& mesh) {
    EdgeTopology topo;
    const auto& tris = mesh.triangles();
    std::vector<std::array<Index, 4>> records;  // lo, hi, triangle, local slot
    records.reserve(tris.size() * 3);
    for (std::size_t t = 0; t < tris.size(); ++t) {
        for (int k = 0; k < 3; ++k) {
            Index a = tris[t][(k + 1) % 3];
            Index b = tris[t][(k + 2) % 3];
            if (a > b) std::swap(a, b);
            records.push_back({a, b, static_cast<Index>(t), k});
        }
    }
    std::sort(records.begin(), records.end());
    topo.tri_edges.assign(tris.size(), {-1, -1, -1});
    for (std::size_t i = 0; i < records.size();) {
        const auto e = static_cast<Index>(topo.edges.size());
        topo.edges.push_back({records[i][0], records[i][1]});
        std::array<Index, 2> pair{-1, -1};
        int count = 0;
        std::size_t j = i;
        for (; j < records.size() && records[j][0] == records[i][0] &&
               records[j][1] == records[i][1];
             ++j) {
            if (count < 2) pair[count] = records[j][2];
            ++count;
            topo.tri_edges[static_cast<std::size_t>(records[j][2])]
                          [static_cast<std::size_t>(records[j][3])] = e;
        }
        topo.edge_tris.push_back(pair);
        i = j;
    }
    return topo;
}

double EdgeTopology::mean_edge_length(const SurfaceMesh& mesh) const {
    if (edges.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& e : edges) sum += (mesh.vertex(e[0]) - mesh.vertex(e[1])).norm();
    return sum / static_cast<double>(edges.size());
}

int euler_characteristic(const SurfaceMesh& mesh) {
    const auto topo = build_edges(mesh);
    return static_cast<int>(mesh.vertex_count()) - static_cast<int>(topo.edges.size()) +
           static_cast<int>(mesh.triangle_count());
}

RefinedPair conformal_refine(const SurfaceMesh& mesh, const LiftFn& lift) {
    const auto topo = build_edges(mesh);
    const auto nv = static_cast<Index>(mesh.vertex_count());

    std::vector<Vec3> verts = mesh.vertices();
    verts.reserve(mesh.vertex_count() + topo.edges.size());
    for (const auto& e : topo.edges) {
        Vec3 mid = 0.5 * (mesh.vertex(e[0]) + mesh.vertex(e[1]));
        verts.push_back(lift ? lift(mid) : mid);
    }

    std::vector<Triangle> tris;
    tris.reserve(mesh.triangle_count() * 4);
    std::vector<Index> parent;
    parent.reserve(mesh.triangle_count() * 4);
    for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
        const auto& tri = mesh.triangles()[t];
        const auto& te = topo.tri_edges[t];
        // te[k] is opposite tri[k]: m01 = te[2], m12 = te[0], m20 = te[1].
        const Index m01 = nv + te[2];
        const Index m12 = nv + te[0];
        const Index m20 = nv + te[1];
        tris.push_back({tri[0], m01, m20});
        tris.push_back({m01, tri[1], m12});
        tris.push_back({m20, m12, tri[2]});
        tris.push_back({m01, m12, m20});
        for (int k = 0; k < 4; ++k) parent.push_back(static_cast<Index>(t));
    }

    RefinedPair pair;
    pair.coarse = mesh;
    pair.refined = SurfaceMesh::create_unchecked(std::move(verts), std::move(tris));
    pair.parent = std::move(parent);
    pair.vertex_embedding.resize(mesh.vertex_count());
    for (Index i = 0; i < nv; ++i) pair.vertex_embedding[static_cast<std::size_t>(i)] = i;
    return pair;
}

ElementGeometry element_geometry(const SurfaceMesh& mesh) {
    ElementGeometry geom;
    const auto nt = mesh.triangle_count();
    geom.areas.resize(nt);
    geom.gradients.resize(nt);
    geom.unit_normals.resize(nt);
    const double eps = mesh.area_epsilon();
    for (std::size_t t = 0; t < nt; ++t) {
        const auto& tri = mesh.triangles()[t];
        const Vec3& p0 = mesh.vertex(tri[0]);
        const Vec3& p1 = mesh.vertex(tri[1]);
        const Vec3& p2 = mesh.vertex(tri[2]);
        const Vec3 n = (p1 - p0).cross(p2 - p0);
        const double twice_area = n.norm();
        if (0.5 * twice_area <= eps)
            throw GeometryError("triangle " + std::to_string(t) + " is degenerate");
        const Vec3 nhat = n / twice_area;
        // grad(lambda_k) = nhat x e_k / (2A), e_k the CCW edge opposite vertex k.
        geom.gradients[t][0] = nhat.cross(p2 - p1) / twice_area;
        geom.gradients[t][1] = nhat.cross(p0 - p2) / twice_area;
        geom.gradients[t][2] = nhat.cross(p1 - p0) / twice_area;
        geom.areas[t] = 0.5 * twice_area;
        geom.unit_normals[t] = nhat;
    }
    return geom;
}

std::vector<double> lumped_vertex_areas(const SurfaceMesh& mesh, const ElementGeometry& geom) {
    std::vector<double> lumped(mesh.vertex_count(), 0.0);
    for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
        const double third = geom.areas[t] / 3.0;
        for (Index v : mesh.triangles()[t]) lumped[static_cast<std::size_t>(v)] += third;
    }
    return lumped;
}

Index nearest_vertex(const SurfaceMesh& mesh, const Vec3& point) {
    Index best = -1;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < mesh.vertex_count(); ++i) {
        const double d2 = (mesh.vertices()[i] - point).squaredNorm();
        if (d2 < best_d2) {
            best_d2 = d2;
            best = static_cast<Index>(i);
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// OFF / OBJ

namespace {

class LineReader {
public:
    explicit LineReader(std::string_view text) : text_(text) {}

    /// Next non-empty line with comments stripped.
    bool next(std::string_view& line) {
        while (pos_ < text_.size()) {
            auto end = text_.find('\n', pos_);
            if (end == std::string_view::npos) end = text_.size();
            std::string_view raw = text_.substr(pos_, end - pos_);
            pos_ = end + 1;
            ++line_no_;
            if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
            while (!raw.empty() && std::isspace(static_cast<unsigned char>(raw.back())))
                raw.remove_suffix(1);
            while (!raw.empty() && std::isspace(static_cast<unsigned char>(raw.front())))
                raw.remove_prefix(1);
            if (!raw.empty()) {
                line = raw;
                return true;
            }
        }
        return false;
    }

    int line_no() const { return line_no_; }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    int line_no_ = 0;
};

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

template <class T>
T parse_number(std::string_view token, int line_no) {
    T value{};
    const auto* first = token.data();
    const auto* last = token.data() + token.size();
    if (!token.empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw ParseError("line " + std::to_string(line_no) + ": cannot parse number '" +
                         std::string(token) + "'");
    return value;
}

} // namespace

SurfaceMesh parse_off(std::string_view text) {
    LineReader reader(text);
    std::string_view line;
    if (!reader.next(line)) throw ParseError("empty OFF file");
    auto tokens = split_ws(line);
    if (tokens.empty() || tokens[0] != "OFF") throw ParseError("line 1: missing OFF header");
    tokens.erase(tokens.begin());
    if (tokens.empty()) {
        if (!reader.next(line)) throw ParseError("missing OFF counts line");
        tokens = split_ws(line);
    }
    if (tokens.size() < 2) throw ParseError("line " + std::to_string(reader.line_no()) +
                                            ": expected 'V F E' counts");
    const auto nv = parse_number<long>(tokens[0], reader.line_no());
    const auto nf = parse_number<long>(tokens[1], reader.line_no());
    if (nv < 0 || nf < 0) throw ParseError("negative element counts");

    std::vector<Vec3> verts;
    verts.reserve(static_cast<std::size_t>(nv));
    for (long i = 0; i < nv; ++i) {
        if (!reader.next(line)) throw ParseError("unexpected end of file in vertex block");
        const auto tk = split_ws(line);
        if (tk.size() < 3) throw ParseError("line " + std::to_string(reader.line_no()) +
                                            ": vertex needs three coordinates");
        verts.emplace_back(parse_number<double>(tk[0], reader.line_no()),
                           parse_number<double>(tk[1], reader.line_no()),
                           parse_number<double>(tk[2], reader.line_no()));
    }
    std::vector<Triangle> tris;
    tris.reserve(static_cast<std::size_t>(nf));
    for (long i = 0; i < nf; ++i) {
        if (!reader.next(line)) throw ParseError("unexpected end of file in face block");
        const auto tk = split_ws(line);
        if (tk.empty() || parse_number<int>(tk[0], reader.line_no()) != 3 || tk.size() < 4)
            throw ParseError("line " + std::to_string(reader.line_no()) +
                             ": only triangular faces '3 i j k' are supported");
        tris.push_back({parse_number<Index>(tk[1], reader.line_no()),
                        parse_number<Index>(tk[2], reader.line_no()),
                        parse_number<Index>(tk[3], reader.line_no())});
    }
    return SurfaceMesh::create(std::move(verts), std::move(tris));
}

SurfaceMesh parse_obj(std::string_view text) {
    LineReader reader(text);
    std::string_view line;
    std::vector<Vec3> verts;
    std::vector<Triangle> tris;
    while (reader.next(line)) {
        const auto tk = split_ws(line);
        if (tk[0] == "v") {
            if (tk.size() < 4) throw ParseError("line " + std::to_string(reader.line_no()) +
                                                ": vertex needs three coordinates");
            verts.emplace_back(parse_number<double>(tk[1], reader.line_no()),
                               parse_number<double>(tk[2], reader.line_no()),
                               parse_number<double>(tk[3], reader.line_no()));
        } else if (tk[0] == "f") {
            if (tk.size() != 4) throw ParseError("line " + std::to_string(reader.line_no()) +
                                                 ": only triangular faces are supported");
            Triangle tri{};
            for (int k = 0; k < 3; ++k) {
                auto token = tk[static_cast<std::size_t>(k) + 1];
                token = token.substr(0, token.find('/'));
                const auto idx = parse_number<long>(token, reader.line_no());
                if (idx < 1) throw ParseError("line " + std::to_string(reader.line_no()) +
                                              ": face indices must be positive");
                tri[static_cast<std::size_t>(k)] = static_cast<Index>(idx - 1);
            }
            tris.push_back(tri);
        }
    }
    return SurfaceMesh::create(std::move(verts), std::move(tris));
}

std::optional<MeshFormat> format_from_extension(const std::filesystem::path& path) {
    auto ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (ext == ".off") return MeshFormat::Off;
    if (ext == ".obj") return MeshFormat::Obj;
    return std::nullopt;
}

SurfaceMesh load_mesh(const std::filesystem::path& path, MeshFormat format) {
    const std::string text = read_file(path);
    return format == MeshFormat::Off ? parse_off(text) : parse_obj(text);
}

SurfaceMesh load_mesh(const std::filesystem::path& path) {
    const auto format = format_from_extension(path);
    if (!format) throw ParseError("unknown mesh extension: " + path.string());
    return load_mesh(path, *format);
}

namespace {

void append_double(std::string& out, double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, ptr);
}

} // namespace

std::string format_off(const SurfaceMesh& mesh) {
    std::string out = "OFF\n";
    out += std::to_string(mesh.vertex_count()) + " " + std::to_string(mesh.triangle_count()) +
           " " + std::to_string(build_edges(mesh).edges.size()) + "\n";
    for (const auto& v : mesh.vertices()) {
        append_double(out, v.x());
        out += ' ';
        append_double(out, v.y());
        out += ' ';
        append_double(out, v.z());
        out += '\n';
    }
    for (const auto& t : mesh.triangles()) {
        out += "3 " + std::to_string(t[0]) + " " + std::to_string(t[1]) + " " +
               std::to_string(t[2]) + "\n";
    }
    return out;
}

void save_off(const SurfaceMesh& mesh, const std::filesystem::path& path) {
    write_file_atomic(path, format_off(mesh));
}

} // namespace cutlocus
