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

#include <vector>

#include "cutlocus/mesh.hpp"

namespace cutlocus::test {

// Dense weighted stiffness from the cotangent formula: each triangle adds
// mu/2 cot(angle at k) to the coupling of the two other vertices. Uses only
// vertex positions, independent of the basis-gradient code path.
inline std::vector<double> dense_cotangent_stiffness(const RefinedPair& pair,
                                                     const std::vector<double>& mu) {
    const auto& mesh = pair.refined;
    const auto n = mesh.vertex_count();
    std::vector<double> a(n * n, 0.0);
    for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
        const auto& tri = mesh.triangles()[t];
        const double w = mu[static_cast<std::size_t>(pair.parent[t])];
        for (int k = 0; k < 3; ++k) {
            const auto i = static_cast<std::size_t>(tri[(k + 1) % 3]);
            const auto j = static_cast<std::size_t>(tri[(k + 2) % 3]);
            const Vec3 u = mesh.vertices()[i] - mesh.vertices()[static_cast<std::size_t>(tri[k])];
            const Vec3 v = mesh.vertices()[j] - mesh.vertices()[static_cast<std::size_t>(tri[k])];
            const double cot = u.dot(v) / u.cross(v).norm();
            const double c = 0.5 * w * cot;
            a[i * n + j] -= c;
            a[j * n + i] -= c;
            a[i * n + i] += c;
            a[j * n + j] += c;
        }
    }
    return a;
}

} // namespace cutlocus::test
