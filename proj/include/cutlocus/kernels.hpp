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

#include <cstdint>
#include <span>
#include <string_view>

namespace cutlocus::kernels {

/// Instruction-set variants of the dense inner loops.
enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa);

/// Compressed sparse row view; `row_ptr` has rows + 1 entries.
struct CsrView {
    std::span<const std::int32_t> row_ptr;
    std::span<const std::int32_t> col;
    std::span<const double> val;
};

/// Function table for one instruction set. Every entry has the same
/// contract as its scalar reference; vector variants may reassociate sums.
struct KernelTable {
    Isa isa;
    double (*dot)(std::span<const double> x, std::span<const double> y);
    /// y += a * x
    void (*axpy)(double a, std::span<const double> x, std::span<double> y);
    /// y = x + b * y
    void (*xpby)(std::span<const double> x, double b, std::span<double> y);
    /// z = d .* r
    void (*multiply)(std::span<const double> d, std::span<const double> r, std::span<double> z);
    /// y = A x
    void (*spmv)(const CsrView& a, std::span<const double> x, std::span<double> y);
    /// mu_out = max(floor, mu + dt * mu * (q - 1)); returns max |mu_out - mu| / mu.
    double (*density_update)(std::span<const double> mu, std::span<const double> q, double dt,
                             double floor, std::span<double> mu_out);
};

const KernelTable& scalar_table();

/// Whether the running CPU and the build both support `isa`.
bool available(Isa isa);

/// Table for a specific ISA; falls back to scalar when unavailable.
const KernelTable& table(Isa isa);

/// Best available table, detected once at first use unless overridden.
const KernelTable& active();

/// Pins the table returned by `active()`. Unavailable ISAs fall back to
/// scalar.
void set_active(Isa isa);

} // namespace cutlocus::kernels
