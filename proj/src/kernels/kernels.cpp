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

#include <atomic>

#include "kernels_internal.hpp"

namespace cutlocus::kernels {

#if !defined(CUTLOCUS_HAVE_AVX2)
const KernelTable* detail::avx2_table() { return nullptr; }
#endif
#if !defined(CUTLOCUS_HAVE_NEON)
const KernelTable* detail::neon_table() { return nullptr; }
#endif

namespace {

bool cpu_supports(Isa isa) {
    switch (isa) {
    case Isa::Scalar:
        return true;
    case Isa::Avx2:
#if defined(CUTLOCUS_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
        return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
        return false;
#endif
    case Isa::Neon:
#if defined(CUTLOCUS_HAVE_NEON)
        return true;  // mandatory on AArch64
#else
        return false;
#endif
    }
    return false;
}

const KernelTable* detect() {
    if (available(Isa::Avx2)) return detail::avx2_table();
    if (available(Isa::Neon)) return detail::neon_table();
    return &scalar_table();
}

std::atomic<const KernelTable*> g_active{nullptr};

} // namespace

std::string_view isa_name(Isa isa) {
    switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
    }
    return "unknown";
}

bool available(Isa isa) {
    if (isa == Isa::Avx2 && detail::avx2_table() == nullptr) return false;
    if (isa == Isa::Neon && detail::neon_table() == nullptr) return false;
    return cpu_supports(isa);
}

const KernelTable& table(Isa isa) {
    if (!available(isa)) return scalar_table();
    switch (isa) {
    case Isa::Avx2: return *detail::avx2_table();
    case Isa::Neon: return *detail::neon_table();
    case Isa::Scalar: break;
    }
    return scalar_table();
}

const KernelTable& active() {
    const KernelTable* t = g_active.load(std::memory_order_acquire);
    if (t == nullptr) {
        t = detect();
        g_active.store(t, std::memory_order_release);
    }
    return *t;
}

void set_active(Isa isa) { g_active.store(&table(isa), std::memory_order_release); }

} // namespace cutlocus::kernels
