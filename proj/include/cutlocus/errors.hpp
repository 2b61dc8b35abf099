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

#include <stdexcept>
#include <string>

namespace cutlocus {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define CUTLOCUS_DEFINE_ERROR(Name)            \
    class Name : public Error {                \
    public:                                    \
        using Error::Error;                    \
    }

CUTLOCUS_DEFINE_ERROR(ParseError);
CUTLOCUS_DEFINE_ERROR(TopologyError);
CUTLOCUS_DEFINE_ERROR(GeometryError);
CUTLOCUS_DEFINE_ERROR(ProjectionError);
CUTLOCUS_DEFINE_ERROR(UnsupportedDescriptor);
CUTLOCUS_DEFINE_ERROR(ParameterError);
CUTLOCUS_DEFINE_ERROR(DimensionMismatch);
CUTLOCUS_DEFINE_ERROR(NoConvergence);
CUTLOCUS_DEFINE_ERROR(DomainError);
CUTLOCUS_DEFINE_ERROR(EmptyInput);
CUTLOCUS_DEFINE_ERROR(DisconnectedMesh);
CUTLOCUS_DEFINE_ERROR(IoError);

#undef CUTLOCUS_DEFINE_ERROR

/// Configuration error carrying the offending line (1-based, 0 when not
/// tied to a line) and key.
class ConfigError : public Error {
public:
    ConfigError(const std::string& message, int line = 0, std::string key = {})
        : Error(format(message, line, key)), line_(line), key_(std::move(key)) {}

    int line() const noexcept { return line_; }
    const std::string& key() const noexcept { return key_; }

private:
    static std::string format(const std::string& message, int line, const std::string& key) {
        std::string out;
        if (line > 0) out += "line " + std::to_string(line) + ": ";
        if (!key.empty()) out += "'" + key + "': ";
        return out + message;
    }

    int line_;
    std::string key_;
};

} // namespace cutlocus
