// Copyright 2026 the bevkit authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace bevkit {

/// Base class for all toolkit errors. The what() string is human readable;
/// CLI layers translate these into machine-readable error records.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A box with non-positive footprint area where a positive one is required.
struct DegenerateBox : Error {
  using Error::Error;
};

/// A regression target containing NaN/Inf or a zero (sin, cos) pair.
struct NonFiniteTarget : Error {
  using Error::Error;
};

/// Frame/pose list length mismatch in ego-motion compensation.
struct MissingPose : Error {
  using Error::Error;
};

/// Channel count not divisible by the requested frame count.
struct IndivisibleChannels : Error {
  using Error::Error;
};

/// Inconsistent or invalid configuration (e.g. camera count vs detection
/// list count mismatch).
struct ConfigError : Error {
  using Error::Error;
};

/// File parse or I/O failure. Carries the byte offset of the failure when
/// it is known, so CLI error records can name it.
struct IoError : Error {
  IoError(const std::string& msg, std::string path,
          std::optional<std::size_t> byte_offset = std::nullopt)
      : Error(msg), path(std::move(path)), byte_offset(byte_offset) {}

  std::string path;
  std::optional<std::size_t> byte_offset;
};

}  // namespace bevkit
