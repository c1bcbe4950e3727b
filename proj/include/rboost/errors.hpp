// Copyright 2026 The RBoost Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace rboost {

// Malformed or inconsistent input data (bad file contents, label/dimension
// mismatches). Mapped to exit code 2 by the CLI.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Unreadable, truncated, or version-incompatible model files.
// Mapped to exit code 2 by the CLI.
class ModelIoError : public std::runtime_error {
 public:
  explicit ModelIoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rboost
