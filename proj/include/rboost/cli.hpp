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

#include <string>
#include <vector>

namespace rboost {

// Runs the rboost command line (train / predict / eval). args excludes the
// program name. Returns 0 on success, 1 on usage errors, 2 on data or model
// errors.
int cli_dispatch(const std::vector<std::string>& args);

}  // namespace rboost
