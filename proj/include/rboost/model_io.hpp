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

#include <filesystem>
#include <string>
#include <string_view>

#include "rboost/booster.hpp"

namespace rboost {

// Text model format, header line "rboost-model v1". Trees are serialized in
// preorder ("n <feature> <threshold>" internal, "l <value>" leaf); abc
// iterations carry their base class. All reals use 17 significant decimal
// digits, so a save/load roundtrip reproduces predictions bit for bit.

std::string model_to_string(const BoostModel& model);
void save_model(const BoostModel& model, const std::filesystem::path& path);

// Throws ModelIoError on a wrong header/version, truncated input (the
// message names the byte offset), or non-finite values.
BoostModel model_from_string(std::string_view text);
BoostModel load_model(const std::filesystem::path& path);

}  // namespace rboost
