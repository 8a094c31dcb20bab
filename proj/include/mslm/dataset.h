// Copyright 2026 The mslm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <vector>

#include "mslm/model.h"

namespace mslm {

/// Long-format CSV with header "group,x,<y1>,...,<yq>". Groups keep their
/// first-appearance order.
struct Dataset {
  std::vector<std::string> response_names;  // q header names after "x"
  std::vector<GroupSample> groups;

  std::size_t q() const noexcept { return response_names.size(); }
};

/// Parse errors carry the 1-based line number. Rejects non-finite values,
/// fewer than 2 groups, and any group with n <= q + 2 (naming the group).
Dataset ingest_csv(std::istream& in, const std::string& source = "<input>");
Dataset ingest_file(const std::string& path);

}  // namespace mslm
