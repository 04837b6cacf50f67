// Copyright 2026 The jnr Authors
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

#include <array>

#include "jnr/psdfeas.hpp"

namespace jnr::psdfeas::detail {

struct Ref {
  Index param = 0;
  Complex beta;
};

/// Entry (r, c) of a variable as sum beta * x[param]; `count` is 0 for a
/// structurally zero entry.
struct EntryRefs {
  std::array<Ref, 2> refs;
  int count = 0;
};

EntryRefs entry_refs(const Variable& v, Index r, Index c);

/// One structurally nonzero entry of an assembled pattern, R <= C.
struct PatternEntry {
  Index row = 0;
  Index col = 0;
  Complex constant;
  EntryRefs refs;
};

std::vector<PatternEntry> pattern_entries(const FeasibilityProblem& p, std::size_t k);

/// Groups of indices connected by nonzero entries.
std::vector<std::vector<Index>> connected_components(Index n, const std::vector<std::pair<Index, Index>>& edges);

}  // namespace jnr::psdfeas::detail
