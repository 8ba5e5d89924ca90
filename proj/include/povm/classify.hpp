// Copyright 2026 The povm-forge Authors
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

#include <string_view>
#include <vector>

#include "povm/extremality.hpp"

namespace povm {

/// Taxonomy of extremal POVMs:
///   A  rank-1 with linearly independent effects,
///   B  projection valued,
///   C  every effect a projection or rank-1, effects independent,
///   D  extremal but none of the above.
/// When several apply, the most specific (A before B before C) is reported.
enum class ExtremalType { NotExtremalOrUnknown, A, B, C, D };

constexpr std::string_view to_string(ExtremalType t) {
  switch (t) {
    case ExtremalType::NotExtremalOrUnknown: return "not_extremal_or_unknown";
    case ExtremalType::A: return "a";
    case ExtremalType::B: return "b";
    case ExtremalType::C: return "c";
    case ExtremalType::D: return "d";
  }
  return "unknown";
}

struct PovmClass {
  bool is_rank1 = false;
  bool is_pvm = false;
  bool extremal = false;
  bool borderline = false;
  ExtremalType type = ExtremalType::NotExtremalOrUnknown;
  Index dim = 0;
  std::size_t nonzero_count = 0;
  /// Rank of each nonzero effect, in outcome order.
  std::vector<Index> rank_profile;
};

template <class Real>
PovmClass classify(const Povm<Real>& p, const Tolerances& tol = {}) {
  validate(p, tol);
  const auto pruned = prune_zero_effects(p, tol).povm;
  PovmClass c;
  c.dim = p.dim();
  c.nonzero_count = pruned.size();

  bool projection_or_rank1 = true;
  c.is_pvm = true;
  for (const auto& e : pruned) {
    const Index r = rank_of(e, tol);
    const bool proj = is_projection(e, tol);
    c.rank_profile.push_back(r);
    c.is_pvm = c.is_pvm && proj;
    projection_or_rank1 = projection_or_rank1 && (proj || r <= 1);
  }
  c.is_rank1 = std::all_of(c.rank_profile.begin(), c.rank_profile.end(),
                           [](Index r) { return r <= 1; });

  const auto report = extremality(p, tol);
  c.extremal = report.extremal;
  c.borderline = report.borderline;
  if (!c.extremal) return c;

  if (c.is_rank1) {
    c.type = ExtremalType::A;
  } else if (c.is_pvm) {
    c.type = ExtremalType::B;
  } else if (projection_or_rank1 && linearly_independent(pruned.effects(), tol).independent) {
    c.type = ExtremalType::C;
  } else {
    c.type = ExtremalType::D;
  }
  return c;
}

}  // namespace povm
