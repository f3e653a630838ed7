#pragma once
//------------------------------------------------------------------------------
//
//   Copyright 2026 The pricematch Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#include "pricematch/graph.hpp"

#include <array>
#include <string_view>

namespace pricematch {

struct FixtureInfo
{
  std::string_view name;
  std::string_view description;
  std::string_view edge_list;
};

// Two triangles abf and cde joined by the edge bc.
inline constexpr std::string_view kFig1 = "a f\na b\nb f\nb c\nc d\nc e\nd e\n";

// 12 vertices; the first 15 edges form a keepable set, the last 6 are the evicted rest.
inline constexpr std::string_view kFig2 =
    "a b\nc d\ne f\na f\ng h\ni j\nk l\n"
    "a h\nd h\nd g\nc h\nh j\nl g\nb j\nd l\n"
    "b c\na c\ne g\ni k\nf g\nj k\n";

// 12 vertices; maximum matching {ab, cd, ef, gh, ij, kl}, minmax matching {ac, eg, ik}.
inline constexpr std::string_view kFig6 =
    "a b\nc d\ne f\ng h\ni j\nk l\n"
    "a c\ne g\ni k\n"
    "g k\na g\na f\nd e\nd g\nc h\ng l\nb c\nf g\nj k\n";

// Path with three edges.
inline constexpr std::string_view kP3 = "a b\nb c\nc d\n";

// Petersen graph: outer 5-cycle o0..o4, spokes o_k-i_k, inner pentagram.
inline constexpr std::string_view kPetersen =
    "o0 o1\no1 o2\no2 o3\no3 o4\no4 o0\n"
    "o0 i0\no1 i1\no2 i2\no3 i3\no4 i4\n"
    "i0 i2\ni2 i4\ni4 i1\ni1 i3\ni3 i0\n";

// 24 vertices: the unique maximum matching (first 12 edges), then the
// cross edges aA bB cC, the links hi HI jk JK and the connectors d-h .. F-K.
inline constexpr std::string_view kFig7 =
    "a d\nb e\nc f\ng h\ni j\nk l\nA D\nB E\nC F\nG H\nI J\nK L\n"
    "a A\nb B\nc C\n"
    "h i\nH I\nj k\nJ K\n"
    "d h\nD H\ne i\nE I\nf k\nF K\n";

inline constexpr std::array<FixtureInfo, 6> kFixtures{{
    {"fig1", "two triangles joined by a bridge; competitive ratio 2/3", kFig1},
    {"fig2", "12-vertex graph whose first 15 edges are keepable", kFig2},
    {"fig6", "12-vertex graph illustrating one refinement round", kFig6},
    {"p3", "path with three edges", kP3},
    {"petersen", "Petersen graph; competitive ratio 3/5", kPetersen},
    {"fig7", "24-vertex graph where extended refinement reaches ratio 1/2", kFig7},
}};

inline Graph bundled_graph(std::string_view name)
{
  for (auto const &f : kFixtures)
  {
    if (f.name == name)
    {
      return parse_graph(f.edge_list);
    }
  }
  throw InvalidArgument("unknown bundled graph '" + std::string(name) + "'");
}

/// Edge ids of the first `count` edges of a fixture; the fixtures list their
/// distinguished edge classes first.
inline EdgeSet leading_edges(Graph const &g, std::size_t count)
{
  EdgeSet s = EdgeSet::none(g);
  for (EdgeId e = 0; e < count && e < g.num_edges(); ++e)
  {
    s.insert(e);
  }
  return s;
}

}  // namespace pricematch
