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

#include "oracles.hpp"
#include "pricematch/json_io.hpp"
#include "pricematch/pricematch.hpp"
#include "pricematch/random_graphs.hpp"

#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pricematch::testing {

inline EdgeSet edges_named(Graph const &g, std::initializer_list<std::string_view> names)
{
  EdgeSet s = EdgeSet::none(g);
  for (auto name : names)
  {
    auto e = find_edge_token(g, name);
    if (!e)
    {
      throw std::invalid_argument("no edge " + std::string(name));
    }
    s.insert(*e);
  }
  return s;
}

inline VertexSet vertices_named(Graph const &g, std::initializer_list<std::string_view> names)
{
  VertexSet s(g.num_vertices());
  for (auto name : names)
  {
    s.insert(g.vertex(name));
  }
  return s;
}

inline PriceAssignment prices_of(std::initializer_list<Rational> values)
{
  return PriceAssignment(std::vector<Rational>(values));
}

}  // namespace pricematch::testing
