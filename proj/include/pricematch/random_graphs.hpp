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

#include <random>
#include <set>
#include <string>
#include <utility>

namespace pricematch {

/// Random connected graph on vertices v0..v{n-1}: a random recursive tree
/// plus each remaining pair independently with `extra_probability`, stopping
/// at `max_edges`.
template <typename Rng>
Graph random_connected_graph(Rng &rng, std::size_t n, double extra_probability, std::size_t max_edges = kMaxEdges)
{
  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t v = 1; v < n; ++v)
  {
    edges.emplace(std::uniform_int_distribution<std::size_t>(0, v - 1)(rng), v);
  }
  std::bernoulli_distribution extra(extra_probability);
  for (std::size_t a = 0; a < n; ++a)
  {
    for (std::size_t b = a + 1; b < n; ++b)
    {
      if (edges.size() < max_edges && !edges.count({a, b}) && extra(rng))
      {
        edges.emplace(a, b);
      }
    }
  }
  std::vector<std::string> labels;
  for (std::size_t v = 0; v < n; ++v)
  {
    labels.push_back("v" + std::to_string(v));
  }
  std::vector<Edge> list;
  for (auto const &[a, b] : edges)
  {
    list.push_back({a, b});
  }
  return Graph(std::move(labels), std::move(list));
}

/// Random price assignment with denominators up to `max_den`.
template <typename Rng>
PriceAssignment random_prices(Rng &rng, Graph const &g, std::int64_t max_den = 6)
{
  std::vector<Rational> prices;
  for (VertexId v = 0; v < g.num_vertices(); ++v)
  {
    std::int64_t const den = std::uniform_int_distribution<std::int64_t>(1, max_den)(rng);
    std::int64_t const num = std::uniform_int_distribution<std::int64_t>(0, den)(rng);
    prices.emplace_back(num, den);
  }
  return PriceAssignment(std::move(prices));
}

}  // namespace pricematch
