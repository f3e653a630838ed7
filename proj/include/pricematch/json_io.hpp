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

// JSON encodings of the library's values (nlohmann/json).

#include "pricematch/keepability.hpp"
#include "pricematch/matching.hpp"
#include "pricematch/refinement.hpp"
#include "pricematch/verify.hpp"

#include <json.hpp>

namespace pricematch::json_io {

using nlohmann::json;

inline json rational_to_json(Rational const &r)
{
  return {{"num", r.numerator()}, {"den", r.denominator()}};
}

inline Rational rational_from_json(json const &j)
{
  if (!j.is_object() || !j.contains("num") || !j.contains("den") || !j["num"].is_number_integer() ||
      !j["den"].is_number_integer())
  {
    throw InvalidArgument("rational must be {\"num\": int, \"den\": int}, got " + j.dump());
  }
  auto const den = j["den"].get<std::int64_t>();
  if (den <= 0)
  {
    throw InvalidArgument("rational denominator must be positive, got " + j.dump());
  }
  return Rational(j["num"].get<std::int64_t>(), den);
}

inline json prices_to_json(Graph const &g, PriceAssignment const &p)
{
  json out = json::object();
  for (VertexId v = 0; v < g.num_vertices(); ++v)
  {
    out[g.label(v)] = rational_to_json(p[v]);
  }
  return out;
}

inline PriceAssignment prices_from_json(Graph const &g, json const &j)
{
  if (!j.is_object())
  {
    throw InvalidArgument("prices must be a JSON object keyed by vertex label");
  }
  for (auto const &[label, value] : j.items())
  {
    if (!g.find_vertex(label))
    {
      throw InvalidArgument("price given for unknown vertex '" + label + "'");
    }
  }
  std::vector<Rational> prices;
  for (VertexId v = 0; v < g.num_vertices(); ++v)
  {
    if (!j.contains(g.label(v)))
    {
      throw InvalidArgument("missing price for vertex '" + g.label(v) + "'");
    }
    prices.push_back(rational_from_json(j[g.label(v)]));
  }
  return PriceAssignment(std::move(prices));
}

inline json edge_set_to_json(Graph const &g, EdgeSet const &s)
{
  json out = json::array();
  for (EdgeId e : s.members())
  {
    out.push_back(g.edge_name(e));
  }
  return out;
}

inline json vertex_set_to_json(Graph const &g, VertexSet const &s)
{
  json out = json::array();
  for (VertexId v : s.members())
  {
    out.push_back(g.label(v));
  }
  return out;
}

inline json walk_to_json(Graph const &g, AlternatingWalk const &w)
{
  json out = json::array();
  for (VertexId v : w.vertices)
  {
    out.push_back(g.label(v));
  }
  return out;
}

inline AlternatingWalk walk_from_json(Graph const &g, json const &j)
{
  if (!j.is_array())
  {
    throw InvalidArgument("walk must be an array of vertex labels");
  }
  AlternatingWalk w;
  for (auto const &v : j)
  {
    w.vertices.push_back(g.vertex(v.get<std::string>()));
  }
  return w;
}

inline json verdict_to_json(Graph const &g, KeepabilityVerdict const &v)
{
  json out = {{"keepable", v.keepable}};
  if (v.prices)
  {
    out["prices"] = prices_to_json(g, *v.prices);
  }
  if (v.walk)
  {
    out["walk"] = walk_to_json(g, *v.walk);
  }
  if (v.keepable)
  {
    json order = json::array();
    for (auto const &step : v.elimination_order)
    {
      order.push_back({{"vertex", g.label(step.vertex)},
                       {"price", rational_to_json(step.price)},
                       {"rule", step.all_in_set ? "all_in_set" : "none_in_set"}});
    }
    out["elimination_order"] = order;
  }
  return out;
}

inline json partition_to_json(Graph const &g, OrderedPartition const &ap)
{
  json out = json::array();
  for (auto const &grp : ap.groups)
  {
    json labels = json::array();
    for (VertexId v : grp)
    {
      labels.push_back(g.label(v));
    }
    out.push_back(labels);
  }
  return out;
}

inline OrderedPartition partition_from_json(Graph const &g, json const &j)
{
  if (!j.is_array())
  {
    throw InvalidArgument("ordered partition must be an array of arrays of vertex labels");
  }
  OrderedPartition ap;
  for (auto const &grp : j)
  {
    if (!grp.is_array())
    {
      throw InvalidArgument("ordered partition group must be an array");
    }
    auto &ids = ap.groups.emplace_back();
    for (auto const &v : grp)
    {
      ids.push_back(g.vertex(v.get<std::string>()));
    }
  }
  group_index(g, ap);
  return ap;
}

inline json order_to_json(ArrivalOrder const &order)
{
  return order.sequence();
}

inline ArrivalOrder order_from_json(Graph const &g, json const &j)
{
  if (!j.is_array())
  {
    throw InvalidArgument("arrival order must be a JSON array of edge indices");
  }
  std::vector<EdgeId> seq;
  for (auto const &e : j)
  {
    if (!e.is_number_unsigned())
    {
      throw InvalidArgument("arrival order entries must be non-negative integers");
    }
    seq.push_back(e.get<EdgeId>());
  }
  return ArrivalOrder(g, std::move(seq));
}

inline json trace_to_json(Graph const &g, ArrivalOutcome const &outcome)
{
  json out = json::array();
  for (auto const &step : outcome.trace)
  {
    auto const &e = g.edge(step.buyer);
    out.push_back({{"buyer", {g.label(e.u), g.label(e.v)}}, {"transacted", step.transacted}});
  }
  return out;
}

inline json report_to_json(Graph const &g, RunReport const &r)
{
  json out = {{"iterations", r.iterations},
              {"minmax_trajectory", r.minmax_trajectory},
              {"final_minmax", r.final_minmax},
              {"max_matching", r.max_matching},
              {"ratio", rational_to_json(r.ratio)}};
  out["prices"] = r.prices ? prices_to_json(g, *r.prices) : json(nullptr);
  json sets     = json::array();
  for (auto const &b : r.refinement_sets)
  {
    sets.push_back(vertex_set_to_json(g, b));
  }
  out["refinement_sets"] = sets;
  return out;
}

inline json state_to_json(Graph const &g, RefinementState const &st)
{
  json labels = json::object();
  for (EdgeId e = 0; e < st.labels.size(); ++e)
  {
    labels[g.edge_name(e)] = to_string(st.labels[e]);
  }
  return {{"labels", labels},
          {"partition", partition_to_json(g, st.partition)},
          {"kept", edge_set_to_json(g, kept_set(g, st))},
          {"refinements", st.history.size()}};
}

inline json certificate_to_json(Graph const &g, RatioCertificate const &c)
{
  return {{"graph", c.graph_name},
          {"max_matching", c.max_matching},
          {"best_keepable_minmax", c.best_keepable_minmax},
          {"ratio", rational_to_json(c.ratio)},
          {"witness_set", edge_set_to_json(g, c.witness_set)},
          {"subsets_examined", c.subsets_examined},
          {"keepable_subsets", c.keepable_subsets}};
}

}  // namespace pricematch::json_io
