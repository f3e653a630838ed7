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

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace pricematch {

/// Closed vertex sequence v_0..v_l (v_l == v_0, l even) whose i-th edge lies
/// in S exactly when i is odd. Its existence proves S is not keepable.
struct AlternatingWalk
{
  std::vector<VertexId> vertices;

  std::size_t length() const
  {
    return vertices.empty() ? 0 : vertices.size() - 1;
  }

  friend bool operator==(AlternatingWalk const &, AlternatingWalk const &) = default;
};

/// Ordered vertex groups A_1..A_l. Edge uv lies in the induced set iff the
/// smaller of the two group indices is odd (groups are 1-based).
struct OrderedPartition
{
  std::vector<std::vector<VertexId>> groups;

  friend bool operator==(OrderedPartition const &, OrderedPartition const &) = default;
};

struct PeelStep
{
  VertexId vertex;
  Rational price;
  bool     all_in_set;  // peeled because every remaining incident edge was in S
};

struct KeepabilityVerdict
{
  bool                           keepable = false;
  std::optional<PriceAssignment> prices;
  std::optional<AlternatingWalk> walk;
  std::vector<PeelStep>          elimination_order;  // peeling trace, also kept on failure
};

struct WalkCheck
{
  bool        ok = false;
  std::string reason;

  explicit operator bool() const
  {
    return ok;
  }
};

/// Independent checker for an alternating-walk certificate against `s`.
inline WalkCheck verify_walk(Graph const &g, EdgeSet const &s, AlternatingWalk const &w)
{
  if (!s.owned_by(g))
  {
    return {false, "edge set belongs to a different graph"};
  }
  auto const &vs = w.vertices;
  if (vs.size() < 3)
  {
    return {false, "walk has fewer than two steps"};
  }
  std::size_t const len = vs.size() - 1;
  if (len % 2 != 0)
  {
    return {false, "walk length " + std::to_string(len) + " is odd"};
  }
  if (vs.front() != vs.back())
  {
    return {false, "walk is not closed"};
  }
  std::map<std::pair<VertexId, VertexId>, int> directed_uses;
  std::map<EdgeId, int>                        uses;
  for (std::size_t i = 0; i < len; ++i)
  {
    if (vs[i] >= g.num_vertices() || vs[i + 1] >= g.num_vertices())
    {
      return {false, "vertex id out of range at position " + std::to_string(i)};
    }
    auto const e = g.find_edge(vs[i], vs[i + 1]);
    if (!e)
    {
      return {false, "step " + std::to_string(i) + " is not an edge"};
    }
    bool const want_in = (i % 2) == 1;
    if (s.contains(*e) != want_in)
    {
      return {false, "parity broken at step " + std::to_string(i) + " (" + g.edge_name(*e) +
                         (want_in ? " should be in S)" : " should not be in S)")};
    }
    if (++directed_uses[{vs[i], vs[i + 1]}] > 1)
    {
      return {false, "edge " + g.edge_name(*e) + " traversed twice in the same direction"};
    }
    if (++uses[*e] > 2)
    {
      return {false, "edge " + g.edge_name(*e) + " used more than twice"};
    }
  }
  return {true, {}};
}

/// Splits off sub-walks at repeated same-direction traversals until every
/// edge is traversed at most once per direction. The result is a valid
/// alternating walk whenever the input is one.
inline AlternatingWalk normalize_walk(AlternatingWalk w)
{
  for (bool changed = true; changed;)
  {
    changed              = false;
    auto const       &vs = w.vertices;
    std::size_t const len = vs.empty() ? 0 : vs.size() - 1;
    std::map<std::pair<VertexId, VertexId>, std::size_t> first_at;
    for (std::size_t j = 0; j < len && !changed; ++j)
    {
      auto [it, fresh] = first_at.emplace(std::make_pair(vs[j], vs[j + 1]), j);
      if (fresh)
      {
        continue;
      }
      // Same directed step at i and j; j - i is even, so dropping the
      // closed stretch v_i+1..v_j keeps every later step's parity.
      std::size_t const     i = it->second;
      std::vector<VertexId> shorter(vs.begin(), vs.begin() + static_cast<std::ptrdiff_t>(i) + 1);
      shorter.insert(shorter.end(), vs.begin() + static_cast<std::ptrdiff_t>(j) + 1, vs.end());
      w.vertices = std::move(shorter);
      changed    = true;
    }
  }
  return w;
}

namespace detail {

/// Peels the graph as long as some vertex has homogeneous remaining edges.
/// Returns the steps taken and a flag per vertex telling whether it was removed.
struct PeelResult
{
  std::vector<PeelStep> steps;
  std::vector<bool>     removed;
  bool                  complete = false;
};

inline PeelResult peel(Graph const &g, EdgeSet const &s)
{
  std::size_t const        n = g.num_vertices();
  std::vector<std::size_t> in_count(n, 0);
  std::vector<std::size_t> out_count(n, 0);
  for (EdgeId e = 0; e < g.num_edges(); ++e)
  {
    auto const &ed = g.edge(e);
    auto       &c  = s.contains(e) ? in_count : out_count;
    ++c[ed.u];
    ++c[ed.v];
  }

  PeelResult res;
  res.removed.assign(n, false);
  std::set<VertexId> eligible;
  for (VertexId v = 0; v < n; ++v)
  {
    if (in_count[v] == 0 || out_count[v] == 0)
    {
      eligible.insert(v);
    }
  }
  Rational const epsilon(1, static_cast<std::int64_t>(2 * std::max<std::size_t>(n, 1)));
  std::int64_t   counter = 0;
  while (!eligible.empty())
  {
    VertexId const u = *eligible.begin();
    eligible.erase(eligible.begin());
    // A vertex with no remaining edges fits both rules; it repeats the previous one.
    bool const vacuous = out_count[u] == 0 && in_count[u] == 0;
    bool const all_in  = vacuous ? (res.steps.empty() || res.steps.back().all_in_set) : out_count[u] == 0;
    Rational const step = epsilon * counter;
    res.steps.push_back({u, all_in ? step : Rational(1) - step, all_in});
    ++counter;
    res.removed[u] = true;
    for (auto const &inc : g.incident(u))
    {
      VertexId const w = inc.neighbor;
      if (res.removed[w])
      {
        continue;
      }
      auto &c = s.contains(inc.edge) ? in_count : out_count;
      --c[w];
      if (in_count[w] == 0 || out_count[w] == 0)
      {
        eligible.insert(w);
      }
    }
  }
  res.complete = res.steps.size() == n;
  return res;
}

/// Finds an alternating walk inside the unpeeled core, where every vertex has
/// at least one remaining edge in S and one outside S.
///
/// Walks the directed double cover: from unprimed u an S-edge uv leads to v',
/// from primed u' a non-S edge uv leads to v. Following the smallest outgoing
/// arc until a node repeats gives a directed cycle.
inline AlternatingWalk extract_walk(Graph const &g, EdgeSet const &s, std::vector<bool> const &removed)
{
  VertexId start = 0;
  while (start < g.num_vertices() && removed[start])
  {
    ++start;
  }
  if (start == g.num_vertices())
  {
    throw InternalError("walk extraction on an empty core");
  }

  // Node encoding: 2*v for v, 2*v+1 for v'. Start at a primed node so the
  // first step leaves S, matching the parity convention.
  auto next_node = [&](std::size_t node) {
    VertexId const v      = node / 2;
    bool const     primed = (node % 2) == 1;
    for (auto const &inc : g.incident(v))
    {
      if (removed[inc.neighbor])
      {
        continue;
      }
      if (s.contains(inc.edge) != primed)
      {
        return 2 * inc.neighbor + (primed ? 0 : 1);
      }
    }
    throw InternalError("double cover node without outgoing arc");
  };

  std::vector<std::size_t> position(2 * g.num_vertices(), SIZE_MAX);
  std::vector<std::size_t> path;
  std::size_t              node = 2 * start + 1;
  while (position[node] == SIZE_MAX)
  {
    position[node] = path.size();
    path.push_back(node);
    node = next_node(node);
  }
  std::vector<std::size_t> cycle(path.begin() + static_cast<std::ptrdiff_t>(position[node]), path.end());
  // Rotate so the cycle starts at a primed node (first step outside S).
  if (cycle.front() % 2 == 0)
  {
    std::rotate(cycle.begin(), cycle.begin() + 1, cycle.end());
  }
  AlternatingWalk w;
  for (std::size_t c : cycle)
  {
    w.vertices.push_back(c / 2);
  }
  w.vertices.push_back(cycle.front() / 2);
  return normalize_walk(std::move(w));
}

}  // namespace detail

/// Decides whether `s` equals E_p for some prices p, returning prices or an
/// alternating walk as certificate.
///
/// Peeling: while some vertex has all remaining incident edges in S (price
/// i*eps) or all outside S (price 1 - i*eps), remove the smallest such vertex,
/// preferring the in-S rule, and increment i. eps = 1/(2|V|).
inline KeepabilityVerdict decide_keepable(Graph const &g, EdgeSet const &s)
{
  s.require_owner(g);
  auto               peeled = detail::peel(g, s);
  KeepabilityVerdict verdict;
  verdict.elimination_order = peeled.steps;
  if (peeled.complete)
  {
    std::vector<Rational> prices(g.num_vertices());
    for (auto const &step : peeled.steps)
    {
      prices[step.vertex] = step.price;
    }
    verdict.keepable = true;
    verdict.prices   = PriceAssignment(std::move(prices));
    if (edges_from_prices(g, *verdict.prices) != s)
    {
      throw InternalError("peeling prices do not reproduce the edge set");
    }
  }
  else
  {
    verdict.walk = detail::extract_walk(g, s, peeled.removed);
    if (!verify_walk(g, s, *verdict.walk))
    {
      throw InternalError("extracted walk fails verification: " + verify_walk(g, s, *verdict.walk).reason);
    }
  }
  return verdict;
}

/// Keepability test without certificates.
inline bool is_keepable(Graph const &g, EdgeSet const &s)
{
  s.require_owner(g);
  return detail::peel(g, s).complete;
}

/// A total vertex order and subset R such that every edge uv with u before v
/// lies in S exactly when u is in R.
struct OrderWitness
{
  std::vector<VertexId> order;
  VertexSet             in_r;
};

inline bool satisfies_order_witness(Graph const &g, EdgeSet const &s, OrderWitness const &w)
{
  if (w.order.size() != g.num_vertices() || w.in_r.universe_size() != g.num_vertices())
  {
    return false;
  }
  std::vector<std::size_t> rank(g.num_vertices(), SIZE_MAX);
  for (std::size_t i = 0; i < w.order.size(); ++i)
  {
    if (w.order[i] >= g.num_vertices() || rank[w.order[i]] != SIZE_MAX)
    {
      return false;
    }
    rank[w.order[i]] = i;
  }
  for (EdgeId e = 0; e < g.num_edges(); ++e)
  {
    auto const    &ed    = g.edge(e);
    VertexId const lower = rank[ed.u] < rank[ed.v] ? ed.u : ed.v;
    if (s.contains(e) != w.in_r.contains(lower))
    {
      return false;
    }
  }
  return true;
}

/// The peeling order and the set of vertices peeled by the in-S rule, if `s` is keepable.
inline std::optional<OrderWitness> order_witness(Graph const &g, EdgeSet const &s)
{
  s.require_owner(g);
  auto peeled = detail::peel(g, s);
  if (!peeled.complete)
  {
    return std::nullopt;
  }
  OrderWitness w{{}, VertexSet(g.num_vertices())};
  for (auto const &step : peeled.steps)
  {
    w.order.push_back(step.vertex);
    if (step.all_in_set)
    {
      w.in_r.insert(step.vertex);
    }
  }
  return w;
}

/// Groups an order witness into an ordered partition: consecutive runs of
/// R-members become odd groups, runs of non-members even groups.
inline OrderedPartition partition_from_witness(OrderWitness const &w)
{
  OrderedPartition ap;
  for (VertexId v : w.order)
  {
    bool const     odd_group = w.in_r.contains(v);
    std::size_t const needed_parity = odd_group ? 1 : 0;  // 1-based index parity
    if (ap.groups.empty() || (ap.groups.size() % 2) != needed_parity)
    {
      ap.groups.emplace_back();
      if ((ap.groups.size() % 2) != needed_parity)
      {
        ap.groups.emplace_back();
      }
    }
    ap.groups.back().push_back(v);
  }
  if (ap.groups.empty() || ap.groups.size() % 2 != 0)
  {
    ap.groups.emplace_back();
  }
  for (auto &grp : ap.groups)
  {
    std::sort(grp.begin(), grp.end());
  }
  return ap;
}

/// Group index (0-based) of each vertex; throws unless the groups partition V.
inline std::vector<std::size_t> group_index(Graph const &g, OrderedPartition const &ap)
{
  std::vector<std::size_t> index(g.num_vertices(), SIZE_MAX);
  for (std::size_t i = 0; i < ap.groups.size(); ++i)
  {
    for (VertexId v : ap.groups[i])
    {
      if (v >= g.num_vertices())
      {
        throw InvalidArgument("partition mentions unknown vertex id " + std::to_string(v));
      }
      if (index[v] != SIZE_MAX)
      {
        throw InvalidArgument("partition groups overlap at vertex '" + g.label(v) + "'");
      }
      index[v] = i;
    }
  }
  for (VertexId v = 0; v < g.num_vertices(); ++v)
  {
    if (index[v] == SIZE_MAX)
    {
      throw InvalidArgument("partition does not cover vertex '" + g.label(v) + "'");
    }
  }
  return index;
}

/// The keepable set defined by an ordered partition (min group index odd).
inline EdgeSet edges_from_partition(Graph const &g, OrderedPartition const &ap)
{
  auto const index = group_index(g, ap);
  EdgeSet    out   = EdgeSet::none(g);
  for (EdgeId e = 0; e < g.num_edges(); ++e)
  {
    auto const &ed = g.edge(e);
    // 0-based index i is the 1-based index i+1: odd 1-based <=> even 0-based.
    if (std::min(index[ed.u], index[ed.v]) % 2 == 0)
    {
      out.insert(e);
    }
  }
  return out;
}

/// Merges A_{i-1}, A_i, A_{i+1} into A_{i-1} u A_{i+1} for every empty
/// interior group A_i, then pads to an even number of groups.
inline OrderedPartition normalize_partition(OrderedPartition ap)
{
  auto &groups = ap.groups;
  for (bool changed = true; changed;)
  {
    changed = false;
    for (std::size_t i = 1; i + 1 < groups.size(); ++i)
    {
      if (groups[i].empty())
      {
        auto &merged = groups[i - 1];
        merged.insert(merged.end(), groups[i + 1].begin(), groups[i + 1].end());
        std::sort(merged.begin(), merged.end());
        groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(i), groups.begin() + static_cast<std::ptrdiff_t>(i) + 2);
        changed = true;
        break;
      }
    }
  }
  if (groups.size() % 2 != 0)
  {
    groups.emplace_back();
  }
  return ap;
}

/// Brute-force keepability: tries every vertex order and every subset R.
/// Exponential; intended as an independent oracle on tiny graphs.
inline bool keepable_oracle(Graph const &g, EdgeSet const &s, std::size_t vertex_cap = 7)
{
  s.require_owner(g);
  std::size_t const n = g.num_vertices();
  if (n > vertex_cap)
  {
    throw CapExceeded("keepability oracle vertex count", n, vertex_cap);
  }
  std::vector<VertexId> order(n);
  std::iota(order.begin(), order.end(), VertexId{0});
  do
  {
    for (std::uint64_t r = 0; r < (std::uint64_t{1} << n); ++r)
    {
      OrderWitness w{order, VertexSet(n)};
      for (VertexId v = 0; v < n; ++v)
      {
        if ((r >> v) & 1U)
        {
          w.in_r.insert(v);
        }
      }
      if (satisfies_order_witness(g, s, w))
      {
        return true;
      }
    }
  } while (std::next_permutation(order.begin(), order.end()));
  return false;
}

/// Keepability by exhaustive search over peeling orders, memoised on the set
/// of remaining vertices. Independent of the greedy choice in decide_keepable.
inline bool keepable_by_order_search(Graph const &g, EdgeSet const &s, std::size_t vertex_cap = 20)
{
  s.require_owner(g);
  std::size_t const n = g.num_vertices();
  if (n > vertex_cap)
  {
    throw CapExceeded("order search vertex count", n, vertex_cap);
  }
  std::uint64_t const full = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  std::vector<char>   dead(std::size_t{1} << n, 0);

  std::function<bool(std::uint64_t)> can_finish = [&](std::uint64_t remaining) -> bool {
    if (remaining == 0)
    {
      return true;
    }
    if (dead[remaining])
    {
      return false;
    }
    for (VertexId v = 0; v < n; ++v)
    {
      if (((remaining >> v) & 1U) == 0)
      {
        continue;
      }
      bool saw_in = false;
      bool saw_out = false;
      for (auto const &inc : g.incident(v))
      {
        if ((remaining >> inc.neighbor) & 1U)
        {
          (s.contains(inc.edge) ? saw_in : saw_out) = true;
        }
      }
      if (!(saw_in && saw_out) && can_finish(remaining & ~(std::uint64_t{1} << v)))
      {
        return true;
      }
    }
    dead[remaining] = 1;
    return false;
  };
  return can_finish(full);
}

}  // namespace pricematch
