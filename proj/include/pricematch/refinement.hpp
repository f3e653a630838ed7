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

#include "pricematch/keepability.hpp"
#include "pricematch/matching.hpp"

#include <functional>
#include <string>
#include <vector>

namespace pricematch {

enum class EdgeLabel : std::uint8_t
{
  Evicted,
  TemporarilyKept,
  DefinitelyKept
};

inline char const *to_string(EdgeLabel l)
{
  switch (l)
  {
  case EdgeLabel::Evicted:
    return "evicted";
  case EdgeLabel::TemporarilyKept:
    return "temporarily_kept";
  case EdgeLabel::DefinitelyKept:
    return "definitely_kept";
  }
  return "?";
}

/// Edge labels plus an ordered partition that explains them.
///
/// Once the first refinement is done, an edge uv with group indices j <= k
/// (1-based) is Evicted if j is even, TemporarilyKept if j is odd and
/// k = j + 1, DefinitelyKept otherwise. Before it, the partition is (V) and
/// every edge is TemporarilyKept.
struct RefinementState
{
  std::uint64_t          owner = 0;
  std::vector<EdgeLabel> labels;
  OrderedPartition       partition;
  std::vector<VertexSet> history;
  bool                   first_refinement_done = false;

  static RefinementState fresh(Graph const &g)
  {
    RefinementState st;
    st.owner  = g.token();
    st.labels.assign(g.num_edges(), EdgeLabel::TemporarilyKept);
    std::vector<VertexId> all(g.num_vertices());
    std::iota(all.begin(), all.end(), VertexId{0});
    st.partition.groups = {all, {}};
    return st;
  }

  void require_owner(Graph const &g) const
  {
    if (owner != g.token() || labels.size() != g.num_edges())
    {
      throw OwnerMismatch();
    }
  }
};

namespace detail {

inline EdgeLabel label_for_indices(std::size_t a, std::size_t b)
{
  // 0-based indices: 1-based j odd <=> 0-based j even.
  std::size_t const j = std::min(a, b);
  std::size_t const k = std::max(a, b);
  if (j % 2 == 1)
  {
    return EdgeLabel::Evicted;
  }
  return k == j + 1 ? EdgeLabel::TemporarilyKept : EdgeLabel::DefinitelyKept;
}

inline std::vector<EdgeLabel> labels_from_partition(Graph const &g, OrderedPartition const &ap)
{
  auto const             index = group_index(g, ap);
  std::vector<EdgeLabel> out(g.num_edges());
  for (EdgeId e = 0; e < g.num_edges(); ++e)
  {
    out[e] = label_for_indices(index[g.edge(e).u], index[g.edge(e).v]);
  }
  return out;
}

/// Drops empty groups wherever doing so leaves every edge label unchanged.
///
/// Merging around an empty interior group keeps the induced edge set but can
/// turn a definitely-kept edge into a temporarily-kept one, so each merge is
/// checked against the labels before it is accepted.
inline OrderedPartition compact_partition(Graph const &g, OrderedPartition ap, std::vector<EdgeLabel> const &labels)
{
  auto &groups = ap.groups;
  while (groups.size() > 2 && groups[0].empty() && groups[1].empty())
  {
    groups.erase(groups.begin(), groups.begin() + 2);
  }
  while (groups.size() > 2 && groups.back().empty() && groups[groups.size() - 2].empty())
  {
    groups.resize(groups.size() - 2);
  }
  for (std::size_t i = 1; i + 1 < groups.size();)
  {
    if (!groups[i].empty())
    {
      ++i;
      continue;
    }
    OrderedPartition candidate;
    candidate.groups.assign(groups.begin(), groups.begin() + static_cast<std::ptrdiff_t>(i) - 1);
    auto merged = groups[i - 1];
    merged.insert(merged.end(), groups[i + 1].begin(), groups[i + 1].end());
    std::sort(merged.begin(), merged.end());
    candidate.groups.push_back(std::move(merged));
    candidate.groups.insert(candidate.groups.end(), groups.begin() + static_cast<std::ptrdiff_t>(i) + 2, groups.end());
    if (labels_from_partition(g, candidate) == labels)
    {
      groups = std::move(candidate.groups);
      i      = 1;
    }
    else
    {
      ++i;
    }
  }
  if (groups.size() % 2 != 0)
  {
    groups.emplace_back();
  }
  return ap;
}

}  // namespace detail

/// True iff the state's labels agree with its partition (or it is fresh).
inline bool refinement_consistent(Graph const &g, RefinementState const &st)
{
  st.require_owner(g);
  if (!st.first_refinement_done)
  {
    return std::all_of(st.labels.begin(), st.labels.end(), [](EdgeLabel l) { return l == EdgeLabel::TemporarilyKept; });
  }
  return detail::labels_from_partition(g, st.partition) == st.labels;
}

/// Temporarily and definitely kept edges.
inline EdgeSet kept_set(Graph const &g, RefinementState const &st)
{
  st.require_owner(g);
  EdgeSet out = EdgeSet::none(g);
  for (EdgeId e = 0; e < st.labels.size(); ++e)
  {
    if (st.labels[e] != EdgeLabel::Evicted)
    {
      out.insert(e);
    }
  }
  return out;
}

/// Refines by vertex set `b`: temporarily kept edges inside `b` are evicted,
/// those disjoint from `b` become definitely kept, all others keep their
/// label. Each group pair (A_2i-1, A_2i) becomes
/// (A_2i-1 \ B, A_2i n B, A_2i-1 n B, A_2i \ B).
inline RefinementState refine(Graph const &g, RefinementState const &st, VertexSet const &b)
{
  st.require_owner(g);
  if (b.universe_size() != g.num_vertices())
  {
    throw InvalidArgument("refinement set is over " + std::to_string(b.universe_size()) + " vertices, graph has " +
                          std::to_string(g.num_vertices()));
  }
  RefinementState next = st;
  for (EdgeId e = 0; e < g.num_edges(); ++e)
  {
    if (st.labels[e] != EdgeLabel::TemporarilyKept)
    {
      continue;
    }
    bool const in_u = b.contains(g.edge(e).u);
    bool const in_v = b.contains(g.edge(e).v);
    if (in_u && in_v)
    {
      next.labels[e] = EdgeLabel::Evicted;
    }
    else if (!in_u && !in_v)
    {
      next.labels[e] = EdgeLabel::DefinitelyKept;
    }
  }

  auto split = [&](std::vector<VertexId> const &grp, bool want_in) {
    std::vector<VertexId> out;
    for (VertexId v : grp)
    {
      if (b.contains(v) == want_in)
      {
        out.push_back(v);
      }
    }
    return out;
  };

  OrderedPartition refined;
  if (!st.first_refinement_done)
  {
    std::vector<VertexId> all(g.num_vertices());
    std::iota(all.begin(), all.end(), VertexId{0});
    refined.groups = {split(all, false), split(all, true)};
  }
  else
  {
    auto const &groups = st.partition.groups;
    for (std::size_t i = 0; i + 1 < groups.size(); i += 2)
    {
      refined.groups.push_back(split(groups[i], false));
      refined.groups.push_back(split(groups[i + 1], true));
      refined.groups.push_back(split(groups[i], true));
      refined.groups.push_back(split(groups[i + 1], false));
    }
  }
  next.partition             = detail::compact_partition(g, std::move(refined), next.labels);
  next.first_refinement_done = true;
  next.history.push_back(b);
  if (!refinement_consistent(g, next))
  {
    throw InternalError("refined partition disagrees with edge labels");
  }
  return next;
}

/// Number of edges whose label differs between two states of the same graph.
inline std::size_t labels_changed(RefinementState const &before, RefinementState const &after)
{
  std::size_t changed = 0;
  for (std::size_t e = 0; e < before.labels.size() && e < after.labels.size(); ++e)
  {
    changed += before.labels[e] != after.labels[e] ? 1 : 0;
  }
  return changed;
}

/// Refinement sets that, replayed on a fresh state, yield the partition's
/// edge set. Pads to a power-of-two number of groups and halves repeatedly:
/// C_1..C_L comes from refining A_2i-1 = C_4i-3 u C_4i-1, A_2i = C_4i-2 u C_4i
/// by B = union of C_4i-2 u C_4i-1.
inline std::vector<VertexSet> partition_to_refinements(Graph const &g, OrderedPartition const &ap)
{
  group_index(g, ap);  // validates
  std::size_t const n = g.num_vertices();
  auto              groups = ap.groups;
  if (groups.size() <= 1)
  {
    return {};
  }
  std::size_t width = 2;
  while (width < groups.size())
  {
    width *= 2;
  }
  groups.resize(width);

  auto unite = [](std::vector<VertexId> a, std::vector<VertexId> const &b) {
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    return a;
  };

  std::vector<VertexSet> sequence;
  while (groups.size() > 2)
  {
    VertexSet                          b(n);
    std::vector<std::vector<VertexId>> coarse;
    for (std::size_t i = 0; i < groups.size(); i += 4)
    {
      for (VertexId v : groups[i + 1])
      {
        b.insert(v);
      }
      for (VertexId v : groups[i + 2])
      {
        b.insert(v);
      }
      coarse.push_back(unite(groups[i], groups[i + 2]));
      coarse.push_back(unite(groups[i + 1], groups[i + 3]));
    }
    sequence.push_back(std::move(b));
    groups = std::move(coarse);
  }
  sequence.push_back(VertexSet::of(n, groups[1]));
  std::reverse(sequence.begin(), sequence.end());
  return sequence;
}

/// Replays refinement sets from a fresh state.
inline RefinementState replay_refinements(Graph const &g, std::vector<VertexSet> const &sets)
{
  auto st = RefinementState::fresh(g);
  for (auto const &b : sets)
  {
    st = refine(g, st, b);
  }
  return st;
}

// ---------------------------------------------------------------------------
// Symmetric differences of matchings
// ---------------------------------------------------------------------------

/// One connected component of M xor M*: a path or an even cycle.
struct DifferenceComponent
{
  std::vector<VertexId> vertices;  // in traversal order; for a cycle the start is not repeated
  std::vector<EdgeId>   edges;
  bool                  cycle = false;
};

inline std::vector<DifferenceComponent> symmetric_difference_components(Graph const &g, EdgeSet const &m,
                                                                        EdgeSet const &other)
{
  EdgeSet const                    diff = m ^ other;
  std::vector<std::vector<Incidence>> adj(g.num_vertices());
  for (EdgeId e : diff.members())
  {
    auto const &ed = g.edge(e);
    adj[ed.u].push_back({ed.v, e});
    adj[ed.v].push_back({ed.u, e});
  }
  std::vector<bool>                visited(g.num_vertices(), false);
  std::vector<DifferenceComponent> out;

  // Vertices of M xor M* have degree at most two, so following the edge we
  // did not arrive by traces the whole component.
  auto trace = [&](VertexId start, bool cycle) {
    DifferenceComponent comp;
    comp.cycle   = cycle;
    VertexId cur = start;
    EdgeId   via = SIZE_MAX;
    for (;;)
    {
      visited[cur] = true;
      comp.vertices.push_back(cur);
      auto next = std::find_if(adj[cur].begin(), adj[cur].end(), [&](Incidence const &inc) { return inc.edge != via; });
      if (next == adj[cur].end())
      {
        return comp;
      }
      comp.edges.push_back(next->edge);
      via = next->edge;
      if (next->neighbor == start)
      {
        return comp;
      }
      cur = next->neighbor;
    }
  };

  for (VertexId v = 0; v < g.num_vertices(); ++v)
  {
    if (!visited[v] && adj[v].size() == 1)
    {
      out.push_back(trace(v, false));
    }
  }
  for (VertexId v = 0; v < g.num_vertices(); ++v)
  {
    if (!visited[v] && adj[v].size() == 2)
    {
      out.push_back(trace(v, true));
    }
  }
  return out;
}

/// A path x-u-v-y whose middle edge is in `m` and whose outer edges are in `mstar`.
inline bool is_three_path(DifferenceComponent const &c, EdgeSet const &m, EdgeSet const &mstar)
{
  return !c.cycle && c.edges.size() == 3 && mstar.contains(c.edges[0]) && m.contains(c.edges[1]) &&
         mstar.contains(c.edges[2]);
}

// ---------------------------------------------------------------------------
// Pricing algorithms
// ---------------------------------------------------------------------------

struct RunReport
{
  std::size_t                    iterations = 0;
  std::vector<std::size_t>       minmax_trajectory;
  std::size_t                    final_minmax = 0;
  std::size_t                    max_matching = 0;
  Rational                       ratio;
  std::optional<PriceAssignment> prices;
  std::vector<VertexSet>         refinement_sets;
};

struct PricingRun
{
  RefinementState state;
  RunReport       report;
  Matching        max_matching;
};

/// Refinement algorithm for the 1/2 + 2/n lower bound.
///
/// Fix a maximum matching M*. Repeatedly compute a minmax matching M of the
/// kept graph; stop once |M| > |M*|/2; otherwise refine by the vertices
/// covered by M (the inner vertices of the 3-edge paths making up M xor M*).
/// Finally synthesize prices for the kept set.
inline PricingRun lower_bound_pricing(Graph const &g, SolverLimits const &limits = {})
{
  if (g.num_edges() == 0)
  {
    throw InvalidArgument("graph has no edges");
  }
  PricingRun run{RefinementState::fresh(g), {}, maximum_matching(g)};
  EdgeSet const &mstar = run.max_matching.edges();
  run.report.max_matching = mstar.count();

  for (;;)
  {
    EdgeSet const kept = kept_set(g, run.state);
    if (!mstar.is_subset_of(kept))
    {
      throw InternalError("maximum matching edge was evicted");
    }
    Matching const m = minmax_matching_within(g, kept, limits);
    run.report.minmax_trajectory.push_back(m.size());
    if (2 * m.size() > mstar.count())
    {
      break;
    }

    VertexSet inner(g.num_vertices());
    for (auto const &comp : symmetric_difference_components(g, m.edges(), mstar))
    {
      if (!is_three_path(comp, m.edges(), mstar))
      {
        throw InternalError("M xor M* has a component that is not a 3-edge path");
      }
      inner.insert(comp.vertices[1]);
      inner.insert(comp.vertices[2]);
    }
    if (!(inner == m.covered()))
    {
      throw InternalError("inner path vertices differ from the vertices covered by M");
    }
    if (run.report.iterations >= g.num_edges())
    {
      throw InternalError("refinement algorithm exceeded its iteration bound");
    }
    run.state = refine(g, run.state, m.covered());
    run.report.refinement_sets.push_back(m.covered());
    ++run.report.iterations;
    for (EdgeId e = 0; e < g.num_edges(); ++e)
    {
      if (run.state.labels[e] == EdgeLabel::DefinitelyKept)
      {
        throw InternalError("edge became definitely kept during the refinement algorithm");
      }
    }
  }

  EdgeSet const kept    = kept_set(g, run.state);
  auto          verdict = decide_keepable(g, kept);
  if (!verdict.keepable)
  {
    throw InternalError("refined edge set is not keepable");
  }
  run.report.final_minmax = run.report.minmax_trajectory.back();
  run.report.ratio        = Rational(static_cast<std::int64_t>(run.report.final_minmax),
                              static_cast<std::int64_t>(run.report.max_matching));
  run.report.prices       = std::move(verdict.prices);
  return run;
}

/// Supplies the minmax matching used in each round: (graph, kept set, round) -> matching edges.
using MinmaxChooser = std::function<EdgeSet(Graph const &, EdgeSet const &, std::size_t)>;

inline MinmaxChooser deterministic_chooser(SolverLimits limits = {})
{
  return [limits](Graph const &g, EdgeSet const &kept, std::size_t) {
    return minmax_matching_within(g, kept, limits).edges();
  };
}

/// Returns the given matchings in order, then falls back to the deterministic solver.
inline MinmaxChooser injected_chooser(std::vector<EdgeSet> matchings, SolverLimits limits = {})
{
  return [matchings = std::move(matchings), limits](Graph const &g, EdgeSet const &kept, std::size_t round) {
    if (round < matchings.size())
    {
      return matchings[round];
    }
    return minmax_matching_within(g, kept, limits).edges();
  };
}

/// Keeps refining by the inner vertices of every 3-edge path of M xor M*,
/// ignoring longer components, until no path is left or a refinement changes
/// no label.
inline PricingRun extended_refinement(Graph const &g, MinmaxChooser const &chooser = deterministic_chooser(),
                                      SolverLimits const &limits = {})
{
  PricingRun     run{RefinementState::fresh(g), {}, maximum_matching(g)};
  EdgeSet const &mstar    = run.max_matching.edges();
  run.report.max_matching = mstar.count();

  for (std::size_t round = 0;; ++round)
  {
    EdgeSet const kept = kept_set(g, run.state);
    if (!mstar.is_subset_of(kept))
    {
      throw InternalError("maximum matching edge was evicted");
    }
    EdgeSet const chosen = chooser(g, kept, round);
    chosen.require_owner(g);
    if (!is_maximal_matching(g, chosen, kept))
    {
      throw InvalidArgument("round " + std::to_string(round) + ": chosen edges are not a maximal matching of the kept graph");
    }
    if (chosen.count() != minmax_size_within(g, kept, limits))
    {
      throw InvalidArgument("round " + std::to_string(round) + ": chosen matching is not a minimum maximal matching");
    }
    run.report.minmax_trajectory.push_back(chosen.count());

    VertexSet inner(g.num_vertices());
    bool      any_path = false;
    for (auto const &comp : symmetric_difference_components(g, chosen, mstar))
    {
      if (is_three_path(comp, chosen, mstar))
      {
        inner.insert(comp.vertices[1]);
        inner.insert(comp.vertices[2]);
        any_path = true;
      }
    }
    if (!any_path)
    {
      break;
    }
    RefinementState next    = refine(g, run.state, inner);
    std::size_t     changed = labels_changed(run.state, next);
    run.state               = std::move(next);
    run.report.refinement_sets.push_back(inner);
    ++run.report.iterations;
    if (changed == 0)
    {
      break;
    }
  }

  EdgeSet const kept      = kept_set(g, run.state);
  run.report.final_minmax = minmax_size_within(g, kept, limits);
  run.report.ratio        = Rational(static_cast<std::int64_t>(run.report.final_minmax),
                              static_cast<std::int64_t>(std::max<std::size_t>(run.report.max_matching, 1)));
  auto verdict            = decide_keepable(g, kept);
  if (!verdict.keepable)
  {
    throw InternalError("refined edge set is not keepable");
  }
  run.report.prices = std::move(verdict.prices);
  return run;
}

}  // namespace pricematch
