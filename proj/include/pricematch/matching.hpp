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

#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

namespace pricematch {

/// Size caps for the exponential solvers. Exceeding one raises CapExceeded.
struct SolverLimits
{
  std::size_t minmax_edge_cap      = 40;
  std::size_t enumeration_edge_cap = 25;
};

// ---------------------------------------------------------------------------
// Maximum matching (Edmonds' blossom algorithm)
// ---------------------------------------------------------------------------

namespace detail {

class BlossomMatcher
{
public:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  explicit BlossomMatcher(Graph const &g)
    : g_(g)
    , n_(g.num_vertices())
    , mate_(n_, kNone)
    , parent_(n_)
    , base_(n_)
    , in_tree_(n_)
    , in_blossom_(n_)
  {}

  std::vector<std::size_t> const &run()
  {
    for (VertexId root = 0; root < n_; ++root)
    {
      if (mate_[root] == kNone)
      {
        std::size_t const end = find_augmenting_path(root);
        if (end != kNone)
        {
          augment(end);
        }
      }
    }
    return mate_;
  }

private:
  std::size_t lowest_common_base(std::size_t a, std::size_t b)
  {
    std::vector<bool> seen(n_, false);
    for (;;)
    {
      a       = base_[a];
      seen[a] = true;
      if (mate_[a] == kNone)
      {
        break;
      }
      a = parent_[mate_[a]];
    }
    for (;;)
    {
      b = base_[b];
      if (seen[b])
      {
        return b;
      }
      b = parent_[mate_[b]];
    }
  }

  void mark_path(std::size_t v, std::size_t b, std::size_t child)
  {
    while (base_[v] != b)
    {
      in_blossom_[base_[v]] = in_blossom_[base_[mate_[v]]] = true;
      parent_[v]                                          = child;
      child                                               = mate_[v];
      v                                                   = parent_[mate_[v]];
    }
  }

  std::size_t find_augmenting_path(std::size_t root)
  {
    std::fill(in_tree_.begin(), in_tree_.end(), false);
    std::fill(parent_.begin(), parent_.end(), kNone);
    std::iota(base_.begin(), base_.end(), std::size_t{0});

    std::deque<std::size_t> queue{root};
    in_tree_[root] = true;
    while (!queue.empty())
    {
      std::size_t const v = queue.front();
      queue.pop_front();
      for (auto const &inc : g_.incident(v))
      {
        std::size_t const to = inc.neighbor;
        if (base_[v] == base_[to] || mate_[v] == to)
        {
          continue;
        }
        if (to == root || (mate_[to] != kNone && parent_[mate_[to]] != kNone))
        {
          std::size_t const cur = lowest_common_base(v, to);
          std::fill(in_blossom_.begin(), in_blossom_.end(), false);
          mark_path(v, cur, to);
          mark_path(to, cur, v);
          for (std::size_t i = 0; i < n_; ++i)
          {
            if (in_blossom_[base_[i]])
            {
              base_[i] = cur;
              if (!in_tree_[i])
              {
                in_tree_[i] = true;
                queue.push_back(i);
              }
            }
          }
        }
        else if (parent_[to] == kNone)
        {
          parent_[to] = v;
          if (mate_[to] == kNone)
          {
            return to;
          }
          in_tree_[mate_[to]] = true;
          queue.push_back(mate_[to]);
        }
      }
    }
    return kNone;
  }

  void augment(std::size_t v)
  {
    while (v != kNone)
    {
      std::size_t const pv  = parent_[v];
      std::size_t const ppv = mate_[pv];
      mate_[v]              = pv;
      mate_[pv]             = v;
      v                     = ppv;
    }
  }

  Graph const             &g_;
  std::size_t              n_;
  std::vector<std::size_t> mate_;
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> base_;
  std::vector<bool>        in_tree_;
  std::vector<bool>        in_blossom_;
};

}  // namespace detail

/// Maximum-cardinality matching of a general graph. Free vertices are used as
/// search roots in increasing id order, so the result is deterministic.
inline Matching maximum_matching(Graph const &g)
{
  detail::BlossomMatcher matcher(g);
  auto const            &mate = matcher.run();
  EdgeSet                edges = EdgeSet::none(g);
  for (VertexId v = 0; v < mate.size(); ++v)
  {
    if (mate[v] != detail::BlossomMatcher::kNone && v < mate[v])
    {
      edges.insert(*g.find_edge(v, mate[v]));
    }
  }
  return Matching(g, edges);
}

/// Maximum matching size of the subgraph (V, s).
inline std::size_t maximum_matching_size(Graph const &g, EdgeSet const &s)
{
  return maximum_matching(restrict(g, s).graph).size();
}

/// Greedy maximal matching over `allowed`, scanning edges in id order.
inline EdgeSet greedy_maximal_matching(Graph const &g, EdgeSet const &allowed)
{
  allowed.require_owner(g);
  std::vector<bool> covered(g.num_vertices(), false);
  EdgeSet           out = EdgeSet::none(g);
  for (EdgeId e : allowed.members())
  {
    auto const &ed = g.edge(e);
    if (!covered[ed.u] && !covered[ed.v])
    {
      covered[ed.u] = covered[ed.v] = true;
      out.insert(e);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Minimum maximal (minmax) matching
// ---------------------------------------------------------------------------

namespace detail {

/// Branch and bound over vertices for the minmax size.
///
/// Every free vertex with an undominated incident edge is either matched or
/// left unmatched for good ("forbidden"); a forbidden vertex forces all its
/// undominated neighbours to be matched.
class MinmaxSizeSearch
{
public:
  enum class Status : std::uint8_t
  {
    Free,
    Matched,
    Forbidden
  };

  MinmaxSizeSearch(Graph const &g, std::size_t incumbent, EdgeSet incumbent_set, std::size_t floor)
    : g_(g)
    , status_(g.num_vertices(), Status::Free)
    , best_(incumbent)
    , best_set_(std::move(incumbent_set))
    , current_(EdgeSet::none(g))
    , floor_(floor)
  {}

  std::size_t solve()
  {
    if (best_ > floor_)
    {
      search(0);
    }
    return best_;
  }

  EdgeSet const &best_set() const
  {
    return best_set_;
  }

private:
  bool undominated(Edge const &e) const
  {
    return status_[e.u] != Status::Matched && status_[e.v] != Status::Matched;
  }

  std::size_t lower_bound() const
  {
    std::vector<bool> used(g_.num_vertices(), false);
    std::size_t       m = 0;
    for (auto const &e : g_.edges())
    {
      if (undominated(e) && !used[e.u] && !used[e.v])
      {
        used[e.u] = used[e.v] = true;
        ++m;
      }
    }
    return (m + 1) / 2;
  }

  void search(std::size_t size)
  {
    if (done_ || size + lower_bound() >= best_)
    {
      return;
    }
    // Pick the branching vertex: forced vertices first, then fewest residual edges.
    VertexId    pick        = kNoVertex;
    bool        pick_forced = false;
    std::size_t pick_deg    = std::numeric_limits<std::size_t>::max();
    for (VertexId v = 0; v < g_.num_vertices(); ++v)
    {
      if (status_[v] != Status::Free)
      {
        continue;
      }
      bool        has_undominated = false;
      bool        forced          = false;
      std::size_t residual        = 0;
      for (auto const &inc : g_.incident(v))
      {
        Status const s = status_[inc.neighbor];
        if (s == Status::Matched)
        {
          continue;
        }
        has_undominated = true;
        if (s == Status::Forbidden)
        {
          forced = true;
        }
        else
        {
          ++residual;
        }
      }
      if (!has_undominated)
      {
        continue;
      }
      if (forced && residual == 0)
      {
        return;
      }
      if ((forced && !pick_forced) || (forced == pick_forced && residual < pick_deg))
      {
        pick        = v;
        pick_forced = forced;
        pick_deg    = residual;
      }
    }
    if (pick == kNoVertex)
    {
      // No free vertex sees an undominated edge, and forbidding never leaves
      // an edge between two forbidden vertices, so everything is dominated.
      best_     = size;
      best_set_ = current_;
      if (best_ <= floor_)
      {
        done_ = true;
      }
      return;
    }

    status_[pick] = Status::Matched;
    for (auto const &inc : g_.incident(pick))
    {
      if (status_[inc.neighbor] != Status::Free)
      {
        continue;
      }
      status_[inc.neighbor] = Status::Matched;
      current_.insert(inc.edge);
      search(size + 1);
      current_.erase(inc.edge);
      status_[inc.neighbor] = Status::Free;
      if (done_)
      {
        break;
      }
    }
    status_[pick] = Status::Free;

    if (!pick_forced && !done_)
    {
      for (auto const &inc : g_.incident(pick))
      {
        if (status_[inc.neighbor] == Status::Forbidden)
        {
          return;
        }
      }
      status_[pick] = Status::Forbidden;
      search(size);
      status_[pick] = Status::Free;
    }
  }

  static constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();

  Graph const        &g_;
  std::vector<Status> status_;
  std::size_t         best_;
  EdgeSet             best_set_;
  EdgeSet             current_;
  std::size_t         floor_;
  bool                done_ = false;
};

/// Include-first depth-first search over edge ids for the first maximal
/// matching of exactly `target` edges; include-first order makes it the
/// lexicographically smallest such edge-id set.
class LexFirstMaximalMatching
{
public:
  LexFirstMaximalMatching(Graph const &g, std::size_t target)
    : g_(g)
    , target_(target)
    , covered_(g.num_vertices(), false)
    , current_(EdgeSet::none(g))
  {}

  std::optional<EdgeSet> run()
  {
    if (search(0, 0))
    {
      return current_;
    }
    return std::nullopt;
  }

private:
  bool feasible(EdgeId next, std::size_t size) const
  {
    std::vector<bool> used(g_.num_vertices(), false);
    std::size_t       m = 0;
    for (EdgeId e = 0; e < g_.num_edges(); ++e)
    {
      auto const &ed = g_.edge(e);
      if (covered_[ed.u] || covered_[ed.v])
      {
        continue;
      }
      if (e < next)
      {
        // Excluded and undominated: some later edge must cover an endpoint.
        bool rescuable = false;
        for (VertexId w : {ed.u, ed.v})
        {
          for (auto const &inc : g_.incident(w))
          {
            if (inc.edge >= next && !covered_[inc.neighbor])
            {
              rescuable = true;
              break;
            }
          }
          if (rescuable)
          {
            break;
          }
        }
        if (!rescuable)
        {
          return false;
        }
      }
      if (!used[ed.u] && !used[ed.v])
      {
        used[ed.u] = used[ed.v] = true;
        ++m;
      }
    }
    return size + (m + 1) / 2 <= target_;
  }

  bool search(EdgeId e, std::size_t size)
  {
    if (size > target_ || !feasible(e, size))
    {
      return false;
    }
    if (e == g_.num_edges())
    {
      return size == target_;
    }
    auto const &ed = g_.edge(e);
    if (!covered_[ed.u] && !covered_[ed.v])
    {
      covered_[ed.u] = covered_[ed.v] = true;
      current_.insert(e);
      if (search(e + 1, size + 1))
      {
        return true;
      }
      current_.erase(e);
      covered_[ed.u] = covered_[ed.v] = false;
    }
    return search(e + 1, size);
  }

  Graph const      &g_;
  std::size_t       target_;
  std::vector<bool> covered_;
  EdgeSet           current_;
};

inline void require_cap(char const *what, std::size_t edges, std::size_t cap)
{
  if (edges > cap)
  {
    throw CapExceeded(what, edges, cap);
  }
}

}  // namespace detail

/// Size of a minimum maximal matching, by exact branch and bound.
inline std::size_t minmax_size(Graph const &g, SolverLimits const &limits = {})
{
  detail::require_cap("minmax matching edge count", g.num_edges(), limits.minmax_edge_cap);
  EdgeSet const     greedy = greedy_maximal_matching(g, EdgeSet::all(g));
  std::size_t const nu     = maximum_matching(g).size();
  detail::MinmaxSizeSearch search(g, greedy.count(), greedy, (nu + 1) / 2);
  return search.solve();
}

/// A minimum maximal matching; among all optimal ones, the lexicographically
/// smallest sorted edge-id list.
inline Matching minmax_matching(Graph const &g, SolverLimits const &limits = {})
{
  std::size_t const k   = minmax_size(g, limits);
  auto const        set = detail::LexFirstMaximalMatching(g, k).run();
  if (!set)
  {
    throw InternalError("no maximal matching of the optimal size " + std::to_string(k));
  }
  return Matching(g, *set);
}

/// Minmax matching of the subgraph (V, s), expressed in `g`'s edge ids.
inline Matching minmax_matching_within(Graph const &g, EdgeSet const &s, SolverLimits const &limits = {})
{
  auto const restricted = restrict(g, s);
  auto const m          = minmax_matching(restricted.graph, limits);
  return Matching(g, restricted.lift(g, m.edges()));
}

inline std::size_t minmax_size_within(Graph const &g, EdgeSet const &s, SolverLimits const &limits = {})
{
  return minmax_size(restrict(g, s).graph, limits);
}

// ---------------------------------------------------------------------------
// Enumeration (test oracles and model generation)
// ---------------------------------------------------------------------------

/// Calls `visit` once for every maximal matching of `g`. Returns the count.
inline std::size_t for_each_maximal_matching(Graph const &g, std::function<void(EdgeSet const &)> const &visit,
                                             SolverLimits const &limits = {})
{
  detail::require_cap("maximal matching enumeration edge count", g.num_edges(), limits.enumeration_edge_cap);
  std::size_t       count = 0;
  std::vector<bool> covered(g.num_vertices(), false);
  EdgeSet           current = EdgeSet::none(g);

  // Excluded edge ids whose endpoints are both still uncovered.
  auto rescuable = [&](EdgeId excluded, EdgeId next) {
    auto const &ed = g.edge(excluded);
    for (VertexId w : {ed.u, ed.v})
    {
      for (auto const &inc : g.incident(w))
      {
        if (inc.edge >= next && !covered[inc.neighbor])
        {
          return true;
        }
      }
    }
    return false;
  };

  std::function<void(EdgeId)> recurse = [&](EdgeId e) {
    if (e == g.num_edges())
    {
      if (is_maximal_matching(g, current, EdgeSet::all(g)))
      {
        ++count;
        visit(current);
      }
      return;
    }
    auto const &ed = g.edge(e);
    if (!covered[ed.u] && !covered[ed.v])
    {
      covered[ed.u] = covered[ed.v] = true;
      current.insert(e);
      recurse(e + 1);
      current.erase(e);
      covered[ed.u] = covered[ed.v] = false;
      if (rescuable(e, e + 1))
      {
        recurse(e + 1);
      }
      return;
    }
    recurse(e + 1);
  };
  recurse(0);
  return count;
}

inline std::vector<Matching> enumerate_maximal_matchings(Graph const &g, SolverLimits const &limits = {})
{
  std::vector<Matching> out;
  for_each_maximal_matching(g, [&](EdgeSet const &s) { out.emplace_back(g, s); }, limits);
  return out;
}

/// Every matching with exactly `size` edges, in lexicographic edge-id order.
inline std::vector<EdgeSet> matchings_of_size(Graph const &g, std::size_t size)
{
  std::vector<EdgeSet> out;
  std::vector<bool>    covered(g.num_vertices(), false);
  EdgeSet              current = EdgeSet::none(g);

  std::function<void(EdgeId, std::size_t)> recurse = [&](EdgeId from, std::size_t remaining) {
    if (remaining == 0)
    {
      out.push_back(current);
      return;
    }
    for (EdgeId e = from; e + remaining <= g.num_edges(); ++e)
    {
      auto const &ed = g.edge(e);
      if (covered[ed.u] || covered[ed.v])
      {
        continue;
      }
      covered[ed.u] = covered[ed.v] = true;
      current.insert(e);
      recurse(e + 1, remaining - 1);
      current.erase(e);
      covered[ed.u] = covered[ed.v] = false;
    }
  };
  recurse(0, size);
  return out;
}

// ---------------------------------------------------------------------------
// Buyer arrivals
// ---------------------------------------------------------------------------

/// The order in which buyers (edges) arrive: a permutation of the edge ids.
class ArrivalOrder
{
public:
  ArrivalOrder() = default;

  ArrivalOrder(Graph const &g, std::vector<EdgeId> sequence)
    : sequence_(std::move(sequence))
  {
    if (sequence_.size() != g.num_edges())
    {
      throw InvalidArgument("arrival order has " + std::to_string(sequence_.size()) + " entries, graph has " +
                            std::to_string(g.num_edges()) + " edges");
    }
    std::vector<bool> seen(g.num_edges(), false);
    for (EdgeId e : sequence_)
    {
      if (e >= g.num_edges() || seen[e])
      {
        throw InvalidArgument("arrival order is not a permutation of the edge ids");
      }
      seen[e] = true;
    }
  }

  static ArrivalOrder identity(Graph const &g)
  {
    std::vector<EdgeId> seq(g.num_edges());
    std::iota(seq.begin(), seq.end(), EdgeId{0});
    return ArrivalOrder(g, std::move(seq));
  }

  std::vector<EdgeId> const &sequence() const noexcept
  {
    return sequence_;
  }

private:
  std::vector<EdgeId> sequence_;
};

struct ArrivalStep
{
  EdgeId buyer;
  bool   affordable;
  bool   transacted;
};

struct ArrivalOutcome
{
  Matching                 matching;
  std::vector<EdgeId>      transactions;  // in transaction order
  std::vector<ArrivalStep> trace;
};

/// Buyers arrive in `order`; buyer uv buys iff p(u)+p(v) <= 1 and both items are unsold.
inline ArrivalOutcome simulate_arrivals(Graph const &g, PriceAssignment const &p, ArrivalOrder const &order)
{
  EdgeSet const     affordable = edges_from_prices(g, p);
  std::vector<bool> sold(g.num_vertices(), false);
  ArrivalOutcome    out;
  EdgeSet           bought = EdgeSet::none(g);
  for (EdgeId e : order.sequence())
  {
    auto const &ed   = g.edge(e);
    bool const  buys = affordable.contains(e) && !sold[ed.u] && !sold[ed.v];
    if (buys)
    {
      sold[ed.u] = sold[ed.v] = true;
      bought.insert(e);
      out.transactions.push_back(e);
    }
    out.trace.push_back({e, affordable.contains(e), buys});
  }
  out.matching = Matching(g, bought);
  return out;
}

struct AdversarialRun
{
  ArrivalOrder   order;
  ArrivalOutcome outcome;
};

/// The worst arrival order for `p`: a minmax matching of G_p arrives first.
inline AdversarialRun adversarial_order(Graph const &g, PriceAssignment const &p, SolverLimits const &limits = {})
{
  EdgeSet const  affordable = edges_from_prices(g, p);
  Matching const worst      = minmax_matching_within(g, affordable, limits);

  std::vector<EdgeId> seq = worst.edges().members();
  for (EdgeId e = 0; e < g.num_edges(); ++e)
  {
    if (!worst.edges().contains(e))
    {
      seq.push_back(e);
    }
  }
  ArrivalOrder order(g, std::move(seq));
  auto         outcome = simulate_arrivals(g, p, order);
  if (outcome.matching.edges() != worst.edges())
  {
    throw InternalError("adversarial order did not reproduce the minmax matching");
  }
  return {std::move(order), std::move(outcome)};
}

}  // namespace pricematch
