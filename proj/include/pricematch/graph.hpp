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

#include "pricematch/errors.hpp"

#include <boost/rational.hpp>

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace pricematch {

using VertexId = std::size_t;
using EdgeId   = std::size_t;
using Rational = boost::rational<std::int64_t>;

/// Edge sets are single machine words, so a graph holds at most this many edges.
inline constexpr std::size_t kMaxEdges = 64;

namespace detail {

inline std::uint64_t next_graph_token()
{
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1, std::memory_order_relaxed);
}

inline std::uint64_t low_bits(std::size_t n)
{
  return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
}

}  // namespace detail

struct Edge
{
  VertexId u;  // always the smaller id
  VertexId v;

  VertexId other(VertexId w) const
  {
    return w == u ? v : u;
  }

  bool touches(VertexId w) const
  {
    return w == u || w == v;
  }

  friend bool operator==(Edge const &, Edge const &) = default;
};

struct Incidence
{
  VertexId neighbor;
  EdgeId   edge;
};

/// Immutable simple undirected graph with string-labelled vertices.
///
/// Vertex ids are positions in the label list and edge ids positions in the
/// edge list. Every graph carries an identity token; edge sets remember the
/// token of the graph they were built for and refuse to mix with others.
class Graph
{
public:
  Graph()
    : token_(detail::next_graph_token())
  {}

  Graph(std::vector<std::string> labels, std::vector<Edge> edges)
    : token_(detail::next_graph_token())
    , labels_(std::move(labels))
    , adjacency_(labels_.size())
  {
    if (edges.size() > kMaxEdges)
    {
      throw CapExceeded("graph edge count", edges.size(), kMaxEdges);
    }
    for (VertexId v = 0; v < labels_.size(); ++v)
    {
      if (labels_[v].empty())
      {
        throw InvalidArgument("empty vertex label");
      }
      if (!index_.emplace(labels_[v], v).second)
      {
        throw InvalidArgument("duplicate vertex label '" + labels_[v] + "'");
      }
    }
    edges_.reserve(edges.size());
    for (auto e : edges)
    {
      if (e.u >= labels_.size() || e.v >= labels_.size())
      {
        throw InvalidArgument("edge endpoint out of range");
      }
      if (e.u == e.v)
      {
        throw InvalidArgument("self-loop at vertex '" + labels_[e.u] + "'");
      }
      if (e.u > e.v)
      {
        std::swap(e.u, e.v);
      }
      if (find_edge(e.u, e.v))
      {
        throw InvalidArgument("duplicate edge " + labels_[e.u] + "-" + labels_[e.v]);
      }
      EdgeId const id = edges_.size();
      edges_.push_back(e);
      adjacency_[e.u].push_back({e.v, id});
      adjacency_[e.v].push_back({e.u, id});
    }
  }

  std::uint64_t token() const noexcept
  {
    return token_;
  }

  std::size_t num_vertices() const noexcept
  {
    return labels_.size();
  }

  std::size_t num_edges() const noexcept
  {
    return edges_.size();
  }

  std::string const &label(VertexId v) const
  {
    return labels_.at(v);
  }

  std::vector<std::string> const &labels() const noexcept
  {
    return labels_;
  }

  std::optional<VertexId> find_vertex(std::string_view label) const
  {
    auto it = index_.find(std::string(label));
    if (it == index_.end())
    {
      return std::nullopt;
    }
    return it->second;
  }

  VertexId vertex(std::string_view label) const
  {
    auto v = find_vertex(label);
    if (!v)
    {
      throw InvalidArgument("unknown vertex '" + std::string(label) + "'");
    }
    return *v;
  }

  Edge const &edge(EdgeId e) const
  {
    return edges_.at(e);
  }

  std::span<Edge const> edges() const noexcept
  {
    return edges_;
  }

  std::span<Incidence const> incident(VertexId v) const
  {
    return adjacency_.at(v);
  }

  std::size_t degree(VertexId v) const
  {
    return adjacency_.at(v).size();
  }

  std::optional<EdgeId> find_edge(VertexId a, VertexId b) const
  {
    if (a >= adjacency_.size() || b >= adjacency_.size())
    {
      return std::nullopt;
    }
    auto const &shorter = adjacency_[a].size() <= adjacency_[b].size() ? adjacency_[a] : adjacency_[b];
    VertexId const target = adjacency_[a].size() <= adjacency_[b].size() ? b : a;
    for (auto const &inc : shorter)
    {
      if (inc.neighbor == target)
      {
        return inc.edge;
      }
    }
    return std::nullopt;
  }

  std::string edge_name(EdgeId e) const
  {
    auto const &ed = edge(e);
    return labels_[ed.u] + "-" + labels_[ed.v];
  }

  /// Checks that the adjacency lists agree with the edge list.
  bool adjacency_consistent() const
  {
    std::size_t incidences = 0;
    for (VertexId v = 0; v < adjacency_.size(); ++v)
    {
      for (auto const &inc : adjacency_[v])
      {
        if (inc.edge >= edges_.size() || !edges_[inc.edge].touches(v) ||
            edges_[inc.edge].other(v) != inc.neighbor)
        {
          return false;
        }
        ++incidences;
      }
    }
    return incidences == 2 * edges_.size();
  }

  /// Structural equality: same labels in the same order and the same edge list.
  friend bool operator==(Graph const &a, Graph const &b)
  {
    return a.labels_ == b.labels_ && a.edges_ == b.edges_;
  }

private:
  std::uint64_t                             token_;
  std::vector<std::string>                  labels_;
  std::unordered_map<std::string, VertexId> index_;
  std::vector<Edge>                         edges_;
  std::vector<std::vector<Incidence>>       adjacency_;
};

/// Builds a graph edge by edge, assigning vertex ids in first-appearance order.
class GraphBuilder
{
public:
  VertexId add_vertex(std::string const &label)
  {
    auto [it, inserted] = index_.emplace(label, labels_.size());
    if (inserted)
    {
      labels_.push_back(label);
    }
    return it->second;
  }

  void add_edge(std::string const &a, std::string const &b)
  {
    VertexId const u = add_vertex(a);
    VertexId const v = add_vertex(b);
    edges_.push_back({u, v});
  }

  Graph build() const
  {
    return Graph(labels_, edges_);
  }

private:
  std::vector<std::string>                  labels_;
  std::unordered_map<std::string, VertexId> index_;
  std::vector<Edge>                         edges_;
};

/// Subset of a graph's edges, one bit per edge id.
class EdgeSet
{
public:
  EdgeSet() = default;

  EdgeSet(Graph const &g, std::uint64_t bits)
    : owner_(g.token())
    , size_(g.num_edges())
    , bits_(bits)
  {
    if ((bits & ~detail::low_bits(size_)) != 0)
    {
      throw InvalidArgument("edge set has bits beyond the graph's edge count");
    }
  }

  static EdgeSet none(Graph const &g)
  {
    return EdgeSet(g, 0);
  }

  static EdgeSet all(Graph const &g)
  {
    return EdgeSet(g, detail::low_bits(g.num_edges()));
  }

  template <typename Range>
  static EdgeSet of(Graph const &g, Range const &edge_ids)
  {
    EdgeSet s = none(g);
    for (EdgeId e : edge_ids)
    {
      s.insert(e);
    }
    return s;
  }

  static EdgeSet of(Graph const &g, std::initializer_list<EdgeId> edge_ids)
  {
    return of<std::initializer_list<EdgeId>>(g, edge_ids);
  }

  std::uint64_t owner() const noexcept
  {
    return owner_;
  }

  bool owned_by(Graph const &g) const noexcept
  {
    return owner_ == g.token();
  }

  void require_owner(Graph const &g) const
  {
    if (!owned_by(g))
    {
      throw OwnerMismatch();
    }
  }

  std::size_t universe_size() const noexcept
  {
    return size_;
  }

  std::uint64_t bits() const noexcept
  {
    return bits_;
  }

  bool contains(EdgeId e) const
  {
    return e < size_ && ((bits_ >> e) & 1U) != 0;
  }

  void insert(EdgeId e)
  {
    check_index(e);
    bits_ |= std::uint64_t{1} << e;
  }

  void erase(EdgeId e)
  {
    check_index(e);
    bits_ &= ~(std::uint64_t{1} << e);
  }

  std::size_t count() const noexcept
  {
    return static_cast<std::size_t>(std::popcount(bits_));
  }

  bool empty() const noexcept
  {
    return bits_ == 0;
  }

  bool is_subset_of(EdgeSet const &other) const
  {
    same_owner(other);
    return (bits_ & ~other.bits_) == 0;
  }

  EdgeSet complement() const
  {
    EdgeSet r = *this;
    r.bits_   = ~bits_ & detail::low_bits(size_);
    return r;
  }

  std::vector<EdgeId> members() const
  {
    std::vector<EdgeId> out;
    out.reserve(count());
    for (std::uint64_t b = bits_; b != 0; b &= b - 1)
    {
      out.push_back(static_cast<EdgeId>(std::countr_zero(b)));
    }
    return out;
  }

  friend EdgeSet operator|(EdgeSet a, EdgeSet const &b)
  {
    a.same_owner(b);
    a.bits_ |= b.bits_;
    return a;
  }

  friend EdgeSet operator&(EdgeSet a, EdgeSet const &b)
  {
    a.same_owner(b);
    a.bits_ &= b.bits_;
    return a;
  }

  friend EdgeSet operator-(EdgeSet a, EdgeSet const &b)
  {
    a.same_owner(b);
    a.bits_ &= ~b.bits_;
    return a;
  }

  friend EdgeSet operator^(EdgeSet a, EdgeSet const &b)
  {
    a.same_owner(b);
    a.bits_ ^= b.bits_;
    return a;
  }

  friend bool operator==(EdgeSet const &, EdgeSet const &) = default;

private:
  void same_owner(EdgeSet const &other) const
  {
    if (owner_ != other.owner_)
    {
      throw OwnerMismatch();
    }
  }

  void check_index(EdgeId e) const
  {
    if (e >= size_)
    {
      throw InvalidArgument("edge id " + std::to_string(e) + " out of range");
    }
  }

  std::uint64_t owner_ = 0;
  std::size_t   size_  = 0;
  std::uint64_t bits_  = 0;
};

/// Subset of a graph's vertices.
class VertexSet
{
public:
  VertexSet() = default;

  explicit VertexSet(std::size_t universe)
    : member_(universe, false)
  {}

  template <typename Range>
  static VertexSet of(std::size_t universe, Range const &ids)
  {
    VertexSet s(universe);
    for (VertexId v : ids)
    {
      s.insert(v);
    }
    return s;
  }

  static VertexSet of(std::size_t universe, std::initializer_list<VertexId> ids)
  {
    return of<std::initializer_list<VertexId>>(universe, ids);
  }

  std::size_t universe_size() const noexcept
  {
    return member_.size();
  }

  bool contains(VertexId v) const
  {
    return v < member_.size() && member_[v];
  }

  void insert(VertexId v)
  {
    member_.at(v) = true;
  }

  void erase(VertexId v)
  {
    member_.at(v) = false;
  }

  std::size_t count() const
  {
    return static_cast<std::size_t>(std::count(member_.begin(), member_.end(), true));
  }

  std::vector<VertexId> members() const
  {
    std::vector<VertexId> out;
    for (VertexId v = 0; v < member_.size(); ++v)
    {
      if (member_[v])
      {
        out.push_back(v);
      }
    }
    return out;
  }

  friend bool operator==(VertexSet const &, VertexSet const &) = default;

private:
  std::vector<bool> member_;
};

/// A set of pairwise disjoint edges together with the vertices it covers.
class Matching
{
public:
  Matching() = default;

  Matching(Graph const &g, EdgeSet edges)
    : edges_(std::move(edges))
    , covered_(g.num_vertices())
  {
    edges_.require_owner(g);
    for (EdgeId e : edges_.members())
    {
      auto const &ed = g.edge(e);
      if (covered_.contains(ed.u) || covered_.contains(ed.v))
      {
        throw InvalidArgument("edges " + g.edge_name(e) + " and another share an endpoint");
      }
      covered_.insert(ed.u);
      covered_.insert(ed.v);
    }
  }

  EdgeSet const &edges() const noexcept
  {
    return edges_;
  }

  VertexSet const &covered() const noexcept
  {
    return covered_;
  }

  std::size_t size() const noexcept
  {
    return edges_.count();
  }

  friend bool operator==(Matching const &a, Matching const &b)
  {
    return a.edges_ == b.edges_;
  }

private:
  EdgeSet   edges_;
  VertexSet covered_;
};

/// True iff `m` is a matching contained in `allowed` that no edge of `allowed` can extend.
inline bool is_maximal_matching(Graph const &g, EdgeSet const &m, EdgeSet const &allowed)
{
  m.require_owner(g);
  allowed.require_owner(g);
  if (!m.is_subset_of(allowed))
  {
    return false;
  }
  std::vector<bool> covered(g.num_vertices(), false);
  for (EdgeId e : m.members())
  {
    auto const &ed = g.edge(e);
    if (covered[ed.u] || covered[ed.v])
    {
      return false;
    }
    covered[ed.u] = covered[ed.v] = true;
  }
  for (EdgeId e : allowed.members())
  {
    auto const &ed = g.edge(e);
    if (!covered[ed.u] && !covered[ed.v])
    {
      return false;
    }
  }
  return true;
}

/// Exact per-vertex prices, each in [0, 1].
class PriceAssignment
{
public:
  PriceAssignment() = default;

  explicit PriceAssignment(std::vector<Rational> prices)
    : prices_(std::move(prices))
  {
    for (auto const &p : prices_)
    {
      if (p < 0 || p > 1)
      {
        throw InvalidArgument("price " + std::to_string(p.numerator()) + "/" +
                              std::to_string(p.denominator()) + " outside [0, 1]");
      }
    }
  }

  static PriceAssignment uniform(Graph const &g, Rational value)
  {
    return PriceAssignment(std::vector<Rational>(g.num_vertices(), value));
  }

  std::size_t size() const noexcept
  {
    return prices_.size();
  }

  Rational const &operator[](VertexId v) const
  {
    return prices_.at(v);
  }

  std::vector<Rational> const &values() const noexcept
  {
    return prices_;
  }

  friend bool operator==(PriceAssignment const &, PriceAssignment const &) = default;

private:
  std::vector<Rational> prices_;
};

/// Parses the edge-list text format: one edge per line as two whitespace
/// separated vertex labels; blank lines and '#' comment lines are skipped.
inline Graph parse_graph(std::string_view text)
{
  GraphBuilder               builder;
  std::istringstream         in{std::string(text)};
  std::string                line;
  std::size_t                line_no = 0;
  std::unordered_map<std::string, std::size_t> pair_line;
  std::size_t                edges = 0;

  while (std::getline(in, line))
  {
    ++line_no;
    if (!line.empty() && line.back() == '\r')
    {
      line.pop_back();
    }
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#')
    {
      continue;
    }
    std::istringstream       fields(line);
    std::vector<std::string> tokens;
    for (std::string tok; fields >> tok;)
    {
      tokens.push_back(tok);
    }
    if (tokens.size() != 2)
    {
      throw ParseError(line_no, "expected two vertex tokens, found " + std::to_string(tokens.size()));
    }
    if (tokens[0] == tokens[1])
    {
      throw ParseError(line_no, "self-loop at vertex '" + tokens[0] + "'");
    }
    auto key = tokens[0] < tokens[1] ? tokens[0] + '\0' + tokens[1] : tokens[1] + '\0' + tokens[0];
    auto [it, fresh] = pair_line.emplace(key, line_no);
    if (!fresh)
    {
      throw ParseError(line_no, "duplicate edge " + tokens[0] + "-" + tokens[1] +
                                    " (first seen at line " + std::to_string(it->second) + ")");
    }
    if (++edges > kMaxEdges)
    {
      throw ParseError(line_no, "more than " + std::to_string(kMaxEdges) + " edges");
    }
    builder.add_edge(tokens[0], tokens[1]);
  }
  return builder.build();
}

/// Canonical edge-list text: edges in id order, smaller vertex id first.
inline std::string serialize_graph(Graph const &g)
{
  std::string out;
  for (auto const &e : g.edges())
  {
    out += g.label(e.u);
    out += ' ';
    out += g.label(e.v);
    out += '\n';
  }
  return out;
}

/// A graph restricted to a subset of its edges, with the map back to the parent.
struct Restriction
{
  Graph               graph;
  std::vector<EdgeId> parent_edge;  // child edge id -> parent edge id

  EdgeSet lift(Graph const &parent, EdgeSet const &child_set) const
  {
    child_set.require_owner(graph);
    EdgeSet out = EdgeSet::none(parent);
    for (EdgeId e : child_set.members())
    {
      out.insert(parent_edge[e]);
    }
    return out;
  }
};

/// The graph on the same vertices with only the edges of `s`.
inline Restriction restrict(Graph const &g, EdgeSet const &s)
{
  s.require_owner(g);
  std::vector<Edge>   kept;
  std::vector<EdgeId> parent;
  for (EdgeId e : s.members())
  {
    kept.push_back(g.edge(e));
    parent.push_back(e);
  }
  return Restriction{Graph(g.labels(), std::move(kept)), std::move(parent)};
}

/// The edges whose endpoint prices sum to at most one.
inline EdgeSet edges_from_prices(Graph const &g, PriceAssignment const &p)
{
  if (p.size() != g.num_vertices())
  {
    throw InvalidArgument("price assignment covers " + std::to_string(p.size()) + " of " +
                          std::to_string(g.num_vertices()) + " vertices");
  }
  EdgeSet out = EdgeSet::none(g);
  for (EdgeId e = 0; e < g.num_edges(); ++e)
  {
    auto const &ed = g.edge(e);
    if (p[ed.u] + p[ed.v] <= 1)
    {
      out.insert(e);
    }
  }
  return out;
}

/// Parses "u-v" into an edge id of `g`.
inline std::optional<EdgeId> find_edge_token(Graph const &g, std::string_view token)
{
  for (std::size_t dash = token.find('-'); dash != std::string_view::npos;
       dash = token.find('-', dash + 1))
  {
    auto a = g.find_vertex(token.substr(0, dash));
    auto b = g.find_vertex(token.substr(dash + 1));
    if (a && b)
    {
      if (auto e = g.find_edge(*a, *b))
      {
        return e;
      }
    }
  }
  return std::nullopt;
}

}  // namespace pricematch
