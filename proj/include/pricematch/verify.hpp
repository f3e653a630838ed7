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

#include "pricematch/fixtures.hpp"
#include "pricematch/keepability.hpp"
#include "pricematch/matching.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace pricematch {

// ---------------------------------------------------------------------------
// Worker pool
// ---------------------------------------------------------------------------

inline std::size_t default_worker_count()
{
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Splits [0, total) into `workers` contiguous ranges and runs
/// `body(worker, begin, end)` on each in its own thread.
inline void parallel_ranges(std::uint64_t total, std::size_t workers,
                            std::function<void(std::size_t, std::uint64_t, std::uint64_t)> const &body)
{
  workers = std::max<std::size_t>(1, std::min<std::uint64_t>(workers, std::max<std::uint64_t>(total, 1)));
  if (workers == 1)
  {
    body(0, 0, total);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
    {
      std::uint64_t const begin = total * w / workers;
      std::uint64_t const end   = total * (w + 1) / workers;
      pool.emplace_back([&, w, begin, end] {
        try
        {
          body(w, begin, end);
        }
        catch (...)
        {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto const &e : errors)
  {
    if (e)
    {
      std::rethrow_exception(e);
    }
  }
}

// ---------------------------------------------------------------------------
// Competitive ratio by exhaustive search
// ---------------------------------------------------------------------------

struct RatioCertificate
{
  std::string   graph_name;
  std::size_t   max_matching         = 0;
  std::size_t   best_keepable_minmax = 0;
  Rational      ratio;
  EdgeSet       witness_set;
  std::uint64_t subsets_examined = 0;
  std::uint64_t keepable_subsets = 0;
};

struct RatioOptions
{
  std::size_t  workers  = 1;
  std::size_t  edge_cap = 20;
  SolverLimits limits;
};

/// Best minmax size over all keepable S, divided by the maximum matching size.
///
/// Subsets are visited in Gray-code order inside each worker's index range.
/// Among subsets achieving the best value the smallest bit mask is the
/// witness, so the certificate does not depend on the worker count.
inline RatioCertificate competitive_ratio_exact(Graph const &g, RatioOptions const &options = {},
                                                std::string graph_name = {})
{
  if (g.num_edges() > options.edge_cap)
  {
    throw CapExceeded("competitive ratio edge count", g.num_edges(), options.edge_cap);
  }
  std::uint64_t const total = std::uint64_t{1} << g.num_edges();

  struct Local
  {
    std::size_t   best      = 0;
    std::uint64_t witness   = 0;
    std::uint64_t examined  = 0;
    std::uint64_t keepable  = 0;
  };
  std::vector<Local> locals(std::max<std::size_t>(1, options.workers));

  parallel_ranges(total, options.workers, [&](std::size_t w, std::uint64_t begin, std::uint64_t end) {
    Local local;
    local.witness = UINT64_MAX;
    for (std::uint64_t k = begin; k < end; ++k)
    {
      std::uint64_t const mask = k ^ (k >> 1);
      ++local.examined;
      EdgeSet const s(g, mask);
      if (!is_keepable(g, s))
      {
        continue;
      }
      ++local.keepable;
      auto const restricted = restrict(g, s);
      // minmax <= maximum matching, so subsets that cannot reach the incumbent are skipped.
      if (maximum_matching(restricted.graph).size() < local.best)
      {
        continue;
      }
      std::size_t const value = minmax_size(restricted.graph, options.limits);
      if (value > local.best || (value == local.best && mask < local.witness))
      {
        local.best    = value;
        local.witness = mask;
      }
    }
    locals[w] = local;
  });

  RatioCertificate cert;
  cert.graph_name       = std::move(graph_name);
  cert.max_matching     = maximum_matching(g).size();
  std::uint64_t witness = UINT64_MAX;
  for (auto const &l : locals)
  {
    cert.subsets_examined += l.examined;
    cert.keepable_subsets += l.keepable;
    if (l.examined == 0)
    {
      continue;
    }
    if (l.best > cert.best_keepable_minmax || (l.best == cert.best_keepable_minmax && l.witness < witness))
    {
      cert.best_keepable_minmax = l.best;
      witness                   = l.witness;
    }
  }
  cert.witness_set = EdgeSet(g, witness == UINT64_MAX ? 0 : witness);
  cert.ratio = cert.max_matching == 0
                   ? Rational(1)
                   : Rational(static_cast<std::int64_t>(cert.best_keepable_minmax),
                              static_cast<std::int64_t>(cert.max_matching));
  return cert;
}

/// Re-derives the witness value from scratch; true iff the certificate holds up.
inline bool validate_certificate(Graph const &g, RatioCertificate const &cert, SolverLimits const &limits = {})
{
  if (!cert.witness_set.owned_by(g) || !decide_keepable(g, cert.witness_set).keepable)
  {
    return false;
  }
  if (minmax_size_within(g, cert.witness_set, limits) != cert.best_keepable_minmax)
  {
    return false;
  }
  if (maximum_matching(g).size() != cert.max_matching || cert.max_matching == 0)
  {
    return cert.max_matching == 0;
  }
  return cert.ratio == Rational(static_cast<std::int64_t>(cert.best_keepable_minmax),
                                static_cast<std::int64_t>(cert.max_matching));
}

/// Exhaustive proof that the Petersen graph has competitive ratio 3/5: every
/// keepable edge subset induces a minmax matching of size at most 3.
/// The witness set belongs to `g`, which must be structurally the bundled Petersen graph.
inline RatioCertificate verify_petersen(Graph const &g, std::size_t workers = 1)
{
  if (!(g == bundled_graph("petersen")))
  {
    throw InvalidArgument("graph is not the bundled Petersen graph");
  }
  RatioOptions options;
  options.workers = workers;
  return competitive_ratio_exact(g, options, "petersen");
}

inline RatioCertificate verify_petersen(std::size_t workers = 1)
{
  return verify_petersen(bundled_graph("petersen"), workers);
}

inline bool petersen_certified(RatioCertificate const &cert)
{
  return cert.max_matching == 5 && cert.best_keepable_minmax == 3 && cert.ratio == Rational(3, 5) &&
         cert.subsets_examined == 32768;
}

// ---------------------------------------------------------------------------
// Even cycles
// ---------------------------------------------------------------------------

struct EvenCycle
{
  std::vector<VertexId> vertices;  // v_0 .. v_{k-1}, closing edge v_{k-1} v_0
  std::vector<EdgeId>   edges;     // edges[i] joins vertices[i] and vertices[i+1 mod k]
  std::vector<EdgeId>   class_a;   // edges at even positions
  std::vector<EdgeId>   class_b;   // edges at odd positions
};

/// All simple cycles of even length. Each cycle starts at its smallest vertex
/// and runs in the direction whose second vertex is smaller than its last.
inline std::vector<EvenCycle> enumerate_even_cycles(Graph const &g, std::size_t vertex_cap = 16)
{
  if (g.num_vertices() > vertex_cap)
  {
    throw CapExceeded("even cycle enumeration vertex count", g.num_vertices(), vertex_cap);
  }
  std::vector<EvenCycle> out;
  std::vector<VertexId>  path;
  std::vector<EdgeId>    path_edges;
  std::vector<bool>      on_path(g.num_vertices(), false);

  std::function<void(VertexId)> extend = [&](VertexId start) {
    VertexId const cur = path.back();
    for (auto const &inc : g.incident(cur))
    {
      VertexId const w = inc.neighbor;
      if (w == start && path.size() >= 3 && path[1] < path.back() && path.size() % 2 == 0)
      {
        EvenCycle c;
        c.vertices = path;
        c.edges    = path_edges;
        c.edges.push_back(inc.edge);
        for (std::size_t i = 0; i < c.edges.size(); ++i)
        {
          (i % 2 == 0 ? c.class_a : c.class_b).push_back(c.edges[i]);
        }
        out.push_back(std::move(c));
      }
      else if (w > start && !on_path[w])
      {
        on_path[w] = true;
        path.push_back(w);
        path_edges.push_back(inc.edge);
        extend(start);
        path_edges.pop_back();
        path.pop_back();
        on_path[w] = false;
      }
    }
  };

  for (VertexId s = 0; s < g.num_vertices(); ++s)
  {
    path       = {s};
    on_path[s] = true;
    extend(s);
    on_path[s] = false;
  }
  std::sort(out.begin(), out.end(), [](EvenCycle const &a, EvenCycle const &b) {
    if (a.vertices.size() != b.vertices.size())
    {
      return a.vertices.size() < b.vertices.size();
    }
    return a.vertices < b.vertices;
  });
  return out;
}

// ---------------------------------------------------------------------------
// 0-1 integer program
// ---------------------------------------------------------------------------

enum class VariableKind : std::uint8_t
{
  Edge,          // x_e: e is kept
  LargeMatching, // y_M: matching M of the target size is kept
  SmallMatching  // z_M: matching M one short of the target is kept
};

enum class Sense : std::uint8_t
{
  LessEqual,
  GreaterEqual
};

enum class RowFamily : std::uint8_t
{
  Cycle,
  Cover,
  LargeMatching,
  SmallMatchingUpper,
  SmallMatchingExtend
};

struct IPVariable
{
  std::string  name;
  VariableKind kind;
};

struct IPTerm
{
  std::size_t  var;
  std::int64_t coef;
};

struct IPConstraint
{
  RowFamily           family;
  std::vector<IPTerm> terms;
  Sense               sense;
  std::int64_t        bound;
};

/// Binary program that is feasible iff some edge set with no alternating even
/// cycle contains a matching of size `target` and every matching of size
/// `target - 1` in it extends.
struct IPModel
{
  std::size_t               target = 0;
  std::vector<IPVariable>   variables;
  std::vector<IPConstraint> constraints;
  std::vector<EdgeSet>      large_matchings;  // y_k <-> large_matchings[k]
  std::vector<EdgeSet>      small_matchings;  // z_k <-> small_matchings[k]
  std::size_t               cycles = 0;

  std::size_t num_vars() const
  {
    return variables.size();
  }

  std::size_t num_constraints() const
  {
    return constraints.size();
  }

  std::size_t count(VariableKind kind) const
  {
    return static_cast<std::size_t>(
        std::count_if(variables.begin(), variables.end(), [&](IPVariable const &v) { return v.kind == kind; }));
  }

  std::size_t count(RowFamily family) const
  {
    return static_cast<std::size_t>(
        std::count_if(constraints.begin(), constraints.end(), [&](IPConstraint const &c) { return c.family == family; }));
  }

  bool well_formed() const
  {
    for (auto const &c : constraints)
    {
      for (auto const &t : c.terms)
      {
        if (t.var >= variables.size())
        {
          return false;
        }
      }
    }
    return large_matchings.size() == count(VariableKind::LargeMatching) &&
           small_matchings.size() == count(VariableKind::SmallMatching);
  }
};

inline IPModel emit_ip_model(Graph const &g, std::size_t target, SolverLimits const &limits = {})
{
  if (target == 0)
  {
    throw InvalidArgument("target must be at least 1");
  }
  if (g.num_edges() > limits.enumeration_edge_cap)
  {
    throw CapExceeded("IP model matching enumeration edge count", g.num_edges(), limits.enumeration_edge_cap);
  }
  IPModel model;
  model.target = target;
  auto const t = static_cast<std::int64_t>(target);

  for (EdgeId e = 0; e < g.num_edges(); ++e)
  {
    model.variables.push_back({"x_" + std::to_string(e), VariableKind::Edge});
  }

  auto const cycles = enumerate_even_cycles(g);
  model.cycles      = cycles.size();
  for (auto const &c : cycles)
  {
    std::vector<IPTerm> terms;
    for (EdgeId e : c.class_a)
    {
      terms.push_back({e, 1});
    }
    for (EdgeId e : c.class_b)
    {
      terms.push_back({e, -1});
    }
    auto const k = static_cast<std::int64_t>(c.class_a.size());
    model.constraints.push_back({RowFamily::Cycle, terms, Sense::GreaterEqual, 1 - k});
    model.constraints.push_back({RowFamily::Cycle, terms, Sense::LessEqual, k - 1});
  }

  model.large_matchings = matchings_of_size(g, target);
  model.small_matchings = matchings_of_size(g, target - 1);

  std::vector<IPTerm> cover;
  for (std::size_t k = 0; k < model.large_matchings.size(); ++k)
  {
    std::size_t const y = model.variables.size();
    model.variables.push_back({"y_" + std::to_string(k), VariableKind::LargeMatching});
    cover.push_back({y, 1});
  }
  model.constraints.push_back({RowFamily::Cover, cover, Sense::GreaterEqual, 1});

  for (std::size_t k = 0; k < model.large_matchings.size(); ++k)
  {
    std::vector<IPTerm> terms;
    for (EdgeId e : model.large_matchings[k].members())
    {
      terms.push_back({e, 1});
    }
    terms.push_back({g.num_edges() + k, -t});
    model.constraints.push_back({RowFamily::LargeMatching, terms, Sense::GreaterEqual, 0});
  }

  for (std::size_t k = 0; k < model.small_matchings.size(); ++k)
  {
    std::size_t const z = model.variables.size();
    model.variables.push_back({"z_" + std::to_string(k), VariableKind::SmallMatching});
    EdgeSet const &m = model.small_matchings[k];

    std::vector<IPTerm> upper;
    for (EdgeId e : m.members())
    {
      upper.push_back({e, 1});
    }
    upper.push_back({z, -1});
    model.constraints.push_back({RowFamily::SmallMatchingUpper, upper, Sense::LessEqual, t - 2});

    std::vector<bool> covered(g.num_vertices(), false);
    for (EdgeId e : m.members())
    {
      covered[g.edge(e).u] = covered[g.edge(e).v] = true;
    }
    std::vector<IPTerm> extend;
    for (EdgeId e = 0; e < g.num_edges(); ++e)
    {
      if (!m.contains(e) && !covered[g.edge(e).u] && !covered[g.edge(e).v])
      {
        extend.push_back({e, 1});
      }
    }
    extend.push_back({z, -1});
    model.constraints.push_back({RowFamily::SmallMatchingExtend, extend, Sense::GreaterEqual, 0});
  }
  return model;
}

/// CPLEX-style LP text: objective (constant 0), constraints c1..cN, bounds, binaries.
inline std::string to_lp_string(IPModel const &model)
{
  std::ostringstream out;
  out << "\\ keepable edge set whose minmax matching has at least " << model.target << " edges\n";
  out << "Minimize\n obj: 0 " << (model.variables.empty() ? "x_0" : model.variables.front().name) << "\n";
  out << "Subject To\n";
  for (std::size_t r = 0; r < model.constraints.size(); ++r)
  {
    auto const &c = model.constraints[r];
    out << " c" << (r + 1) << ":";
    if (c.terms.empty())
    {
      out << " 0 " << model.variables.front().name;
    }
    for (std::size_t i = 0; i < c.terms.size(); ++i)
    {
      auto const  &term = c.terms[i];
      std::int64_t mag  = term.coef < 0 ? -term.coef : term.coef;
      out << ' ' << (term.coef < 0 ? '-' : '+') << ' ';
      if (mag != 1)
      {
        out << mag << ' ';
      }
      out << model.variables[term.var].name;
    }
    out << (c.sense == Sense::LessEqual ? " <= " : " >= ") << c.bound << "\n";
  }
  out << "Bounds\n";
  for (auto const &v : model.variables)
  {
    out << " 0 <= " << v.name << " <= 1\n";
  }
  out << "Binary\n";
  for (auto const &v : model.variables)
  {
    out << ' ' << v.name << "\n";
  }
  out << "End\n";
  return out.str();
}

}  // namespace pricematch
