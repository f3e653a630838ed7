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

#include "cli.hpp"

#include "pricematch/json_io.hpp"
#include "pricematch/pricematch.hpp"
#include "pricematch/random_graphs.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace pricematch::cli {
namespace {

using nlohmann::json;
namespace jio = pricematch::json_io;

struct GlobalOptions
{
  std::size_t   workers     = default_worker_count();
  std::size_t   edge_cap    = SolverLimits{}.minmax_edge_cap;
  int           json_indent = 2;
  std::uint64_t seed        = 1;

  SolverLimits limits() const
  {
    SolverLimits l;
    l.minmax_edge_cap = edge_cap;
    return l;
  }
};

/// Raised for a completed command whose verdict is negative (exit 1).
struct NegativeVerdict
{
  json payload;
};

std::string read_file(std::string const &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw InvalidArgument("cannot read '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Graph load_graph(std::string const &spec)
{
  if (!spec.empty() && spec.front() == '@')
  {
    return bundled_graph(spec.substr(1));
  }
  try
  {
    return parse_graph(read_file(spec));
  }
  catch (ParseError const &e)
  {
    throw InvalidArgument(spec + ": " + e.what());
  }
}

json load_json(std::string const &path)
{
  try
  {
    return json::parse(read_file(path));
  }
  catch (json::parse_error const &e)
  {
    throw InvalidArgument(path + ": invalid JSON: " + e.what());
  }
}

EdgeSet parse_edge_tokens(Graph const &g, std::vector<std::string> const &tokens)
{
  EdgeSet s = EdgeSet::none(g);
  for (auto const &tok : tokens)
  {
    if (tok == "@all")
    {
      s = s | EdgeSet::all(g);
    }
    else if (tok == "@none")
    {
      continue;
    }
    else if (auto e = find_edge_token(g, tok))
    {
      s.insert(*e);
    }
    else
    {
      throw InvalidArgument("unknown edge '" + tok + "'");
    }
  }
  return s;
}

VertexSet parse_vertex_list(Graph const &g, std::string const &list)
{
  VertexSet         b(g.num_vertices());
  std::stringstream in(list);
  for (std::string tok; std::getline(in, tok, ',');)
  {
    if (!tok.empty())
    {
      b.insert(g.vertex(tok));
    }
  }
  return b;
}

json matching_json(Graph const &g, Matching const &m)
{
  return {{"size", m.size()}, {"matching", jio::edge_set_to_json(g, m.edges())}};
}

// ----- subcommands ---------------------------------------------------------

json cmd_keepable(std::string const &graph_path, std::vector<std::string> const &set_spec)
{
  Graph const g       = load_graph(graph_path);
  EdgeSet const s     = parse_edge_tokens(g, set_spec);
  auto const verdict  = decide_keepable(g, s);
  json payload        = jio::verdict_to_json(g, verdict);
  payload["edge_set"] = jio::edge_set_to_json(g, s);
  if (auto w = order_witness(g, s))
  {
    payload["partition"] = jio::partition_to_json(g, partition_from_witness(*w));
  }
  if (!verdict.keepable)
  {
    throw NegativeVerdict{payload};
  }
  return payload;
}

json cmd_price(std::string const &graph_path, GlobalOptions const &opts)
{
  Graph const g   = load_graph(graph_path);
  auto const  run = lower_bound_pricing(g, opts.limits());
  return jio::report_to_json(g, run.report);
}

json cmd_verify_petersen(GlobalOptions const &opts)
{
  Graph const g    = bundled_graph("petersen");
  auto const cert  = verify_petersen(g, opts.workers);
  json payload     = jio::certificate_to_json(g, cert);
  payload["certified"] = petersen_certified(cert) && validate_certificate(g, cert);
  if (!payload["certified"].get<bool>())
  {
    throw NegativeVerdict{payload};
  }
  return payload;
}

json cmd_simulate(std::string const &graph_path, std::string const &prices_path, std::string const &order_spec,
                  GlobalOptions const &opts)
{
  Graph const           g = load_graph(graph_path);
  PriceAssignment const p = jio::prices_from_json(g, load_json(prices_path));
  ArrivalOrder          order;
  ArrivalOutcome        outcome;
  if (order_spec == "@adversarial")
  {
    auto run = adversarial_order(g, p, opts.limits());
    order    = std::move(run.order);
    outcome  = std::move(run.outcome);
  }
  else
  {
    order   = order_spec == "@id" ? ArrivalOrder::identity(g) : jio::order_from_json(g, load_json(order_spec));
    outcome = simulate_arrivals(g, p, order);
  }
  return {{"order", jio::order_to_json(order)},
          {"affordable", jio::edge_set_to_json(g, edges_from_prices(g, p))},
          {"trace", jio::trace_to_json(g, outcome)},
          {"matching", jio::edge_set_to_json(g, outcome.matching.edges())},
          {"size", outcome.matching.size()}};
}

json cmd_ratio(std::string const &graph_path, GlobalOptions const &opts)
{
  Graph const  g = load_graph(graph_path);
  RatioOptions ro;
  ro.workers = opts.workers;
  ro.limits  = opts.limits();
  auto const cert = competitive_ratio_exact(g, ro, graph_path);
  return jio::certificate_to_json(g, cert);
}

json cmd_minmax(std::string const &graph_path, GlobalOptions const &opts)
{
  Graph const g      = load_graph(graph_path);
  auto const  m      = minmax_matching(g, opts.limits());
  auto const  nu     = maximum_matching(g).size();
  json        out    = matching_json(g, m);
  out["max_matching"] = nu;
  out["minmax_ratio"] = jio::rational_to_json(nu == 0 ? Rational(1) : Rational(static_cast<std::int64_t>(m.size()),
                                                                               static_cast<std::int64_t>(nu)));
  return out;
}

json cmd_maxmatch(std::string const &graph_path)
{
  Graph const g = load_graph(graph_path);
  return matching_json(g, maximum_matching(g));
}

json cmd_emit_ip(std::string const &graph_path, std::size_t target, std::string const &output, bool print_lp,
                 std::ostream &out)
{
  Graph const g     = load_graph(graph_path);
  auto const  model = emit_ip_model(g, target);
  std::string const lp = to_lp_string(model);
  if (!output.empty())
  {
    std::ofstream file(output, std::ios::binary);
    if (!file)
    {
      throw InvalidArgument("cannot write '" + output + "'");
    }
    file << lp;
  }
  if (print_lp)
  {
    out << lp;
    return nullptr;
  }
  return {{"target", target},
          {"num_vars", model.num_vars()},
          {"num_constraints", model.num_constraints()},
          {"x_vars", model.count(VariableKind::Edge)},
          {"y_vars", model.count(VariableKind::LargeMatching)},
          {"z_vars", model.count(VariableKind::SmallMatching)},
          {"even_cycles", model.cycles},
          {"cycle_rows", model.count(RowFamily::Cycle)},
          {"cover_rows", model.count(RowFamily::Cover)},
          {"y_rows", model.count(RowFamily::LargeMatching)},
          {"z_rows", model.count(RowFamily::SmallMatchingUpper) + model.count(RowFamily::SmallMatchingExtend)},
          {"lp_file", output.empty() ? json(nullptr) : json(output)}};
}

json cmd_refine(std::string const &graph_path, std::vector<std::string> const &sets, std::string const &partition_path)
{
  Graph const            g = load_graph(graph_path);
  std::vector<VertexSet> sequence;
  if (!partition_path.empty())
  {
    sequence = partition_to_refinements(g, jio::partition_from_json(g, load_json(partition_path)));
  }
  for (auto const &s : sets)
  {
    sequence.push_back(parse_vertex_list(g, s));
  }
  auto const st      = replay_refinements(g, sequence);
  json       payload = jio::state_to_json(g, st);
  json       applied = json::array();
  for (auto const &b : sequence)
  {
    applied.push_back(jio::vertex_set_to_json(g, b));
  }
  payload["refinement_sets"] = applied;
  auto const verdict         = decide_keepable(g, kept_set(g, st));
  payload["keepable"]        = verdict.keepable;
  if (verdict.prices)
  {
    payload["prices"] = jio::prices_to_json(g, *verdict.prices);
  }
  return payload;
}

json cmd_extended_refine(std::string const &graph_path, std::string const &matchings_path, GlobalOptions const &opts)
{
  Graph const   g       = load_graph(graph_path);
  MinmaxChooser chooser = deterministic_chooser(opts.limits());
  if (!matchings_path.empty())
  {
    json const j = load_json(matchings_path);
    if (!j.is_array())
    {
      throw InvalidArgument("matchings file must be an array of arrays of \"u-v\" edge tokens");
    }
    std::vector<EdgeSet> injected;
    for (auto const &m : j)
    {
      injected.push_back(parse_edge_tokens(g, m.get<std::vector<std::string>>()));
    }
    chooser = injected_chooser(std::move(injected), opts.limits());
  }
  auto const run     = extended_refinement(g, chooser, opts.limits());
  json       payload = jio::report_to_json(g, run.report);
  payload["state"]   = jio::state_to_json(g, run.state);
  return payload;
}

json cmd_fixtures(std::string const &write_dir)
{
  json list = json::array();
  for (auto const &f : kFixtures)
  {
    Graph const g = bundled_graph(f.name);
    json        entry{{"name", f.name},
               {"description", f.description},
               {"vertices", g.num_vertices()},
               {"edges", g.num_edges()}};
    if (!write_dir.empty())
    {
      std::filesystem::create_directories(write_dir);
      auto const    path = std::filesystem::path(write_dir) / (std::string(f.name) + ".txt");
      std::ofstream file(path, std::ios::binary);
      if (!file)
      {
        throw InvalidArgument("cannot write '" + path.string() + "'");
      }
      file << serialize_graph(g);
      entry["path"] = path.string();
    }
    list.push_back(entry);
  }
  return {{"fixtures", list}};
}

json cmd_selftest(std::size_t cases, GlobalOptions const &opts)
{
  std::mt19937_64 rng(opts.seed);
  std::size_t     failures = 0;
  json            failed   = json::array();
  for (std::size_t c = 0; c < cases; ++c)
  {
    std::size_t const n = std::uniform_int_distribution<std::size_t>(2, 8)(rng);
    Graph const       g = random_connected_graph(rng, n, 0.3, 16);
    EdgeSet const     s(g, std::uniform_int_distribution<std::uint64_t>(0, (std::uint64_t{1} << g.num_edges()) - 1)(rng));

    std::vector<std::string> problems;
    auto const               verdict = decide_keepable(g, s);
    if (verdict.keepable && edges_from_prices(g, *verdict.prices) != s)
    {
      problems.emplace_back("prices do not reproduce the edge set");
    }
    if (!verdict.keepable && !verify_walk(g, s, *verdict.walk))
    {
      problems.emplace_back("walk certificate rejected");
    }
    if (verdict.keepable != decide_keepable(g, s.complement()).keepable)
    {
      problems.emplace_back("complement symmetry broken");
    }
    if (verdict.keepable != keepable_by_order_search(g, s))
    {
      problems.emplace_back("order search disagrees");
    }
    auto const run = lower_bound_pricing(g, opts.limits());
    if (2 * run.report.final_minmax <= run.report.max_matching ||
        edges_from_prices(g, *run.report.prices) != kept_set(g, run.state))
    {
      problems.emplace_back("lower-bound pricing guarantee failed");
    }
    if (!problems.empty())
    {
      ++failures;
      failed.push_back({{"case", c}, {"graph", serialize_graph(g)}, {"set", jio::edge_set_to_json(g, s)},
                        {"problems", problems}});
    }
  }
  json payload{{"seed", opts.seed}, {"cases", cases}, {"failures", failures}, {"failed", failed}};
  if (failures != 0)
  {
    throw NegativeVerdict{payload};
  }
  return payload;
}

}  // namespace

int run(std::vector<std::string> const &args, std::ostream &out, std::ostream &err)
{
  GlobalOptions opts;
  CLI::App      app{"Price-induced minmax matchings: keepability, pricing and certification", "pricematch"};
  app.require_subcommand(1);
  app.fallthrough();
  app.option_defaults()->always_capture_default();
  app.add_option("--workers", opts.workers, "worker threads for exhaustive search")
      ->envname("PRICEMATCH_WORKERS")
      ->check(CLI::PositiveNumber);
  app.add_option("--edge-cap", opts.edge_cap, "edge cap of the exact minmax solver")->envname("PRICEMATCH_EDGE_CAP");
  app.add_option("--json-indent", opts.json_indent, "JSON indentation (-1 for compact)")
      ->envname("PRICEMATCH_JSON_INDENT");
  app.add_option("--seed", opts.seed, "seed for selftest")->envname("PRICEMATCH_SEED");

  std::string              graph_path;
  std::string              prices_path;
  std::string              order_spec;
  std::vector<std::string> set_spec;
  std::vector<std::string> refine_sets;
  std::string              partition_path;
  std::string              matchings_path;
  std::string              output_path;
  std::string              write_dir;
  std::size_t              target       = 4;
  bool                     print_lp     = false;
  std::size_t              selftest_n   = 50;

  auto *keepable = app.add_subcommand("keepable", "decide whether an edge set is price-induced");
  keepable->add_option("graph", graph_path, "edge-list file or @fixture")->required();
  keepable->add_option("edges", set_spec, "edges as u-v tokens, @all or @none")->required();

  auto *price = app.add_subcommand("price", "run the refinement pricing algorithm");
  price->add_option("graph", graph_path)->required();

  auto *petersen = app.add_subcommand("verify-petersen", "certify the Petersen 3/5 bound exhaustively");

  auto *simulate = app.add_subcommand("simulate", "simulate buyer arrivals under given prices");
  simulate->add_option("graph", graph_path)->required();
  simulate->add_option("prices", prices_path, "prices JSON file")->required();
  simulate->add_option("order", order_spec, "@adversarial, @id or a JSON permutation file")->required();

  auto *ratio = app.add_subcommand("ratio", "exact competitive ratio by subset enumeration");
  ratio->add_option("graph", graph_path)->required();

  auto *minmax = app.add_subcommand("minmax", "minimum maximal matching");
  minmax->add_option("graph", graph_path)->required();

  auto *maxmatch = app.add_subcommand("maxmatch", "maximum matching");
  maxmatch->add_option("graph", graph_path)->required();

  auto *emit_ip = app.add_subcommand("emit-ip", "emit the 0-1 program for a target minmax size");
  emit_ip->add_option("graph", graph_path)->required();
  emit_ip->add_option("--target", target, "target minmax size")->check(CLI::PositiveNumber);
  emit_ip->add_option("--output", output_path, "write the LP file here");
  emit_ip->add_flag("--lp", print_lp, "print the LP text instead of the JSON summary");

  auto *refine_cmd = app.add_subcommand("refine", "replay refinements by vertex sets");
  refine_cmd->add_option("graph", graph_path)->required();
  refine_cmd->add_option("--set", refine_sets, "comma-separated vertex labels; repeatable");
  refine_cmd->add_option("--partition", partition_path, "ordered partition JSON to convert into refinements first");

  auto *extended = app.add_subcommand("extended-refine", "run the extended refinement algorithm");
  extended->add_option("graph", graph_path)->required();
  extended->add_option("--matchings", matchings_path, "JSON list of injected minmax matchings");

  auto *fixtures = app.add_subcommand("fixtures", "list bundled graphs");
  fixtures->add_option("--write-dir", write_dir, "also write each fixture as an edge-list file");

  auto *selftest = app.add_subcommand("selftest", "randomized consistency checks");
  selftest->add_option("--cases", selftest_n, "number of random cases");

  std::vector<char *> argv;
  std::vector<std::string> storage(args);
  for (auto &a : storage)
  {
    argv.push_back(a.data());
  }
  try
  {
    app.parse(static_cast<int>(argv.size()), argv.data());
  }
  catch (CLI::CallForHelp const &e)
  {
    return app.exit(e, out, err);
  }
  catch (CLI::CallForAllHelp const &e)
  {
    return app.exit(e, out, err);
  }
  catch (CLI::ParseError const &e)
  {
    app.exit(e, out, err);
    return kUsageError;
  }

  int const indent = opts.json_indent;
  auto      emit   = [&](json const &payload) {
    if (!payload.is_null())
    {
      out << payload.dump(indent) << "\n";
    }
  };

  try
  {
    json payload;
    if (*keepable)
      payload = cmd_keepable(graph_path, set_spec);
    else if (*price)
      payload = cmd_price(graph_path, opts);
    else if (*petersen)
      payload = cmd_verify_petersen(opts);
    else if (*simulate)
      payload = cmd_simulate(graph_path, prices_path, order_spec, opts);
    else if (*ratio)
      payload = cmd_ratio(graph_path, opts);
    else if (*minmax)
      payload = cmd_minmax(graph_path, opts);
    else if (*maxmatch)
      payload = cmd_maxmatch(graph_path);
    else if (*emit_ip)
      payload = cmd_emit_ip(graph_path, target, output_path, print_lp, out);
    else if (*refine_cmd)
      payload = cmd_refine(graph_path, refine_sets, partition_path);
    else if (*extended)
      payload = cmd_extended_refine(graph_path, matchings_path, opts);
    else if (*fixtures)
      payload = cmd_fixtures(write_dir);
    else if (*selftest)
      payload = cmd_selftest(selftest_n, opts);
    emit(payload);
    return kSuccess;
  }
  catch (NegativeVerdict const &neg)
  {
    emit(neg.payload);
    return kNegative;
  }
  catch (CapExceeded const &e)
  {
    err << "error: " << e.what() << "\n";
    return kCapExceeded;
  }
  catch (InternalError const &e)
  {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
  catch (Error const &e)
  {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
  catch (json::exception const &e)
  {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
  catch (std::filesystem::filesystem_error const &e)
  {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
}

}  // namespace pricematch::cli
