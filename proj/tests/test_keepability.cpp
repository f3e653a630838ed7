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

#include "support.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace pricematch;
using namespace pricematch::testing;

namespace {

AlternatingWalk walk_of(Graph const &g, std::initializer_list<std::string_view> labels)
{
  AlternatingWalk w;
  for (auto l : labels)
  {
    w.vertices.push_back(g.vertex(l));
  }
  return w;
}

OrderedPartition partition_of(Graph const &g, std::initializer_list<std::initializer_list<std::string_view>> groups)
{
  OrderedPartition ap;
  for (auto const &grp : groups)
  {
    ap.groups.emplace_back();
    for (auto l : grp)
    {
      ap.groups.back().push_back(g.vertex(l));
    }
  }
  return ap;
}

TEST(Keepability, Fig1SetIsRefuted)
{
  Graph const   g       = bundled_graph("fig1");
  EdgeSet const s       = edges_named(g, {"a-f", "b-c", "d-e"});
  auto const    verdict = decide_keepable(g, s);
  EXPECT_FALSE(verdict.keepable);
  ASSERT_TRUE(verdict.walk.has_value());
  EXPECT_TRUE(verify_walk(g, s, *verdict.walk));
  EXPECT_FALSE(verdict.prices.has_value());
  EXPECT_EQ(verdict.walk->vertices.front(), verdict.walk->vertices.back());
}

TEST(Keepability, HandWrittenWalkVerifies)
{
  Graph const   g = bundled_graph("fig1");
  EdgeSet const s = edges_named(g, {"a-f", "b-c", "d-e"});
  auto const    w = walk_of(g, {"a", "b", "c", "d", "e", "c", "b", "f", "a"});
  EXPECT_EQ(w.length(), 8U);
  EXPECT_TRUE(verify_walk(g, s, w));
  // The same walk is not alternating for the complementary labelling of a-b.
  EXPECT_FALSE(verify_walk(g, EdgeSet::all(g), w));
}

TEST(Keepability, WalkChecksRejectMalformedWalks)
{
  Graph const   g = bundled_graph("fig1");
  EdgeSet const s = edges_named(g, {"a-f", "b-c", "d-e"});
  EXPECT_FALSE(verify_walk(g, s, AlternatingWalk{}));
  EXPECT_FALSE(verify_walk(g, s, walk_of(g, {"a", "b", "a"})));                 // one edge twice in opposite directions is a 2-walk
  EXPECT_FALSE(verify_walk(g, s, walk_of(g, {"a", "b", "c", "d", "e", "c", "b", "f"})));  // not closed
  EXPECT_FALSE(verify_walk(g, s, walk_of(g, {"a", "c", "b", "a"})));            // a-c is not an edge
  EXPECT_FALSE(verify_walk(g, s, walk_of(g, {"b", "c", "d", "e", "c", "b", "f", "a", "b"})));  // wrong parity
  auto const twice = walk_of(g, {"a", "b", "c", "d", "e", "c", "b", "f", "a", "b", "c", "d", "e", "c", "b", "f", "a"});
  EXPECT_FALSE(verify_walk(g, s, twice));
  auto const fixed = normalize_walk(twice);
  EXPECT_TRUE(verify_walk(g, s, fixed)) << verify_walk(g, s, fixed).reason;
  EXPECT_LT(fixed.length(), twice.length());
}

TEST(Keepability, WholeEdgeSetIsKeepableBelowOneHalf)
{
  for (auto const &info : kFixtures)
  {
    Graph const g       = bundled_graph(info.name);
    auto const  verdict = decide_keepable(g, EdgeSet::all(g));
    ASSERT_TRUE(verdict.keepable) << info.name;
    Rational const eps(1, static_cast<std::int64_t>(2 * g.num_vertices()));
    for (auto const &p : verdict.prices->values())
    {
      EXPECT_LT(p, Rational(1, 2));
      EXPECT_EQ((p / eps).denominator(), 1);
    }
    EXPECT_TRUE(decide_keepable(g, EdgeSet::none(g)).keepable);
  }
}

TEST(Keepability, Fig2LeadingEdges)
{
  Graph const   g     = bundled_graph("fig2");
  EdgeSet const leading = leading_edges(g, 15);
  auto const    v     = decide_keepable(g, leading);
  ASSERT_TRUE(v.keepable);
  EXPECT_EQ(edges_from_prices(g, *v.prices), leading);
  auto const ap = partition_of(g, {{"d", "h", "l"}, {"c", "g", "k"}, {"b", "f", "j"}, {"a", "e", "i"}});
  EXPECT_EQ(edges_from_partition(g, ap), leading);
}

TEST(Keepability, ElimininationTraceCoversVerticesWhenKeepable)
{
  Graph const g = bundled_graph("fig6");
  auto const  v = decide_keepable(g, leading_edges(g, 6));
  if (v.keepable)
  {
    EXPECT_EQ(v.elimination_order.size(), g.num_vertices());
  }
  else
  {
    EXPECT_LT(v.elimination_order.size(), g.num_vertices());
  }
}

TEST(Keepability, ExhaustiveOnFig1)
{
  Graph const g = bundled_graph("fig1");
  std::size_t keepable = 0;
  for (std::uint64_t mask = 0; mask < 128; ++mask)
  {
    EdgeSet const s(g, mask);
    auto const    v = decide_keepable(g, s);
    EXPECT_EQ(v.keepable, keepable_oracle(g, s)) << mask;
    EXPECT_EQ(v.keepable, keepable_by_order_search(g, s)) << mask;
    keepable += v.keepable ? 1 : 0;
  }
  EXPECT_EQ(keepable, 126U);
}

TEST(Keepability, OracleVertexCap)
{
  Graph const g = bundled_graph("petersen");
  EXPECT_THROW(keepable_oracle(g, EdgeSet::all(g)), CapExceeded);
  EXPECT_TRUE(keepable_by_order_search(g, EdgeSet::all(g)));
}

TEST(Keepability, RandomSetsAgreeWithOracle)
{
  std::mt19937_64 rng(17);
  for (int i = 0; i < 400; ++i)
  {
    std::size_t const n = std::uniform_int_distribution<std::size_t>(2, 6)(rng);
    Graph const       g = random_connected_graph(rng, n, 0.5);
    EdgeSet const     s(g, rng() & EdgeSet::all(g).bits());
    auto const        v = decide_keepable(g, s);
    ASSERT_EQ(v.keepable, keepable_oracle(g, s)) << serialize_graph(g) << s.bits();
    if (v.keepable)
    {
      EXPECT_EQ(edges_from_prices(g, *v.prices), s);
      for (auto const &p : v.prices->values())
      {
        EXPECT_GE(p, 0);
        EXPECT_LE(p, 1);
      }
    }
    else
    {
      EXPECT_TRUE(verify_walk(g, s, *v.walk));
    }
  }
}

TEST(Keepability, LargerRandomGraphsCertificatesCheck)
{
  std::mt19937_64 rng(23);
  for (int i = 0; i < 300; ++i)
  {
    std::size_t const n = std::uniform_int_distribution<std::size_t>(6, 16)(rng);
    Graph const       g = random_connected_graph(rng, n, 0.2);
    EdgeSet const     s(g, rng() & EdgeSet::all(g).bits());
    auto const        v = decide_keepable(g, s);
    EXPECT_EQ(v.keepable, keepable_by_order_search(g, s));
    if (v.keepable)
    {
      EXPECT_EQ(edges_from_prices(g, *v.prices), s);
    }
    else
    {
      EXPECT_TRUE(verify_walk(g, s, *v.walk));
    }
  }
}

TEST(Keepability, ComplementSymmetry)
{
  std::mt19937_64 rng(29);
  for (int i = 0; i < 400; ++i)
  {
    std::size_t const n = std::uniform_int_distribution<std::size_t>(2, 10)(rng);
    Graph const       g = random_connected_graph(rng, n, 0.35);
    EdgeSet const     s(g, rng() & EdgeSet::all(g).bits());
    EXPECT_EQ(is_keepable(g, s), is_keepable(g, s.complement()));
  }
}

TEST(Keepability, AgreesWithPriceSampling)
{
  // Every affordable-edge set of some price vector is keepable.
  std::mt19937_64 rng(31);
  for (int i = 0; i < 300; ++i)
  {
    Graph const g = random_connected_graph(rng, 9, 0.3);
    auto const  p = random_prices(rng, g);
    EXPECT_TRUE(is_keepable(g, edges_from_prices(g, p)));
  }
}

TEST(OrderWitness, Examples)
{
  Graph const g   = bundled_graph("fig1");
  auto const  all = order_witness(g, EdgeSet::all(g));
  ASSERT_TRUE(all.has_value());
  EXPECT_EQ(all->in_r.count(), g.num_vertices());
  auto const none = order_witness(g, EdgeSet::none(g));
  ASSERT_TRUE(none.has_value());
  EXPECT_EQ(none->in_r.count(), 0U);
  EXPECT_FALSE(order_witness(g, edges_named(g, {"a-f", "b-c", "d-e"})).has_value());

  Graph const fig2  = bundled_graph("fig2");
  auto const  leading = leading_edges(fig2, 15);
  auto const  w     = order_witness(fig2, leading);
  ASSERT_TRUE(w.has_value());
  EXPECT_TRUE(satisfies_order_witness(fig2, leading, *w));
  EXPECT_FALSE(satisfies_order_witness(fig2, leading.complement(), *w));
}

TEST(OrderWitness, PartitionReproducesSet)
{
  std::mt19937_64 rng(37);
  for (int i = 0; i < 300; ++i)
  {
    std::size_t const n = std::uniform_int_distribution<std::size_t>(2, 10)(rng);
    Graph const       g = random_connected_graph(rng, n, 0.35);
    EdgeSet const     s(g, rng() & EdgeSet::all(g).bits());
    auto const        w = order_witness(g, s);
    if (!w)
    {
      continue;
    }
    EXPECT_TRUE(satisfies_order_witness(g, s, *w));
    auto const ap = partition_from_witness(*w);
    EXPECT_EQ(ap.groups.size() % 2, 0U);
    EXPECT_EQ(edges_from_partition(g, ap), s);
  }
}

TEST(Partitions, Examples)
{
  Graph const g = bundled_graph("p3");
  EXPECT_EQ(edges_from_partition(g, partition_of(g, {{"a", "b", "c", "d"}})), EdgeSet::all(g));
  EXPECT_TRUE(edges_from_partition(g, partition_of(g, {{}, {"a", "b", "c", "d"}})).empty());
  EXPECT_EQ(edges_from_partition(g, partition_of(g, {{"a", "d"}, {"b", "c"}})), edges_named(g, {"a-b", "c-d"}));
  EXPECT_EQ(edges_from_partition(g, partition_of(g, {{"b", "c"}, {"a", "d"}})), EdgeSet::all(g));
  EXPECT_THROW(edges_from_partition(g, partition_of(g, {{"a", "b"}, {"c"}})), InvalidArgument);
  EXPECT_THROW(edges_from_partition(g, partition_of(g, {{"a", "b", "c"}, {"c", "d"}})), InvalidArgument);
}

TEST(Partitions, NormalizeExample)
{
  Graph const g  = bundled_graph("p3");
  auto const  ap = partition_of(g, {{"a"}, {}, {"b"}, {"c"}, {"d"}});
  auto const  n  = normalize_partition(ap);
  EXPECT_EQ(n.groups.size() % 2, 0U);
  EXPECT_EQ(edges_from_partition(g, n), edges_from_partition(g, ap));
  EXPECT_EQ(normalize_partition(n), n);
}

TEST(Partitions, EveryPartitionIsKeepableAndNormalizes)
{
  std::mt19937_64 rng(41);
  for (int i = 0; i < 500; ++i)
  {
    std::size_t const n  = std::uniform_int_distribution<std::size_t>(2, 6)(rng);
    Graph const       g  = random_connected_graph(rng, n, 0.5);
    auto const        ap = random_partition(rng, n, 7);
    EdgeSet const     s  = edges_from_partition(g, ap);
    EXPECT_TRUE(is_keepable(g, s));
    EXPECT_TRUE(keepable_oracle(g, s));
    auto const norm = normalize_partition(ap);
    EXPECT_EQ(edges_from_partition(g, norm), s);
    EXPECT_EQ(norm.groups.size() % 2, 0U);
  }
}

TEST(Serialization, WalkAndPartitionRoundTrip)
{
  Graph const g  = bundled_graph("fig1");
  auto const  w  = walk_of(g, {"a", "b", "c", "d", "e", "c", "b", "f", "a"});
  EXPECT_EQ(json_io::walk_from_json(g, json_io::walk_to_json(g, w)), w);
  auto const ap = partition_of(g, {{"a", "c"}, {"b"}, {"d", "e", "f"}, {}});
  EXPECT_EQ(json_io::partition_from_json(g, json_io::partition_to_json(g, ap)), ap);
  auto const verdict = json_io::verdict_to_json(g, decide_keepable(g, EdgeSet::all(g)));
  EXPECT_TRUE(verdict["keepable"].get<bool>());
  EXPECT_EQ(verdict["elimination_order"].size(), 6U);
}

}  // namespace
