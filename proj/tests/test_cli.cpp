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
#include "support.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace pricematch;
using nlohmann::json;

namespace {

struct Result
{
  int         code = -1;
  std::string out;
  std::string err;

  json payload() const
  {
    return json::parse(out);
  }
};

Result invoke(std::vector<std::string> args)
{
  args.insert(args.begin(), "pricematch");
  std::ostringstream out;
  std::ostringstream err;
  Result             r;
  r.code = cli::run(args, out, err);
  r.out  = out.str();
  r.err  = err.str();
  return r;
}

class CliTest : public ::testing::Test
{
protected:
  void SetUp() override
  {
    dir_ = std::filesystem::temp_directory_path() /
           ("pricematch_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::remove_all(dir_);
    std::filesystem::create_directories(dir_);
  }

  void TearDown() override
  {
    std::filesystem::remove_all(dir_);
  }

  std::string write(std::string const &name, std::string const &content) const
  {
    auto const    path = dir_ / name;
    std::ofstream f(path, std::ios::binary);
    f << content;
    return path.string();
  }

  std::filesystem::path dir_;
};

TEST_F(CliTest, KeepableNegativeVerdict)
{
  auto const r = invoke({"keepable", "@fig1", "a-f", "b-c", "d-e"});
  EXPECT_EQ(r.code, 1);
  auto const j = r.payload();
  EXPECT_FALSE(j["keepable"].get<bool>());
  Graph const g = bundled_graph("fig1");
  auto const  w = json_io::walk_from_json(g, j["walk"]);
  EXPECT_TRUE(verify_walk(g, pricematch::testing::edges_named(g, {"a-f", "b-c", "d-e"}), w));
}

TEST_F(CliTest, KeepablePositiveVerdict)
{
  auto const r = invoke({"keepable", "@fig1", "@all"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto const j = r.payload();
  EXPECT_TRUE(j["keepable"].get<bool>());
  EXPECT_EQ(j["edge_set"].size(), 7U);
  EXPECT_TRUE(j.contains("partition"));
  Graph const g = bundled_graph("fig1");
  EXPECT_EQ(edges_from_prices(g, json_io::prices_from_json(g, j["prices"])), EdgeSet::all(g));
}

TEST_F(CliTest, KeepableUnknownEdge)
{
  auto const r = invoke({"keepable", "@p3", "a-d"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("a-d"), std::string::npos);
}

TEST_F(CliTest, PricePath)
{
  auto const r = invoke({"price", "@p3"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto const j = r.payload();
  EXPECT_EQ(j["final_minmax"].get<int>(), 2);
  EXPECT_EQ(j["max_matching"].get<int>(), 2);
  EXPECT_EQ(json_io::rational_from_json(j["ratio"]), Rational(1));
}

TEST_F(CliTest, PricePetersenAndFiles)
{
  auto const r = invoke({"price", "@petersen"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_GE(r.payload()["final_minmax"].get<int>(), 3);

  auto const path = write("g.txt", "# square\na b\nb c\nc d\nd a\n");
  auto const sq   = invoke({"price", path});
  ASSERT_EQ(sq.code, 0) << sq.err;
  EXPECT_EQ(sq.payload()["max_matching"].get<int>(), 2);
}

TEST_F(CliTest, InputErrors)
{
  EXPECT_EQ(invoke({"price", write("empty.txt", "")}).code, 2);
  auto const loop = invoke({"price", write("loop.txt", "a b\na a\n")});
  EXPECT_EQ(loop.code, 2);
  EXPECT_NE(loop.err.find("line 2"), std::string::npos);
  EXPECT_EQ(invoke({"price", (dir_ / "missing.txt").string()}).code, 2);
  EXPECT_EQ(invoke({"price", "@nothing"}).code, 2);
  EXPECT_EQ(invoke({"frobnicate"}).code, 2);
  EXPECT_EQ(invoke({}).code, 2);
}

TEST_F(CliTest, VerifyPetersenIsWorkerIndependent)
{
  auto const one  = invoke({"--workers", "1", "verify-petersen"});
  auto const four = invoke({"--workers", "4", "verify-petersen"});
  ASSERT_EQ(one.code, 0) << one.err;
  ASSERT_EQ(four.code, 0) << four.err;
  EXPECT_EQ(one.out, four.out);
  auto const j = one.payload();
  EXPECT_TRUE(j["certified"].get<bool>());
  EXPECT_EQ(json_io::rational_from_json(j["ratio"]), Rational(3, 5));
  EXPECT_EQ(j["subsets_examined"].get<int>(), 32768);
}

TEST_F(CliTest, SimulateOrders)
{
  auto const half = write("half.json", R"({"a":{"num":1,"den":2},"b":{"num":1,"den":2},)"
                                       R"("c":{"num":1,"den":2},"d":{"num":1,"den":2}})");
  auto const adv  = invoke({"simulate", "@p3", half, "@adversarial"});
  ASSERT_EQ(adv.code, 0) << adv.err;
  EXPECT_EQ(adv.payload()["size"].get<int>(), 1);
  EXPECT_EQ(adv.payload()["matching"], json::array({"b-c"}));

  auto const id = invoke({"simulate", "@p3", half, "@id"});
  ASSERT_EQ(id.code, 0) << id.err;
  EXPECT_EQ(id.payload()["size"].get<int>(), 2);
  EXPECT_EQ(id.payload()["trace"].size(), 3U);

  auto const order = write("order.json", "[1, 0, 2]");
  auto const given = invoke({"simulate", "@p3", half, order});
  ASSERT_EQ(given.code, 0) << given.err;
  EXPECT_EQ(given.payload()["size"].get<int>(), 1);

  auto const bad = write("bad.json", "[1, 0]");
  EXPECT_EQ(invoke({"simulate", "@p3", half, bad}).code, 2);
  auto const partial = write("partial.json", R"({"a":{"num":1,"den":2}})");
  EXPECT_EQ(invoke({"simulate", "@p3", partial, "@id"}).code, 2);
}

TEST_F(CliTest, PricesFromPriceCommandFeedSimulation)
{
  auto const priced = invoke({"price", "@p3"});
  ASSERT_EQ(priced.code, 0);
  auto const prices = write("p.json", priced.payload()["prices"].dump());
  auto const adv    = invoke({"simulate", "@p3", prices, "@adversarial"});
  ASSERT_EQ(adv.code, 0) << adv.err;
  EXPECT_EQ(adv.payload()["size"].get<int>(), 2);
}

TEST_F(CliTest, RatioMinmaxMaxmatch)
{
  auto const ratio = invoke({"ratio", "@fig1"});
  ASSERT_EQ(ratio.code, 0) << ratio.err;
  EXPECT_EQ(json_io::rational_from_json(ratio.payload()["ratio"]), Rational(2, 3));

  auto const mm = invoke({"minmax", "@petersen"});
  ASSERT_EQ(mm.code, 0);
  EXPECT_EQ(mm.payload()["size"].get<int>(), 3);
  EXPECT_EQ(mm.payload()["max_matching"].get<int>(), 5);

  auto const mx = invoke({"maxmatch", "@fig7"});
  ASSERT_EQ(mx.code, 0);
  EXPECT_EQ(mx.payload()["size"].get<int>(), 12);
}

TEST_F(CliTest, CapExceeded)
{
  auto const r = invoke({"--edge-cap", "5", "minmax", "@petersen"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("exceeds cap"), std::string::npos);
  EXPECT_EQ(invoke({"ratio", "@fig2"}).code, 3);
}

TEST_F(CliTest, EmitIp)
{
  auto const lp = (dir_ / "petersen.lp").string();
  auto const r  = invoke({"emit-ip", "@petersen", "--target", "4", "--output", lp});
  ASSERT_EQ(r.code, 0) << r.err;
  auto const j = r.payload();
  EXPECT_EQ(j["num_vars"].get<int>(), 250);
  EXPECT_EQ(j["num_constraints"].get<int>(), 431);
  EXPECT_EQ(j["z_rows"].get<int>(), 290);
  EXPECT_TRUE(std::filesystem::exists(lp));

  auto const text = invoke({"emit-ip", "@p3", "--target", "2", "--lp"});
  ASSERT_EQ(text.code, 0);
  EXPECT_EQ(text.out.rfind("\\", 0), 0U);
  EXPECT_NE(text.out.find("End\n"), std::string::npos);
  EXPECT_EQ(invoke({"emit-ip", "@p3", "--target", "0"}).code, 2);
}

TEST_F(CliTest, RefineBySetsAndPartition)
{
  auto const r = invoke({"refine", "@p3", "--set", "b,c"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto const j = r.payload();
  EXPECT_TRUE(j["keepable"].get<bool>());
  EXPECT_EQ(j["labels"]["b-c"], "evicted");
  EXPECT_EQ(j["labels"]["a-b"], "temporarily_kept");

  auto const part = write("part.json", R"([["a","d"],["b","c"]])");
  auto const p    = invoke({"refine", "@p3", "--partition", part});
  ASSERT_EQ(p.code, 0) << p.err;
  EXPECT_EQ(p.payload()["labels"], j["labels"]);

  EXPECT_EQ(invoke({"refine", "@p3", "--set", "b,z"}).code, 2);
}

TEST_F(CliTest, ExtendedRefineWithInjectedMatchings)
{
  auto const file = write("m.json", R"([["h-i","H-I","j-k","J-K","a-A","b-B","c-C"],)"
                                    R"(["d-h","D-H","e-i","E-I","f-k","F-K"]])");
  auto const r    = invoke({"extended-refine", "@fig7", "--matchings", file});
  ASSERT_EQ(r.code, 0) << r.err;
  auto const j = r.payload();
  EXPECT_EQ(j["final_minmax"].get<int>(), 6);
  EXPECT_EQ(j["max_matching"].get<int>(), 12);
  EXPECT_EQ(j["refinement_sets"][0], json::array({"a", "b", "c", "A", "B", "C"}));

  auto const bad = write("bad.json", R"([["h-i"]])");
  EXPECT_EQ(invoke({"extended-refine", "@fig7", "--matchings", bad}).code, 2);
}

TEST_F(CliTest, FixturesWriteDirectory)
{
  auto const r = invoke({"fixtures", "--write-dir", dir_.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.payload()["fixtures"].size(), kFixtures.size());
  for (auto const &f : kFixtures)
  {
    auto const    path = dir_ / (std::string(f.name) + ".txt");
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    EXPECT_EQ(serialize_graph(parse_graph(buf.str())), serialize_graph(bundled_graph(f.name)));
  }
}

TEST_F(CliTest, SelftestAndIndent)
{
  auto const r = invoke({"--seed", "7", "--json-indent", "-1", "selftest", "--cases", "20"});
  ASSERT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 1);
  EXPECT_EQ(r.payload()["failures"].get<int>(), 0);
}

TEST_F(CliTest, Help)
{
  auto const r = invoke({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("verify-petersen"), std::string::npos);
}

}  // namespace
