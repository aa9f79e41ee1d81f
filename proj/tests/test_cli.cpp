#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "combhelper/cli.hpp"
#include "test_support.hpp"

using namespace combhelper;
using namespace combhelper::testing;

namespace {

struct CliRun {
  int code;
  std::string out, err;
};

CliRun run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "combhelper");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = combhelper::cli::dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  return CliRun{code, out.str(), err.str()};
}

/// Loaded graph equals `g` once ids are mapped back to their originals.
bool same_graph(const LoadedGraph& lg, const Graph& g) {
  if (lg.graph.num_edges() != g.num_edges()) return false;
  for (auto [u, v] : lg.graph.edges())
    if (!g.has_edge(static_cast<NodeId>(lg.original_ids[u]), static_cast<NodeId>(lg.original_ids[v]))) return false;
  return true;
}

void write_file(const std::filesystem::path& p, const std::string& text) { std::ofstream(p) << text; }

class Cli : public ::testing::Test {
 protected:
  void SetUp() override { dir = temp_dir("cli"); }
  void TearDown() override { std::filesystem::remove_all(dir); }
  std::string path(const std::string& name) const { return (dir / name).string(); }
  std::filesystem::path dir;
};

}  // namespace

TEST_F(Cli, GenWritesBaEdgeList) {
  const CliRun r = run_cli({"gen", "--n", "1000", "--m", "4", "--seed", "1", "--out", path("g.txt")});
  ASSERT_EQ(r.code, 0) << r.err;
  const LoadedGraph lg = load_edge_list(path("g.txt"));
  EXPECT_EQ(lg.graph.num_edges(), 3990u);
  EXPECT_TRUE(same_graph(lg, generate_ba(1000, 4, 1)));
}

TEST_F(Cli, ConfigFileSuppliesFlagsAndCommandLineWins) {
  write_file(path("gen.json"), R"({"n": 50, "m": 2, "seed": 3, "out": ")" + path("a.txt") + "\"}");
  ASSERT_EQ(run_cli({"gen", "--config", path("gen.json")}).code, 0);
  EXPECT_TRUE(same_graph(load_edge_list(path("a.txt")), generate_ba(50, 2, 3)));
  ASSERT_EQ(run_cli({"gen", "--config", path("gen.json"), "--n", "60"}).code, 0);
  EXPECT_EQ(load_edge_list(path("a.txt")).graph.num_nodes(), 60u);
  write_file(path("bad.json"), R"({"nodes": 50})");
  EXPECT_EQ(run_cli({"gen", "--config", path("bad.json"), "--out", path("b.txt")}).code, 1);
}

TEST_F(Cli, SolveTriangle) {
  write_file(path("t.txt"), "0 1\n1 2\n0 2\n");
  const CliRun r = run_cli({"solve", "--graph", path("t.txt"), "--problem", "mvc", "--solver", "greedy"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("mvc greedy 2 1.000000 ", 0), 0u) << r.out;
  EXPECT_NE(r.out.find(" 0\n0\n1\n"), std::string::npos) << r.out;
}

TEST_F(Cli, SolveUsesOriginalIdsForCandidates) {
  write_file(path("p.txt"), "10 20\n20 30\n");
  write_file(path("c.txt"), "10\n30\n");
  const CliRun r = run_cli({"solve", "--graph", path("p.txt"), "--solver", "exact", "--candidates", path("c.txt")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\n10\n30\n"), std::string::npos) << r.out;
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run_cli({"gen", "--n", "10"}).code, 1);                  // missing --out
  EXPECT_EQ(run_cli({"gen", "--bogus", "1"}).code, 1);               // unknown flag
  EXPECT_EQ(run_cli({"solve", "--graph", path("none.txt")}).code, 2);  // unreadable input
  EXPECT_EQ(run_cli({"solve", "--graph", path("none.txt"), "--problem", "tsp"}).code, 1);
  EXPECT_EQ(run_cli({"bench", "--config", path("missing.json")}).code, 1);
  EXPECT_NE(run_cli({"bench", "--config", path("missing.json")}).err.find("config file not found"), std::string::npos);
  EXPECT_EQ(run_cli({"--help"}).code, 0);
  EXPECT_EQ(run_cli({}).code, 1);
}

TEST_F(Cli, TrainPruneSolveChain) {
  ASSERT_EQ(run_cli({"gen", "--n", "150", "--m", "2", "--seed", "4", "--out", path("g.txt")}).code, 0);
  ASSERT_EQ(run_cli({"label", "--graph", path("g.txt"), "--problem", "mvc", "--out", path("l.txt")}).code, 0);
  const CliRun t = run_cli({"train-teacher", "--graph", path("g.txt"), "--labels", path("l.txt"), "--out", path("t.params"),
                     "--dims", "1,8,2", "--epochs", "20"});
  ASSERT_EQ(t.code, 0) << t.err;
  EXPECT_NE(t.err.find("best epoch"), std::string::npos);
  EXPECT_TRUE(std::filesystem::exists(path("t.params.log.csv")));
  const CliRun s = run_cli({"train-student", "--graph", path("g.txt"), "--labels", path("l.txt"), "--teacher",
                     path("t.params"), "--out", path("s.params"), "--dims", "1,4,2", "--epochs", "20"});
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_EQ(load_params(path("s.params")).dims, (std::vector<int>{1, 4, 2}));
  ASSERT_EQ(run_cli({"prune", "--params", path("s.params"), "--graph", path("g.txt"), "--out", path("good.txt")}).code, 0);
  const CliRun solve = run_cli({"solve", "--graph", path("g.txt"), "--candidates", path("good.txt")});
  ASSERT_EQ(solve.code, 0) << solve.err;
  EXPECT_EQ(solve.out.rfind("mvc greedy ", 0), 0u);
  EXPECT_EQ(run_cli({"train-student", "--graph", path("g.txt"), "--labels", path("l.txt"), "--out", path("x")}).code, 1);
}

TEST_F(Cli, BinaryRuns) {
  const std::string cmd = std::string(COMBHELPER_CLI_PATH) + " gen --n 20 --m 2 --out " + path("bin.txt");
  EXPECT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_EQ(load_edge_list(path("bin.txt")).graph.num_edges(), 1u + 2u * 18u);
  const std::string bad = std::string(COMBHELPER_CLI_PATH) + " gen --n 20 2>/dev/null";
  EXPECT_EQ(WEXITSTATUS(std::system(bad.c_str())), 1);
}
