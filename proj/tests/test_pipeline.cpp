#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "test_support.hpp"

using namespace combhelper;
using namespace combhelper::testing;

namespace {

PipelineConfig tiny_config(Problem problem) {
  PipelineConfig c = PipelineConfig::defaults(problem, 3);
  c.train_graph = GraphSpec::ba(200, 3);
  c.test_graphs = {GraphSpec::ba(300, 3), GraphSpec::ba(400, 3)};
  c.teacher.dims = {1, 16, 16, 2};
  c.teacher.epochs = 30;
  c.teacher.lr = 1e-2;
  c.student.dims = {1, 8, 2};
  c.student.epochs = 30;
  c.student.lr = 1e-2;
  c.solver_repeats = 1;
  c.inference_repeats = 1;
  return c;
}

const BenchReport& tiny_report() {
  static const BenchReport r = run_pipeline(tiny_config(Problem::kMvc));
  return r;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, ',')) out.push_back(f);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

}  // namespace

TEST(Speedup, Examples) {
  EXPECT_DOUBLE_EQ(speedup(10.0, 2.5), 4.0);
  EXPECT_DOUBLE_EQ(speedup(1.0, 1.0), 1.0);
  EXPECT_THROW(speedup(1.0, 0.0), InvalidParameter);
  EXPECT_THROW(speedup(0.0, 1.0), InvalidParameter);
}

TEST(Config, ValidationErrors) {
  PipelineConfig c = PipelineConfig::defaults(Problem::kMvc, 1);
  EXPECT_NO_THROW(c.validate());
  c.solvers.clear();
  EXPECT_THROW(c.validate(), ConfigError);
  c = PipelineConfig::defaults(Problem::kMvc, 1);
  c.test_graphs.clear();
  EXPECT_THROW(c.validate(), ConfigError);
  c = PipelineConfig::defaults(Problem::kMvc, 1);
  c.student.dims = {2, 8, 2};
  EXPECT_THROW(c.validate(), ConfigError);
  c = PipelineConfig::defaults(Problem::kMvc, 1);
  c.student.lambda = 1.5;
  EXPECT_THROW(c.validate(), ConfigError);
  EXPECT_THROW(run_pipeline([] {
                 PipelineConfig e = PipelineConfig::defaults(Problem::kMis, 1);
                 e.solvers.clear();
                 return e;
               }()),
               ConfigError);
}

TEST(Config, JsonRoundTrip) {
  PipelineConfig c = tiny_config(Problem::kMis);
  c.test_graphs.push_back(GraphSpec::file("/data/road.txt"));
  c.solvers = {Algorithm::kExact};
  c.exact_time_limit_s = 12.5;
  const Json j = to_json(c);
  const PipelineConfig back = pipeline_config_from_json(j);
  EXPECT_EQ(to_json(back), j);
  EXPECT_EQ(back.test_graphs.back().label(), "road");
}

TEST(Config, JsonRejectsUnknownKeysAndBadValues) {
  EXPECT_THROW(pipeline_config_from_json(Json::parse(R"({"problme":"mvc"})")), ConfigError);
  EXPECT_THROW(pipeline_config_from_json(Json::parse(R"({"problem":"tsp"})")), ConfigError);
  EXPECT_THROW(pipeline_config_from_json(Json::parse(R"({"solvers":[]})")), ConfigError);
  EXPECT_THROW(pipeline_config_from_json(Json::parse(R"({"teacher":{"epochs":"many"}})")), ConfigError);
  EXPECT_THROW(load_pipeline_config("/nonexistent/config.json"), IoError);
  const PipelineConfig seeded = pipeline_config_from_json(Json::parse(R"({"seed": 9})"));
  EXPECT_EQ(seeded.seeds.init, Seeds::from_master(9).init);
}

TEST(Pipeline, TinyRunRowsAndInvariants) {
  const BenchReport& r = tiny_report();
  ASSERT_EQ(r.rows.size(), 12u);
  for (const auto& row : r.rows) {
    EXPECT_GT(row.runtime_s, 0.0);
    EXPECT_GT(row.speedup, 0.0);
    EXPECT_GT(row.prune_ratio, 0.0);
    EXPECT_LE(row.prune_ratio, 1.0);
    ASSERT_TRUE(row.coverage);
    EXPECT_LE(*row.coverage, 1.0);
    ASSERT_TRUE(row.recall_student);
    if (row.variant == Variant::kBaseline) {
      EXPECT_DOUBLE_EQ(row.speedup, 1.0);
      EXPECT_DOUBLE_EQ(row.prune_ratio, 1.0);
      EXPECT_DOUBLE_EQ(*row.coverage, 1.0);
    }
  }
  EXPECT_EQ(r.rows[0].graph, "ba300-m3");
  EXPECT_EQ(r.rows[0].n, 300u);
  EXPECT_EQ(r.training.student_parameters, r.student.parameter_count());
  EXPECT_LT(r.training.student_parameters, r.training.teacher_parameters);
  EXPECT_DOUBLE_EQ(r.average_speedup(Algorithm::kGreedy, Variant::kBaseline), 1.0);
  EXPECT_DOUBLE_EQ(r.average_speedup(Algorithm::kExact, Variant::kBaseline), 0.0);
}

TEST(Report, CsvShape) {
  std::ostringstream out;
  write_csv(out, tiny_report());
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, kCsvHeader);
  const std::size_t cols = split_csv(line).size();
  EXPECT_EQ(cols, 16u);
  int rows = 0;
  while (std::getline(in, line)) {
    EXPECT_EQ(split_csv(line).size(), cols) << line;
    ++rows;
  }
  EXPECT_EQ(rows, 12);
}

TEST(Report, MisCsvLeavesCoverageEmpty) {
  BenchReport r;
  r.config = PipelineConfig::defaults(Problem::kMis, 1);
  BenchRow row;
  row.problem = Problem::kMis;
  row.graph = "g";
  r.rows.push_back(row);
  std::ostringstream out;
  write_csv(out, r);
  const std::string body = out.str().substr(out.str().find('\n') + 1);
  EXPECT_EQ(split_csv(body.substr(0, body.size() - 1))[7], "");
}

TEST(Report, JsonNumbersRoundTrip) {
  const BenchReport& r = tiny_report();
  const Json j = Json::parse(to_json(r).dump(2));
  ASSERT_EQ(j["rows"].size(), r.rows.size());
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    EXPECT_EQ(j["rows"][i]["runtime_s"].get<double>(), r.rows[i].runtime_s);
    EXPECT_EQ(j["rows"][i]["speedup"].get<double>(), r.rows[i].speedup);
    EXPECT_EQ(j["rows"][i]["recall_student"].get<double>(), *r.rows[i].recall_student);
    EXPECT_EQ(j["rows"][i]["size"].get<std::size_t>(), r.rows[i].size);
  }
  EXPECT_EQ(j["average_speedup"].size(), 6u);
  EXPECT_EQ(pipeline_config_from_json(j["config"]).test_graphs.size(), 2u);
}

TEST(Report, UnwritablePathIsIoError) {
  EXPECT_THROW(emit_report(tiny_report(), ReportFormat::kCsv, "/nonexistent/dir/bench.csv"), IoError);
}

TEST(Pipeline, MisTinyRunIsValid) {
  PipelineConfig c = tiny_config(Problem::kMis);
  c.test_graphs = {GraphSpec::ba(300, 3)};
  c.solvers = {Algorithm::kGreedy};
  const BenchReport r = run_pipeline(c);
  ASSERT_EQ(r.rows.size(), 3u);
  for (const auto& row : r.rows) {
    EXPECT_FALSE(row.coverage);
    EXPECT_GT(row.size, 0u);
  }
}

TEST(Pipeline, MissingGraphFileIsPipelineError) {
  PipelineConfig c = tiny_config(Problem::kMvc);
  c.test_graphs = {GraphSpec::file("/nonexistent/g.txt")};
  try {
    run_pipeline(c);
    FAIL();
  } catch (const PipelineError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/g.txt"), std::string::npos);
  }
}

TEST(ParallelFor, CoversEveryIndexAndRethrows) {
  std::vector<int> hits(50, 0);
  detail::parallel_for(50, 4, [&](std::size_t i) { hits[i]++; });
  for (int h : hits) EXPECT_EQ(h, 1);
  EXPECT_THROW(detail::parallel_for(10, 3,
                                    [](std::size_t i) {
                                      if (i == 7) throw InvalidParameter("boom");
                                    }),
               InvalidParameter);
}
