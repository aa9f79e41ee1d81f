#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "combhelper/error.hpp"
#include "combhelper/rng.hpp"
#include "combhelper/solvers.hpp"
#include "combhelper/trainer.hpp"

namespace combhelper {

using Json = nlohmann::ordered_json;

/// A BA graph to generate or an edge-list file to load.
struct GraphSpec {
  enum class Kind { kBa, kFile };
  Kind kind = Kind::kBa;
  std::size_t n = 1000;
  std::size_t m = 4;
  /// Unset means derived from the pipeline's graph seed and the spec's position.
  std::optional<std::uint64_t> seed;
  std::string path;
  std::string name;

  static GraphSpec ba(std::size_t n, std::size_t m, std::optional<std::uint64_t> seed = std::nullopt) {
    GraphSpec s;
    s.n = n;
    s.m = m;
    s.seed = seed;
    return s;
  }
  static GraphSpec file(std::string path) {
    GraphSpec s;
    s.kind = Kind::kFile;
    s.path = std::move(path);
    return s;
  }

  std::string label() const {
    if (!name.empty()) return name;
    if (kind == Kind::kFile) return std::filesystem::path(path).stem().string();
    return "ba" + std::to_string(n) + "-m" + std::to_string(m);
  }
};

struct Seeds {
  std::uint64_t graph = 1;
  std::uint64_t split = 2;
  std::uint64_t init = 3;
  std::uint64_t dropout = 4;
  std::uint64_t solver = 5;

  /// Independent streams of one master seed.
  static Seeds from_master(std::uint64_t s) {
    return {derive_seed(s, 11), derive_seed(s, 12), derive_seed(s, 13), derive_seed(s, 14),
            derive_seed(s, 15)};
  }
};

struct PipelineConfig {
  Problem problem = Problem::kMvc;
  Algorithm label_oracle = Algorithm::kGreedy;
  GraphSpec train_graph = GraphSpec::ba(1000, 4);
  std::vector<GraphSpec> test_graphs{GraphSpec::ba(5000, 4)};
  std::vector<Algorithm> solvers{Algorithm::kGreedy, Algorithm::kLocalSearch};
  Seeds seeds;
  TrainConfig teacher = TrainConfig::teacher_defaults();
  TrainConfig student = TrainConfig::student_defaults(Problem::kMvc);
  double exact_time_limit_s = 3600.0;
  int solver_repeats = 3;
  int inference_repeats = 5;
  int jobs = 1;

  static PipelineConfig defaults(Problem problem, std::uint64_t seed) {
    PipelineConfig c;
    c.problem = problem;
    c.seeds = Seeds::from_master(seed);
    c.student = TrainConfig::student_defaults(problem);
    return c;
  }

  void validate() const {
    if (solvers.empty()) throw ConfigError("at least one solver is required");
    if (test_graphs.empty()) throw ConfigError("at least one test graph is required");
    if (solver_repeats < 1 || inference_repeats < 1) throw ConfigError("repeat counts must be >= 1");
    if (jobs < 1) throw ConfigError("jobs must be >= 1");
    if (!(exact_time_limit_s > 0.0)) throw ConfigError("exact_time_limit_s must be positive");
    auto check_graph = [](const GraphSpec& s) {
      if (s.kind == GraphSpec::Kind::kBa && (s.m < 1 || s.n <= s.m))
        throw ConfigError("BA graph needs 1 <= m < n");
      if (s.kind == GraphSpec::Kind::kFile && s.path.empty()) throw ConfigError("graph file path is empty");
    };
    check_graph(train_graph);
    for (const auto& s : test_graphs) check_graph(s);
    for (const TrainConfig* t : {&teacher, &student}) {
      if (t->dims.size() < 2 || t->dims.front() != 1 || t->dims.back() != 2)
        throw ConfigError("network dims must start at 1 (degree feature) and end at 2");
      if (t->epochs < 1 || !(t->lr > 0.0) || !(t->dropout >= 0.0 && t->dropout < 1.0))
        throw ConfigError("epochs, lr and dropout must be positive, positive and in [0, 1)");
    }
    if (!(student.temperature > 0.0)) throw ConfigError("temperature must be positive");
    if (!(student.lambda >= 0.0 && student.lambda <= 1.0)) throw ConfigError("lambda must be in [0, 1]");
  }
};

// JSON mapping. Unknown keys are rejected so typos do not silently fall back
// to defaults.

namespace detail {

inline void reject_unknown(const Json& j, std::initializer_list<const char*> known, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) throw ConfigError("unknown key '" + it.key() + "' in " + where);
  }
}

template <class T>
void read_opt(const Json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace detail

inline Json to_json(const GraphSpec& s) {
  Json j;
  if (s.kind == GraphSpec::Kind::kBa) {
    j["type"] = "ba";
    j["n"] = s.n;
    j["m"] = s.m;
    if (s.seed) j["seed"] = *s.seed;
  } else {
    j["type"] = "file";
    j["path"] = s.path;
  }
  if (!s.name.empty()) j["name"] = s.name;
  return j;
}

inline GraphSpec graph_spec_from_json(const Json& j) {
  detail::reject_unknown(j, {"type", "n", "m", "seed", "path", "name"}, "graph spec");
  GraphSpec s;
  const std::string type = j.value("type", j.contains("path") ? "file" : "ba");
  if (type == "ba") {
    detail::read_opt(j, "n", s.n);
    detail::read_opt(j, "m", s.m);
    if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
  } else if (type == "file") {
    s.kind = GraphSpec::Kind::kFile;
    s.path = j.at("path").get<std::string>();
  } else {
    throw ConfigError("graph type must be 'ba' or 'file', got '" + type + "'");
  }
  detail::read_opt(j, "name", s.name);
  return s;
}

inline Json to_json(const TrainConfig& c, bool student) {
  Json j;
  j["dims"] = c.dims;
  j["epochs"] = c.epochs;
  j["lr"] = c.lr;
  j["dropout"] = c.dropout;
  j["bias"] = c.bias;
  if (student) {
    j["temperature"] = c.temperature;
    j["lambda"] = c.lambda;
  }
  return j;
}

inline void train_config_from_json(const Json& j, TrainConfig& c, bool student) {
  if (student)
    detail::reject_unknown(j, {"dims", "epochs", "lr", "dropout", "bias", "temperature", "lambda"}, "student");
  else
    detail::reject_unknown(j, {"dims", "epochs", "lr", "dropout", "bias"}, "teacher");
  detail::read_opt(j, "dims", c.dims);
  detail::read_opt(j, "epochs", c.epochs);
  detail::read_opt(j, "lr", c.lr);
  detail::read_opt(j, "dropout", c.dropout);
  detail::read_opt(j, "bias", c.bias);
  if (student) {
    detail::read_opt(j, "temperature", c.temperature);
    detail::read_opt(j, "lambda", c.lambda);
  }
}

inline Json to_json(const PipelineConfig& c) {
  Json j;
  j["problem"] = to_string(c.problem);
  j["label_oracle"] = to_string(c.label_oracle);
  j["train_graph"] = to_json(c.train_graph);
  j["test_graphs"] = Json::array();
  for (const auto& s : c.test_graphs) j["test_graphs"].push_back(to_json(s));
  j["solvers"] = Json::array();
  for (Algorithm a : c.solvers) j["solvers"].push_back(to_string(a));
  j["seeds"] = {{"graph", c.seeds.graph},
                {"split", c.seeds.split},
                {"init", c.seeds.init},
                {"dropout", c.seeds.dropout},
                {"solver", c.seeds.solver}};
  j["teacher"] = to_json(c.teacher, false);
  j["student"] = to_json(c.student, true);
  j["exact_time_limit_s"] = c.exact_time_limit_s;
  j["solver_repeats"] = c.solver_repeats;
  j["inference_repeats"] = c.inference_repeats;
  j["jobs"] = c.jobs;
  return j;
}

/// Fields missing from `j` keep the defaults for its problem. A top-level
/// "seed" fills every seed from one master value; "seeds" entries override it.
inline PipelineConfig pipeline_config_from_json(const Json& j) {
  try {
    detail::reject_unknown(j,
                           {"problem", "label_oracle", "train_graph", "test_graphs", "solvers", "seed",
                            "seeds", "teacher", "student", "exact_time_limit_s", "solver_repeats",
                            "inference_repeats", "jobs"},
                           "pipeline config");
    const Problem problem = j.contains("problem") ? parse_problem(j.at("problem").get<std::string>())
                                                  : Problem::kMvc;
    PipelineConfig c = PipelineConfig::defaults(problem, j.value<std::uint64_t>("seed", 0));
    if (j.contains("label_oracle")) c.label_oracle = parse_algorithm(j.at("label_oracle").get<std::string>());
    if (j.contains("train_graph")) c.train_graph = graph_spec_from_json(j.at("train_graph"));
    if (j.contains("test_graphs")) {
      c.test_graphs.clear();
      for (const auto& t : j.at("test_graphs")) c.test_graphs.push_back(graph_spec_from_json(t));
    }
    if (j.contains("solvers")) {
      c.solvers.clear();
      for (const auto& s : j.at("solvers")) c.solvers.push_back(parse_algorithm(s.get<std::string>()));
    }
    if (j.contains("seeds")) {
      const Json& s = j.at("seeds");
      detail::reject_unknown(s, {"graph", "split", "init", "dropout", "solver"}, "seeds");
      detail::read_opt(s, "graph", c.seeds.graph);
      detail::read_opt(s, "split", c.seeds.split);
      detail::read_opt(s, "init", c.seeds.init);
      detail::read_opt(s, "dropout", c.seeds.dropout);
      detail::read_opt(s, "solver", c.seeds.solver);
    }
    if (j.contains("teacher")) train_config_from_json(j.at("teacher"), c.teacher, false);
    if (j.contains("student")) train_config_from_json(j.at("student"), c.student, true);
    detail::read_opt(j, "exact_time_limit_s", c.exact_time_limit_s);
    detail::read_opt(j, "solver_repeats", c.solver_repeats);
    detail::read_opt(j, "inference_repeats", c.inference_repeats);
    detail::read_opt(j, "jobs", c.jobs);
    c.validate();
    return c;
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("malformed pipeline config: ") + e.what());
  } catch (const InvalidParameter& e) {
    throw ConfigError(e.what());
  }
}

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open config file");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

inline PipelineConfig load_pipeline_config(const std::string& path) {
  return pipeline_config_from_json(load_json_file(path));
}

}  // namespace combhelper
