#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "combhelper/boost.hpp"
#include "combhelper/config.hpp"
#include "combhelper/graph.hpp"
#include "combhelper/labels.hpp"
#include "combhelper/solvers.hpp"
#include "combhelper/trainer.hpp"

namespace combhelper {

/// Shortest runtime a measurement is allowed to report, so speedups stay finite.
inline constexpr double kMinRuntimeS = 1e-9;

inline double speedup(double time_baseline_s, double time_variant_s) {
  if (!(time_baseline_s > 0.0) || !(time_variant_s > 0.0))
    throw InvalidParameter("speedup needs positive times");
  return time_baseline_s / time_variant_s;
}

enum class Variant { kBaseline, kPrunedTeacher, kPruned };

inline std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::kBaseline: return "baseline";
    case Variant::kPrunedTeacher: return "pruned_pt";
    case Variant::kPruned: return "pruned";
  }
  return "?";
}

struct BenchRow {
  std::string graph;
  std::size_t n = 0;
  std::size_t m = 0;
  Problem problem = Problem::kMvc;
  Algorithm solver = Algorithm::kGreedy;
  Variant variant = Variant::kBaseline;
  std::size_t size = 0;
  std::optional<double> coverage;  // MVC only
  double runtime_s = 0.0;
  double speedup = 1.0;
  double prune_ratio = 1.0;
  /// Empty when the oracle could not label the test graph.
  std::optional<double> recall_teacher;
  std::optional<double> recall_kd;
  std::optional<double> recall_student;
  double infer_teacher_ms = 0.0;
  double infer_student_ms = 0.0;
  /// False when an exact run hit its time limit.
  bool optimal = false;
};

struct TrainingSummary {
  int teacher_best_epoch = 0;
  int student_best_epoch = 0;
  int kd_best_epoch = 0;
  double boost_epsilon = 0.0;
  std::size_t teacher_parameters = 0;
  std::size_t student_parameters = 0;
  std::vector<EpochRecord> teacher_log;
  std::vector<EpochRecord> student_log;
};

struct BenchReport {
  PipelineConfig config;
  TrainingSummary training;
  std::vector<BenchRow> rows;
  GcnParams teacher;
  GcnParams student;
  GcnParams kd_student;

  /// Mean speedup over test graphs for one (solver, variant) pair; 0 when absent.
  double average_speedup(Algorithm solver, Variant variant) const {
    double sum = 0.0;
    int count = 0;
    for (const auto& r : rows)
      if (r.solver == solver && r.variant == variant) {
        sum += r.speedup;
        ++count;
      }
    return count ? sum / count : 0.0;
  }
};

namespace detail {

inline double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t k = xs.size() / 2;
  return xs.size() % 2 ? xs[k] : 0.5 * (xs[k - 1] + xs[k]);
}

/// Calls body(i) for i in [0, count) on `jobs` threads; the first exception
/// is rethrown after all workers stop.
template <class Body>
void parallel_for(std::size_t count, int jobs, Body&& body) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> workers;
  const std::size_t n_workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), count);
  for (std::size_t w = 0; w < n_workers; ++w)
    workers.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  for (auto& t : workers) t.join();
  if (failure) std::rethrow_exception(failure);
}

inline Graph materialize(const GraphSpec& spec, std::uint64_t fallback_seed) {
  if (spec.kind == GraphSpec::Kind::kFile) return load_edge_list(spec.path).graph;
  return generate_ba(spec.n, spec.m, spec.seed.value_or(fallback_seed));
}

template <class F>
auto in_phase(const std::string& phase, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    throw PipelineError(phase, e.what());
  }
}

struct TimedPrediction {
  NodeSet good;
  double median_ms = 0.0;
};

inline TimedPrediction timed_predict(const GcnParams& p, const Graph& g, const Matrix& x, int repeats) {
  TimedPrediction out;
  std::vector<double> ms;
  for (int r = 0; r < repeats; ++r) {
    Stopwatch clock;
    NodeSet good = predict_good_nodes(p, g, x);
    ms.push_back(1e3 * clock.seconds());
    if (r == 0) out.good = std::move(good);
  }
  out.median_ms = median(std::move(ms));
  return out;
}

}  // namespace detail

/// The three phases end to end.
///
/// Phase 1 labels the training graph with the oracle and trains the teacher.
/// Phase 2 computes boost weights and trains the boosted student plus a
/// distillation-only student with uniform weights. Phase 3 runs every solver
/// on every test graph three ways: the full space, the teacher's good nodes
/// and the student's good nodes. Solver time excludes inference, which is
/// timed on its own.
inline BenchReport run_pipeline(const PipelineConfig& cfg) {
  cfg.validate();
  BenchReport report;
  report.config = cfg;
  const Problem problem = cfg.problem;

  // Phase 1.
  const Graph train_graph =
      detail::in_phase("load", [&] { return detail::materialize(cfg.train_graph, derive_seed(cfg.seeds.graph, 0)); });
  const Matrix x_train = degree_features(train_graph);
  const LabelSet labels = detail::in_phase("label", [&] {
    return generate_labels(train_graph, problem, cfg.label_oracle, cfg.seeds.split, cfg.exact_time_limit_s);
  });

  TrainConfig tcfg = cfg.teacher;
  tcfg.init_seed = cfg.seeds.init;
  tcfg.dropout_seed = cfg.seeds.dropout;
  TrainResult teacher =
      detail::in_phase("teacher", [&] { return train_teacher(train_graph, x_train, labels, tcfg); });

  // Phase 2. Both students share initialization and dropout streams so the
  // only difference between them is the boost weights.
  TrainConfig scfg = cfg.student;
  scfg.init_seed = derive_seed(cfg.seeds.init, 1);
  scfg.dropout_seed = derive_seed(cfg.seeds.dropout, 1);
  BoostWeights bw;
  TrainResult student, kd;
  detail::in_phase("student", [&] {
    bw = boost_weights(teacher.params, train_graph, x_train, labels, problem);
    student = train_student(train_graph, x_train, labels, teacher.params, bw, scfg);
    kd = train_student(train_graph, x_train, labels, teacher.params, uniform_weights(labels), scfg);
    return 0;
  });

  report.training.teacher_best_epoch = teacher.best_epoch;
  report.training.student_best_epoch = student.best_epoch;
  report.training.kd_best_epoch = kd.best_epoch;
  report.training.boost_epsilon = bw.epsilon;
  report.training.teacher_parameters = teacher.params.parameter_count();
  report.training.student_parameters = student.params.parameter_count();
  report.training.teacher_log = std::move(teacher.log);
  report.training.student_log = std::move(student.log);
  report.teacher = std::move(teacher.params);
  report.student = std::move(student.params);
  report.kd_student = std::move(kd.params);

  // Phase 3.
  for (std::size_t gi = 0; gi < cfg.test_graphs.size(); ++gi) {
    const GraphSpec& spec = cfg.test_graphs[gi];
    const std::string phase = "bench:" + spec.label();
    detail::in_phase(phase, [&] {
      const Graph g = detail::materialize(spec, derive_seed(cfg.seeds.graph, gi + 1));
      const Matrix x = degree_features(g);
      const auto t_pred = detail::timed_predict(report.teacher, g, x, cfg.inference_repeats);
      const auto s_pred = detail::timed_predict(report.student, g, x, cfg.inference_repeats);
      const NodeSet kd_good = predict_good_nodes(report.kd_student, g, x);

      std::optional<double> rec_t, rec_kd, rec_s;
      try {
        const LabelSet truth = generate_labels(g, problem, cfg.label_oracle,
                                               derive_seed(cfg.seeds.split, 1000 + gi), cfg.exact_time_limit_s);
        rec_t = recall(t_pred.good, truth);
        rec_kd = recall(kd_good, truth);
        rec_s = recall(s_pred.good, truth);
      } catch (const OracleTimeout&) {
      }

      const Variant variants[] = {Variant::kBaseline, Variant::kPrunedTeacher, Variant::kPruned};
      const std::size_t n_cells = cfg.solvers.size() * 3;
      std::vector<BenchRow> cells(n_cells);
      detail::parallel_for(n_cells, cfg.jobs, [&](std::size_t c) {
        const std::size_t si = c / 3;
        const Algorithm algo = cfg.solvers[si];
        const Variant variant = variants[c % 3];
        const std::uint64_t seed = derive_seed(derive_seed(cfg.seeds.solver, gi), c);
        const Candidates cand = variant == Variant::kBaseline ? Candidates::all()
                                : variant == Variant::kPrunedTeacher ? Candidates(t_pred.good)
                                                                     : Candidates(s_pred.good);
        std::optional<Solution> first;
        std::vector<double> times;
        for (int r = 0; r < cfg.solver_repeats; ++r) {
          Solution s = run_solver(g, problem, algo, cand, seed, cfg.exact_time_limit_s);
          times.push_back(std::max(s.runtime_s, kMinRuntimeS));
          if (!first) first = std::move(s);
        }
        BenchRow& row = cells[c];
        row.graph = spec.label();
        row.n = g.num_nodes();
        row.m = g.num_edges();
        row.problem = problem;
        row.solver = algo;
        row.variant = variant;
        row.size = first->nodes.size();
        if (problem == Problem::kMvc) row.coverage = coverage(g, *first);
        row.runtime_s = detail::median(std::move(times));
        row.optimal = first->optimal;
        const std::size_t pruned_size = variant == Variant::kBaseline        ? g.num_nodes()
                                        : variant == Variant::kPrunedTeacher ? t_pred.good.size()
                                                                             : s_pred.good.size();
        row.prune_ratio = g.num_nodes() ? static_cast<double>(pruned_size) / static_cast<double>(g.num_nodes()) : 1.0;
        row.recall_teacher = rec_t;
        row.recall_kd = rec_kd;
        row.recall_student = rec_s;
        row.infer_teacher_ms = t_pred.median_ms;
        row.infer_student_ms = s_pred.median_ms;
      });
      for (std::size_t c = 0; c < n_cells; ++c)
        cells[c].speedup = speedup(cells[c - c % 3].runtime_s, cells[c].runtime_s);
      for (auto& r : cells) report.rows.push_back(std::move(r));
      return 0;
    });
  }
  return report;
}

}  // namespace combhelper
