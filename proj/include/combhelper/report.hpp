#pragma once

#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "combhelper/config.hpp"
#include "combhelper/params_io.hpp"
#include "combhelper/pipeline.hpp"

namespace combhelper {

inline constexpr std::string_view kCsvHeader =
    "graph,n,m,problem,solver,variant,size,coverage,runtime_s,speedup,prune_ratio,"
    "recall_teacher,recall_kd,recall_student,infer_teacher_ms,infer_student_ms";

/// Columns whose values are wall-clock measurements.
inline constexpr std::string_view kTimingColumns[] = {"runtime_s", "speedup", "infer_teacher_ms",
                                                      "infer_student_ms"};

/// Choices the method leaves open, echoed into every JSON report.
inline Json report_meta() {
  return {{"feature", "degree / average degree"},
          {"input_dropout", false},
          {"hidden_dropout", "after each hidden ReLU, inverted"},
          {"layer_bias", true},
          {"neighbor_init_scale", "1 / average degree of the training graph"},
          {"boost_order", "adaboost factor, then degree factor, then rescale to sum |train|"},
          {"checkpoint", "best validation loss"},
          {"recall_truth", "label oracle re-run on each test graph"}};
}

inline void write_csv(std::ostream& out, const BenchReport& r) {
  auto num = [](double x) { return detail::format_double(x); };
  auto opt = [&](const std::optional<double>& x) { return x ? num(*x) : std::string(); };
  out << kCsvHeader << '\n';
  for (const auto& row : r.rows)
    out << row.graph << ',' << row.n << ',' << row.m << ',' << to_string(row.problem) << ','
        << to_string(row.solver) << ',' << to_string(row.variant) << ',' << row.size << ','
        << opt(row.coverage) << ',' << num(row.runtime_s) << ',' << num(row.speedup) << ','
        << num(row.prune_ratio) << ',' << opt(row.recall_teacher) << ',' << opt(row.recall_kd) << ','
        << opt(row.recall_student) << ',' << num(row.infer_teacher_ms) << ',' << num(row.infer_student_ms)
        << '\n';
}

inline Json to_json(const BenchReport& r) {
  auto opt = [](const std::optional<double>& x) { return x ? Json(*x) : Json(nullptr); };
  Json j;
  j["config"] = to_json(r.config);
  j["meta"] = report_meta();
  j["training"] = {{"teacher_best_epoch", r.training.teacher_best_epoch},
                   {"student_best_epoch", r.training.student_best_epoch},
                   {"kd_best_epoch", r.training.kd_best_epoch},
                   {"boost_epsilon", r.training.boost_epsilon},
                   {"teacher_parameters", r.training.teacher_parameters},
                   {"student_parameters", r.training.student_parameters}};
  j["rows"] = Json::array();
  for (const auto& row : r.rows)
    j["rows"].push_back({{"graph", row.graph},
                         {"n", row.n},
                         {"m", row.m},
                         {"problem", to_string(row.problem)},
                         {"solver", to_string(row.solver)},
                         {"variant", to_string(row.variant)},
                         {"size", row.size},
                         {"coverage", opt(row.coverage)},
                         {"runtime_s", row.runtime_s},
                         {"speedup", row.speedup},
                         {"prune_ratio", row.prune_ratio},
                         {"recall_teacher", opt(row.recall_teacher)},
                         {"recall_kd", opt(row.recall_kd)},
                         {"recall_student", opt(row.recall_student)},
                         {"infer_teacher_ms", row.infer_teacher_ms},
                         {"infer_student_ms", row.infer_student_ms},
                         {"optimal", row.optimal}});
  j["average_speedup"] = Json::array();
  for (Algorithm a : r.config.solvers)
    for (Variant v : {Variant::kBaseline, Variant::kPrunedTeacher, Variant::kPruned})
      j["average_speedup"].push_back(
          {{"solver", to_string(a)}, {"variant", to_string(v)}, {"value", r.average_speedup(a, v)}});
  return j;
}

enum class ReportFormat { kCsv, kJson };

inline void emit_report(const BenchReport& r, ReportFormat format, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError(path, "cannot open report for writing");
  if (format == ReportFormat::kCsv)
    write_csv(out, r);
  else
    out << to_json(r).dump(2) << '\n';
  out.flush();
  if (!out) throw IoError(path, "write failed");
}

}  // namespace combhelper
