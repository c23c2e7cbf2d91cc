#include "rsk/report.hpp"

#include <cmath>

#include "rsk/kernels.hpp"

namespace rsk {

using nlohmann::json;

std::string_view version() noexcept { return RSK_VERSION; }

json to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    rows.push_back(std::vector<double>(m.row(i).begin(), m.row(i).end()));
  }
  return rows;
}

namespace {

json nan_as_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json transport_json(const TransportSolution& s) {
  json entries = json::array();
  const Matrix& p = s.plan.p;
  for (std::size_t i = 0; i < p.rows(); ++i) {
    for (std::size_t j = 0; j < p.cols(); ++j) {
      if (p(i, j) > 0.0) entries.push_back(json::array({i, j, p(i, j)}));
    }
  }
  return json{{"type", "transport_plan"},
              {"rows", p.rows()},
              {"cols", p.cols()},
              {"entries", std::move(entries)},
              {"objective", s.objective}};
}

}  // namespace

json to_json(const MetricReport& r) {
  const MetricEvaluation& e = r.evaluation;
  json out{{"metric", r.metric_name},
           {"value", e.value},
           {"preprocessing", to_string(r.preprocessing)},
           {"sizes", {{"stimuli", r.stimuli}, {"units_x", r.units_x}, {"units_y", r.units_y}}}};
  json diagnostics = json::object();
  if (e.transport) {
    out["witness"] = transport_json(*e.transport);
    diagnostics = {{"solver", "network_simplex"},
                   {"status", to_string(e.transport->status)},
                   {"iterations", e.transport->iterations},
                   {"degenerate_pivots", e.transport->degenerate_pivots},
                   {"bland_pivots", e.transport->bland_pivots},
                   {"positive_entries", e.transport->positive_entries},
                   {"max_dual_violation", e.transport->max_dual_violation}};
  } else if (e.assignment) {
    out["witness"] = {{"type", "assignment"}, {"mapping", e.assignment->mapping}};
    diagnostics = {{"solver", "shortest_augmenting_path"}};
  } else if (e.alignment) {
    out["witness"] = {{"type", "orthogonal"}, {"q", to_json(*e.alignment)}};
    diagnostics = {{"solver", "jacobi_svd"}};
  } else {
    out["witness"] = nullptr;
  }
  out["diagnostics"] = std::move(diagnostics);
  return out;
}

json to_json(const SweepResult& r) {
  json samples = json::array();
  for (const SweepSample& s : r.samples) {
    samples.push_back({{"seed", s.seed}, {"resamples", s.resamples}, {"values", s.values}});
  }
  return json{{"metric", report_name(r.metric)},
              {"preprocessing", to_string(r.preprocessing)},
              {"sizes", {{"stimuli", r.stimuli}, {"units_x", r.units_x}, {"units_y", r.units_y}}},
              {"alphas", r.alphas},
              {"mean", r.mean},
              {"stddev", r.stddev},
              {"samples", std::move(samples)}};
}

json to_json(const PredictivityResult& r) {
  json val = json::array();
  for (double v : r.validation_mean_r) val.push_back(nan_as_null(v));
  return json{{"mean_r", r.mean_r},
              {"per_target_r", r.per_target_r},
              {"chosen_penalty", r.chosen_penalty},
              {"penalties", r.penalties},
              {"validation_mean_r", std::move(val)},
              {"split", {{"train", r.train_rows}, {"validation", r.validation_rows}, {"test", r.test_rows}}},
              {"warnings", r.warnings}};
}

json to_json(const AxiomReport& r) {
  return json{{"triples", r.triples},
              {"max_symmetry_violation", r.max_symmetry_violation},
              {"max_triangle_violation", r.max_triangle_violation},
              {"max_identity_value", r.max_identity_value},
              {"symmetry_failures", r.symmetry_failures},
              {"triangle_failures", r.triangle_failures},
              {"identity_failures", r.identity_failures},
              {"passed", r.passed()}};
}

}  // namespace rsk
