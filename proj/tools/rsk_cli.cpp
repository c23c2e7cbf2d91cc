// rsk: command-line front end for the metric and experiment library.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rsk/error.hpp"
#include "rsk/experiments.hpp"
#include "rsk/io.hpp"
#include "rsk/kernels.hpp"
#include "rsk/parallel.hpp"
#include "rsk/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<std::string> split_list(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const std::string& item : items) {
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (!part.empty()) out.push_back(part);
    }
  }
  return out;
}

std::vector<double> parse_alphas(const std::string& text) {
  std::vector<double> out;
  for (const std::string& s : split_list({text})) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size()) throw rsk::ContractError("--alphas: cannot parse '" + s + "'");
    out.push_back(v);
  }
  return out;
}

rsk::Preprocessing default_preprocessing(rsk::MetricKind k) {
  switch (k) {
    case rsk::MetricKind::kSoftCorrelation:
    case rsk::MetricKind::kSemiMatching:
    case rsk::MetricKind::kRectangular:
      return rsk::Preprocessing::kCenteredUnitColumns;
    default:
      return rsk::Preprocessing::kCenteredFrobUnit;
  }
}

rsk::Preprocessing resolve_preprocessing(rsk::MetricKind k, const std::string& flag) {
  const rsk::Preprocessing p = flag.empty() ? default_preprocessing(k) : rsk::parse_preprocessing(flag);
  rsk::require_preprocessing(k, p);
  return p;
}

json envelope(std::string_view command) {
  return json{{"schema", rsk::kReportSchema},
              {"version", rsk::version()},
              {"command", command}};
}

void emit(const json& doc, const std::string& out_path) {
  const std::string text = doc.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw rsk::ParseError("cannot open output file '" + out_path + "'");
  f << text;
  if (!f) throw rsk::ParseError("failed writing '" + out_path + "'");
}

// Scores one pair under each requested metric. Inputs are raw; each metric
// gets its own preprocessing.
json compare_pair(const rsk::ActivationMatrix& x, const rsk::ActivationMatrix& y,
                  const std::vector<rsk::MetricKind>& metrics, const std::string& preprocess_flag,
                  json& timing) {
  json results = json::array();
  std::optional<double> soft, hard;
  std::optional<rsk::Preprocessing> soft_p, hard_p;
  for (rsk::MetricKind k : metrics) {
    const auto t0 = Clock::now();
    const rsk::Preprocessing p = resolve_preprocessing(k, preprocess_flag);
    const rsk::ActivationMatrix px = rsk::preprocess(x, p);
    const rsk::ActivationMatrix py = rsk::preprocess(y, p);
    const rsk::MetricReport r = rsk::make_report(k, px, py);
    results.push_back(rsk::to_json(r));
    timing[std::string(rsk::cli_name(k))] = seconds_since(t0);
    if (k == rsk::MetricKind::kSoftDistance) soft = r.evaluation.value, soft_p = p;
    if (k == rsk::MetricKind::kOneToOne) hard = r.evaluation.value, hard_p = p;
  }
  json out{{"results", std::move(results)}};
  if (soft && hard && soft_p == hard_p) {
    const double n = static_cast<double>(x.units());
    const double scaled = std::sqrt(n) * *soft;
    out["relations"] = {{"sqrt_n_soft_distance", scaled},
                        {"one_to_one_minus_sqrt_n_soft", *hard - scaled}};
  }
  return out;
}

struct CompareArgs {
  std::string x, y, preprocess, out;
  std::vector<std::string> metrics{"soft"};
  std::uint64_t seed = 0;
};

std::vector<rsk::MetricKind> parse_metrics(const std::vector<std::string>& names) {
  std::vector<rsk::MetricKind> out;
  for (const std::string& s : split_list(names)) out.push_back(rsk::parse_metric(s));
  if (out.empty()) throw rsk::ContractError("--metric: at least one metric is required");
  return out;
}

void run_compare(const CompareArgs& a) {
  const auto t0 = Clock::now();
  const std::vector<rsk::MetricKind> metrics = parse_metrics(a.metrics);
  const rsk::ActivationMatrix x = rsk::io::load_activations(a.x);
  const rsk::ActivationMatrix y = rsk::io::load_activations(a.y);
  json timing = json::object();
  json doc = envelope("compare");
  doc["x"] = a.x;
  doc["y"] = a.y;
  doc["seed"] = a.seed;
  doc.update(compare_pair(x, y, metrics, a.preprocess, timing));
  timing["total_seconds"] = seconds_since(t0);
  doc["timing"] = timing;
  emit(doc, a.out);
}

struct BatchArgs {
  std::string pairs, preprocess, out;
  std::vector<std::string> metrics{"soft"};
};

// Pairs file: one "x_path,y_path" per line; relative paths resolve against
// the pairs file's directory.
void run_batch(const BatchArgs& a) {
  const auto t0 = Clock::now();
  const std::vector<rsk::MetricKind> metrics = parse_metrics(a.metrics);
  std::ifstream in(a.pairs);
  if (!in) throw rsk::ParseError("cannot open pairs file '" + a.pairs + "'");
  const fs::path base = fs::path(a.pairs).parent_path();
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw rsk::ParseError("pairs file line " + std::to_string(lineno) + ": expected 'x,y'");
    }
    auto resolve = [&](std::string p) { return fs::path(p).is_absolute() ? p : (base / p).string(); };
    pairs.emplace_back(resolve(line.substr(0, comma)), resolve(line.substr(comma + 1)));
  }

  std::vector<json> out(pairs.size());
  rsk::parallel_for(pairs.size(), [&](std::size_t i) {
    json timing = json::object();
    const auto x = rsk::io::load_activations(pairs[i].first);
    const auto y = rsk::io::load_activations(pairs[i].second);
    json entry{{"x", pairs[i].first}, {"y", pairs[i].second}};
    entry.update(compare_pair(x, y, metrics, a.preprocess, timing));
    entry["timing"] = timing;
    out[i] = std::move(entry);
  });
  json doc = envelope("batch");
  doc["pairs"] = out;
  doc["timing"] = {{"total_seconds", seconds_since(t0)}};
  emit(doc, a.out);
}

struct SweepArgs {
  std::string x, y, metric = "soft-corr", preprocess, out, csv;
  std::string alphas = "0,0.25,0.5,0.75,1";
  std::size_t samples = 1;
  std::uint64_t seed = 0;
};

void run_sweep(const SweepArgs& a) {
  const auto t0 = Clock::now();
  rsk::RotationSweepConfig cfg;
  cfg.metric = rsk::parse_metric(a.metric);
  cfg.alphas = parse_alphas(a.alphas);
  cfg.samples = a.samples;
  cfg.seed = a.seed;
  cfg.validate();
  const rsk::Preprocessing p = resolve_preprocessing(cfg.metric, a.preprocess);
  const rsk::ActivationMatrix x = rsk::preprocess(rsk::io::load_activations(a.x), p);
  const rsk::ActivationMatrix y =
      a.y.empty() ? x : rsk::preprocess(rsk::io::load_activations(a.y), p);
  const rsk::SweepResult r = rsk::rotation_sweep(x, y, cfg);

  if (!a.csv.empty()) {
    std::ofstream f(a.csv);
    if (!f) throw rsk::ParseError("cannot open csv output '" + a.csv + "'");
    f << "alpha,mean,stddev\n";
    f.precision(17);
    for (std::size_t k = 0; k < r.alphas.size(); ++k) {
      f << r.alphas[k] << ',' << r.mean[k] << ',' << r.stddev[k] << '\n';
    }
  }
  json doc = envelope("sweep");
  doc["x"] = a.x;
  doc["y"] = a.y.empty() ? a.x : a.y;
  doc["seed"] = a.seed;
  doc["result"] = rsk::to_json(r);
  doc["timing"] = {{"total_seconds", seconds_since(t0)}};
  emit(doc, a.out);
}

struct PredictivityArgs {
  std::string model, target, preprocess = "raw", out;
  std::uint64_t seed = 0;
};

void run_predictivity(const PredictivityArgs& a) {
  const auto t0 = Clock::now();
  const rsk::Preprocessing p = rsk::parse_preprocessing(a.preprocess);
  const auto model = rsk::preprocess(rsk::io::load_activations(a.model), p);
  const auto target = rsk::preprocess(rsk::io::load_activations(a.target), p);
  rsk::PredictivityConfig cfg;
  cfg.seed = a.seed;
  cfg.validate();
  const rsk::PredictivityResult r = rsk::linear_predictivity(model, target, cfg);
  json doc = envelope("predictivity");
  doc["model"] = a.model;
  doc["target"] = a.target;
  doc["seed"] = a.seed;
  doc["preprocessing"] = rsk::to_string(p);
  doc["result"] = rsk::to_json(r);
  doc["timing"] = {{"total_seconds", seconds_since(t0)}};
  emit(doc, a.out);
}

struct AxiomArgs {
  std::string metric = "soft", nuisance, out;
  std::size_t triples = 20, stimuli = 20, max_units = 8;
  std::uint64_t seed = 0;
};

void run_axioms(const AxiomArgs& a) {
  const auto t0 = Clock::now();
  const rsk::MetricKind k = rsk::parse_metric(a.metric);
  if (!rsk::is_distance(k)) {
    throw rsk::ContractError("axioms: '" + a.metric + "' is a similarity score, not a distance");
  }
  if (a.triples == 0 || a.stimuli < 2 || a.max_units == 0) {
    throw rsk::ContractError("axioms: need triples >= 1, stimuli >= 2, max-units >= 1");
  }
  rsk::NuisanceClass nuisance =
      k == rsk::MetricKind::kProcrustes ? rsk::NuisanceClass::kOrthogonal : rsk::NuisanceClass::kPermutation;
  if (a.nuisance == "perm") nuisance = rsk::NuisanceClass::kPermutation;
  else if (a.nuisance == "orth") nuisance = rsk::NuisanceClass::kOrthogonal;
  else if (!a.nuisance.empty()) throw rsk::ContractError("--nuisance must be perm or orth");

  // Hard matching and Procrustes need equal sizes within a triple.
  const bool equal_sizes = k != rsk::MetricKind::kSoftDistance;
  const rsk::Preprocessing p = default_preprocessing(k);
  rsk::Rng rng(a.seed);
  std::vector<rsk::ActivationTriple> triples;
  for (std::size_t t = 0; t < a.triples; ++t) {
    const std::size_t n = 1 + rng.below(a.max_units);
    auto draw = [&] {
      const std::size_t units = equal_sizes ? n : 1 + rng.below(a.max_units);
      return rsk::preprocess(rsk::ActivationMatrix(rng.normal_matrix(a.stimuli, units)), p);
    };
    rsk::ActivationMatrix x = draw(), y = draw(), z = draw();
    triples.push_back({std::move(x), std::move(y), std::move(z)});
  }
  const rsk::DistanceFunction f = [k](const rsk::ActivationMatrix& x, const rsk::ActivationMatrix& y) {
    return rsk::metric_value(k, x, y);
  };
  const rsk::AxiomReport r = rsk::check_metric_axioms(f, triples, nuisance, a.seed);
  json doc = envelope("axioms");
  doc["metric"] = rsk::report_name(k);
  doc["nuisance"] = nuisance == rsk::NuisanceClass::kOrthogonal ? "orthogonal" : "permutation";
  doc["preprocessing"] = rsk::to_string(p);
  doc["seed"] = a.seed;
  doc["result"] = rsk::to_json(r);
  doc["timing"] = {{"total_seconds", seconds_since(t0)}};
  emit(doc, a.out);
}

struct FixtureArgs {
  std::string kind, out_dir = ".";
  std::size_t stimuli = 200, units = 10, targets = 4;
  std::uint64_t seed = 0;
};

void run_fixture(const FixtureArgs& a) {
  fs::create_directories(a.out_dir);
  const fs::path dir(a.out_dir);
  json written = json::array();
  auto save = [&](const std::string& name, const rsk::Matrix& m) {
    rsk::io::save_matrix(dir / name, m, rsk::io::FileFormat::kCsv);
    written.push_back((dir / name).string());
  };
  if (a.kind == "fig3a") {
    const rsk::Fig3aNetworks f = rsk::build_fig3a_networks();
    save("x.csv", f.x.data());
    save("y.csv", f.y.data());
    save("z.csv", f.z.data());
  } else if (a.kind == "linear") {
    rsk::Rng rng(a.seed);
    const rsk::Matrix model = rng.normal_matrix(a.stimuli, a.units);
    const rsk::Matrix weights = rng.normal_matrix(a.units, a.targets);
    save("model.csv", model);
    save("target.csv", model * weights);
    save("noise.csv", rng.normal_matrix(a.stimuli, a.targets));
  } else {
    throw rsk::ContractError("fixture: unknown kind '" + a.kind + "' (fig3a, linear)");
  }
  json doc = envelope("fixture");
  doc["kind"] = a.kind;
  doc["files"] = written;
  emit(doc, "");
}

int report_error(std::string_view kind, const std::string& message, int code) {
  json err{{"schema", rsk::kReportSchema},
           {"error", {{"kind", kind}, {"message", message}, {"exit_code", code}}}};
  std::cerr << err.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Permutation-invariant representational similarity metrics"};
  app.set_version_flag("--version", std::string(rsk::version()));
  app.require_subcommand(1);

  CompareArgs compare;
  auto* c = app.add_subcommand("compare", "Score two activation files with one or more metrics");
  c->add_option("--x", compare.x, "Activation file (rows = stimuli)")->required();
  c->add_option("--y", compare.y, "Activation file (rows = stimuli)")->required();
  c->add_option("--metric", compare.metrics, "soft, soft-corr, one2one, semi, rect, procrustes (comma list)");
  c->add_option("--preprocess", compare.preprocess, "frob, unit-cols, unit-cols-uncentered, raw");
  c->add_option("--seed", compare.seed);
  c->add_option("--out", compare.out, "Write JSON here instead of stdout");

  BatchArgs batch;
  auto* b = app.add_subcommand("batch", "Score many file pairs in parallel");
  b->add_option("--pairs", batch.pairs, "File of 'x,y' path pairs, one per line")->required();
  b->add_option("--metric", batch.metrics);
  b->add_option("--preprocess", batch.preprocess);
  b->add_option("--out", batch.out);

  SweepArgs sweep;
  auto* s = app.add_subcommand("sweep", "Score (X·Q^α, Y) along a path from I to a Haar rotation");
  s->add_option("--x", sweep.x)->required();
  s->add_option("--y", sweep.y, "Defaults to --x (self-comparison)");
  s->add_option("--metric", sweep.metric);
  s->add_option("--preprocess", sweep.preprocess);
  s->add_option("--alphas", sweep.alphas, "Comma list in [0, 1]");
  s->add_option("--samples", sweep.samples, "Independent Haar rotations");
  s->add_option("--seed", sweep.seed);
  s->add_option("--out", sweep.out);
  s->add_option("--csv", sweep.csv, "Write alpha,mean,stddev rows here");

  PredictivityArgs pred;
  auto* p = app.add_subcommand("predictivity", "Ridge-regression predictivity of target from model");
  p->add_option("--model", pred.model)->required();
  p->add_option("--target", pred.target)->required();
  p->add_option("--preprocess", pred.preprocess);
  p->add_option("--seed", pred.seed);
  p->add_option("--out", pred.out);

  AxiomArgs ax;
  auto* a = app.add_subcommand("axioms", "Check symmetry, triangle inequality and invariance on random data");
  a->add_option("--metric", ax.metric);
  a->add_option("--triples", ax.triples);
  a->add_option("--stimuli", ax.stimuli);
  a->add_option("--max-units", ax.max_units);
  a->add_option("--nuisance", ax.nuisance, "perm or orth");
  a->add_option("--seed", ax.seed);
  a->add_option("--out", ax.out);

  FixtureArgs fx;
  auto* f = app.add_subcommand("fixture", "Write example activation files");
  f->add_option("kind", fx.kind, "fig3a or linear")->required();
  f->add_option("--out-dir", fx.out_dir);
  f->add_option("--stimuli", fx.stimuli);
  f->add_option("--units", fx.units);
  f->add_option("--targets", fx.targets);
  f->add_option("--seed", fx.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return report_error("usage", e.what(), static_cast<int>(rsk::ExitCode::kUsage));
  }

  try {
    if (*c) run_compare(compare);
    else if (*b) run_batch(batch);
    else if (*s) run_sweep(sweep);
    else if (*p) run_predictivity(pred);
    else if (*a) run_axioms(ax);
    else if (*f) run_fixture(fx);
  } catch (const rsk::Error& e) {
    return report_error(e.kind(), e.what(), static_cast<int>(e.exit_code()));
  } catch (const fs::filesystem_error& e) {
    return report_error("io", e.what(), static_cast<int>(rsk::ExitCode::kData));
  } catch (const std::exception& e) {
    return report_error("internal", e.what(), static_cast<int>(rsk::ExitCode::kNumerical));
  }
  return 0;
}
