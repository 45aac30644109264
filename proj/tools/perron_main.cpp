// Command-line front end: ad-hoc solves, Collatz-Wielandt bounds, and the
// built-in reproduction tables.

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "perron/errors.hpp"
#include "perron/experiment.hpp"

namespace {

using perron::InvalidArgumentError;

perron::AlgorithmKind algo_from(const std::string& s) {
  if (s == "cw") return perron::AlgorithmKind::CW;
  if (s == "rayleigh") return perron::AlgorithmKind::Rayleigh;
  if (s == "power") return perron::AlgorithmKind::Power;
  if (s == "fixed-shift") return perron::AlgorithmKind::FixedShift;
  throw InvalidArgumentError("unknown algorithm '" + s +
                             "'; expected cw, rayleigh, power, or fixed-shift");
}

perron::ShiftUpdate update_from(const std::string& s) {
  if (s == "sup") return perron::ShiftUpdate::SupRatio;
  if (s == "mu") return perron::ShiftUpdate::MuInf;
  throw InvalidArgumentError("unknown update '" + s + "'; expected sup or mu");
}

perron::StoppingKind criterion_from(const std::string& s) {
  if (s == "sc1") return perron::StoppingKind::SC1RatioGap;
  if (s == "sc2") return perron::StoppingKind::SC2SolveRatioGap;
  if (s == "dlambda") return perron::StoppingKind::LambdaDiff;
  if (s == "residual") return perron::StoppingKind::Residual2Norm;
  throw InvalidArgumentError("unknown criterion '" + s +
                             "'; expected sc1, sc2, dlambda, or residual");
}

perron::ReportFormat format_from(const std::string& s) {
  if (s == "csv") return perron::ReportFormat::Csv;
  if (s == "md") return perron::ReportFormat::Markdown;
  if (s == "json") return perron::ReportFormat::Json;
  throw InvalidArgumentError("unknown output format '" + s +
                             "'; expected csv, md, or json");
}

void set_v0(perron::ExperimentSpec& spec, const std::string& s) {
  spec.v0_set = true;
  if (s == "ones") {
    spec.v0 = perron::V0Kind::Ones;
  } else if (s == "t-one") {
    spec.v0 = perron::V0Kind::TOne;
  } else if (s.rfind("file:", 0) == 0 && s.size() > 5) {
    spec.v0 = perron::V0Kind::File;
    spec.v0_path = s.substr(5);
  } else {
    throw InvalidArgumentError("unknown v0 '" + s +
                               "'; expected ones, t-one, or file:PATH");
  }
}

double strict_double(const std::string& s, const char* what) {
  std::istringstream ss(s);
  double x = 0.0;
  std::string extra;
  if (!(ss >> x) || (ss >> extra))
    throw InvalidArgumentError(std::string(what) + " must be a number, got '" + s + "'");
  return x;
}

void set_eps(perron::ExperimentSpec& spec, const std::string& s) {
  spec.epsilon_set = true;
  if (s == "quick") {
    spec.epsilon_quick = true;
    return;
  }
  spec.epsilon_quick = false;
  const double eps = strict_double(s, "eps");
  if (!(eps > 0.0)) throw InvalidArgumentError("eps must be positive, got '" + s + "'");
  spec.epsilon = eps;
}

nlohmann::json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw perron::ParseError("cannot open config file: " + path, 0);
  nlohmann::json cfg;
  try {
    cfg = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw perron::ParseError("config file " + path + ": " + e.what(), 0);
  }
  if (!cfg.is_object())
    throw perron::ParseError("config file " + path + " must hold a JSON object", 0);
  static const char* known[] = {"problem", "algo",   "update", "criterion",
                                "eps",     "max_iters", "v0",  "seed",
                                "shift",   "output", "out"};
  for (const auto& item : cfg.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || item.key() == k;
    if (!ok)
      throw InvalidArgumentError("unknown config field '" + item.key() + "' in " + path);
  }
  return cfg;
}

std::string config_string(const nlohmann::json& cfg, const char* key) {
  if (!cfg.at(key).is_string())
    throw InvalidArgumentError(std::string("config field '") + key + "' must be a string");
  return cfg.at(key).get<std::string>();
}

void write_text(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::fputs(text.c_str(), stdout);
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw perron::ParseError("cannot write output file: " + out_path, 0);
  out << text;
  if (!out) throw perron::ParseError("failed writing output file: " + out_path, 0);
}

struct CommonFlags {
  std::string problem, v0, output, out;
  std::uint64_t seed = perron::kDefaultSeed;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_problem) {
  if (with_problem)
    cmd->add_option("--problem", f.problem,
                    "hilbert:N | tridiagonal:N | matrix-file:PATH | "
                    "unit-square:H | l-shape:H | mask-file:PATH");
  cmd->add_option("--seed", f.seed, "random-tridiagonal seed");
  cmd->add_option("--output", f.output, "csv | md | json")->default_str("csv");
  cmd->add_option("--out", f.out, "write the report here instead of stdout");
}

int run_cli(int argc, char** argv) {
  CLI::App app{"principal eigenpair solves for positive operators"};
  app.require_subcommand(1);

  auto* solve = app.add_subcommand("solve", "run one experiment, print the per-step report");
  CommonFlags sf;
  std::string algo, update, criterion, eps, v0, config_path, shift_str;
  int max_iters = 0;
  add_common(solve, sf, true);
  solve->add_option("--algo", algo, "cw | rayleigh | power | fixed-shift");
  solve->add_option("--update", update, "sup | mu (variable-shift update)");
  solve->add_option("--criterion", criterion, "sc1 | sc2 | dlambda | residual");
  solve->add_option("--eps", eps, "stopping tolerance, or 'quick' for h^2/10 on grids");
  solve->add_option("--max-iters", max_iters, "iteration cap")->check(CLI::PositiveNumber);
  solve->add_option("--v0", v0, "ones | t-one | file:PATH");
  solve->add_option("--shift", shift_str, "fixed shift (fixed-shift algorithm only)");
  solve->add_option("--config", config_path, "JSON config; command-line flags win");

  auto* bounds = app.add_subcommand("bounds", "print the Collatz-Wielandt bounds at v0");
  CommonFlags bf;
  std::string bv0;
  add_common(bounds, bf, true);
  bounds->add_option("--v0", bv0, "ones | t-one | file:PATH");

  auto* table = app.add_subcommand(
      "table", "reproduce a built-in sweep over the shipped problems");
  CommonFlags tf;
  std::string table_id;
  table->add_option("id", table_id,
                    "matrix | mesh-error | step-counts | grid-order | rayleigh-compare")
      ->required();
  add_common(table, tf, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 64;
  }

  if (table->parsed()) {
    const perron::ReportFormat fmt = format_from(tf.output.empty() ? "csv" : tf.output);
    const std::string text =
        perron::bench_table(perron::table_from_string(table_id), tf.seed, fmt);
    write_text(text, tf.out);
    return 0;
  }

  if (bounds->parsed()) {
    if (bf.problem.empty()) throw InvalidArgumentError("bounds needs --problem");
    perron::ExperimentSpec spec;
    spec.problem = perron::parse_problem(bf.problem);
    spec.seed = bf.seed;
    if (!bv0.empty()) set_v0(spec, bv0);
    const std::string line = perron::bounds_line(spec);
    const perron::ReportFormat fmt = format_from(bf.output.empty() ? "csv" : bf.output);
    std::string text;
    if (fmt == perron::ReportFormat::Json) {
      std::istringstream ss(line);
      std::string lo, hi;
      ss >> lo >> hi;
      text = "{\n  \"lower\": " + lo + ",\n  \"upper\": " + hi + "\n}\n";
    } else {
      text = line + "\n";
    }
    write_text(text, bf.out);
    return 0;
  }

  // solve: merge config (if any) under the flags, flags win.
  nlohmann::json cfg = nlohmann::json::object();
  if (!config_path.empty()) cfg = load_config(config_path);
  perron::ExperimentSpec spec;

  std::string problem_text = sf.problem;
  if (problem_text.empty() && cfg.contains("problem"))
    problem_text = config_string(cfg, "problem");
  if (problem_text.empty()) throw InvalidArgumentError("solve needs --problem");
  spec.problem = perron::parse_problem(problem_text);

  if (solve->count("--seed"))
    spec.seed = sf.seed;
  else if (cfg.contains("seed"))
    spec.seed = cfg.at("seed").get<std::uint64_t>();

  std::string algo_text = algo;
  if (algo_text.empty() && cfg.contains("algo")) algo_text = config_string(cfg, "algo");
  if (!algo_text.empty()) spec.algo = algo_from(algo_text);

  std::string update_text = update;
  if (update_text.empty() && cfg.contains("update"))
    update_text = config_string(cfg, "update");
  if (!update_text.empty()) {
    spec.update = update_from(update_text);
    spec.update_set = true;
  }

  std::string crit_text = criterion;
  if (crit_text.empty() && cfg.contains("criterion"))
    crit_text = config_string(cfg, "criterion");
  if (!crit_text.empty()) {
    spec.criterion = criterion_from(crit_text);
    spec.criterion_set = true;
  }

  if (!eps.empty()) {
    set_eps(spec, eps);
  } else if (cfg.contains("eps")) {
    const auto& j = cfg.at("eps");
    if (j.is_string())
      set_eps(spec, j.get<std::string>());
    else if (j.is_number())
      set_eps(spec, [&] {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", j.get<double>());
        return std::string(buf);
      }());
    else
      throw InvalidArgumentError("config field 'eps' must be a number or \"quick\"");
  }

  if (solve->count("--max-iters")) {
    spec.max_iters = max_iters;
  } else if (cfg.contains("max_iters")) {
    const long long m = cfg.at("max_iters").get<long long>();
    if (m < 1) throw InvalidArgumentError("config field 'max_iters' must be positive");
    spec.max_iters = static_cast<int>(m);
  }

  std::string v0_text = v0;
  if (v0_text.empty() && cfg.contains("v0")) v0_text = config_string(cfg, "v0");
  if (!v0_text.empty()) set_v0(spec, v0_text);

  if (!shift_str.empty()) {
    spec.shift = strict_double(shift_str, "shift");
    spec.shift_set = true;
  } else if (cfg.contains("shift")) {
    spec.shift = cfg.at("shift").get<double>();
    spec.shift_set = true;
  }

  std::string output_text = sf.output;
  if (output_text.empty() && cfg.contains("output"))
    output_text = config_string(cfg, "output");
  spec.output = format_from(output_text.empty() ? "csv" : output_text);

  std::string out_path = sf.out;
  if (out_path.empty() && cfg.contains("out")) out_path = config_string(cfg, "out");

  const perron::RunOutcome outcome = perron::run_experiment(spec);
  write_text(outcome.text, out_path);
  return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const perron::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 66;
  } catch (const perron::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 64;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 70;
  }
}
