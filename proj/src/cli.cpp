#include "augtrack/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>

#include "augtrack/analysis.hpp"
#include "augtrack/error.hpp"
#include "augtrack/json_io.hpp"
#include "augtrack/simulate.hpp"
#include "augtrack/validation.hpp"

namespace augtrack {
namespace {

std::string fixed(real v, int decimals) {
  if (std::isnan(v)) return "n/a";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*Lf", decimals, v);
  return buf;
}

std::string sci(real v, int digits = 3) {
  if (std::isnan(v)) return "n/a";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*Lg", digits, v);
  return buf;
}

std::string join(const Vector& v, int decimals) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fixed(v[i], decimals);
  return s + "]";
}

std::string stem_of(const std::string& path) { return std::filesystem::path(path).stem().string(); }

FilterDesign load_filter(const std::string& path) {
  return design_from_json(read_json_file(path), stem_of(path));
}

void print_design_summary(std::ostream& out, const FilterDesign& d) {
  out << "K = " << d.tf.order() << "\n";
  if (d.kind == FilterDesign::Kind::alpha_beta) {
    out << "alpha = " << fixed(d.alpha_beta->alpha, 4) << ", beta = " << fixed(d.alpha_beta->beta, 4)
        << "\n";
    const real a1 = d.tf.a[1], a2 = d.tf.a[2];
    const complex disc = std::sqrt(complex(a1 * a1 - 4.0L * a2));
    const complex r1 = (-a1 + disc) / 2.0L, r2 = (-a1 - disc) / 2.0L;
    out << "poles = " << fixed(r1.real(), 4) << (r1.imag() < 0 ? " - " : " + ")
        << fixed(std::abs(r1.imag()), 4) << "i, " << fixed(r2.real(), 4)
        << (r2.imag() < 0 ? " - " : " + ") << fixed(std::abs(r2.imag()), 4) << "i\n";
  } else {
    out << "poles = " << fixed(d.spec.pole, 4) << " (x" << d.tf.order() << ")\n";
  }
  out << "b = " << join(d.tf.b, 4) << "\n";
  out << "a = " << join(d.tf.a, 4) << "\n";
}

void print_metrics(std::ostream& out, const MetricsReport& m) {
  auto row = [&](const char* name, const std::string& v) {
    out << "  " << std::left << std::setw(16) << name << v << "\n";
  };
  row("WNG", fixed(m.wng, 3) + " (" + fixed(m.wng_db, 3) + " dB)");
  row("MESG", sci(m.mesg) + " (" + fixed(m.mesg_db, 2) + " dB)");
  row("sigma_tgt", fixed(m.sigma_tgt, 3));
  row("sigma_man", fixed(m.sigma_man, 3));
  row("eps_R", fixed(m.eps_r, 3));
  row("eps_theta (deg)", fixed(m.eps_theta_deg, 3));
  row("|H|inf^2", fixed(m.h_inf_sq, 4) + " at omega = " + fixed(m.omega_max, 4));
  const bool flat = std::all_of(m.flatness.begin(), m.flatness.end(),
                                [](const FlatnessResidual& r) { return r.passes(); });
  row("flatness", flat ? "pass" : "FAIL");
}

int cmd_design(const std::string& spec_path, const std::string& out_path, std::ostream& out) {
  const FilterDesign d = load_filter(spec_path);
  const std::string text = dump_json(design_to_json(d));
  if (out_path.empty()) {
    out << text;
  } else {
    write_text_file(out_path, text);
    print_design_summary(out, d);
    out << "wrote " << out_path << "\n";
  }
  return kExitOk;
}

struct AnalyzeArgs {
  std::string design;
  std::size_t grid = 2048;
  std::optional<real> omega_man;
  real sigma_sns = 1;
  real radius = 10;
  std::string prefix = "analysis";
};

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out) {
  const FilterDesign d = load_filter(a.design);
  AnalysisOptions opts;
  if (a.omega_man) opts.omega_man = *a.omega_man;
  opts.sigma_sns = a.sigma_sns;
  opts.radius = a.radius;
  const MetricsReport m = analyze(d.tf, d.spec, opts);

  const std::string metrics_path = a.prefix + "_metrics.json";
  const std::string csv_path = a.prefix + "_response.csv";
  write_text_file(metrics_path, dump_json(metrics_to_json(m, d.spec)));
  std::ostringstream csv;
  write_response_csv(csv, response_table(d.tf, d.spec.lag_q, a.grid));
  write_text_file(csv_path, csv.str());

  out << (d.name.empty() ? std::string("filter") : d.name) << ":\n";
  print_metrics(out, m);
  out << "wrote " << metrics_path << ", " << csv_path << "\n";
  return kExitOk;
}

struct SimulateArgs {
  std::optional<int> scenario;
  std::string config;
  int reps = 100;
  std::optional<std::uint64_t> seed;
  std::optional<int> frames;
  std::optional<int> lag;
  std::vector<std::string> filters;
  std::string out_path;
  std::string frames_csv;
};

std::string frames_path_for(const std::string& base, const std::string& name, bool many) {
  if (!many) return base;
  const std::filesystem::path p(base);
  return (p.parent_path() / (p.stem().string() + "_" + name + p.extension().string())).string();
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  ScenarioConfig cfg;
  if (!a.config.empty()) {
    cfg = scenario_from_json(read_json_file(a.config));
    if (a.scenario && *a.scenario != cfg.id) {
      err << "error: --scenario " << *a.scenario << " conflicts with id " << cfg.id << " in "
          << a.config << "\n";
      return kExitUsage;
    }
  } else if (a.scenario) {
    cfg = ScenarioConfig::defaults(*a.scenario);
  } else {
    err << "error: --scenario or --config is required\n";
    return kExitUsage;
  }
  if (a.seed) cfg.seed = *a.seed;
  if (const char* env = std::getenv("AUGTRACK_SEED"); env && *env) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0' || env[0] == '-') {
      err << "error: AUGTRACK_SEED must be a non-negative integer\n";
      return kExitUsage;
    }
    cfg.seed = v;
  }
  if (a.frames) cfg.n_frames = *a.frames;
  cfg.validate();

  std::vector<FilterDesign> filters;
  for (const auto& path : a.filters) filters.push_back(load_filter(path));
  const auto results = mc_evaluate(cfg, filters, a.reps, a.lag);

  const std::string text = dump_json(sim_results_to_json(cfg, results));
  if (!a.frames_csv.empty()) {
    for (const auto& r : results) {
      std::ostringstream csv;
      write_frames_csv(csv, r.frames);
      write_text_file(frames_path_for(a.frames_csv, r.filter, results.size() > 1), csv.str());
    }
  }
  if (a.out_path.empty()) {
    out << text;
    return kExitOk;
  }
  write_text_file(a.out_path, text);
  out << "scenario " << cfg.id << ", " << a.reps << " reps, seed " << cfg.seed << "\n";
  out << std::left << std::setw(10) << "filter" << std::setw(12) << "sigma_d" << std::setw(12)
      << "term dist" << std::setw(12) << "term eps_R" << "term eps_theta\n";
  for (const auto& r : results)
    out << std::left << std::setw(10) << r.filter << std::setw(12) << fixed(r.sigma_d, 3)
        << std::setw(12) << sci(r.terminal.dist) << std::setw(12) << sci(r.terminal.eps_r)
        << sci(r.terminal.eps_theta_deg) << "\n";
  out << "wrote " << a.out_path << "\n";
  return kExitOk;
}

int cmd_validate(real perturb, std::ostream& out) {
  ValidationOptions opts;
  opts.perturb = perturb;
  const auto checks = run_golden_suite(opts);
  std::size_t failed = 0;
  std::string group;
  for (const auto& c : checks) {
    if (c.group != group) {
      group = c.group;
      out << "\n" << group << "\n";
    }
    const bool bound = c.reference.rfind("<=", 0) == 0;
    const std::string computed =
        bound ? sci(c.computed, 2) : format_like(c.reference, c.computed);
    out << "  " << std::left << std::setw(30) << c.item << std::setw(12) << c.reference
        << std::setw(14) << computed << "tol " << std::setw(10) << sci(c.tolerance, 2)
        << (c.pass ? "PASS" : "FAIL") << "\n";
    if (!c.pass) ++failed;
  }
  out << "\n" << checks.size() - failed << "/" << checks.size() << " checks passed\n";
  return failed ? kExitValidation : kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fixed-gain augmented-state tracking filter design and validation", "augtrack"};
  app.require_subcommand(1);

  std::string spec_path, design_out;
  auto* design = app.add_subcommand("design", "Design a filter from a model spec JSON file");
  design->add_option("spec", spec_path, "Model spec (or alpha-beta spec) JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  design->add_option("-o,--out", design_out, "Write the design JSON here (default: stdout)");

  AnalyzeArgs an;
  double omega_man = 0, sigma_sns = 1, radius = 10;
  auto* analyze_cmd = app.add_subcommand("analyze", "Compute metrics and the frequency response");
  analyze_cmd->add_option("design", an.design, "Design (or spec) JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  analyze_cmd->add_option("--grid", an.grid, "Rows in the response CSV")
      ->check(CLI::Range(std::size_t{1}, std::size_t{10'000'000}));
  auto* omega_opt = analyze_cmd->add_option("--omega-man", omega_man,
                                            "Maneuver frequency in rad/sample (default omega*ts)")
                        ->check(CLI::Range(0.0, 3.141592653589793));
  analyze_cmd->add_option("--sigma-sns", sigma_sns, "Measurement noise std [pix]")
      ->check(CLI::NonNegativeNumber);
  analyze_cmd->add_option("--radius", radius, "Turn radius [pix]")->check(CLI::NonNegativeNumber);
  analyze_cmd->add_option("-o,--out-prefix", an.prefix,
                          "Output prefix for _metrics.json and _response.csv");

  SimulateArgs sim;
  int scenario = 0, frames = 0, lag = 0;
  std::uint64_t seed = 0;
  auto* simulate = app.add_subcommand("simulate", "Run a scenario through one or more filters");
  auto* scenario_opt = simulate->add_option("--scenario", scenario, "Scenario id")
                           ->check(CLI::IsMember({1, 2, 3}));
  simulate->add_option("--config", sim.config, "Scenario config JSON file")
      ->check(CLI::ExistingFile);
  simulate->add_option("--reps", sim.reps, "Monte-Carlo repetitions")->check(CLI::PositiveNumber);
  auto* seed_opt = simulate->add_option("--seed", seed, "Base seed (AUGTRACK_SEED overrides)");
  auto* frames_opt =
      simulate->add_option("--frames", frames, "Frames per run")->check(CLI::PositiveNumber);
  auto* lag_opt = simulate->add_option("--lag", lag, "Score against truth delayed by this lag")
                      ->check(CLI::Range(-kMaxTruthLag, kMaxTruthLag));
  simulate->add_option("--filter", sim.filters, "Design (or spec) JSON file; repeatable")
      ->required()
      ->check(CLI::ExistingFile);
  simulate->add_option("-o,--out", sim.out_path, "Write the stats JSON here (default: stdout)");
  simulate->add_option("--frames-csv", sim.frames_csv, "Per-frame CSV of the first repetition");

  double perturb = 0;
  auto* validate = app.add_subcommand("validate", "Run the golden-value suite");
  validate->add_option("--perturb", perturb, "Offset added to b[0] of filter B (self-test)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*design) return cmd_design(spec_path, design_out, out);
    if (*analyze_cmd) {
      if (*omega_opt) an.omega_man = static_cast<real>(omega_man);
      an.sigma_sns = static_cast<real>(sigma_sns);
      an.radius = static_cast<real>(radius);
      return cmd_analyze(an, out);
    }
    if (*simulate) {
      if (*scenario_opt) sim.scenario = scenario;
      if (*seed_opt) sim.seed = seed;
      if (*frames_opt) sim.frames = frames;
      if (*lag_opt) sim.lag = lag;
      return cmd_simulate(sim, out, err);
    }
    if (*validate) return cmd_validate(static_cast<real>(perturb), out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace augtrack
