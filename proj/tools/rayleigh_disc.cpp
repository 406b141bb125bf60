// Command-line driver: analysis of a single parameter point, parameter
// sweeps, phase-portrait rendering, and the verification suite.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numerical
// failure.

#include "rayleigh/compactification.hpp"
#include "rayleigh/lienardcheck.hpp"
#include "rayleigh/limitcycle.hpp"
#include "rayleigh/localanalysis.hpp"
#include "rayleigh/portrait.hpp"
#include "rayleigh/serialization.hpp"
#include "rayleigh/verification.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <thread>

namespace {

using nlohmann::json;
using namespace rayleigh;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerics = 3;

struct CommonConfig {
  double rtol = 1e-10;
  double atol = 1e-12;
  std::string form = "eq2";
  std::string out;
  std::string format;
  int jobs = 0;
};

SystemForm parse_form(const std::string& form) {
  return form == "eq1" ? SystemForm::Eq1 : SystemForm::Eq2;
}

json config_echo(const CommonConfig& cfg, const std::string& command) {
  return json{{"command", command}, {"form", cfg.form},  {"rtol", cfg.rtol},
              {"atol", cfg.atol},   {"jobs", cfg.jobs},  {"format", cfg.format}};
}

void emit(const CommonConfig& cfg, const std::string& payload) {
  if (cfg.out.empty()) {
    std::cout << payload;
    if (!payload.empty() && payload.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(cfg.out);
  if (!out) throw std::runtime_error("cannot open output file '" + cfg.out + "'");
  out << payload;
}

int effective_jobs(int jobs) {
  return jobs > 0 ? jobs : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

int run_analyze(double a, int n, const CommonConfig& cfg) {
  const RayleighParams params(a, n);
  const SystemForm form = parse_form(cfg.form);
  CycleOptions cycle_opts;
  cycle_opts.integration.rtol = cfg.rtol;
  cycle_opts.integration.atol = cfg.atol;

  json report;
  report["config"] = config_echo(cfg, "analyze");
  report["config"]["a"] = a;
  report["config"]["n"] = n;

  const PlanarPolySystem sys = family_system(params, form);
  report["system"] = json::parse(to_json_string(sys));
  report["origin"] = json::parse(to_json_string(classify_origin_finite(params, form)));

  json infinite = json::array();
  for (const auto& pt : infinite_equilibria(sys)) {
    infinite.push_back(json::parse(to_json_string(classify_infinite(sys, pt, params))));
  }
  report["infinite"] = std::move(infinite);

  if (a != 0.0) {
    const LimitCycleRecord cycle = find_cycle(params, form, std::nullopt, cycle_opts);
    report["cycle"] = json::parse(to_json_string(cycle));
  } else {
    report["cycle"] = nullptr;
  }

  report["lienard"] =
      json::parse(to_json_string(check_hypotheses(build_lienard_data(params), params)));
  report["class"] =
      a < 0.0 ? "A_NEG" : (a > 0.0 ? "A_POS" : "CENTER");

  if (cfg.format == "text") {
    std::string text;
    text += "a = " + std::to_string(a) + ", n = " + std::to_string(n) + " (" + cfg.form + ")\n";
    text += "origin: " + report["origin"]["kind"].get<std::string>() + "\n";
    text += "infinite points: " + std::to_string(report["infinite"].size()) + "\n";
    if (!report["cycle"].is_null()) {
      text += "cycle: r* = " + std::to_string(report["cycle"]["r_star"].get<double>()) +
              ", multiplier = " + std::to_string(report["cycle"]["multiplier"].get<double>()) +
              " (" + report["cycle"]["stability"].get<std::string>() + ")\n";
    } else {
      text += "cycle: none (linear center)\n";
    }
    text += "lienard verdict: " + report["lienard"]["verdict"].get<std::string>() + "\n";
    text += "class: " + report["class"].get<std::string>() + "\n";
    emit(cfg, text);
  } else {
    emit(cfg, report.dump(2) + "\n");
  }
  return kExitOk;
}

int run_sweep(double a_min, double a_max, int a_steps, const std::vector<int>& n_list,
              const CommonConfig& cfg) {
  const SystemForm form = parse_form(cfg.form);
  CycleOptions cycle_opts;
  cycle_opts.integration.rtol = cfg.rtol;
  cycle_opts.integration.atol = cfg.atol;

  struct Row {
    double a;
    int n;
  };
  std::vector<Row> rows;
  for (int k = 0; k < a_steps; ++k) {
    const double a = a_min + (a_max - a_min) * k / (a_steps - 1);
    for (int n : n_list) rows.push_back({a, n});
  }

  std::vector<std::string> lines(rows.size());
  std::atomic<int> next{0};
  auto worker = [&] {
    while (true) {
      const int k = next.fetch_add(1);
      if (k >= static_cast<int>(rows.size())) return;
      const auto [a, n] = rows[k];
      try {
        if (a == 0.0) {
          lines[k] = sweep_csv_row(a, n, std::nullopt, "CENTER");
        } else {
          const auto record = find_cycle(RayleighParams(a, n), form, std::nullopt, cycle_opts);
          lines[k] = sweep_csv_row(a, n, record, "ok");
        }
      } catch (const std::exception& e) {
        lines[k] = sweep_csv_row(a, n, std::nullopt, std::string("failed: ") + e.what());
      }
    }
  };
  std::vector<std::thread> pool;
  const int jobs = effective_jobs(cfg.jobs);
  for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  char echo[192];
  std::snprintf(echo, sizeof echo,
                "# config: command=sweep form=%s rtol=%g atol=%g a=[%g,%g]x%d n_count=%zu\n",
                cfg.form.c_str(), cfg.rtol, cfg.atol, a_min, a_max, a_steps, n_list.size());
  std::string csv = echo;
  csv += sweep_csv_header();
  for (const auto& line : lines) csv += line;
  emit(cfg, csv);
  return kExitOk;
}

int run_portrait(double a, int n, int size_px, const CommonConfig& cfg) {
  const RayleighParams params(a, n);
  PortraitOptions opts;
  opts.cycle_integration.rtol = cfg.rtol;
  opts.cycle_integration.atol = cfg.atol;
  const PortraitModel model = build_portrait(params, parse_form(cfg.form), opts);
  if (cfg.format == "json") {
    json j = json::parse(to_json_string(model));
    j["config"] = config_echo(cfg, "portrait");
    emit(cfg, j.dump(2) + "\n");
  } else {
    emit(cfg, render_svg(model, size_px));
  }
  return kExitOk;
}

int run_verify(bool quick, bool as_json, const CommonConfig& cfg) {
  VerifyOptions opts;
  opts.quick = quick;
  opts.jobs = effective_jobs(cfg.jobs);
  opts.integration.rtol = cfg.rtol;
  opts.integration.atol = cfg.atol;

  const auto results = run_acceptance_suite(opts);
  if (as_json) {
    json j = json::array();
    for (const auto& r : results) {
      j.push_back({{"id", r.id},
                   {"name", r.name},
                   {"passed", r.passed},
                   {"seconds", r.seconds},
                   {"detail", r.detail}});
    }
    emit(cfg, j.dump(2) + "\n");
  } else {
    std::string text;
    char line[256];
    for (const auto& r : results) {
      std::snprintf(line, sizeof line, "%s %2d  %-45s (%.2f s)%s%s\n",
                    r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds,
                    r.detail.empty() ? "" : "  -- ", r.detail.c_str());
      text += line;
    }
    text += all_passed(results) ? "PASS\n" : "FAIL\n";
    emit(cfg, text);
  }
  return all_passed(results) ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Global dynamics of the generalized Rayleigh oscillator on the Poincare disc"};
  app.require_subcommand(1);

  CommonConfig cfg;
  double a = 0.0;
  double a_min = -2.0, a_max = 2.0;
  int a_steps = 0;
  std::vector<int> n_list;
  int size_px = 800;
  bool quick = false;
  bool as_json = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--rtol", cfg.rtol, "relative tolerance")->capture_default_str();
    cmd->add_option("--atol", cfg.atol, "absolute tolerance")->capture_default_str();
    cmd->add_option("--out", cfg.out, "output file (default stdout)");
    cmd->add_option("--jobs", cfg.jobs, "worker count (0 = hardware)")
        ->envname("RAYLEIGH_DISC_JOBS");
  };

  CLI::App* analyze = app.add_subcommand("analyze", "full report for one (a, n)");
  analyze->add_option("--a", a, "damping parameter")->required();
  analyze->add_option("--n", n_list, "nonlinearity exponent")->required();
  analyze->add_option("--form", cfg.form)->check(CLI::IsMember({"eq1", "eq2"}));
  analyze->add_option("--format", cfg.format)->check(CLI::IsMember({"json", "text"}));
  add_common(analyze);

  CLI::App* sweep = app.add_subcommand("sweep", "limit-cycle records over an a-range");
  sweep->add_option("--a-min", a_min)->required();
  sweep->add_option("--a-max", a_max)->required();
  sweep->add_option("--a-steps", a_steps, "grid size (>= 2)")->required();
  sweep->add_option("--n", n_list, "n values (repeatable)")->required();
  sweep->add_option("--form", cfg.form)->check(CLI::IsMember({"eq1", "eq2"}));
  add_common(sweep);

  CLI::App* portrait = app.add_subcommand("portrait", "Poincare-disc phase portrait");
  portrait->add_option("--a", a)->required();
  portrait->add_option("--n", n_list)->required();
  portrait->add_option("--form", cfg.form)->check(CLI::IsMember({"eq1", "eq2"}));
  portrait->add_option("--format", cfg.format)->check(CLI::IsMember({"svg", "json"}));
  portrait->add_option("--size", size_px, "image size in px (>= 200)");
  add_common(portrait);

  CLI::App* verify = app.add_subcommand("verify", "run the acceptance suite");
  verify->add_flag("--quick", quick, "n = 1 subset, under a minute");
  verify->add_flag("--json", as_json, "machine-readable results");
  add_common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp") {
      return app.exit(e);
    }
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (analyze->parsed() || portrait->parsed()) {
      if (n_list.size() != 1) {
        std::cerr << "exactly one --n value expected\n";
        return kExitUsage;
      }
      if (n_list[0] < 1) {
        std::cerr << "n must be >= 1\n";
        return kExitUsage;
      }
    }
    if (analyze->parsed()) {
      if (cfg.format.empty()) cfg.format = "json";
      return run_analyze(a, n_list[0], cfg);
    }
    if (sweep->parsed()) {
      for (int n : n_list) {
        if (n < 1) {
          std::cerr << "n must be >= 1\n";
          return kExitUsage;
        }
      }
      if (a_steps < 2) {
        std::cerr << "a-steps must be >= 2\n";
        return kExitUsage;
      }
      return run_sweep(a_min, a_max, a_steps, n_list, cfg);
    }
    if (portrait->parsed()) {
      if (size_px < 200) {
        std::cerr << "size must be >= 200\n";
        return kExitUsage;
      }
      if (cfg.format.empty()) cfg.format = "svg";
      return run_portrait(a, n_list[0], size_px, cfg);
    }
    if (verify->parsed()) {
      return run_verify(quick, as_json, cfg);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerics;
  }
  return kExitUsage;
}
