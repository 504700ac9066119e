// Copyright 2026 The utmsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// utmsim: run airspace reservation scenarios and inspect their logs.

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "utm/ov_json.hpp"
#include "utm/scenario.hpp"
#include "utm/vehicle.hpp"

namespace {

using nlohmann::json;
using utm::ScenarioConfig;

/// Scenario flags. Values given on the command line override --config.
class ConfigFlags {
 public:
  void attach(CLI::App* app) {
    app->add_option("--config", config_path_, "JSON scenario config");
    add(app, "--map", map_, "corridor | loop | random",
        [this](ScenarioConfig& c) { c.map = utm::map_kind_from_string(map_); });
    add(app, "--random-n", random_n_, "waypoints per agent on the random map",
        [this](ScenarioConfig& c) { c.random_n = random_n_; });
    add(app, "--strategy", strategy_, "conservative | aggressive",
        [this](ScenarioConfig& c) { c.strategy = utm::strategy_from_string(strategy_); });
    add(app, "--delay", delay_, "message delay (s)",
        [this](ScenarioConfig& c) { c.delay = delay_; });
    add(app, "--jitter", jitter_, "extra uniform delay bound (s)",
        [this](ScenarioConfig& c) { c.jitter = jitter_; });
    add(app, "--dt", dt_, "tick length (s)", [this](ScenarioConfig& c) { c.dt = dt_; });
    add(app, "--max-time", max_time_, "simulated time limit (s)",
        [this](ScenarioConfig& c) { c.max_time = max_time_; });
    add(app, "--speed", speed_, "vehicle speed (m/s)",
        [this](ScenarioConfig& c) { c.vehicle.speed = speed_; });
    add(app, "--noise", noise_, "per-tick noise sigma (m)",
        [this](ScenarioConfig& c) { c.vehicle.noise_sigma = noise_; });
    add(app, "--bloat", bloat_, "box margin (m)",
        [this](ScenarioConfig& c) { c.plan.bloat = bloat_; });
    add(app, "--slack", slack_, "travel time multiplier",
        [this](ScenarioConfig& c) { c.plan.slack = slack_; });
    add(app, "--retry-wait", retry_wait_, "pause between a rejection and the next request (s)",
        [this](ScenarioConfig& c) { c.retry_wait = retry_wait_; });
  }

  /// Adds the per-run flags that sweeps set themselves.
  void attach_single(CLI::App* app) {
    add(app, "--agents,-n", n_agents_, "number of agents",
        [this](ScenarioConfig& c) { c.n_agents = n_agents_; });
    add(app, "--seed", seed_, "scenario seed", [this](ScenarioConfig& c) { c.seed = seed_; });
  }

  ScenarioConfig build() const {
    ScenarioConfig c;
    if (!config_path_.empty()) {
      std::ifstream in(config_path_);
      if (!in) throw CLI::ValidationError("--config", "cannot open " + config_path_);
      c = utm::config_from_json(json::parse(in));
    }
    for (const auto& [opt, apply] : flags_) {
      if (opt->count() > 0) apply(c);
    }
    return c;
  }

 private:
  template <class T>
  void add(CLI::App* app, const std::string& name, T& value, const std::string& help,
           std::function<void(ScenarioConfig&)> apply) {
    flags_.emplace_back(app->add_option(name, value, help), std::move(apply));
  }

  std::string config_path_;
  std::string map_ = "corridor";
  std::string strategy_ = "conservative";
  int random_n_ = 4;
  int n_agents_ = 2;
  std::uint64_t seed_ = 0;
  double delay_ = 0.0;
  double jitter_ = 0.0;
  double dt_ = 0.1;
  double max_time_ = 3000.0;
  double speed_ = 2.0;
  double noise_ = 0.02;
  double bloat_ = 1.0;
  double slack_ = 1.5;
  double retry_wait_ = 1.0;
  std::vector<std::pair<CLI::Option*, std::function<void(ScenarioConfig&)>>> flags_;
};

std::vector<int> parse_list(const std::string& s) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const auto comma = s.find(',', pos);
    out.push_back(std::stoi(s.substr(pos, comma - pos)));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::vector<utm::Strategy> parse_strategies(const std::string& s) {
  if (s == "both") return {utm::Strategy::kConservative, utm::Strategy::kAggressive};
  std::vector<utm::Strategy> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto comma = s.find(',', pos);
    out.push_back(utm::strategy_from_string(s.substr(pos, comma - pos)));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"utmsim: distributed airspace reservation simulator"};
  app.require_subcommand(1);

  // run
  ConfigFlags run_flags;
  std::string run_log, run_report;
  bool run_csv = false;
  auto* run = app.add_subcommand("run", "Run one scenario and print its report");
  run_flags.attach(run);
  run_flags.attach_single(run);
  run->add_option("--log", run_log, "write the JSONL event log here");
  run->add_option("--report", run_report, "write the JSON report here");
  run->add_flag("--csv", run_csv, "print a CSV row instead of JSON");

  // sweep
  ConfigFlags sweep_flags;
  std::string sweep_agents = "2,4,6,8,10", sweep_strategies = "both";
  int sweep_seeds = 3;
  auto* sweep = app.add_subcommand("sweep", "Run n_agents x strategy x seed and print CSV");
  sweep_flags.attach(sweep);
  sweep->add_option("--agents-list", sweep_agents, "comma separated agent counts");
  sweep->add_option("--strategies", sweep_strategies, "comma separated strategies, or both");
  sweep->add_option("--seeds", sweep_seeds, "seeds 0..k-1");

  // check
  std::string check_log;
  auto* check = app.add_subcommand("check", "Replay a saved log and re-check the invariants");
  check->add_option("log", check_log, "JSONL event log")->required();

  // plot-data
  ConfigFlags plot_flags;
  std::string plot_figure = "response";
  std::string plot_agents = "2,4,6,8,10";
  int plot_seeds = 3;
  auto* plot = app.add_subcommand("plot-data", "Aggregate sweeps into plot-ready CSV");
  plot_flags.attach(plot);
  plot->add_option("--figure", plot_figure, "response | table")
      ->check(CLI::IsMember({"response", "table"}));
  plot->add_option("--agents-list", plot_agents, "comma separated agent counts");
  plot->add_option("--seeds", plot_seeds, "seeds 0..k-1");

  // tube
  int tube_samples = 50;
  double tube_bin = 0.5, tube_bloat = 0.0;
  std::uint64_t tube_seed = 0;
  auto* tube = app.add_subcommand("tube", "Estimate a reachtube for the first corridor agent");
  tube->add_option("--samples", tube_samples, "number of traces");
  tube->add_option("--bin", tube_bin, "bin width (s)");
  tube->add_option("--bloat", tube_bloat, "extra margin (m)");
  tube->add_option("--seed", tube_seed, "sampling seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const auto cfg = run_flags.build();
      auto [report, log] = utm::run_scenario(cfg);
      if (!run_log.empty()) write_file(run_log, log.to_jsonl());
      const auto doc = to_json(report).dump(2) + "\n";
      if (!run_report.empty()) write_file(run_report, doc);
      if (run_csv) {
        std::cout << utm::csv_header() << '\n' << utm::csv_row(report) << '\n';
      } else {
        std::cout << doc;
      }
      return report.safety_breach() ? 2 : 0;
    }
    if (*sweep) {
      const auto base = sweep_flags.build();
      bool breach = false;
      std::cout << utm::csv_header() << '\n';
      for (int n : parse_list(sweep_agents)) {
        for (auto s : parse_strategies(sweep_strategies)) {
          for (int seed = 0; seed < sweep_seeds; ++seed) {
            auto cfg = base;
            cfg.n_agents = n;
            cfg.strategy = s;
            cfg.seed = static_cast<std::uint64_t>(seed);
            const auto res = utm::run_scenario(cfg);
            breach = breach || res.report.safety_breach();
            std::cout << utm::csv_row(res.report) << '\n';
          }
        }
      }
      return breach ? 2 : 0;
    }
    if (*check) {
      std::ifstream in(check_log);
      if (!in) throw std::runtime_error("cannot open " + check_log);
      const auto log = utm::EventLog::parse(in);
      const auto res = utm::replay_log(log);
      std::cout << to_json(res).dump(2) << '\n';
      return res.ok() ? 0 : 2;
    }
    if (*plot) {
      const auto base = plot_flags.build();
      bool breach = false;
      const auto strategies = plot_figure == "response"
                                  ? std::vector<utm::Strategy>{base.strategy}
                                  : parse_strategies("both");
      if (plot_figure == "response") {
        std::cout << "n_agents,max_response_time,avg_response_time\n";
      } else {
        std::cout << "n_agents,strategy,makespan,qe_per_s,rect_per_s,violation_rate\n";
      }
      for (int n : parse_list(plot_agents)) {
        for (auto s : strategies) {
          double mx = 0, avg = 0, mk = 0, qe = 0, rect = 0, vr = 0;
          for (int seed = 0; seed < plot_seeds; ++seed) {
            auto cfg = base;
            cfg.n_agents = n;
            cfg.strategy = s;
            cfg.seed = static_cast<std::uint64_t>(seed);
            const auto r = utm::run_scenario(cfg).report;
            breach = breach || r.safety_breach();
            mx += r.max_response_time;
            avg += r.avg_response_time;
            mk += r.makespan;
            qe += r.qe_per_s;
            rect += r.rect_per_s;
            vr += r.violation_rate;
          }
          const double k = plot_seeds > 0 ? plot_seeds : 1;
          if (plot_figure == "response") {
            std::cout << n << ',' << mx / k << ',' << avg / k << '\n';
          } else {
            std::cout << n << ',' << utm::to_string(s) << ',' << mk / k << ',' << qe / k << ','
                      << rect / k << ',' << vr / k << '\n';
          }
        }
      }
      return breach ? 2 : 0;
    }
    if (*tube) {
      ScenarioConfig cfg;
      const auto map = utm::generate_map(cfg);
      const auto& route = map.agents.front();
      utm::VehicleParams vp = cfg.vehicle;
      vp.seed = tube_seed;
      const auto t = utm::estimate_reachtube(utm::Box::around(route.spawn, 0.5), route.waypoints,
                                             vp, tube_samples, tube_bin, tube_bloat, cfg.dt);
      std::cout << utm::tube_to_json(t).dump(1) << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "utmsim: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
