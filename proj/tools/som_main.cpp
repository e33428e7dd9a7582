/*
 * Copyright (c) 2026, The som-check authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
 * implied. See the License for the specific language governing
 * permissions and limitations under the License.
 */

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "som/bench.hpp"
#include "som/explorer.hpp"
#include "som/trace.hpp"

namespace {

int run_check(const std::string& path, const std::string& mode_name) {
  som::Mode mode = som::mode_from_env();
  if (!mode_name.empty()) mode = *som::parse_mode(mode_name);
  try {
    som::ReplayReport report = som::replay_file(path, mode);
    std::cout << report.describe();
    return report.clean() ? 0 : 1;
  } catch (const som::TraceParseError& e) {
    std::cerr << "check: " << e.what() << "\n";
    return 2;
  }
}

int run_explore(const std::string& path, std::uint64_t max_states,
                std::uint32_t repeat_bound, bool json) {
  som::ParseOptions popts;
  popts.repeat_bound = repeat_bound;
  som::ExploreLimits limits;
  limits.max_states = max_states;
  try {
    som::SomProgram program = som::parse_file(path, popts);
    som::ExplorationReport report = som::explore(program, limits);
    std::cout << (json ? report.to_json() + "\n" : report.to_text());
    return report.clean() ? 0 : 1;
  } catch (const som::ParseError& e) {
    std::cerr << "explore: " << path << ": " << e.what() << "\n";
    return 2;
  } catch (const som::InvalidInitialGraph& e) {
    std::cerr << "explore: " << e.what() << "\n";
    return 2;
  } catch (const som::LimitExceeded& e) {
    std::cerr << "explore: " << e.what() << "\n";
    std::cout << (json ? e.partial.to_json() + "\n" : e.partial.to_text());
    return 3;
  }
}

void print_table(const std::vector<som::BenchResult>& results) {
  std::printf("%-10s %-8s %10s %12s %12s %5s\n", "benchmark", "mode",
              "parameter", "mean_ms", "stddev_ms", "runs");
  for (const som::BenchResult& r : results) {
    std::printf("%-10s %-8s %10llu %12.3f %12.3f %5u\n", r.benchmark.c_str(),
                r.mode.c_str(), static_cast<unsigned long long>(r.parameter),
                r.mean_ms, r.stddev_ms, r.runs);
  }
}

int run_bench_cmd(const std::string& suite,
                  const std::vector<std::string>& modes, unsigned runs,
                  const std::string& csv_path) {
  som::BenchConfig cfg;
  cfg.runs = runs;
  if (!modes.empty()) cfg.modes = modes;
  std::vector<som::BenchResult> results;
  try {
    results = som::run_bench(suite, cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "bench: " << e.what() << "\n";
    return 2;
  }
  print_table(results);
  if (!csv_path.empty()) {
    std::ofstream out(csv_path);
    if (!out) {
      std::cerr << "bench: cannot write '" << csv_path << "'\n";
      return 2;
    }
    out << som::to_csv(results);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ownership-graph checker: trace replay, state-space "
               "exploration, and overhead benchmarks"};
  app.require_subcommand(1);

  std::string check_path;
  std::string check_mode;
  CLI::App* check = app.add_subcommand("check", "replay a .somtrace log");
  check->add_option("file", check_path, ".somtrace file")->required();
  check
      ->add_option("--mode", check_mode,
                   "checking mode (default: SOM_MODE or Full)")
      ->check(CLI::IsMember({"Full", "Partial", "None"}));

  std::string explore_path;
  std::uint64_t max_states = 1000000;
  std::uint32_t repeat_bound = 3;
  bool json = false;
  CLI::App* explore =
      app.add_subcommand("explore", "exhaustively interleave a .som program");
  explore->add_option("file", explore_path, ".som file")->required();
  explore->add_option("--max-states", max_states, "visited-state budget");
  explore->add_option("--repeat-bound", repeat_bound,
                      "largest allowed repeat count");
  explore->add_flag("--json", json, "emit the report as JSON");

  std::string suite;
  std::vector<std::string> modes;
  unsigned runs = 30;
  std::string csv_path;
  CLI::App* bench =
      app.add_subcommand("bench", "time a workload across checking modes");
  bench->add_option("suite", suite, "pingpong, quicksort, or worklist")
      ->required();
  bench->add_option("--modes", modes, "modes to time (default: all four)");
  bench->add_option("--runs", runs, "measured runs per point");
  bench->add_option("--csv", csv_path, "also write results as CSV");

  CLI11_PARSE(app, argc, argv);

  if (*check) return run_check(check_path, check_mode);
  if (*explore) return run_explore(explore_path, max_states, repeat_bound, json);
  return run_bench_cmd(suite, modes, runs, csv_path);
}
