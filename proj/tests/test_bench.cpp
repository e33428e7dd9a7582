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

#include "som/bench.hpp"

#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"

using namespace som;

TEST_CASE("csv output round-trips bit for bit") {
  std::vector<BenchResult> results = {
      {"quicksort", "Base", 10000, 12.345678901234567, 0.25, 30},
      {"quicksort", "Base", 20000, 25.0, 0.5, 30},
      {"quicksort", "Full", 10000, 55.000000000000114, 1.0e-3, 30},
      {"pingpong", "None", 1000, 0.125, 0.0, 31},
  };
  std::string csv = to_csv(results);
  CHECK(csv.find("# quicksort Base runs=30\nparameter,time,error\n") !=
        std::string::npos);
  CHECK(csv.find("# quicksort Full runs=30\n") != std::string::npos);
  CHECK(csv.find("# pingpong None runs=31\n") != std::string::npos);

  std::vector<BenchResult> back = from_csv(csv);
  CHECK(back == results);
}

TEST_CASE("csv parsing rejects malformed input") {
  CHECK_THROWS_AS(from_csv("# broken header\nparameter,time,error\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS(from_csv("1000,1.0,0.1\n"), std::invalid_argument);
  CHECK_THROWS_AS(from_csv("# a Base runs=30\n1000,1.0\n"),
                  std::invalid_argument);
  CHECK(from_csv("").empty());
}

TEST_CASE("checked quicksort sorts, stays legal, and never passes") {
  QuicksortStats stats = quicksort_probe(4000, Mode::Full);
  CHECK(stats.sorted);
  CHECK(stats.violations == 0);
  CHECK(stats.explicit_passes == 0);
  // Two checked reads per comparison plus swap writes.
  CHECK(stats.accesses > 2 * 4000);
}

TEST_CASE("quicksort suite produces one result per mode and parameter") {
  BenchConfig cfg;
  cfg.runs = 2;
  cfg.warmup = 1;
  cfg.parameters = {2000};
  std::vector<BenchResult> results = run_bench("quicksort", cfg);
  REQUIRE(results.size() == 4);
  for (const BenchResult& r : results) {
    CHECK(r.benchmark == "quicksort");
    CHECK(r.parameter == 2000);
    CHECK(r.runs == 2);
    CHECK(r.mean_ms > 0.0);
  }
  CHECK(results[0].mode == "Base");
  CHECK(results[1].mode == "None");
  CHECK(results[2].mode == "Partial");
  CHECK(results[3].mode == "Full");
}

TEST_CASE("lock suites run clean in checked and raw form") {
  BenchConfig cfg;
  cfg.runs = 2;
  cfg.warmup = 0;
  cfg.modes = {"Base", "Full"};

  cfg.parameters = {64};
  std::vector<BenchResult> pingpong = run_bench("pingpong", cfg);
  REQUIRE(pingpong.size() == 2);
  CHECK(pingpong[0].mode == "Base");
  CHECK(pingpong[1].mode == "Full");

  cfg.parameters = {2};
  std::vector<BenchResult> worklist = run_bench("worklist", cfg);
  REQUIRE(worklist.size() == 2);
  for (const BenchResult& r : worklist) CHECK(r.mean_ms > 0.0);
}

TEST_CASE("unknown suites and modes are refused") {
  CHECK_THROWS_AS(run_bench("delaunay"), std::invalid_argument);
  BenchConfig cfg;
  cfg.modes = {"Fast"};
  CHECK_THROWS_AS(run_bench("pingpong", cfg), std::invalid_argument);
  CHECK(bench_suites() ==
        std::vector<std::string>{"pingpong", "quicksort", "worklist"});
}
