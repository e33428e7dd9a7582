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

#ifndef SOM_BENCH_HPP_
#define SOM_BENCH_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "som/checker.hpp"

namespace som {

// One measured point. `mode` is Full, Partial, or None for checked
// builds; Base is the same workload on raw primitives with no session
// at all.
struct BenchResult {
  std::string benchmark;
  std::string mode;
  std::uint64_t parameter = 0;
  double mean_ms = 0.0;
  double stddev_ms = 0.0;
  std::uint32_t runs = 0;

  friend bool operator==(const BenchResult&, const BenchResult&) = default;
};

struct BenchConfig {
  std::uint32_t runs = 30;
  std::uint32_t warmup = 10;  // discarded runs before measuring
  std::vector<std::string> modes = {"Base", "None", "Partial", "Full"};
  std::vector<std::uint64_t> parameters;  // empty: suite defaults
};

// Suites:
//   pingpong  - alternating lock/unlock pairs on two semaphores;
//               parameter = pairs
//   quicksort - single-threaded sort of 32-byte records with every
//               element access checked; parameter = array size
//   worklist  - workers claim task nodes through per-node monitors,
//               mutate them, release; parameter = worker count
//
// Throws std::invalid_argument for unknown suites or modes and
// std::logic_error if a checked run produces a violation (the
// workloads are legal programs).
std::vector<BenchResult> run_bench(const std::string& suite,
                                   const BenchConfig& cfg = {});

const std::vector<std::string>& bench_suites();

// Counters from one checked quicksort run, for overhead accounting.
struct QuicksortStats {
  std::uint64_t accesses = 0;
  std::uint64_t explicit_passes = 0;
  std::uint64_t violations = 0;
  bool sorted = false;
};

QuicksortStats quicksort_probe(std::uint64_t n, Mode mode);

// One section per (benchmark, mode) group:
//   # <benchmark> <mode> runs=<n>
//   parameter,time,error
//   <parameter>,<mean_ms>,<stddev_ms>
// Times use %.17g, so parsing the text back reproduces the doubles
// bit for bit.
std::string to_csv(const std::vector<BenchResult>& results);
std::vector<BenchResult> from_csv(const std::string& text);

}  // namespace som

#endif  // SOM_BENCH_HPP_
