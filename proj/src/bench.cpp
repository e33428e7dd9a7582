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

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <cstring>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "som/sync.hpp"

namespace som {

namespace {

template <class F>
double time_ms(F&& f) {
  auto t0 = std::chrono::steady_clock::now();
  f();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

BenchResult summarize(std::string benchmark, std::string mode,
                      std::uint64_t parameter, const BenchConfig& cfg,
                      const std::function<double()>& one_run) {
  for (std::uint32_t i = 0; i < cfg.warmup; ++i) (void)one_run();
  std::vector<double> samples;
  samples.reserve(cfg.runs);
  for (std::uint32_t i = 0; i < cfg.runs; ++i) samples.push_back(one_run());

  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= samples.empty() ? 1.0 : static_cast<double>(samples.size());
  double var = 0.0;
  for (double x : samples) var += (x - mean) * (x - mean);
  if (samples.size() > 1) var /= static_cast<double>(samples.size() - 1);
  return BenchResult{std::move(benchmark), std::move(mode), parameter, mean,
                     std::sqrt(var), static_cast<std::uint32_t>(samples.size())};
}

void require_clean(const Session& s, const char* suite) {
  if (s.violation_count() != 0) {
    throw std::logic_error(std::string(suite) +
                           " benchmark produced a violation:\n" +
                           s.violations().front().report());
  }
}

Mode checked_mode(const std::string& name) {
  auto m = parse_mode(name);
  if (!m) throw std::invalid_argument("unknown mode '" + name + "'");
  return *m;
}

// --- pingpong: alternating lock/unlock pairs on two semaphores ---

// Raw stand-in with the adapter's blocking discipline and nothing else.
struct RawSemaphore {
  std::mutex m;
  std::condition_variable cv;
  bool locked = false;

  void lock() {
    std::unique_lock<std::mutex> lk(m);
    cv.wait(lk, [&] { return !locked; });
    locked = true;
  }
  void unlock() {
    {
      std::lock_guard<std::mutex> lk(m);
      locked = false;
    }
    cv.notify_one();
  }
};

double pingpong_base(std::uint64_t pairs) {
  RawSemaphore ping;
  RawSemaphore pong;
  return time_ms([&] {
    for (std::uint64_t i = 0; i < pairs; ++i) {
      RawSemaphore& s = (i & 1) ? pong : ping;
      s.lock();
      s.unlock();
    }
  });
}

double pingpong_checked(std::uint64_t pairs, Mode mode) {
  Session s(Session::Options{.mode = mode});
  EntityId main = s.root_process();
  BinarySemaphore ping(s, main, s.on_allocate(main), {}, "ping");
  BinarySemaphore pong(s, main, s.on_allocate(main), {}, "pong");
  double t = time_ms([&] {
    for (std::uint64_t i = 0; i < pairs; ++i) {
      BinarySemaphore& sem = (i & 1) ? pong : ping;
      sem.lock(main);
      sem.unlock(main);
    }
  });
  require_clean(s, "pingpong");
  return t;
}

// --- quicksort: 32-byte records, every element access checked ---

struct QsRecord {
  unsigned char key[24];
  std::uint64_t payload;
};

int qs_cmp(const QsRecord& a, const QsRecord& b) {
  return std::memcmp(a.key, b.key, sizeof a.key);
}

std::vector<QsRecord> make_records(std::uint64_t n, std::uint64_t seed) {
  std::vector<QsRecord> out(n);
  std::mt19937_64 rng(seed);
  for (QsRecord& r : out) {
    // Shared prefix: comparisons have to look past the first half of
    // the key.
    std::memset(r.key, 0x42, 16);
    std::uint64_t tail = rng();
    std::memcpy(r.key + 16, &tail, 8);
    r.payload = rng();
  }
  return out;
}

// Hooks are a template parameter so the Base and None binaries carry
// no trace of the checker in the sorting loop.
struct StrippedHooks {
  void read(std::size_t) {}
  void write(std::size_t) {}
  void pivot_copied(std::size_t) {}
  void pivot_read() {}
};

struct SessionHooks {
  Session& s;
  EntityId actor;
  const std::vector<EntityId>& ids;
  EntityId temp{};

  void read(std::size_t i) { s.on_field_read(actor, ids[i]); }
  void write(std::size_t i) { s.on_field_write(actor, ids[i]); }
  void pivot_copied(std::size_t i) {
    // Large partitions copy the pivot into a fresh staging temp.
    temp = s.on_allocate(actor);
    s.on_field_read(actor, ids[i]);
    s.on_field_write(actor, temp);
  }
  void pivot_read() { s.on_field_read(actor, temp); }
};

constexpr std::size_t kPivotTempAt = 2048;

template <class Hooks>
struct Sorter {
  std::vector<QsRecord>& a;
  Hooks hooks;

  void sort(std::size_t lo, std::size_t hi) {  // [lo, hi)
    while (hi - lo > 1) {
      std::size_t p = partition(lo, hi);
      if (p - lo < hi - p - 1) {
        sort(lo, p);
        lo = p + 1;
      } else {
        sort(p + 1, hi);
        hi = p;
      }
    }
  }

  std::size_t partition(std::size_t lo, std::size_t hi) {
    std::size_t mid = lo + (hi - lo) / 2;
    swap_at(mid, hi - 1);
    bool big = hi - lo >= kPivotTempAt;
    QsRecord pivot = a[hi - 1];
    if (big) {
      hooks.pivot_copied(hi - 1);
    } else {
      hooks.read(hi - 1);
    }
    std::size_t store = lo;
    for (std::size_t j = lo; j + 1 < hi; ++j) {
      hooks.read(j);
      if (big) {
        hooks.pivot_read();
      } else {
        hooks.read(hi - 1);
      }
      if (qs_cmp(a[j], pivot) < 0) {
        swap_at(j, store);
        ++store;
      }
    }
    swap_at(store, hi - 1);
    return store;
  }

  void swap_at(std::size_t i, std::size_t j) {
    hooks.write(i);
    hooks.write(j);
    std::swap(a[i], a[j]);
  }
};

// Session setup shared by the checked variants: one array object, one
// resource per element, handed over by plain field assignment.
std::vector<EntityId> register_array(Session& s, std::uint64_t n) {
  EntityId main = s.root_process();
  EntityId arr = s.on_allocate(main);
  std::vector<EntityId> ids;
  ids.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    EntityId e = s.on_allocate(main);
    s.on_field_assign(main, arr, e);
    ids.push_back(e);
  }
  return ids;
}

double quicksort_base(std::uint64_t n, std::uint64_t seed) {
  auto data = make_records(n, seed);
  Sorter<StrippedHooks> sorter{data, {}};
  double t = time_ms([&] { sorter.sort(0, data.size()); });
  if (!std::is_sorted(data.begin(), data.end(),
                      [](const QsRecord& x, const QsRecord& y) {
                        return qs_cmp(x, y) < 0;
                      })) {
    throw std::logic_error("quicksort produced unsorted output");
  }
  return t;
}

double quicksort_none(std::uint64_t n, std::uint64_t seed) {
  // The production build strips the access statements out of the
  // loop; the session and the setup statements remain.
  Session s(Session::Options{.mode = Mode::None,
                             .concurrency = Concurrency::ExternalSync});
  (void)register_array(s, n);
  auto data = make_records(n, seed);
  Sorter<StrippedHooks> sorter{data, {}};
  double t = time_ms([&] { sorter.sort(0, data.size()); });
  require_clean(s, "quicksort");
  return t;
}

double quicksort_checked(std::uint64_t n, std::uint64_t seed, Mode mode,
                         QuicksortStats* stats) {
  Session s(Session::Options{.mode = mode,
                             .concurrency = Concurrency::ExternalSync});
  std::vector<EntityId> ids = register_array(s, n);
  auto data = make_records(n, seed);
  Sorter<SessionHooks> sorter{data, {s, s.root_process(), ids}};
  double t = time_ms([&] { sorter.sort(0, data.size()); });
  bool sorted = std::is_sorted(data.begin(), data.end(),
                               [](const QsRecord& x, const QsRecord& y) {
                                 return qs_cmp(x, y) < 0;
                               });
  if (!sorted) throw std::logic_error("quicksort produced unsorted output");
  if (stats) {
    stats->accesses = s.access_checks();
    stats->explicit_passes = s.explicit_pass_count();
    stats->violations = s.violation_count();
    stats->sorted = sorted;
  }
  require_clean(s, "quicksort");
  return t;
}

// --- worklist: workers claim nodes through monitors and mutate them ---

constexpr std::size_t kWorklistNodes = 1024;
constexpr int kWritesPerNode = 8;

double worklist_base(std::uint64_t workers, std::uint64_t seed) {
  std::vector<std::array<std::uint64_t, kWritesPerNode>> payload(
      kWorklistNodes);
  std::deque<std::mutex> guards(kWorklistNodes);
  std::atomic<std::size_t> cursor{0};
  return time_ms([&] {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::uint64_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        std::mt19937_64 rng(seed + w);
        for (;;) {
          std::size_t i = cursor.fetch_add(1);
          if (i >= kWorklistNodes) break;
          std::lock_guard<std::mutex> lk(guards[i]);
          for (int k = 0; k < kWritesPerNode; ++k) payload[i][k] = rng();
        }
      });
    }
    for (auto& th : pool) th.join();
  });
}

double worklist_checked(std::uint64_t workers, std::uint64_t seed, Mode mode) {
  Session s(Session::Options{.mode = mode});
  EntityId main = s.root_process();
  std::vector<std::array<std::uint64_t, kWritesPerNode>> payload(
      kWorklistNodes);
  std::vector<EntityId> nodes;
  std::vector<std::unique_ptr<Lock>> guards;
  nodes.reserve(kWorklistNodes);
  guards.reserve(kWorklistNodes);
  for (std::size_t i = 0; i < kWorklistNodes; ++i) {
    nodes.push_back(s.on_allocate(main));
    guards.push_back(std::make_unique<Lock>(s, main, nodes[i]));
  }
  std::atomic<std::size_t> cursor{0};
  double t = time_ms([&] {
    std::vector<std::unique_ptr<ActorThread>> pool;
    pool.reserve(workers);
    for (std::uint64_t w = 0; w < workers; ++w) {
      pool.push_back(std::make_unique<ActorThread>(
          s, main, [&, w](EntityId self) {
            std::mt19937_64 rng(seed + w);
            for (;;) {
              std::size_t i = cursor.fetch_add(1);
              if (i >= kWorklistNodes) break;
              guards[i]->lock(self);
              for (int k = 0; k < kWritesPerNode; ++k) {
                s.on_field_write(self, nodes[i]);
                payload[i][k] = rng();
              }
              guards[i]->unlock(self);
            }
          }));
    }
    for (auto& th : pool) th->join();
  });
  require_clean(s, "worklist");
  return t;
}

std::vector<std::uint64_t> default_parameters(const std::string& suite) {
  if (suite == "pingpong") return {1000, 2000, 4000};
  if (suite == "quicksort") return {10000, 20000, 40000};
  return {1, 2, 4};  // worklist workers
}

}  // namespace

const std::vector<std::string>& bench_suites() {
  static const std::vector<std::string> names = {"pingpong", "quicksort",
                                                 "worklist"};
  return names;
}

QuicksortStats quicksort_probe(std::uint64_t n, Mode mode) {
  QuicksortStats stats;
  (void)quicksort_checked(n, 7, mode, &stats);
  return stats;
}

std::vector<BenchResult> run_bench(const std::string& suite,
                                   const BenchConfig& cfg) {
  if (std::find(bench_suites().begin(), bench_suites().end(), suite) ==
      bench_suites().end()) {
    throw std::invalid_argument("unknown suite '" + suite + "'");
  }
  std::vector<std::uint64_t> params =
      cfg.parameters.empty() ? default_parameters(suite) : cfg.parameters;

  std::vector<BenchResult> out;
  for (const std::string& mode_name : cfg.modes) {
    bool base = mode_name == "Base";
    Mode mode = base ? Mode::None : checked_mode(mode_name);
    for (std::uint64_t param : params) {
      std::uint64_t run_idx = 0;
      std::function<double()> one_run;
      if (suite == "pingpong") {
        one_run = [&, param] {
          return base ? pingpong_base(param) : pingpong_checked(param, mode);
        };
      } else if (suite == "quicksort") {
        one_run = [&, param] {
          std::uint64_t seed = 7 + run_idx++;
          if (base) return quicksort_base(param, seed);
          if (mode == Mode::None) return quicksort_none(param, seed);
          return quicksort_checked(param, seed, mode, nullptr);
        };
      } else {
        one_run = [&, param] {
          std::uint64_t seed = 77 + run_idx++;
          return base ? worklist_base(param, seed)
                      : worklist_checked(param, seed, mode);
        };
      }
      out.push_back(summarize(suite, mode_name, param, cfg, one_run));
    }
  }
  return out;
}

std::string to_csv(const std::vector<BenchResult>& results) {
  std::ostringstream out;
  const BenchResult* open = nullptr;
  for (const BenchResult& r : results) {
    if (!open || open->benchmark != r.benchmark || open->mode != r.mode ||
        open->runs != r.runs) {
      out << "# " << r.benchmark << " " << r.mode << " runs=" << r.runs
          << "\n";
      out << "parameter,time,error\n";
      open = &r;
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "%llu,%.17g,%.17g",
                  static_cast<unsigned long long>(r.parameter), r.mean_ms,
                  r.stddev_ms);
    out << buf << "\n";
  }
  return out.str();
}

std::vector<BenchResult> from_csv(const std::string& text) {
  std::vector<BenchResult> out;
  std::istringstream in(text);
  std::string line;
  std::string benchmark;
  std::string mode;
  std::uint32_t runs = 0;
  int lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      char bench_buf[64];
      char mode_buf[64];
      unsigned r = 0;
      if (std::sscanf(line.c_str(), "# %63s %63s runs=%u", bench_buf,
                      mode_buf, &r) != 3) {
        throw std::invalid_argument("bad section header at line " +
                                    std::to_string(lineno));
      }
      benchmark = bench_buf;
      mode = mode_buf;
      runs = r;
      header_seen = false;
      continue;
    }
    if (line == "parameter,time,error") {
      header_seen = true;
      continue;
    }
    if (benchmark.empty() || !header_seen) {
      throw std::invalid_argument("row outside a section at line " +
                                  std::to_string(lineno));
    }
    unsigned long long param = 0;
    double mean = 0.0;
    double err = 0.0;
    if (std::sscanf(line.c_str(), "%llu,%lf,%lf", &param, &mean, &err) != 3) {
      throw std::invalid_argument("bad data row at line " +
                                  std::to_string(lineno));
    }
    out.push_back(BenchResult{benchmark, mode, param, mean, err, runs});
  }
  return out;
}

}  // namespace som
