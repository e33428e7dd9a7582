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

#ifndef SOM_CHECKER_HPP_
#define SOM_CHECKER_HPP_

#include <cstdint>
#include <deque>
#include <functional>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "som/semantics.hpp"

namespace som {

// Full: premises checked, graph maintained. Partial: graph maintained,
// access checks skipped. None: every hook is inert (ids still advance
// so handles stay usable).
enum class Mode : std::uint8_t { Full, Partial, None };

std::string to_string(Mode m);
std::optional<Mode> parse_mode(std::string_view text);

// Reads SOM_MODE ("full", "partial", "none"); defaults to Full.
Mode mode_from_env();

// Serialized: the session takes an internal lock around every checked
// statement. ExternalSync: the caller guarantees statements arrive one
// at a time (single-threaded use).
enum class Concurrency : std::uint8_t { Serialized, ExternalSync };

// One record per statement that passed through the checker, consumed
// by the trace writer.
struct TraceEvent {
  std::uint64_t seq = 0;
  std::string actor;
  std::string op;
  std::string target;
  std::vector<std::pair<std::string, std::string>> args;
};

struct Violation {
  std::uint64_t seq = 0;
  ViolationKind kind{};
  EntityId actor{};
  Statement stmt{};
  std::string header;          // "#<seq> <kind> actor=<p> stmt=<...>"
  std::string graph_snapshot;  // state the premise was judged against

  std::string report() const;  // header plus indented snapshot block
};

class StrictViolationError : public std::runtime_error {
 public:
  explicit StrictViolationError(Violation v)
      : std::runtime_error(v.header), violation(std::move(v)) {}

  Violation violation;
};

namespace detail {
inline thread_local int access_checks_disabled = 0;
inline thread_local int internal_ops = 0;
}  // namespace detail

// Suspends field access checks on the current thread while alive.
class ScopedAccessChecks {
 public:
  explicit ScopedAccessChecks(bool enabled) : enabled_(enabled) {
    if (!enabled_) ++detail::access_checks_disabled;
  }
  ~ScopedAccessChecks() {
    if (!enabled_) --detail::access_checks_disabled;
  }
  ScopedAccessChecks(const ScopedAccessChecks&) = delete;
  ScopedAccessChecks& operator=(const ScopedAccessChecks&) = delete;

 private:
  bool enabled_;
};

// Marks statements issued by library plumbing (adapters, implicit
// transfers) so they stay out of the explicit-pass tally.
class ScopedInternalOps {
 public:
  ScopedInternalOps() { ++detail::internal_ops; }
  ~ScopedInternalOps() { --detail::internal_ops; }
  ScopedInternalOps(const ScopedInternalOps&) = delete;
  ScopedInternalOps& operator=(const ScopedInternalOps&) = delete;
};

// One checking session: an ownership graph, the processes and
// resources registered with it, and the violations observed so far.
//
// Construction installs the root process ("main") owning its staging
// resource ("main_staging"); that single edge is the whole initial
// graph. Every session draws entity ids from its own space, so ids
// from two sessions never collide.
class Session {
 public:
  struct Options {
    Mode mode = Mode::Full;
    Concurrency concurrency = Concurrency::Serialized;
    ReleaseRule release_rule = ReleaseRule::SoleRootOfOwner;
    bool strict = false;  // throw StrictViolationError on violation
  };

  Session() : Session(Options{}) {}
  explicit Session(Options opts);

  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  Mode mode() const { return mode_; }
  EntityId root_process() const { return root_; }

  // The staging resource of a process: allocations land there and
  // received resources are parked there. For spawned processes this is
  // their thread object.
  EntityId staging_of(const EntityId& pid) const;

  // Registers a fresh entity without touching the graph. Display names
  // default to main/main_staging for the bootstrap pair and p<k>/r<k>
  // afterwards.
  EntityId mint_entity(EntityKind kind, std::string name = "");

  // Runs one statement through the checker. Returns the violation
  // record when the premise failed, nullptr otherwise. The returned
  // pointer stays valid for the session's lifetime.
  const Violation* check(const EntityId& actor, const Statement& s);

  // --- hooks mirroring ordinary program actions ---

  const Violation* on_field_read(const EntityId& actor, const EntityId& rho);
  const Violation* on_field_write(const EntityId& actor, const EntityId& rho);

  // new object: a fresh resource allocated into the actor's staging.
  EntityId on_allocate(const EntityId& actor);

  // obj.field = value: a write to obj; if value still sits in the
  // actor's staging it is handed to obj (the first structure to
  // receive a fresh resource owns it).
  const Violation* on_field_assign(const EntityId& actor, const EntityId& obj,
                                   const EntityId& value);

  // new Thread(...).start(): allocates the thread object, spawns the
  // child process, and hands the object over as the child's staging.
  EntityId on_thread_start(const EntityId& actor);

  void mark_terminated(const EntityId& pid);

  // Convenience pass that looks up the single direct owner of rho, so
  // call sites do not spell the source edge. Refused without a
  // statement when rho has several direct owners.
  struct PassOutcome {
    bool multi_owner = false;
    const Violation* violation = nullptr;

    bool ok() const { return !multi_owner && violation == nullptr; }
  };
  PassOutcome pass_to(const EntityId& actor, const EntityId& rho,
                      const EntityId& to);

  // Direct owner when rho has exactly one, otherwise empty.
  std::optional<EntityId> sole_direct_owner(const EntityId& rho) const;

  std::string name_of(const EntityId& e) const;
  void set_name(const EntityId& e, std::string name);

  // Graph exported with session names, one "<owner> -> <owned>" line
  // per edge.
  std::string graph_export() const;
  OwnershipGraph graph_copy() const;

  // Resources whose every root has terminated. Informational.
  std::vector<EntityId> leak_report() const;

  const std::deque<Violation>& violations() const { return violations_; }
  std::size_t violation_count() const;
  std::uint64_t statements_checked() const { return seq_; }
  std::uint64_t access_checks() const { return accesses_; }
  std::uint64_t mutation_checks() const { return mutations_; }
  std::uint64_t explicit_pass_count() const { return explicit_passes_; }

  void set_sink(std::function<void(const TraceEvent&)> sink);

 private:
  enum class WalkAnswer : std::uint8_t { Yes, No, Unsure };

  // Direct owners of one resource, stored flat. `more` is only
  // populated past the first owner.
  struct OwnerCell {
    std::uint32_t count = 0;
    EntityId single{};
    std::vector<EntityId> more;  // all owners, sorted, when count > 1
  };

  const Violation* check_locked(const EntityId& actor, const Statement& s);
  const Violation* access_slow(std::uint64_t seq, const EntityId& actor,
                               const Statement& s);
  const Violation* record_violation(std::uint64_t seq, const EntityId& actor,
                                    const Statement& s, ViolationKind kind);
  void apply_checked(const Statement& s);
  void apply_unchecked(const Statement& s);
  void cell_add(const EntityId& rho, const EntityId& owner);
  void cell_remove(const EntityId& rho, const EntityId& owner);
  void emit(std::uint64_t seq, const EntityId& actor, const Statement& s);
  std::string name_nolock(const EntityId& e) const;
  NameFn namer_nolock() const;
  EntityId mint_locked(EntityKind kind, std::string name);

  // Owner-cell walks answering root membership without touching the
  // general graph; Unsure falls back to the full premise.
  WalkAnswer walk_is_root(const EntityId& pi, const EntityId& e) const;
  WalkAnswer walk_is_sole_root(const EntityId& pi, const EntityId& e) const;

  inline const Violation* access_check(const EntityId& actor,
                                       const EntityId& rho, bool write);

  std::uint64_t serial_;
  Mode mode_;
  Concurrency concurrency_;
  ReleaseRule release_rule_;
  bool strict_;

  mutable std::mutex mutex_;
  OwnershipGraph graph_;
  std::vector<OwnerCell> cells_;      // by ordinal
  std::vector<std::string> names_;    // by ordinal
  std::vector<EntityId> context_;     // staging resource, by process ordinal
  std::vector<std::uint8_t> terminated_;  // by process ordinal
  std::uint32_t next_ordinal_ = 0;
  std::uint32_t next_process_name_ = 1;
  std::uint32_t next_resource_name_ = 1;
  std::uint64_t seq_ = 0;
  std::uint64_t accesses_ = 0;
  std::uint64_t mutations_ = 0;
  std::uint64_t explicit_passes_ = 0;
  std::deque<Violation> violations_;
  std::function<void(const TraceEvent&)> sink_;
  EntityId root_{};
  EntityId root_staging_{};
};

// Hot path: mode test, then an owner-cell walk; everything else is out
// of line.
inline const Violation* Session::access_check(const EntityId& actor,
                                              const EntityId& rho,
                                              bool write) {
  std::unique_lock<std::mutex> lk(mutex_, std::defer_lock);
  if (concurrency_ == Concurrency::Serialized) lk.lock();
  std::uint64_t seq = seq_++;
  ++accesses_;
  WalkAnswer a = write ? walk_is_sole_root(actor, rho) : walk_is_root(actor, rho);
  if (a == WalkAnswer::Yes) {
    if (sink_) [[unlikely]] {
      emit(seq, actor,
           write ? Statement::write(rho) : Statement::read(rho));
    }
    return nullptr;
  }
  return access_slow(seq, actor,
                     write ? Statement::write(rho) : Statement::read(rho));
}

inline const Violation* Session::on_field_read(const EntityId& actor,
                                               const EntityId& rho) {
  if (mode_ != Mode::Full) return nullptr;
  if (detail::access_checks_disabled > 0) return nullptr;
  return access_check(actor, rho, false);
}

inline const Violation* Session::on_field_write(const EntityId& actor,
                                                const EntityId& rho) {
  if (mode_ != Mode::Full) return nullptr;
  if (detail::access_checks_disabled > 0) return nullptr;
  return access_check(actor, rho, true);
}

inline Session::WalkAnswer Session::walk_is_root(const EntityId& pi,
                                                 const EntityId& e) const {
  if (e.space() != serial_ || pi.space() != serial_) return WalkAnswer::Unsure;
  std::uint32_t stack[32];
  std::size_t top = 0;
  int budget = 256;
  std::uint64_t cur = e.ordinal();
  if (cur >= cells_.size()) return WalkAnswer::Unsure;
  while (true) {
    const OwnerCell& cell = cells_[cur];
    if (cell.count == 1) {
      const EntityId& o = cell.single;
      if (o == pi) return WalkAnswer::Yes;
      if (o.space() != serial_) return WalkAnswer::Unsure;
      if (o.is_resource()) {
        if (--budget < 0) return WalkAnswer::Unsure;
        cur = o.ordinal();
        if (cur >= cells_.size()) return WalkAnswer::Unsure;
        continue;
      }
      // Another process: dead end on this branch.
    } else if (cell.count > 1) {
      for (const EntityId& o : cell.more) {
        if (o == pi) return WalkAnswer::Yes;
        if (o.space() != serial_) return WalkAnswer::Unsure;
        if (o.is_resource()) {
          if (top >= 32 || --budget < 0) return WalkAnswer::Unsure;
          std::uint64_t ord = o.ordinal();
          if (ord >= cells_.size()) return WalkAnswer::Unsure;
          stack[top++] = static_cast<std::uint32_t>(ord);
        }
      }
    }
    if (top == 0) return WalkAnswer::No;
    cur = stack[--top];
  }
}

inline Session::WalkAnswer Session::walk_is_sole_root(const EntityId& pi,
                                                      const EntityId& e) const {
  if (e.space() != serial_ || pi.space() != serial_) return WalkAnswer::Unsure;
  std::uint32_t stack[32];
  std::size_t top = 0;
  int budget = 256;
  bool found = false;
  std::uint64_t cur = e.ordinal();
  if (cur >= cells_.size()) return WalkAnswer::Unsure;
  while (true) {
    const OwnerCell& cell = cells_[cur];
    if (cell.count == 1) {
      const EntityId& o = cell.single;
      if (o == pi) {
        found = true;
      } else if (o.space() != serial_) {
        return WalkAnswer::Unsure;
      } else if (o.is_process()) {
        return WalkAnswer::No;  // a root other than pi
      } else {
        if (--budget < 0) return WalkAnswer::Unsure;
        cur = o.ordinal();
        if (cur >= cells_.size()) return WalkAnswer::Unsure;
        continue;
      }
    } else if (cell.count > 1) {
      for (const EntityId& o : cell.more) {
        if (o == pi) {
          found = true;
          continue;
        }
        if (o.space() != serial_) return WalkAnswer::Unsure;
        if (o.is_process()) return WalkAnswer::No;
        if (top >= 32 || --budget < 0) return WalkAnswer::Unsure;
        std::uint64_t ord = o.ordinal();
        if (ord >= cells_.size()) return WalkAnswer::Unsure;
        stack[top++] = static_cast<std::uint32_t>(ord);
      }
    }
    // count == 0: dead end, no root along this branch.
    if (top == 0) return found ? WalkAnswer::Yes : WalkAnswer::No;
    cur = stack[--top];
  }
}

}  // namespace som

#endif  // SOM_CHECKER_HPP_
