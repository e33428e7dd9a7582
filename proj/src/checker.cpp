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

#include "som/checker.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cctype>
#include <cstdlib>

namespace som {

std::string to_string(Mode m) {
  switch (m) {
    case Mode::Full: return "full";
    case Mode::Partial: return "partial";
    case Mode::None: return "none";
  }
  return "?";
}

std::optional<Mode> parse_mode(std::string_view text) {
  std::string lower;
  for (char c : text) {
    lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  if (lower == "full") return Mode::Full;
  if (lower == "partial") return Mode::Partial;
  if (lower == "none") return Mode::None;
  return std::nullopt;
}

Mode mode_from_env() {
  const char* v = std::getenv("SOM_MODE");
  if (v == nullptr) return Mode::Full;
  return parse_mode(v).value_or(Mode::Full);
}

std::string Violation::report() const {
  std::string out = header;
  out += '\n';
  std::size_t pos = 0;
  while (pos < graph_snapshot.size()) {
    std::size_t nl = graph_snapshot.find('\n', pos);
    if (nl == std::string::npos) nl = graph_snapshot.size();
    out += "    ";
    out.append(graph_snapshot, pos, nl - pos);
    out += '\n';
    pos = nl + 1;
  }
  return out;
}

namespace {

// Session spaces start at 1; space 0 is for hand-built ids.
std::atomic<std::uint64_t> g_next_session{1};

}  // namespace

Session::Session(Options opts)
    : serial_(g_next_session.fetch_add(1)),
      mode_(opts.mode),
      concurrency_(opts.concurrency),
      release_rule_(opts.release_rule),
      strict_(opts.strict) {
  root_ = mint_locked(EntityKind::Process, "main");
  root_staging_ = mint_locked(EntityKind::Resource, "main_staging");
  context_[root_.ordinal()] = root_staging_;
  // The bootstrap edge exists in every mode; mode None never grows or
  // consults the graph past this point.
  graph_.add_entity(root_);
  graph_.add_entity(root_staging_);
  graph_.add_edge(root_, root_staging_);
  cell_add(root_staging_, root_);
}

EntityId Session::staging_of(const EntityId& pid) const {
  std::unique_lock<std::mutex> lk(mutex_, std::defer_lock);
  if (concurrency_ == Concurrency::Serialized) lk.lock();
  if (pid.space() == serial_ && pid.ordinal() < context_.size()) {
    return context_[pid.ordinal()];
  }
  return {};
}

EntityId Session::mint_locked(EntityKind kind, std::string name) {
  std::uint32_t ord = next_ordinal_++;
  EntityId e{kind, (serial_ << 32) | ord};
  if (name.empty()) {
    name = kind == EntityKind::Process
               ? "p" + std::to_string(next_process_name_++)
               : "r" + std::to_string(next_resource_name_++);
  }
  names_.push_back(std::move(name));
  cells_.emplace_back();
  context_.emplace_back();
  terminated_.push_back(0);
  return e;
}

EntityId Session::mint_entity(EntityKind kind, std::string name) {
  std::unique_lock<std::mutex> lk(mutex_, std::defer_lock);
  if (concurrency_ == Concurrency::Serialized) lk.lock();
  return mint_locked(kind, std::move(name));
}

std::string Session::name_nolock(const EntityId& e) const {
  if (e.space() == serial_ && e.ordinal() < names_.size()) {
    return names_[e.ordinal()];
  }
  return to_string(e);
}

NameFn Session::namer_nolock() const {
  return [this](const EntityId& e) { return name_nolock(e); };
}

std::string Session::name_of(const EntityId& e) const {
  std::unique_lock<std::mutex> lk(mutex_, std::defer_lock);
  if (concurrency_ == Concurrency::Serialized) lk.lock();
  return name_nolock(e);
}

void Session::set_name(const EntityId& e, std::string name) {
  std::unique_lock<std::mutex> lk(mutex_, std::defer_lock);
  if (concurrency_ == Concurrency::Serialized) lk.lock();
  if (e.space() == serial_ && e.ordinal() < names_.size()) {
    names_[e.ordinal()] = std::move(name);
  }
}

void Session::set_sink(std::function<void(const TraceEvent&)> sink) {
  std::unique_lock<std::mutex> lk(mutex_, std::defer_lock);
  if (concurrency_ == Concurrency::Serialized) lk.lock();
  sink_ = std::move(sink);
}

void Session::emit(std::uint64_t seq, const EntityId& actor,
                   const Statement& s) {
  if (!sink_) return;
  TraceEvent ev;
  ev.seq = seq;
  ev.actor = name_nolock(actor);
  ev.op = to_string(s.kind);
  ev.target = name_nolock(s.target);
  switch (s.kind) {
    case StatementKind::Pass:
      ev.args = {{"from", name_nolock(s.from())}, {"to", name_nolock(s.to())}};
      break;
    case StatementKind::Share:
      ev.args = {{"with", name_nolock(s.with())}};
      break;
    case StatementKind::Release:
      ev.args = {{"by", name_nolock(s.by())}};
      break;
    case StatementKind::Spawn:
      ev.args = {{"binds", ev.target}, {"body_ref", ""}};
      break;
    case StatementKind::Allocate:
      ev.args = {{"owner", name_nolock(s.owner())}, {"binds", ev.target}};
      break;
    default:
      break;
  }
  sink_(ev);
}

const Violation* Session::record_violation(std::uint64_t seq,
                                           const EntityId& actor,
                                           const Statement& s,
                                           ViolationKind kind) {
  Violation v;
  v.seq = seq;
  v.kind = kind;
  v.actor = actor;
  v.stmt = s;
  v.header = "#" + std::to_string(seq) + " " + to_string(kind) +
             " actor=" + name_nolock(actor) +
             " stmt=" + render(s, namer_nolock());
  v.graph_snapshot = snapshot(graph_, namer_nolock());
  violations_.push_back(std::move(v));
  return &violations_.back();
}

const Violation* Session::access_slow(std::uint64_t seq, const EntityId& actor,
                                      const Statement& s) {
  auto pr = premise(graph_, actor, s, release_rule_);
  if (pr.enabled()) {
    // The cell walk gave up; the full premise is the authority.
    emit(seq, actor, s);
    return nullptr;
  }
  const Violation* v = record_violation(seq, actor, s, *pr.violation);
  emit(seq, actor, s);
  if (strict_) throw StrictViolationError(*v);
  return v;
}

const Violation* Session::check(const EntityId& actor, const Statement& s) {
  if (mode_ == Mode::None) return nullptr;
  if (!mutates(s.kind)) {
    if (mode_ != Mode::Full) return nullptr;
    if (detail::access_checks_disabled > 0) return nullptr;
  }
  std::unique_lock<std::mutex> lk(mutex_, std::defer_lock);
  if (concurrency_ == Concurrency::Serialized) lk.lock();
  return check_locked(actor, s);
}

const Violation* Session::check_locked(const EntityId& actor,
                                       const Statement& s) {
  std::uint64_t seq = seq_++;
  if (mutates(s.kind)) {
    ++mutations_;
    if (s.kind == StatementKind::Pass && detail::internal_ops == 0) {
      ++explicit_passes_;
    }
  } else {
    ++accesses_;
  }

  const Violation* v = nullptr;
  if (mode_ == Mode::Full) {
    auto pr = premise(graph_, actor, s, release_rule_);
    if (!pr.enabled()) v = record_violation(seq, actor, s, *pr.violation);
  }

  if (mutates(s.kind)) {
    if (v == nullptr && mode_ == Mode::Full) {
      apply_checked(s);
    } else {
      // Partial mode applies unchecked; after a violation the mutation
      // still lands if the result stays well-formed, so the model
      // tracks the running program as closely as possible.
      apply_unchecked(s);
    }
  }

  emit(seq, actor, s);
  if (v != nullptr && strict_) throw StrictViolationError(*v);
  return v;
}

// The premise held, so every edge operation must land.
void Session::apply_checked(const Statement& s) {
  switch (s.kind) {
    case StatementKind::Pass: {
      EdgeOpStatus rm = graph_.remove_edge(s.from(), s.target);
      EdgeOpStatus ad = graph_.add_edge(s.to(), s.target);
      assert(rm == EdgeOpStatus::Ok && ad == EdgeOpStatus::Ok);
      (void)rm;
      (void)ad;
      cell_remove(s.target, s.from());
      cell_add(s.target, s.to());
      break;
    }
    case StatementKind::Share: {
      EdgeOpStatus ad = graph_.add_edge(s.with(), s.target);
      assert(ad == EdgeOpStatus::Ok);
      (void)ad;
      cell_add(s.target, s.with());
      break;
    }
    case StatementKind::Release: {
      EdgeOpStatus rm = graph_.remove_edge(s.by(), s.target);
      assert(rm == EdgeOpStatus::Ok);
      (void)rm;
      cell_remove(s.target, s.by());
      break;
    }
    case StatementKind::Spawn:
      graph_.add_entity(s.target);
      break;
    case StatementKind::Allocate: {
      graph_.add_entity(s.target);
      EdgeOpStatus ad = graph_.add_edge(s.owner(), s.target);
      assert(ad == EdgeOpStatus::Ok);
      (void)ad;
      cell_add(s.target, s.owner());
      break;
    }
    default:
      break;
  }
}

// No premise to lean on, so each operation lands only when cheap
// structural checks prove the graph stays well formed, and the owner
// cells record exactly the edges that actually changed. Equivalent to
// applying on a copy and keeping it only when it validates, without
// the size-of-graph cost per statement.
void Session::apply_unchecked(const Statement& s) {
  switch (s.kind) {
    case StatementKind::Pass: {
      bool addable = s.target.is_resource() && graph_.contains(s.target) &&
                     graph_.contains(s.to());
      bool removable = graph_.has_edge(s.from(), s.target);
      if (!addable) {
        // Only the removal could land; refuse it when it would orphan
        // the target.
        if (removable && graph_.in_edges(s.target).size() >= 2) {
          graph_.remove_edge(s.from(), s.target);
          cell_remove(s.target, s.from());
        }
        return;
      }
      if (edge_would_cycle(graph_, s.to(), s.target)) return;
      if (removable) {
        graph_.remove_edge(s.from(), s.target);
        cell_remove(s.target, s.from());
      }
      graph_.add_edge(s.to(), s.target);
      cell_add(s.target, s.to());
      return;
    }
    case StatementKind::Share: {
      if (!s.target.is_resource() || !graph_.contains(s.target) ||
          !graph_.contains(s.with())) {
        return;
      }
      if (edge_would_cycle(graph_, s.with(), s.target)) return;
      graph_.add_edge(s.with(), s.target);
      cell_add(s.target, s.with());
      return;
    }
    case StatementKind::Release: {
      if (!graph_.has_edge(s.by(), s.target)) return;
      if (graph_.in_edges(s.target).size() < 2) return;  // would orphan
      graph_.remove_edge(s.by(), s.target);
      cell_remove(s.target, s.by());
      return;
    }
    case StatementKind::Spawn:
      if (s.target.is_process()) graph_.add_entity(s.target);
      return;
    case StatementKind::Allocate: {
      if (s.target.is_process()) {
        graph_.add_entity(s.target);
        return;
      }
      if (!graph_.contains(s.owner())) return;
      if (graph_.fresh(s.target)) {
        graph_.add_entity(s.target);
      } else if (edge_would_cycle(graph_, s.owner(), s.target)) {
        return;
      }
      graph_.add_edge(s.owner(), s.target);
      cell_add(s.target, s.owner());
      return;
    }
    default:
      return;
  }
}

void Session::cell_add(const EntityId& rho, const EntityId& owner) {
  if (rho.space() != serial_ || rho.ordinal() >= cells_.size()) return;
  OwnerCell& cell = cells_[rho.ordinal()];
  if (cell.count == 0) {
    cell.single = owner;
    cell.count = 1;
    return;
  }
  if (cell.count == 1) {
    if (cell.single == owner) return;
    cell.more = {cell.single, owner};
    std::sort(cell.more.begin(), cell.more.end());
    cell.count = 2;
    return;
  }
  auto it = std::lower_bound(cell.more.begin(), cell.more.end(), owner);
  if (it != cell.more.end() && *it == owner) return;
  cell.more.insert(it, owner);
  cell.count = static_cast<std::uint32_t>(cell.more.size());
}

void Session::cell_remove(const EntityId& rho, const EntityId& owner) {
  if (rho.space() != serial_ || rho.ordinal() >= cells_.size()) return;
  OwnerCell& cell = cells_[rho.ordinal()];
  if (cell.count == 1) {
    if (cell.single == owner) cell.count = 0;
    return;
  }
  if (cell.count > 1) {
    auto it = std::lower_bound(cell.more.begin(), cell.more.end(), owner);
    if (it == cell.more.end() || *it != owner) return;
    cell.more.erase(it);
    if (cell.more.size() == 1) {
      cell.single = cell.more[0];
      cell.more.clear();
      cell.count = 1;
    } else {
      cell.count = static_cast<std::uint32_t>(cell.more.size());
    }
  }
}

EntityId Session::on_allocate(const EntityId& actor) {
  EntityId rho = mint_entity(EntityKind::Resource);
  if (mode_ == Mode::None) return rho;
  ScopedInternalOps internal;
  check(actor, Statement::allocate(rho, staging_of(actor)));
  return rho;
}

const Violation* Session::on_field_assign(const EntityId& actor,
                                          const EntityId& obj,
                                          const EntityId& value) {
  if (mode_ == Mode::None) return nullptr;
  const Violation* v = on_field_write(actor, obj);
  auto owner = sole_direct_owner(value);
  if (owner.has_value() && *owner == staging_of(actor)) {
    ScopedInternalOps internal;
    const Violation* pv = check(actor, Statement::pass(value, *owner, obj));
    if (v == nullptr) v = pv;
  }
  return v;
}

EntityId Session::on_thread_start(const EntityId& actor) {
  EntityId tobj = mint_entity(EntityKind::Resource);
  EntityId pid = mint_entity(EntityKind::Process);
  if (mode_ != Mode::None) {
    ScopedInternalOps internal;
    check(actor, Statement::allocate(tobj, staging_of(actor)));
    check(actor, Statement::spawn(pid));
    check(actor, Statement::pass(tobj, staging_of(actor), pid));
  }
  std::unique_lock<std::mutex> lk(mutex_, std::defer_lock);
  if (concurrency_ == Concurrency::Serialized) lk.lock();
  context_[pid.ordinal()] = tobj;
  return pid;
}

void Session::mark_terminated(const EntityId& pid) {
  std::unique_lock<std::mutex> lk(mutex_, std::defer_lock);
  if (concurrency_ == Concurrency::Serialized) lk.lock();
  if (pid.space() == serial_ && pid.ordinal() < terminated_.size()) {
    terminated_[pid.ordinal()] = 1;
  }
}

Session::PassOutcome Session::pass_to(const EntityId& actor,
                                      const EntityId& rho,
                                      const EntityId& to) {
  PassOutcome out;
  if (mode_ == Mode::None) return out;
  std::unique_lock<std::mutex> lk(mutex_, std::defer_lock);
  if (concurrency_ == Concurrency::Serialized) lk.lock();
  auto in = graph_.in_edges(rho);
  if (in.size() > 1) {
    out.multi_owner = true;
    return out;
  }
  // With no owner on record the premise reports the failure; the
  // resource itself stands in as the claimed source.
  EntityId from = in.size() == 1 ? in[0].owner : rho;
  out.violation = check_locked(actor, Statement::pass(rho, from, to));
  return out;
}

std::optional<EntityId> Session::sole_direct_owner(const EntityId& rho) const {
  std::unique_lock<std::mutex> lk(mutex_, std::defer_lock);
  if (concurrency_ == Concurrency::Serialized) lk.lock();
  auto in = graph_.in_edges(rho);
  if (in.size() != 1) return std::nullopt;
  return in[0].owner;
}

std::string Session::graph_export() const {
  std::unique_lock<std::mutex> lk(mutex_, std::defer_lock);
  if (concurrency_ == Concurrency::Serialized) lk.lock();
  return snapshot(graph_, namer_nolock());
}

OwnershipGraph Session::graph_copy() const {
  std::unique_lock<std::mutex> lk(mutex_, std::defer_lock);
  if (concurrency_ == Concurrency::Serialized) lk.lock();
  return graph_;
}

std::size_t Session::violation_count() const {
  std::unique_lock<std::mutex> lk(mutex_, std::defer_lock);
  if (concurrency_ == Concurrency::Serialized) lk.lock();
  return violations_.size();
}

std::vector<EntityId> Session::leak_report() const {
  std::unique_lock<std::mutex> lk(mutex_, std::defer_lock);
  if (concurrency_ == Concurrency::Serialized) lk.lock();
  std::vector<EntityId> leaked;
  for (const EntityId& e : graph_.entities()) {
    if (!e.is_resource()) continue;
    RootResult r = root_of(graph_, e);
    if (r.roots.empty()) continue;
    bool all_dead = true;
    for (const EntityId& p : r.roots) {
      bool dead = p.space() == serial_ && p.ordinal() < terminated_.size() &&
                  terminated_[p.ordinal()] != 0;
      all_dead &= dead;
    }
    if (all_dead) leaked.push_back(e);
  }
  return leaked;
}

}  // namespace som
