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

#include "som/semantics.hpp"

#include <cassert>

namespace som {

std::string to_string(StatementKind k) {
  switch (k) {
    case StatementKind::Read: return "read";
    case StatementKind::Write: return "write";
    case StatementKind::Pass: return "pass";
    case StatementKind::Share: return "share";
    case StatementKind::Release: return "release";
    case StatementKind::Spawn: return "spawn";
    case StatementKind::Allocate: return "allocate";
  }
  return "?";
}

bool mutates(StatementKind k) {
  return k != StatementKind::Read && k != StatementKind::Write;
}

std::string render(const Statement& s, const NameFn& names) {
  switch (s.kind) {
    case StatementKind::Read:
      return names(s.target) + ".read";
    case StatementKind::Write:
      return names(s.target) + ".write";
    case StatementKind::Pass:
      return names(s.target) + ".pass(" + names(s.from()) + ", " +
             names(s.to()) + ")";
    case StatementKind::Share:
      return names(s.target) + ".share(" + names(s.with()) + ")";
    case StatementKind::Release:
      return names(s.target) + ".release(" + names(s.by()) + ")";
    case StatementKind::Spawn:
      return names(s.target) + " := spawn";
    case StatementKind::Allocate:
      return names(s.target) + " := " + names(s.owner()) + ".allocate";
  }
  return "?";
}

std::string render(const Statement& s) { return render(s, default_names()); }

std::string to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::NotRoot: return "NotRoot";
    case ViolationKind::NotSoleRoot: return "NotSoleRoot";
    case ViolationKind::NoSuchEdge: return "NoSuchEdge";
    case ViolationKind::CycleWouldForm: return "CycleWouldForm";
    case ViolationKind::LastOwnerRelease: return "LastOwnerRelease";
    case ViolationKind::NotFresh: return "NotFresh";
    case ViolationKind::UnknownEntity: return "UnknownEntity";
  }
  return "?";
}

namespace {

// Root-set requirements, reported with NotRoot when the actor is not a
// root at all and NotSoleRoot when it is one of several.
PremiseResult require_root(const OwnershipGraph& g, const EntityId& actor,
                           const EntityId& e) {
  if (!is_root(g, actor, e)) return PremiseResult::fail(ViolationKind::NotRoot);
  return PremiseResult::ok();
}

PremiseResult require_sole_root(const OwnershipGraph& g, const EntityId& actor,
                                const EntityId& e) {
  if (!is_root(g, actor, e)) return PremiseResult::fail(ViolationKind::NotRoot);
  if (!is_sole_root(g, actor, e)) {
    return PremiseResult::fail(ViolationKind::NotSoleRoot);
  }
  return PremiseResult::ok();
}

bool known_resource(const OwnershipGraph& g, const EntityId& e) {
  return e.is_resource() && g.contains(e);
}

}  // namespace

PremiseResult premise(const OwnershipGraph& g, const EntityId& actor,
                      const Statement& s, ReleaseRule rule) {
  if (!actor.is_process() || !g.contains(actor)) {
    return PremiseResult::fail(ViolationKind::UnknownEntity);
  }
  switch (s.kind) {
    case StatementKind::Read: {
      if (!known_resource(g, s.target)) {
        return PremiseResult::fail(ViolationKind::UnknownEntity);
      }
      return require_root(g, actor, s.target);
    }
    case StatementKind::Write: {
      if (!known_resource(g, s.target)) {
        return PremiseResult::fail(ViolationKind::UnknownEntity);
      }
      return require_sole_root(g, actor, s.target);
    }
    case StatementKind::Pass: {
      if (!known_resource(g, s.target) || !g.contains(s.from()) ||
          !g.contains(s.to())) {
        return PremiseResult::fail(ViolationKind::UnknownEntity);
      }
      if (!g.has_edge(s.from(), s.target)) {
        return PremiseResult::fail(ViolationKind::NoSuchEdge);
      }
      if (auto r = require_sole_root(g, actor, s.target); !r.enabled()) {
        return r;
      }
      // The dropped from-edge sits above the target, so it cannot lie
      // on a target-to-destination path; checking the unmutated graph
      // is exact.
      if (edge_would_cycle(g, s.to(), s.target)) {
        return PremiseResult::fail(ViolationKind::CycleWouldForm);
      }
      return PremiseResult::ok();
    }
    case StatementKind::Share: {
      if (!known_resource(g, s.target) || !g.contains(s.with())) {
        return PremiseResult::fail(ViolationKind::UnknownEntity);
      }
      if (auto r = require_root(g, actor, s.target); !r.enabled()) return r;
      if (edge_would_cycle(g, s.with(), s.target)) {
        return PremiseResult::fail(ViolationKind::CycleWouldForm);
      }
      return PremiseResult::ok();
    }
    case StatementKind::Release: {
      if (!known_resource(g, s.target) || !g.contains(s.by())) {
        return PremiseResult::fail(ViolationKind::UnknownEntity);
      }
      if (!g.has_edge(s.by(), s.target)) {
        return PremiseResult::fail(ViolationKind::NoSuchEdge);
      }
      auto r = rule == ReleaseRule::SoleRootOfOwner
                   ? require_sole_root(g, actor, s.by())
                   : require_root(g, actor, s.by());
      if (!r.enabled()) return r;
      // Some other owner must keep the resource alive.
      for (const Edge& e : g.in_edges(s.target)) {
        if (e.owner != s.by()) return PremiseResult::ok();
      }
      return PremiseResult::fail(ViolationKind::LastOwnerRelease);
    }
    case StatementKind::Spawn: {
      if (!s.target.is_process()) {
        return PremiseResult::fail(ViolationKind::UnknownEntity);
      }
      if (!g.fresh(s.target)) {
        return PremiseResult::fail(ViolationKind::NotFresh);
      }
      return PremiseResult::ok();
    }
    case StatementKind::Allocate: {
      if (!s.target.is_resource() || !g.contains(s.owner())) {
        return PremiseResult::fail(ViolationKind::UnknownEntity);
      }
      if (!g.fresh(s.target)) {
        return PremiseResult::fail(ViolationKind::NotFresh);
      }
      return PremiseResult::ok();
    }
  }
  return PremiseResult::fail(ViolationKind::UnknownEntity);
}

bool apply_mutation(OwnershipGraph& g, const Statement& s) {
  switch (s.kind) {
    case StatementKind::Read:
    case StatementKind::Write:
      return true;
    case StatementKind::Pass: {
      bool ok = g.remove_edge(s.from(), s.target) == EdgeOpStatus::Ok;
      ok &= g.add_edge(s.to(), s.target) == EdgeOpStatus::Ok;
      return ok;
    }
    case StatementKind::Share:
      return g.add_edge(s.with(), s.target) == EdgeOpStatus::Ok;
    case StatementKind::Release:
      return g.remove_edge(s.by(), s.target) == EdgeOpStatus::Ok;
    case StatementKind::Spawn:
      g.add_entity(s.target);
      return true;
    case StatementKind::Allocate: {
      g.add_entity(s.target);
      return g.add_edge(s.owner(), s.target) == EdgeOpStatus::Ok;
    }
  }
  return false;
}

void apply(OwnershipGraph& g, const EntityId& actor, const Statement& s,
           ReleaseRule rule) {
  assert(premise(g, actor, s, rule).enabled());
  (void)actor;
  (void)rule;
  bool ok = apply_mutation(g, s);
  assert(ok);
  (void)ok;
}

std::vector<Step> enabled_steps(const Configuration& c, ReleaseRule rule) {
  std::vector<Step> steps;
  for (const auto& [pid, st] : c.procs) {
    if (st.done()) continue;
    if (premise(c.graph, pid, st.head(), rule).enabled()) {
      steps.push_back(Step{pid, st.head()});
    }
  }
  return steps;
}

Configuration apply_step(const Configuration& c, const Step& step,
                         ReleaseRule rule) {
  Configuration next = c;
  apply(next.graph, step.actor, step.stmt, rule);
  auto it = next.procs.find(step.actor);
  assert(it != next.procs.end() && !it->second.done());
  ++it->second.pc;
  if (step.stmt.kind == StatementKind::Spawn) {
    next.procs.emplace(step.stmt.target, ProcessState{step.stmt.body, 0});
  }
  return next;
}

}  // namespace som
