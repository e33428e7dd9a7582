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

#ifndef SOM_SEMANTICS_HPP_
#define SOM_SEMANTICS_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "som/graph.hpp"
#include "som/statement.hpp"

namespace som {

enum class ViolationKind : std::uint8_t {
  NotRoot,
  NotSoleRoot,
  NoSuchEdge,
  CycleWouldForm,
  LastOwnerRelease,
  NotFresh,
  UnknownEntity,
};

std::string to_string(ViolationKind k);

// Release requires exclusive control over the releasing owner by
// default; AnyRootOfOwner relaxes that to mere root membership.
enum class ReleaseRule : std::uint8_t { SoleRootOfOwner, AnyRootOfOwner };

struct PremiseResult {
  std::optional<ViolationKind> violation;  // empty means enabled

  bool enabled() const { return !violation.has_value(); }

  static PremiseResult ok() { return {}; }
  static PremiseResult fail(ViolationKind k) { return {k}; }
};

// Evaluates the premise of `s` executed by `actor` against g. Does not
// mutate. When several premises fail at once the reported kind follows
// a fixed precedence: UnknownEntity, then NoSuchEdge, then
// NotRoot/NotSoleRoot, then LastOwnerRelease, then CycleWouldForm.
PremiseResult premise(const OwnershipGraph& g, const EntityId& actor,
                      const Statement& s,
                      ReleaseRule rule = ReleaseRule::SoleRootOfOwner);

// Applies the graph effect of `s` without judging its premise.
// Tolerant: removals of absent edges and additions that the graph
// refuses are skipped. Returns false if any part was skipped.
bool apply_mutation(OwnershipGraph& g, const Statement& s);

// premise + apply_mutation for statements known to be enabled.
// Asserts the premise holds.
void apply(OwnershipGraph& g, const EntityId& actor, const Statement& s,
           ReleaseRule rule = ReleaseRule::SoleRootOfOwner);

// A straight-line statement list with a stable identity used for state
// canonicalization. Spawned processes run the body carried by their
// Spawn statement.
struct ProgramBody {
  std::uint32_t site = 0;
  std::vector<Statement> stmts;
};

struct ProcessState {
  BodyPtr body;  // null means the empty program
  std::uint32_t pc = 0;

  bool done() const { return !body || pc >= body->stmts.size(); }
  const Statement& head() const { return body->stmts[pc]; }
};

// One configuration of the transition relation: the ownership graph
// plus the remaining program of every process.
struct Configuration {
  OwnershipGraph graph;
  std::map<EntityId, ProcessState> procs;

  bool all_done() const {
    for (const auto& [pid, st] : procs) {
      if (!st.done()) return false;
    }
    return true;
  }
};

struct Step {
  EntityId actor;
  Statement stmt;
};

// Heads whose premises hold in c, in actor order.
std::vector<Step> enabled_steps(const Configuration& c,
                                ReleaseRule rule = ReleaseRule::SoleRootOfOwner);

// Successor configuration: applies the step's graph effect, advances
// the actor, and registers spawned processes with their bodies.
Configuration apply_step(const Configuration& c, const Step& step,
                         ReleaseRule rule = ReleaseRule::SoleRootOfOwner);

}  // namespace som

#endif  // SOM_SEMANTICS_HPP_
