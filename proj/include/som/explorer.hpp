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

#ifndef SOM_EXPLORER_HPP_
#define SOM_EXPLORER_HPP_

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "som/semantics.hpp"

namespace som {

// Textual model programs, one file per scenario, extension `.som`:
//
//   # ball volleys between two players
//   ball := ping.allocate
//   process ping {
//     repeat 2 { ball.pass(ping, p1) }
//   }
//   process p1 { ... }
//
// Top level holds `process <name> { <stmt>* }` blocks, resource
// declarations `r := owner.allocate`, and edge-dropping fixtures
// `r.release(owner)`. Statements are `x.read`, `x.write`,
// `x.pass(a, b)`, `x.share(a)`, `x.release(a)`, `p := spawn { ... }`,
// `r := a.allocate`, and `repeat <k> { ... }`. `#` starts a line
// comment. Process block names are visible everywhere; every other
// name must be declared before use, and a later declaration of the
// same name rebinds it. `repeat` is unrolled while parsing, so each
// iteration's spawn/allocate binds a distinct entity.

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int col, const std::string& msg);

  int line;  // 1-based
  int col;   // 1-based
  std::string message;
};

class UndeclaredName : public ParseError {
 public:
  UndeclaredName(int line, int col, const std::string& name);

  std::string name;
};

struct ParseOptions {
  std::uint32_t repeat_bound = 3;
};

// A parsed program: the starting configuration (declared processes
// with their bodies plus the declared part of the ownership graph)
// and the name table. Entities introduced at runtime by spawn or
// allocate statements already have their identities assigned, one per
// statement site, so exploration is schedule-independent.
struct SomProgram {
  Configuration initial;
  std::map<std::string, EntityId> names;    // final binding per name
  std::map<EntityId, std::string> display;  // entity -> source name

  NameFn namer() const;
};

SomProgram parse(const std::string& text, ParseOptions opts = {});
SomProgram parse_file(const std::string& path, ParseOptions opts = {});

// Two distinct processes whose next statements are an enabled write
// and an enabled access of the same resource in the same state.
struct RaceWitness {
  Configuration state;
  EntityId pi1;  // the writer
  EntityId pi2;
  EntityId rho;
  StatementKind kind1{StatementKind::Write};
  StatementKind kind2{StatementKind::Read};  // Read or Write
};

struct LemmaFailure {
  Configuration state;  // predecessor the step was taken from
  Step step;
  std::string diagnosis;
};

struct ExploreLimits {
  std::uint64_t max_states = 1000000;
};

struct ExplorationReport {
  std::uint64_t states_visited = 0;
  std::uint64_t transitions = 0;
  std::vector<RaceWitness> race_witnesses;
  std::vector<LemmaFailure> lemma_failures;
  // Non-terminal configurations with no enabled step.
  std::vector<Configuration> deadlocked_states;
  NameFn names;

  bool clean() const {
    return race_witnesses.empty() && lemma_failures.empty();
  }
  std::string to_text() const;
  // {"states": .., "witnesses": [..], "lemma_failures": [..],
  //  "deadlocks": [..]}
  std::string to_json() const;
};

// The starting graph breaks a structural property; nothing to explore.
class InvalidInitialGraph : public std::runtime_error {
 public:
  explicit InvalidInitialGraph(ValidationReport rep);

  ValidationReport report;
};

// The visited-state budget ran out; `partial` holds everything found
// up to that point.
class LimitExceeded : public std::runtime_error {
 public:
  explicit LimitExceeded(ExplorationReport partial);

  ExplorationReport partial;
};

// Depth-first enumeration of every reachable configuration under the
// interleaving semantics, merging states that canonicalize equally.
// Each visited state is scanned for race witnesses over the pairwise
// next statements, and every successor graph is revalidated. Blocked
// statements simply contribute no successor.
ExplorationReport explore(const SomProgram& p, ExploreLimits limits = {});

// Race scan of a single configuration.
std::vector<RaceWitness> detect_races(const Configuration& c);

const std::vector<Configuration>& check_deadlock(const ExplorationReport& r);

// Byte key of a configuration: equal keys mean identical entity sets,
// edge sets, and per-process control points.
std::string canonical_key(const Configuration& c);

}  // namespace som

#endif  // SOM_EXPLORER_HPP_
