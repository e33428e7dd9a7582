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

#ifndef SOM_STATEMENT_HPP_
#define SOM_STATEMENT_HPP_

#include <memory>
#include <string>

#include "som/entity.hpp"

namespace som {

struct ProgramBody;  // defined in semantics.hpp
using BodyPtr = std::shared_ptr<const ProgramBody>;

enum class StatementKind : std::uint8_t {
  Read,
  Write,
  Pass,
  Share,
  Release,
  Spawn,
  Allocate,
};

std::string to_string(StatementKind k);
bool mutates(StatementKind k);

// One statement of the calculus. `target` is the resource acted on,
// except for Spawn (the new process) and Allocate (the new resource).
// `a` and `b` hold the remaining operands, named by the accessors.
struct Statement {
  StatementKind kind{StatementKind::Read};
  EntityId target{};
  EntityId a{};
  EntityId b{};
  BodyPtr body{};  // Spawn only, may be null

  const EntityId& from() const { return a; }   // Pass
  const EntityId& to() const { return b; }     // Pass
  const EntityId& with() const { return a; }   // Share
  const EntityId& by() const { return a; }     // Release
  const EntityId& owner() const { return a; }  // Allocate

  static Statement read(EntityId rho) {
    return {StatementKind::Read, rho, {}, {}, nullptr};
  }
  static Statement write(EntityId rho) {
    return {StatementKind::Write, rho, {}, {}, nullptr};
  }
  static Statement pass(EntityId rho, EntityId from, EntityId to) {
    return {StatementKind::Pass, rho, from, to, nullptr};
  }
  static Statement share(EntityId rho, EntityId with) {
    return {StatementKind::Share, rho, with, {}, nullptr};
  }
  static Statement release(EntityId rho, EntityId by) {
    return {StatementKind::Release, rho, by, {}, nullptr};
  }
  static Statement spawn(EntityId pi, BodyPtr body = nullptr) {
    return {StatementKind::Spawn, pi, {}, {}, std::move(body)};
  }
  static Statement allocate(EntityId rho, EntityId owner) {
    return {StatementKind::Allocate, rho, owner, {}, nullptr};
  }

  // Spawn bodies compare by identity.
  friend bool operator==(const Statement&, const Statement&) = default;
};

// "r3.pass(p1, p2)", "p2 := spawn", "r4 := p1.allocate", ...
std::string render(const Statement& s, const NameFn& names);
std::string render(const Statement& s);

}  // namespace som

#endif  // SOM_STATEMENT_HPP_
