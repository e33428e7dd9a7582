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

#ifndef SOM_ENTITY_HPP_
#define SOM_ENTITY_HPP_

#include <compare>
#include <cstdint>
#include <functional>
#include <string>

namespace som {

enum class EntityKind : std::uint8_t { Process = 0, Resource = 1 };

// Identity of one process or resource. The high half of `id` is a space
// tag (every session draws from its own space, hand-built test fixtures
// use space 0), the low half an ordinal within that space. Ids are never
// reused.
struct EntityId {
  EntityKind kind{EntityKind::Process};
  std::uint64_t id{0};

  static constexpr EntityId process(std::uint64_t id) {
    return EntityId{EntityKind::Process, id};
  }
  static constexpr EntityId resource(std::uint64_t id) {
    return EntityId{EntityKind::Resource, id};
  }

  constexpr bool is_process() const { return kind == EntityKind::Process; }
  constexpr bool is_resource() const { return kind == EntityKind::Resource; }
  constexpr std::uint64_t space() const { return id >> 32; }
  constexpr std::uint64_t ordinal() const { return id & 0xffffffffULL; }

  // Comparison order (kind, id) is the order used by exports.
  friend constexpr auto operator<=>(const EntityId&, const EntityId&) = default;
};

// Ownership edge. `owner` may be either kind, `owned` is always a
// resource in a well-formed graph.
struct Edge {
  EntityId owner;
  EntityId owned;

  friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

std::string to_string(EntityKind kind);

// Fallback rendering ("p3", "r17") used when no name table applies.
std::string to_string(const EntityId& e);

// Maps an entity to its display name.
using NameFn = std::function<std::string(const EntityId&)>;

NameFn default_names();

}  // namespace som

template <>
struct std::hash<som::EntityId> {
  std::size_t operator()(const som::EntityId& e) const noexcept {
    return std::hash<std::uint64_t>{}(e.id * 2 +
                                      static_cast<std::uint64_t>(e.kind));
  }
};

#endif  // SOM_ENTITY_HPP_
