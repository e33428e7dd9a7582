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

#ifndef SOM_GRAPH_HPP_
#define SOM_GRAPH_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "som/entity.hpp"

namespace som {

enum class EdgeOpStatus : std::uint8_t {
  Ok,
  UnknownEntity,    // an endpoint is not in the graph
  ProcessAsTarget,  // the owned side of an edge must be a resource
  NoSuchEdge,
};

std::string to_string(EdgeOpStatus s);

// Ownership graph with set semantics: entities and edges are stored
// sorted and deduplicated. Edges are kept ordered by (owned, owner) so
// the in-edges of an entity form a contiguous range; exports re-sort.
//
// Structural invariants (no incoming edges on processes, every resource
// owned, acyclicity) are not enforced by the mutators; validate()
// reports on them and the statement layer refuses mutations that would
// break them.
class OwnershipGraph {
 public:
  OwnershipGraph() = default;

  // Bulk-load without any well-formedness checks; duplicates are
  // collapsed. Callers that need a well-formed graph run validate().
  static OwnershipGraph from_parts(std::vector<EntityId> entities,
                                   std::vector<Edge> edges);

  // Same contract as from_parts, reusing existing capacity.
  void assign(std::span<const EntityId> entities, std::span<const Edge> edges);

  void add_entity(const EntityId& e);  // no-op if already present
  bool contains(const EntityId& e) const;
  bool fresh(const EntityId& e) const { return !contains(e); }
  bool has_edge(const EntityId& owner, const EntityId& owned) const;

  // Refuses unknown endpoints and process targets; re-adding an
  // existing edge is Ok. May create cycles.
  EdgeOpStatus add_edge(const EntityId& owner, const EntityId& owned);
  EdgeOpStatus remove_edge(const EntityId& owner, const EntityId& owned);

  const std::vector<EntityId>& entities() const { return entities_; }

  // Sorted by (owned, owner).
  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const Edge> in_edges(const EntityId& e) const;

  std::size_t entity_count() const { return entities_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  // Index of e in entities(), or npos.
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t index_of(const EntityId& e) const;

  friend bool operator==(const OwnershipGraph&, const OwnershipGraph&) =
      default;

 private:
  std::vector<EntityId> entities_;  // sorted, unique
  std::vector<Edge> edges_;         // sorted by (owned, owner), unique
};

// Result of a root query: the processes from which `e` is reachable
// along ownership edges.
struct RootResult {
  std::vector<EntityId> roots;  // sorted, unique
  bool unknown_entity = false;  // queried entity is not in the graph
  bool cycle_detected = false;  // the walk crossed an ownership cycle
};

// Walks upward (against edge direction) from e, depth first, visiting
// each ancestor once. No state is kept across calls.
RootResult root_of(const OwnershipGraph& g, const EntityId& e);

// Allocation-light equivalents of root_of membership queries, for hot
// paths. is_root: pi is among the roots of e. is_sole_root: the root
// set of e is exactly {pi}.
bool is_root(const OwnershipGraph& g, const EntityId& pi, const EntityId& e);
bool is_sole_root(const OwnershipGraph& g, const EntityId& pi,
                  const EntityId& e);

bool is_acyclic(const OwnershipGraph& g);

// Would adding owner -> owned close a cycle? Exact on acyclic graphs;
// on a graph that already has a cycle it only reports cycles running
// through the new edge. Self-edges always cycle.
bool edge_would_cycle(const OwnershipGraph& g, const EntityId& owner,
                      const EntityId& owned);

struct ValidationReport {
  bool no_owned_process = true;   // property (P)
  bool every_resource_owned = true;  // property (R)
  bool acyclic = true;            // property (A)
  bool endpoints_known = true;    // every edge endpoint is an entity
  std::vector<std::string> notes;

  bool ok() const {
    return no_owned_process && every_resource_owned && acyclic &&
           endpoints_known;
  }
  std::string describe() const;  // one note per line
};

// Notes are built only for failing reports; pass with_notes = false on
// paths that just branch on the flags.
ValidationReport validate(const OwnershipGraph& g, bool with_notes = true);

// One line per edge, "<owner> -> <owned>", ordered by (owner, owned)
// with entities compared by (kind, id).
std::string snapshot(const OwnershipGraph& g);
std::string snapshot(const OwnershipGraph& g, const NameFn& names);

}  // namespace som

#endif  // SOM_GRAPH_HPP_
