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

#include "som/graph.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <sstream>

namespace som {

std::string to_string(EntityKind kind) {
  return kind == EntityKind::Process ? "Process" : "Resource";
}

std::string to_string(const EntityId& e) {
  return (e.is_process() ? "p" : "r") + std::to_string(e.id);
}

NameFn default_names() {
  return [](const EntityId& e) { return to_string(e); };
}

std::string to_string(EdgeOpStatus s) {
  switch (s) {
    case EdgeOpStatus::Ok: return "Ok";
    case EdgeOpStatus::UnknownEntity: return "UnknownEntity";
    case EdgeOpStatus::ProcessAsTarget: return "ProcessAsTarget";
    case EdgeOpStatus::NoSuchEdge: return "NoSuchEdge";
  }
  return "?";
}

namespace {

// Storage order: in-edges of an entity are contiguous.
constexpr auto by_owned_then_owner = [](const Edge& a, const Edge& b) {
  if (a.owned != b.owned) return a.owned < b.owned;
  return a.owner < b.owner;
};

void sort_unique(std::vector<EntityId>& v) {
  if (!std::is_sorted(v.begin(), v.end())) std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

void sort_unique_edges(std::vector<Edge>& v) {
  if (!std::is_sorted(v.begin(), v.end(), by_owned_then_owner)) {
    std::sort(v.begin(), v.end(), by_owned_then_owner);
  }
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

OwnershipGraph OwnershipGraph::from_parts(std::vector<EntityId> entities,
                                          std::vector<Edge> edges) {
  OwnershipGraph g;
  g.entities_ = std::move(entities);
  g.edges_ = std::move(edges);
  sort_unique(g.entities_);
  sort_unique_edges(g.edges_);
  return g;
}

void OwnershipGraph::assign(std::span<const EntityId> entities,
                            std::span<const Edge> edges) {
  entities_.assign(entities.begin(), entities.end());
  edges_.assign(edges.begin(), edges.end());
  sort_unique(entities_);
  sort_unique_edges(edges_);
}

void OwnershipGraph::add_entity(const EntityId& e) {
  auto it = std::lower_bound(entities_.begin(), entities_.end(), e);
  if (it != entities_.end() && *it == e) return;
  entities_.insert(it, e);
}

bool OwnershipGraph::contains(const EntityId& e) const {
  return std::binary_search(entities_.begin(), entities_.end(), e);
}

std::size_t OwnershipGraph::index_of(const EntityId& e) const {
  auto it = std::lower_bound(entities_.begin(), entities_.end(), e);
  if (it == entities_.end() || *it != e) return npos;
  return static_cast<std::size_t>(it - entities_.begin());
}

bool OwnershipGraph::has_edge(const EntityId& owner,
                              const EntityId& owned) const {
  Edge e{owner, owned};
  auto it =
      std::lower_bound(edges_.begin(), edges_.end(), e, by_owned_then_owner);
  return it != edges_.end() && *it == e;
}

EdgeOpStatus OwnershipGraph::add_edge(const EntityId& owner,
                                      const EntityId& owned) {
  if (!contains(owner) || !contains(owned)) return EdgeOpStatus::UnknownEntity;
  if (owned.is_process()) return EdgeOpStatus::ProcessAsTarget;
  Edge e{owner, owned};
  auto it =
      std::lower_bound(edges_.begin(), edges_.end(), e, by_owned_then_owner);
  if (it != edges_.end() && *it == e) return EdgeOpStatus::Ok;
  edges_.insert(it, e);
  return EdgeOpStatus::Ok;
}

EdgeOpStatus OwnershipGraph::remove_edge(const EntityId& owner,
                                         const EntityId& owned) {
  Edge e{owner, owned};
  auto it =
      std::lower_bound(edges_.begin(), edges_.end(), e, by_owned_then_owner);
  if (it == edges_.end() || *it != e) return EdgeOpStatus::NoSuchEdge;
  edges_.erase(it);
  return EdgeOpStatus::Ok;
}

std::span<const Edge> OwnershipGraph::in_edges(const EntityId& e) const {
  auto lo = std::lower_bound(
      edges_.begin(), edges_.end(), e,
      [](const Edge& a, const EntityId& v) { return a.owned < v; });
  auto hi = std::upper_bound(
      lo, edges_.end(), e,
      [](const EntityId& v, const Edge& a) { return v < a.owned; });
  return {&*lo, static_cast<std::size_t>(hi - lo)};
}

namespace {

// Reusable upward-walk scratch, one per thread. Marks are generation
// stamps, so resetting between walks is a counter bump rather than a
// wipe of the whole mark array; a walk costs only what it visits.
struct WalkScratch {
  std::vector<std::uint64_t> mark;  // 2*gen = gray, 2*gen+1 = black
  std::uint64_t gen = 0;

  struct Frame {
    std::uint32_t node;
    std::uint32_t next;  // offset into the node's in-edge range
  };
  std::vector<Frame> stack;
  std::size_t top = 0;

  void init(std::size_t n) {
    if (mark.size() < n) mark.resize(n, 0);
    if (stack.size() < n) stack.resize(n);
    ++gen;
    top = 0;
  }

  bool is_white(std::size_t i) const { return mark[i] < 2 * gen; }
  bool is_gray(std::size_t i) const { return mark[i] == 2 * gen; }
  void set_gray(std::size_t i) { mark[i] = 2 * gen; }
  void set_black(std::size_t i) { mark[i] = 2 * gen + 1; }

  void push(std::uint32_t node) { stack[top++] = {node, 0}; }
};

thread_local WalkScratch tls_walk;

// Visits every ancestor of start (start included) exactly once.
// Reports processes reached and whether a gray node was re-entered.
// Callbacks must not start another walk; the scratch is shared.
template <typename OnProcess>
void walk_up(const OwnershipGraph& g, std::size_t start, bool* cycle,
             OnProcess&& on_process) {
  const auto& ents = g.entities();
  WalkScratch& s = tls_walk;
  s.init(ents.size());
  s.push(static_cast<std::uint32_t>(start));
  s.set_gray(start);
  if (ents[start].is_process()) on_process(ents[start]);
  while (s.top > 0) {
    WalkScratch::Frame& f = s.stack[s.top - 1];
    auto in = g.in_edges(ents[f.node]);
    if (f.next >= in.size()) {
      s.set_black(f.node);
      --s.top;
      continue;
    }
    const EntityId& owner = in[f.next++].owner;
    std::size_t idx = g.index_of(owner);
    if (idx == OwnershipGraph::npos) continue;  // dangling edge
    if (s.is_gray(idx)) {
      if (cycle) *cycle = true;
      continue;
    }
    if (!s.is_white(idx)) continue;
    s.set_gray(idx);
    if (ents[idx].is_process()) on_process(ents[idx]);
    s.push(static_cast<std::uint32_t>(idx));
  }
}

}  // namespace

RootResult root_of(const OwnershipGraph& g, const EntityId& e) {
  RootResult r;
  std::size_t start = g.index_of(e);
  if (start == OwnershipGraph::npos) {
    r.unknown_entity = true;
    return r;
  }
  walk_up(g, start, &r.cycle_detected,
          [&](const EntityId& p) { r.roots.push_back(p); });
  std::sort(r.roots.begin(), r.roots.end());
  return r;
}

bool is_root(const OwnershipGraph& g, const EntityId& pi, const EntityId& e) {
  std::size_t start = g.index_of(e);
  if (start == OwnershipGraph::npos || !g.contains(pi)) return false;
  bool found = false;
  walk_up(g, start, nullptr, [&](const EntityId& p) {
    if (p == pi) found = true;
  });
  return found;
}

bool is_sole_root(const OwnershipGraph& g, const EntityId& pi,
                  const EntityId& e) {
  std::size_t start = g.index_of(e);
  if (start == OwnershipGraph::npos || !g.contains(pi)) return false;
  bool found = false;
  bool other = false;
  walk_up(g, start, nullptr, [&](const EntityId& p) {
    if (p == pi) {
      found = true;
    } else {
      other = true;
    }
  });
  return found && !other;
}

bool is_acyclic(const OwnershipGraph& g) {
  const auto& ents = g.entities();
  WalkScratch& s = tls_walk;
  s.init(ents.size());
  // Tri-color DFS against edge direction; a cycle is visible from
  // either side.
  for (std::size_t i = 0; i < ents.size(); ++i) {
    if (!s.is_white(i)) continue;
    s.push(static_cast<std::uint32_t>(i));
    s.set_gray(i);
    while (s.top > 0) {
      WalkScratch::Frame& f = s.stack[s.top - 1];
      auto in = g.in_edges(ents[f.node]);
      if (f.next >= in.size()) {
        s.set_black(f.node);
        --s.top;
        continue;
      }
      const EntityId& owner = in[f.next++].owner;
      std::size_t idx = g.index_of(owner);
      if (idx == OwnershipGraph::npos) continue;
      if (s.is_gray(idx)) return false;
      if (!s.is_white(idx)) continue;
      s.set_gray(idx);
      s.push(static_cast<std::uint32_t>(idx));
    }
  }
  return true;
}

bool edge_would_cycle(const OwnershipGraph& g, const EntityId& owner,
                      const EntityId& owned) {
  if (owner == owned) return true;
  std::size_t start = g.index_of(owner);
  std::size_t goal = g.index_of(owned);
  if (start == OwnershipGraph::npos || goal == OwnershipGraph::npos) {
    return false;
  }
  // owner -> owned closes a cycle exactly when owned already owns
  // owner transitively, i.e. when owned shows up among owner's
  // ancestors. Walk up from owner looking for it.
  const auto& ents = g.entities();
  WalkScratch& s = tls_walk;
  s.init(ents.size());
  s.push(static_cast<std::uint32_t>(start));
  s.set_gray(start);
  while (s.top > 0) {
    WalkScratch::Frame& f = s.stack[s.top - 1];
    auto in = g.in_edges(ents[f.node]);
    if (f.next >= in.size()) {
      s.set_black(f.node);
      --s.top;
      continue;
    }
    const EntityId& up = in[f.next++].owner;
    std::size_t idx = g.index_of(up);
    if (idx == OwnershipGraph::npos) continue;
    if (idx == goal) return true;
    if (!s.is_white(idx)) continue;
    s.set_gray(idx);
    s.push(static_cast<std::uint32_t>(idx));
  }
  return false;
}

namespace {

// Diagnostic strings, built only for reports that failed.
void collect_validation_notes(const OwnershipGraph& g, ValidationReport& rep) {
  for (const Edge& e : g.edges()) {
    if (e.owned.is_process()) {
      rep.notes.push_back("property (P) violated: process " +
                          to_string(e.owned) + " has an incoming edge from " +
                          to_string(e.owner));
    }
    if (!g.contains(e.owner) || !g.contains(e.owned)) {
      rep.notes.push_back("edge " + to_string(e.owner) + " -> " +
                          to_string(e.owned) + " has an unknown endpoint");
    }
  }
  for (const EntityId& e : g.entities()) {
    if (e.is_resource() && g.in_edges(e).empty()) {
      rep.notes.push_back("property (R) violated: resource " + to_string(e) +
                          " has no owner");
    }
  }
  if (!rep.acyclic) {
    rep.notes.push_back("property (A) violated: ownership edges form a cycle");
  }
}

}  // namespace

ValidationReport validate(const OwnershipGraph& g, bool with_notes) {
  ValidationReport rep;
  const auto& ents = g.entities();
  const auto& edges = g.edges();

  // One merge over the two sorted arrays. Edge groups share an owned
  // entity, so (P) and the owned-side endpoint check fall out of the
  // group head, and any resource the entity cursor skips past has no
  // in-edges at all.
  std::size_t k = 0;
  std::size_t i = 0;
  while (i < edges.size()) {
    const EntityId& owned = edges[i].owned;
    do {
      if (!g.contains(edges[i].owner)) rep.endpoints_known = false;
      ++i;
    } while (i < edges.size() && edges[i].owned == owned);
    if (owned.is_process()) rep.no_owned_process = false;
    while (k < ents.size() && ents[k] < owned) {
      if (ents[k].is_resource()) rep.every_resource_owned = false;
      ++k;
    }
    if (k < ents.size() && ents[k] == owned) {
      ++k;
    } else {
      rep.endpoints_known = false;
    }
  }
  while (k < ents.size()) {
    if (ents[k].is_resource()) rep.every_resource_owned = false;
    ++k;
  }

  rep.acyclic = is_acyclic(g);
  if (with_notes && !rep.ok()) collect_validation_notes(g, rep);
  return rep;
}

std::string ValidationReport::describe() const {
  if (ok()) return "ok";
  std::string out;
  for (const auto& n : notes) {
    out += n;
    out += '\n';
  }
  return out;
}

std::string snapshot(const OwnershipGraph& g) {
  return snapshot(g, default_names());
}

std::string snapshot(const OwnershipGraph& g, const NameFn& names) {
  std::vector<Edge> sorted(g.edges());
  std::sort(sorted.begin(), sorted.end());  // (owner, owned)
  std::string out;
  for (const Edge& e : sorted) {
    out += names(e.owner);
    out += " -> ";
    out += names(e.owned);
    out += '\n';
  }
  return out;
}

}  // namespace som
