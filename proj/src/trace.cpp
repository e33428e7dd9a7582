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

#include "som/trace.hpp"

#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <utility>

#include "json.hpp"

namespace som {

namespace {

using ordered_json = nlohmann::ordered_json;

bool valid_name(const std::string& s) {
  if (s.empty() || s[0] < 'a' || s[0] > 'z') return false;
  for (char c : s) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
    if (!ok) return false;
  }
  return true;
}

const std::vector<std::string>& arg_keys_for(const std::string& op) {
  static const std::vector<std::string> none;
  static const std::vector<std::string> pass{"from", "to"};
  static const std::vector<std::string> share{"with"};
  static const std::vector<std::string> release{"by"};
  static const std::vector<std::string> spawn{"binds", "body_ref"};
  static const std::vector<std::string> allocate{"owner", "binds"};
  if (op == "pass") return pass;
  if (op == "share") return share;
  if (op == "release") return release;
  if (op == "spawn") return spawn;
  if (op == "allocate") return allocate;
  return none;
}

bool known_op(const std::string& op) {
  return op == "read" || op == "write" || op == "pass" || op == "share" ||
         op == "release" || op == "spawn" || op == "allocate";
}

[[noreturn]] void fail(std::size_t line, std::size_t offset,
                       const std::string& message) {
  throw TraceParseError(line, offset, message);
}

TraceEvent parse_line(const std::string& text, std::size_t line,
                      std::size_t offset) {
  ordered_json j = ordered_json::parse(text, nullptr, false);
  if (j.is_discarded()) fail(line, offset, "invalid JSON");
  if (!j.is_object()) fail(line, offset, "event is not a JSON object");

  static const std::vector<std::string> top{"seq", "actor", "op", "target",
                                            "args"};
  std::vector<std::string> keys;
  for (const auto& item : j.items()) keys.push_back(item.key());
  if (keys != top) {
    fail(line, offset, "keys must be exactly seq, actor, op, target, args");
  }

  TraceEvent ev;
  if (!j["seq"].is_number_unsigned()) {
    fail(line, offset, "seq must be a non-negative integer");
  }
  ev.seq = j["seq"].get<std::uint64_t>();

  for (const char* key : {"actor", "op", "target"}) {
    if (!j[key].is_string()) {
      fail(line, offset, std::string(key) + " must be a string");
    }
  }
  ev.actor = j["actor"].get<std::string>();
  ev.op = j["op"].get<std::string>();
  ev.target = j["target"].get<std::string>();
  if (!known_op(ev.op)) fail(line, offset, "unknown op '" + ev.op + "'");
  if (!valid_name(ev.actor)) fail(line, offset, "bad actor name");
  if (!valid_name(ev.target)) fail(line, offset, "bad target name");

  const ordered_json& args = j["args"];
  if (!args.is_object()) fail(line, offset, "args must be an object");
  const std::vector<std::string>& expected = arg_keys_for(ev.op);
  std::vector<std::string> got;
  for (const auto& item : args.items()) got.push_back(item.key());
  if (got != expected) {
    fail(line, offset, "wrong args for op '" + ev.op + "'");
  }
  for (const std::string& key : expected) {
    if (!args[key].is_string()) {
      fail(line, offset, "args." + key + " must be a string");
    }
    std::string value = args[key].get<std::string>();
    if (key != "body_ref" && !valid_name(value)) {
      fail(line, offset, "bad name in args." + key);
    }
    ev.args.emplace_back(key, std::move(value));
  }
  if ((ev.op == "spawn" || ev.op == "allocate") &&
      args["binds"].get<std::string>() != ev.target) {
    fail(line, offset, "args.binds must match target");
  }
  return ev;
}

std::string render_event(const TraceEvent& ev) {
  auto arg = [&ev](const char* key) -> const std::string& {
    static const std::string missing = "?";
    for (const auto& kv : ev.args) {
      if (kv.first == key) return kv.second;
    }
    return missing;
  };
  if (ev.op == "read" || ev.op == "write") return ev.target + "." + ev.op;
  if (ev.op == "pass") {
    return ev.target + ".pass(" + arg("from") + ", " + arg("to") + ")";
  }
  if (ev.op == "share") return ev.target + ".share(" + arg("with") + ")";
  if (ev.op == "release") return ev.target + ".release(" + arg("by") + ")";
  if (ev.op == "spawn") return ev.target + " := spawn";
  return ev.target + " := " + arg("owner") + ".allocate";
}

void indent_into(std::string& out, const std::string& block) {
  std::size_t start = 0;
  while (start < block.size()) {
    std::size_t end = block.find('\n', start);
    if (end == std::string::npos) end = block.size();
    out += "    ";
    out.append(block, start, end - start);
    out += "\n";
    start = end + 1;
  }
}

}  // namespace

TraceParseError::TraceParseError(std::size_t line_in, std::size_t offset_in,
                                 const std::string& message_in)
    : std::runtime_error("line " + std::to_string(line_in) + " (byte " +
                         std::to_string(offset_in) + "): " + message_in),
      line(line_in),
      byte_offset(offset_in),
      message(message_in) {}

std::string to_json_line(const TraceEvent& ev) {
  ordered_json j;
  j["seq"] = ev.seq;
  j["actor"] = ev.actor;
  j["op"] = ev.op;
  j["target"] = ev.target;
  ordered_json args = ordered_json::object();
  for (const auto& kv : ev.args) args[kv.first] = kv.second;
  j["args"] = std::move(args);
  return j.dump();
}

void write_event(std::ostream& out, const TraceEvent& ev) {
  out << to_json_line(ev) << '\n';
}

std::vector<TraceEvent> read_events(std::istream& in) {
  std::vector<TraceEvent> events;
  std::string text;
  std::size_t line = 0;
  std::size_t offset = 0;
  bool have_prev = false;
  std::uint64_t prev_seq = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.empty()) fail(line, offset, "empty line");
    TraceEvent ev = parse_line(text, line, offset);
    if (have_prev && ev.seq <= prev_seq) {
      fail(line, offset, "seq not strictly increasing");
    }
    prev_seq = ev.seq;
    have_prev = true;
    events.push_back(std::move(ev));
    offset += text.size() + 1;
  }
  return events;
}

std::vector<TraceEvent> read_trace_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TraceParseError(0, 0, "cannot open '" + path + "'");
  return read_events(in);
}

void attach_writer(Session& session, std::ostream& out) {
  session.set_sink([&out](const TraceEvent& ev) { write_event(out, ev); });
}

std::string ReplayReport::describe() const {
  std::string out = "events=" + std::to_string(events_applied) +
                    " violations=" + std::to_string(violations.size()) + "\n";
  for (const Violation& v : violations) out += v.report();
  out += "final graph:\n";
  indent_into(out, final_graph.empty() ? std::string()
                                       : final_graph.substr(0, final_graph.size() - 1));
  return out;
}

ReplayReport replay(const std::vector<TraceEvent>& events, Mode mode) {
  Session session(Session::Options{.mode = mode});
  std::map<std::string, EntityId> bound;
  bound.emplace("main", session.root_process());
  bound.emplace("main_staging", session.staging_of(session.root_process()));

  // Names that never bound get placeholder ids the session has never
  // seen, so the premise reports them as unknown entities.
  std::map<std::string, EntityId> phantoms;
  std::uint64_t next_phantom = 1;
  auto lookup = [&](const std::string& name, EntityKind kind) {
    if (auto it = bound.find(name); it != bound.end()) return it->second;
    if (auto it = phantoms.find(name); it != phantoms.end()) return it->second;
    EntityId id = kind == EntityKind::Process
                      ? EntityId::process(next_phantom)
                      : EntityId::resource(next_phantom);
    ++next_phantom;
    phantoms.emplace(name, id);
    return id;
  };
  auto bind_or_mint = [&](const std::string& name, EntityKind kind) {
    if (auto it = bound.find(name); it != bound.end()) return it->second;
    EntityId id = session.mint_entity(kind, name);
    bound.emplace(name, id);
    return id;
  };

  ReplayReport report;
  for (const TraceEvent& ev : events) {
    EntityId actor = lookup(ev.actor, EntityKind::Process);
    Statement stmt = Statement::read({});
    if (ev.op == "read") {
      stmt = Statement::read(lookup(ev.target, EntityKind::Resource));
    } else if (ev.op == "write") {
      stmt = Statement::write(lookup(ev.target, EntityKind::Resource));
    } else if (ev.op == "pass") {
      stmt = Statement::pass(lookup(ev.target, EntityKind::Resource),
                             lookup(ev.args.at(0).second, EntityKind::Process),
                             lookup(ev.args.at(1).second, EntityKind::Process));
    } else if (ev.op == "share") {
      stmt = Statement::share(lookup(ev.target, EntityKind::Resource),
                              lookup(ev.args.at(0).second, EntityKind::Process));
    } else if (ev.op == "release") {
      stmt = Statement::release(lookup(ev.target, EntityKind::Resource),
                                lookup(ev.args.at(0).second, EntityKind::Process));
    } else if (ev.op == "spawn") {
      stmt = Statement::spawn(bind_or_mint(ev.target, EntityKind::Process));
    } else {
      EntityId owner = lookup(ev.args.at(0).second, EntityKind::Resource);
      stmt = Statement::allocate(bind_or_mint(ev.target, EntityKind::Resource),
                                 owner);
    }
    const Violation* v = session.check(actor, stmt);
    ++report.events_applied;
    if (v != nullptr) {
      Violation copy = *v;
      copy.seq = ev.seq;
      copy.header = "#" + std::to_string(ev.seq) + " " + to_string(v->kind) +
                    " actor=" + ev.actor + " stmt=" + render_event(ev);
      report.violations.push_back(std::move(copy));
    }
  }
  report.final_graph = session.graph_export();
  return report;
}

ReplayReport replay_file(const std::string& path, Mode mode) {
  return replay(read_trace_file(path), mode);
}

}  // namespace som
