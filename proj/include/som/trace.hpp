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

#ifndef SOM_TRACE_HPP_
#define SOM_TRACE_HPP_

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "som/checker.hpp"

namespace som {

// Raised by the readers on malformed input. `line` is 1-based,
// `byte_offset` is the offset of the offending line's first byte.
class TraceParseError : public std::runtime_error {
 public:
  TraceParseError(std::size_t line, std::size_t byte_offset,
                  const std::string& message);

  std::size_t line;
  std::size_t byte_offset;
  std::string message;
};

// One event per line: a JSON object with keys exactly
// {seq, actor, op, target, args} in that order, LF-terminated.
// `args` holds the operation's extra names (from/to for pass, with for
// share, by for release, owner/binds for allocate, binds/body_ref for
// spawn) and is {} for read/write.
std::string to_json_line(const TraceEvent& ev);
void write_event(std::ostream& out, const TraceEvent& ev);

// Parses a whole log. Enforces the line format, the key order, the
// entity-name shape [a-z][a-z0-9_]*, the per-operation argument keys,
// and strictly increasing seq values.
std::vector<TraceEvent> read_events(std::istream& in);
std::vector<TraceEvent> read_trace_file(const std::string& path);

// Serializes every event the session emits to `out`, which must
// outlive the session's last checked statement.
void attach_writer(Session& session, std::ostream& out);

struct ReplayReport {
  std::vector<Violation> violations;
  std::string final_graph;
  std::uint64_t events_applied = 0;

  bool clean() const { return violations.empty(); }
  std::string describe() const;
};

// Feeds the events into a fresh session in order. Names bind on first
// use: "main" and "main_staging" are pre-bound, spawn/allocate bind
// their target, and a name that never got bound checks as an unknown
// entity. Violations are reported under the event's seq.
ReplayReport replay(const std::vector<TraceEvent>& events,
                    Mode mode = Mode::Full);
ReplayReport replay_file(const std::string& path, Mode mode = Mode::Full);

}  // namespace som

#endif  // SOM_TRACE_HPP_
