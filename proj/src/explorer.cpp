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

#include "som/explorer.hpp"

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>
#include <unordered_set>
#include <utility>

#include "json.hpp"

namespace som {

ParseError::ParseError(int line_, int col_, const std::string& msg)
    : std::runtime_error("line " + std::to_string(line_) + ", col " +
                         std::to_string(col_) + ": " + msg),
      line(line_),
      col(col_),
      message(msg) {}

UndeclaredName::UndeclaredName(int line_, int col_, const std::string& name_)
    : ParseError(line_, col_, "undeclared name '" + name_ + "'"),
      name(name_) {}

InvalidInitialGraph::InvalidInitialGraph(ValidationReport rep)
    : std::runtime_error("the starting graph is not well formed:\n" +
                         rep.describe()),
      report(std::move(rep)) {}

LimitExceeded::LimitExceeded(ExplorationReport partial_)
    : std::runtime_error("state limit reached after " +
                         std::to_string(partial_.states_visited) + " states"),
      partial(std::move(partial_)) {}

NameFn SomProgram::namer() const {
  auto table = display;
  return [table = std::move(table)](const EntityId& e) {
    auto it = table.find(e);
    return it != table.end() ? it->second : to_string(e);
  };
}

namespace {

struct Token {
  enum Type {
    Ident,
    Number,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Dot,
    Assign,
    End,
  };

  Type type = End;
  std::string text;
  std::uint64_t value = 0;
  int line = 1;
  int col = 1;
};

bool is_name_start(char c) { return c >= 'a' && c <= 'z'; }
bool is_name_char(char c) {
  return is_name_start(c) || c == '_' || (c >= '0' && c <= '9');
}

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++col;
      ++i;
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (is_name_start(c)) {
      std::size_t j = i;
      while (j < text.size() && is_name_char(text[j])) ++j;
      t.type = Token::Ident;
      t.text = text.substr(i, j - i);
      col += static_cast<int>(j - i);
      i = j;
    } else if (c >= '0' && c <= '9') {
      std::uint64_t v = 0;
      std::size_t j = i;
      while (j < text.size() && text[j] >= '0' && text[j] <= '9') {
        v = v * 10 + static_cast<std::uint64_t>(text[j] - '0');
        if (v > 0xffffffffULL) throw ParseError(line, col, "number too large");
        ++j;
      }
      t.type = Token::Number;
      t.value = v;
      col += static_cast<int>(j - i);
      i = j;
    } else {
      switch (c) {
        case '{': t.type = Token::LBrace; break;
        case '}': t.type = Token::RBrace; break;
        case '(': t.type = Token::LParen; break;
        case ')': t.type = Token::RParen; break;
        case ',': t.type = Token::Comma; break;
        case '.': t.type = Token::Dot; break;
        case ':':
          if (i + 1 >= text.size() || text[i + 1] != '=') {
            throw ParseError(line, col, "expected ':='");
          }
          t.type = Token::Assign;
          ++i;
          ++col;
          break;
        default:
          throw ParseError(line, col, std::string("unexpected character '") +
                                          c + "'");
      }
      ++i;
      ++col;
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.type = Token::End;
  end.line = line;
  end.col = col;
  out.push_back(std::move(end));
  return out;
}

const std::set<std::string>& reserved_words() {
  static const std::set<std::string> words = {
      "process", "repeat",  "spawn", "allocate", "read",
      "write",   "pass",    "share", "release",
  };
  return words;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, ParseOptions opts)
      : tokens_(std::move(tokens)), opts_(opts) {}

  SomProgram run() {
    hoist_process_names();
    for (const auto& [name, pid] : blocks_) {
      (void)name;
      prog_.initial.graph.add_entity(pid);
      prog_.initial.procs[pid] = ProcessState{};
    }
    while (peek().type != Token::End) parse_top_item();
    return std::move(prog_);
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }
  const Token& next() { return tokens_[std::min(pos_++, tokens_.size() - 1)]; }

  [[noreturn]] void fail(const Token& at, const std::string& msg) const {
    throw ParseError(at.line, at.col, msg);
  }

  void expect(Token::Type type, const char* what) {
    const Token& t = next();
    if (t.type != type) fail(t, std::string("expected ") + what);
  }

  std::string expect_keyword_or_name(const char* what) {
    const Token& t = next();
    if (t.type != Token::Ident) fail(t, std::string("expected ") + what);
    return t.text;
  }

  // A fresh binding occurrence: a plain identifier, not a keyword.
  std::string binding_name() {
    const Token& t = next();
    if (t.type != Token::Ident) fail(t, "expected a name");
    if (reserved_words().count(t.text)) {
      fail(t, "'" + t.text + "' is a reserved word");
    }
    return t.text;
  }

  EntityId resolve(const Token& t) const {
    if (t.type != Token::Ident) {
      throw ParseError(t.line, t.col, "expected a name");
    }
    if (reserved_words().count(t.text)) {
      throw ParseError(t.line, t.col, "'" + t.text + "' is a reserved word");
    }
    auto it = prog_.names.find(t.text);
    if (it == prog_.names.end()) {
      throw UndeclaredName(t.line, t.col, t.text);
    }
    return it->second;
  }

  EntityId resolve_resource(const Token& t) const {
    EntityId e = resolve(t);
    if (!e.is_resource()) {
      throw ParseError(t.line, t.col, "'" + t.text + "' is not a resource");
    }
    return e;
  }

  void bind(const std::string& name, EntityId e) {
    prog_.names[name] = e;
    prog_.display.emplace(e, name);
  }

  EntityId fresh_process(const std::string& name) {
    EntityId pid = EntityId::process(next_pid_++);
    bind(name, pid);
    return pid;
  }

  EntityId fresh_resource(const std::string& name) {
    EntityId rid = EntityId::resource(next_rid_++);
    bind(name, rid);
    return rid;
  }

  // Process names are usable anywhere in the file, so channel-style
  // programs can mention each other's processes in either order.
  void hoist_process_names() {
    int depth = 0;
    for (std::size_t i = 0; i + 1 < tokens_.size(); ++i) {
      const Token& t = tokens_[i];
      if (t.type == Token::LBrace) ++depth;
      if (t.type == Token::RBrace) --depth;
      if (depth != 0 || t.type != Token::Ident || t.text != "process") {
        continue;
      }
      const Token& n = tokens_[i + 1];
      if (n.type != Token::Ident) fail(n, "expected a process name");
      if (reserved_words().count(n.text)) {
        fail(n, "'" + n.text + "' is a reserved word");
      }
      if (blocks_.count(n.text)) {
        fail(n, "duplicate process '" + n.text + "'");
      }
      blocks_[n.text] = fresh_process(n.text);
      ++i;
    }
  }

  void parse_top_item() {
    const Token& t = peek();
    if (t.type != Token::Ident) fail(t, "expected a declaration");
    if (t.text == "process") {
      next();
      const Token& n = next();  // validated by hoist_process_names
      EntityId pid = blocks_.at(n.text);
      expect(Token::LBrace, "'{'");
      prog_.initial.procs[pid].body = parse_body();
      return;
    }
    const Token& after = peek(1);
    if (after.type == Token::Assign) {
      // r := owner.allocate
      const Token& target = next();
      std::string name = target.text;
      if (reserved_words().count(name)) {
        fail(target, "'" + name + "' is a reserved word");
      }
      next();  // :=
      const Token& owner_tok = next();
      if (owner_tok.type == Token::Ident && owner_tok.text == "spawn") {
        fail(owner_tok, "spawn is only allowed inside a process");
      }
      EntityId owner = resolve(owner_tok);
      expect(Token::Dot, "'.'");
      const Token& op = next();
      if (op.type != Token::Ident || op.text != "allocate") {
        fail(op, "expected 'allocate'");
      }
      EntityId rid = fresh_resource(name);
      prog_.initial.graph.add_entity(rid);
      if (prog_.initial.graph.add_edge(owner, rid) != EdgeOpStatus::Ok) {
        fail(owner_tok, "'" + owner_tok.text +
                            "' is not part of the starting configuration");
      }
      return;
    }
    if (after.type == Token::Dot) {
      // r.release(owner): drops a declared edge before the run starts.
      const Token& target_tok = next();
      EntityId target = resolve_resource(target_tok);
      next();  // .
      const Token& op = next();
      if (op.type != Token::Ident || op.text != "release") {
        fail(op, "only release is allowed on a declaration");
      }
      expect(Token::LParen, "'('");
      const Token& by_tok = next();
      EntityId by = resolve(by_tok);
      expect(Token::RParen, "')'");
      if (prog_.initial.graph.remove_edge(by, target) != EdgeOpStatus::Ok) {
        fail(by_tok, "'" + by_tok.text + "' does not own '" +
                         target_tok.text + "' at the start");
      }
      return;
    }
    fail(t, "expected a declaration");
  }

  BodyPtr parse_body() {
    std::vector<Statement> stmts;
    parse_stmts(stmts);
    auto body = std::make_shared<ProgramBody>();
    body->site = next_site_++;
    body->stmts = std::move(stmts);
    return body;
  }

  // Consumes statements up to and including the closing '}'.
  void parse_stmts(std::vector<Statement>& out) {
    for (;;) {
      const Token& t = peek();
      if (t.type == Token::RBrace) {
        next();
        return;
      }
      if (t.type == Token::End) fail(t, "unexpected end of file");
      if (t.type != Token::Ident) fail(t, "expected a statement");
      if (t.text == "repeat") {
        parse_repeat(out);
        continue;
      }
      if (peek(1).type == Token::Assign) {
        parse_binding_stmt(out);
        continue;
      }
      parse_op_stmt(out);
    }
  }

  // Unrolled here: the body is re-parsed per iteration, so every
  // iteration's spawn and allocate statements bind fresh entities.
  void parse_repeat(std::vector<Statement>& out) {
    next();  // repeat
    const Token& count = next();
    if (count.type != Token::Number) fail(count, "expected a repeat count");
    if (count.value == 0) fail(count, "repeat count must be at least 1");
    if (count.value > opts_.repeat_bound) {
      fail(count, "repeat count " + std::to_string(count.value) +
                      " exceeds the bound " +
                      std::to_string(opts_.repeat_bound));
    }
    expect(Token::LBrace, "'{'");
    std::size_t start = pos_;
    for (std::uint64_t k = 0; k < count.value; ++k) {
      pos_ = start;
      parse_stmts(out);
    }
  }

  void parse_binding_stmt(std::vector<Statement>& out) {
    const Token& target = next();
    std::string name = target.text;
    if (reserved_words().count(name)) {
      fail(target, "'" + name + "' is a reserved word");
    }
    next();  // :=
    const Token& rhs = next();
    if (rhs.type == Token::Ident && rhs.text == "spawn") {
      // Bound before the body parses; a spawned channel may pass from
      // itself.
      EntityId pid = fresh_process(name);
      expect(Token::LBrace, "'{'");
      out.push_back(Statement::spawn(pid, parse_body()));
      return;
    }
    EntityId owner = resolve(rhs);
    expect(Token::Dot, "'.'");
    const Token& op = next();
    if (op.type != Token::Ident || op.text != "allocate") {
      fail(op, "expected 'allocate' or 'spawn'");
    }
    EntityId rid = fresh_resource(name);
    out.push_back(Statement::allocate(rid, owner));
  }

  void parse_op_stmt(std::vector<Statement>& out) {
    const Token& target_tok = next();
    EntityId target = resolve_resource(target_tok);
    expect(Token::Dot, "'.'");
    const Token& op = next();
    if (op.type != Token::Ident) fail(op, "expected an operation");
    if (op.text == "read") {
      out.push_back(Statement::read(target));
      return;
    }
    if (op.text == "write") {
      out.push_back(Statement::write(target));
      return;
    }
    if (op.text == "pass") {
      expect(Token::LParen, "'('");
      EntityId from = resolve(next());
      expect(Token::Comma, "','");
      EntityId to = resolve(next());
      expect(Token::RParen, "')'");
      out.push_back(Statement::pass(target, from, to));
      return;
    }
    if (op.text == "share") {
      expect(Token::LParen, "'('");
      EntityId with = resolve(next());
      expect(Token::RParen, "')'");
      out.push_back(Statement::share(target, with));
      return;
    }
    if (op.text == "release") {
      expect(Token::LParen, "'('");
      EntityId by = resolve(next());
      expect(Token::RParen, "')'");
      out.push_back(Statement::release(target, by));
      return;
    }
    fail(op, "unknown operation '" + op.text + "'");
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  ParseOptions opts_;
  SomProgram prog_;
  std::map<std::string, EntityId> blocks_;
  std::uint64_t next_pid_ = 0;
  std::uint64_t next_rid_ = 0;
  std::uint32_t next_site_ = 0;
};

}  // namespace

SomProgram parse(const std::string& text, ParseOptions opts) {
  return Parser(tokenize(text), opts).run();
}

SomProgram parse_file(const std::string& path, ParseOptions opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(0, 0, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), opts);
}

namespace {

void append_id(std::string& out, const EntityId& e) {
  out.push_back(static_cast<char>(e.kind));
  for (int shift = 56; shift >= 0; shift -= 8) {
    out.push_back(static_cast<char>((e.id >> shift) & 0xff));
  }
}

void append_u32(std::string& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) {
    out.push_back(static_cast<char>((v >> shift) & 0xff));
  }
}

}  // namespace

std::string canonical_key(const Configuration& c) {
  std::string key;
  key.reserve(c.graph.entity_count() * 9 + c.graph.edge_count() * 18 +
              c.procs.size() * 17 + 2);
  for (const auto& e : c.graph.entities()) append_id(key, e);
  key.push_back('\x01');
  for (const auto& edge : c.graph.edges()) {
    append_id(key, edge.owner);
    append_id(key, edge.owned);
  }
  key.push_back('\x02');
  for (const auto& [pid, st] : c.procs) {
    append_id(key, pid);
    append_u32(key, st.body ? st.body->site : 0xffffffffU);
    append_u32(key, st.pc);
  }
  return key;
}

std::vector<RaceWitness> detect_races(const Configuration& c) {
  struct Head {
    EntityId pid;
    const Statement* stmt;
  };
  std::vector<Head> enabled;
  for (const auto& [pid, st] : c.procs) {
    if (st.done()) continue;
    const Statement& s = st.head();
    if (s.kind != StatementKind::Read && s.kind != StatementKind::Write) {
      continue;
    }
    if (premise(c.graph, pid, s).enabled()) enabled.push_back({pid, &s});
  }
  std::vector<RaceWitness> out;
  for (const auto& writer : enabled) {
    if (writer.stmt->kind != StatementKind::Write) continue;
    for (const auto& other : enabled) {
      if (other.pid == writer.pid) continue;
      if (other.stmt->target != writer.stmt->target) continue;
      // A write/write pair would otherwise be reported from both
      // sides; keep the one with the smaller writer.
      if (other.stmt->kind == StatementKind::Write &&
          writer.pid > other.pid) {
        continue;
      }
      RaceWitness w;
      w.state = c;
      w.pi1 = writer.pid;
      w.pi2 = other.pid;
      w.rho = writer.stmt->target;
      w.kind2 = other.stmt->kind;
      out.push_back(std::move(w));
    }
  }
  return out;
}

namespace {

std::string indent_lines(const std::string& text, const std::string& pad) {
  std::string out;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    out += pad;
    out.append(text, start, end - start);
    out += '\n';
    start = end + 1;
  }
  return out;
}

std::string render_state(const Configuration& c, const NameFn& names) {
  std::string out = snapshot(c.graph, names);
  for (const auto& [pid, st] : c.procs) {
    out += names(pid);
    if (st.done()) {
      out += ": done\n";
    } else {
      out += " at " + std::to_string(st.pc) + ": " +
             render(st.head(), names) + "\n";
    }
  }
  return out;
}

}  // namespace

std::string ExplorationReport::to_text() const {
  NameFn nm = names ? names : default_names();
  std::ostringstream out;
  out << "states=" << states_visited << " transitions=" << transitions
      << "\n";
  out << "race_witnesses=" << race_witnesses.size() << "\n";
  for (std::size_t i = 0; i < race_witnesses.size(); ++i) {
    const RaceWitness& w = race_witnesses[i];
    out << "  [" << i << "] " << nm(w.pi1) << " " << to_string(w.kind1)
        << " vs " << nm(w.pi2) << " " << to_string(w.kind2) << " on "
        << nm(w.rho) << "\n";
    out << indent_lines(render_state(w.state, nm), "      ");
  }
  out << "lemma_failures=" << lemma_failures.size() << "\n";
  for (std::size_t i = 0; i < lemma_failures.size(); ++i) {
    const LemmaFailure& f = lemma_failures[i];
    out << "  [" << i << "] " << nm(f.step.actor) << ": "
        << render(f.step.stmt, nm) << "\n";
    out << indent_lines(f.diagnosis, "      ");
    out << indent_lines(render_state(f.state, nm), "      ");
  }
  out << "deadlocks=" << deadlocked_states.size() << "\n";
  for (std::size_t i = 0; i < deadlocked_states.size(); ++i) {
    out << "  [" << i << "]\n";
    out << indent_lines(render_state(deadlocked_states[i], nm), "      ");
  }
  return out.str();
}

std::string ExplorationReport::to_json() const {
  NameFn nm = names ? names : default_names();
  nlohmann::ordered_json j;
  j["states"] = states_visited;
  j["witnesses"] = nlohmann::ordered_json::array();
  for (const RaceWitness& w : race_witnesses) {
    j["witnesses"].push_back({
        {"p1", nm(w.pi1)},
        {"p2", nm(w.pi2)},
        {"rho", nm(w.rho)},
        {"kinds", {to_string(w.kind1), to_string(w.kind2)}},
        {"state", render_state(w.state, nm)},
    });
  }
  j["lemma_failures"] = nlohmann::ordered_json::array();
  for (const LemmaFailure& f : lemma_failures) {
    j["lemma_failures"].push_back({
        {"actor", nm(f.step.actor)},
        {"stmt", render(f.step.stmt, nm)},
        {"diagnosis", f.diagnosis},
        {"state", render_state(f.state, nm)},
    });
  }
  j["deadlocks"] = nlohmann::ordered_json::array();
  for (const Configuration& c : deadlocked_states) {
    nlohmann::ordered_json blocked = nlohmann::ordered_json::array();
    for (const auto& [pid, st] : c.procs) {
      if (st.done()) continue;
      blocked.push_back({
          {"process", nm(pid)},
          {"stmt", render(st.head(), nm)},
      });
    }
    j["deadlocks"].push_back({
        {"state", render_state(c, nm)},
        {"blocked", std::move(blocked)},
    });
  }
  return j.dump();
}

ExplorationReport explore(const SomProgram& p, ExploreLimits limits) {
  ValidationReport vr = validate(p.initial.graph);
  if (!vr.ok()) throw InvalidInitialGraph(std::move(vr));

  ExplorationReport rep;
  rep.names = p.namer();

  std::unordered_set<std::string> seen;
  std::vector<Configuration> stack;
  seen.insert(canonical_key(p.initial));
  stack.push_back(p.initial);
  rep.states_visited = 1;

  while (!stack.empty()) {
    Configuration c = std::move(stack.back());
    stack.pop_back();

    for (RaceWitness& w : detect_races(c)) {
      rep.race_witnesses.push_back(std::move(w));
    }

    std::vector<Step> steps = enabled_steps(c);
    if (steps.empty() && !c.all_done()) {
      rep.deadlocked_states.push_back(c);
      continue;
    }
    for (const Step& step : steps) {
      Configuration succ = apply_step(c, step);
      ++rep.transitions;
      if (!validate(succ.graph, false).ok()) {
        rep.lemma_failures.push_back({c, step, validate(succ.graph).describe()});
      }
      if (!seen.insert(canonical_key(succ)).second) continue;
      if (rep.states_visited >= limits.max_states) throw LimitExceeded(rep);
      ++rep.states_visited;
      stack.push_back(std::move(succ));
    }
  }
  return rep;
}

const std::vector<Configuration>& check_deadlock(const ExplorationReport& r) {
  return r.deadlocked_states;
}

}  // namespace som
