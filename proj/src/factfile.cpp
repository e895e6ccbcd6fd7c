#include "factfile.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace fogplan {

namespace {

struct Pos {
  int line = 1;
  int column = 1;
};

enum class TokKind {
  Atom,
  Number,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Comma,
  Period,
  End
};

struct Token {
  TokKind kind = TokKind::End;
  std::string text;
  Num number = Num(0);
  Pos pos;
};

class Lexer {
public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_blanks_and_comments();
    Pos at = pos_;
    if (eof()) return {TokKind::End, "<end of input>", Num(0), at};
    char c = text_[i_];
    if (c >= 'a' && c <= 'z') {
      std::string word;
      while (!eof() && (std::isalnum(uc(text_[i_])) || text_[i_] == '_'))
        word += take();
      return {TokKind::Atom, word, Num(0), at};
    }
    if (std::isdigit(uc(c))) {
      std::string lit;
      while (!eof() && std::isdigit(uc(text_[i_]))) lit += take();
      // A period is part of the number only when digits follow; otherwise it
      // terminates the clause, as in "hwTh(16.".
      if (!eof() && text_[i_] == '.' && i_ + 1 < text_.size() &&
          std::isdigit(uc(text_[i_ + 1]))) {
        lit += take();
        while (!eof() && std::isdigit(uc(text_[i_]))) lit += take();
      }
      Num value(0);
      try {
        value = parse_decimal(lit);
      } catch (const Error& e) {
        throw ParseError(ErrorKind::InvalidValue, e.what(), at.line, at.column);
      }
      return {TokKind::Number, lit, value, at};
    }
    switch (c) {
      case '(': take(); return {TokKind::LParen, "(", Num(0), at};
      case ')': take(); return {TokKind::RParen, ")", Num(0), at};
      case '[': take(); return {TokKind::LBracket, "[", Num(0), at};
      case ']': take(); return {TokKind::RBracket, "]", Num(0), at};
      case ',': take(); return {TokKind::Comma, ",", Num(0), at};
      case '.': take(); return {TokKind::Period, ".", Num(0), at};
      default: break;
    }
    if (c >= 'A' && c <= 'Z')
      throw ParseError(ErrorKind::Syntax,
                       std::string("unexpected character '") + c +
                           "'; identifiers start lowercase and variables are "
                           "not allowed",
                       at.line, at.column);
    throw ParseError(ErrorKind::Syntax,
                     std::string("unexpected character '") + c + "'", at.line,
                     at.column);
  }

private:
  static unsigned char uc(char c) { return static_cast<unsigned char>(c); }
  bool eof() const { return i_ >= text_.size(); }

  char take() {
    char c = text_[i_++];
    if (c == '\n') {
      ++pos_.line;
      pos_.column = 1;
    } else {
      ++pos_.column;
    }
    return c;
  }

  void skip_blanks_and_comments() {
    while (!eof()) {
      char c = text_[i_];
      if (c == '%') {
        while (!eof() && text_[i_] != '\n') take();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        take();
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t i_ = 0;
  Pos pos_;
};

struct Term {
  enum class Kind { Atom, Number, List };
  Kind kind = Kind::Atom;
  std::string atom;
  Num number = Num(0);
  std::vector<std::string> list;  // written order
  Pos pos;
};

struct Clause {
  std::string functor;
  std::vector<Term> args;
  Pos pos;

  std::string signature() const {
    return functor + "/" + std::to_string(args.size());
  }
};

class ClauseReader {
public:
  explicit ClauseReader(std::string_view text) : lexer_(text) { advance(); }

  std::optional<Clause> next() {
    if (tok_.kind == TokKind::End) return std::nullopt;
    require(TokKind::Atom, "a fact name");
    Clause clause;
    clause.functor = tok_.text;
    clause.pos = tok_.pos;
    advance();
    if (tok_.kind == TokKind::LParen) {
      advance();
      clause.args.push_back(read_term());
      while (tok_.kind == TokKind::Comma) {
        advance();
        clause.args.push_back(read_term());
      }
      require(TokKind::RParen, "')'");
      advance();
    }
    require(TokKind::Period, "'.'");
    advance();
    return clause;
  }

private:
  void advance() { tok_ = lexer_.next(); }

  void require(TokKind kind, const std::string& what) const {
    if (tok_.kind != kind)
      throw ParseError(ErrorKind::Syntax,
                       "expected " + what + ", got '" + tok_.text + "'",
                       tok_.pos.line, tok_.pos.column);
  }

  Term read_term() {
    Term term;
    term.pos = tok_.pos;
    switch (tok_.kind) {
      case TokKind::Atom:
        term.kind = Term::Kind::Atom;
        term.atom = tok_.text;
        advance();
        return term;
      case TokKind::Number:
        term.kind = Term::Kind::Number;
        term.number = tok_.number;
        advance();
        return term;
      case TokKind::LBracket:
        term.kind = Term::Kind::List;
        advance();
        if (tok_.kind != TokKind::RBracket) {
          term.list.push_back(read_list_element());
          while (tok_.kind == TokKind::Comma) {
            advance();
            term.list.push_back(read_list_element());
          }
        }
        require(TokKind::RBracket, "']'");
        advance();
        return term;
      default:
        throw ParseError(ErrorKind::Syntax,
                         "expected an argument, got '" + tok_.text + "'",
                         tok_.pos.line, tok_.pos.column);
    }
  }

  std::string read_list_element() {
    if (tok_.kind != TokKind::Atom)
      throw ParseError(ErrorKind::Syntax,
                       "lists may contain identifiers only, got '" +
                           tok_.text + "'",
                       tok_.pos.line, tok_.pos.column);
    std::string atom = tok_.text;
    advance();
    return atom;
  }

  Lexer lexer_;
  Token tok_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message, Pos pos) {
  throw ParseError(kind, message, pos.line, pos.column);
}

void check_arity(const Clause& clause, std::size_t n) {
  if (clause.args.size() != n)
    fail(ErrorKind::ArityMismatch,
         clause.functor + " expects " + std::to_string(n) +
             " arguments, got " + std::to_string(clause.args.size()),
         clause.pos);
}

const std::string& atom_arg(const Clause& clause, std::size_t i,
                            const std::string& what) {
  const Term& t = clause.args[i];
  if (t.kind != Term::Kind::Atom)
    fail(ErrorKind::Syntax, what + " must be an identifier", t.pos);
  return t.atom;
}

Num number_arg(const Clause& clause, std::size_t i, const std::string& what) {
  const Term& t = clause.args[i];
  if (t.kind == Term::Kind::Atom && t.atom == "inf")
    fail(ErrorKind::InvalidValue, what + " must be finite", t.pos);
  if (t.kind != Term::Kind::Number)
    fail(ErrorKind::Syntax, what + " must be a number", t.pos);
  return t.number;
}

Capacity capacity_arg(const Clause& clause, std::size_t i,
                      const std::string& what) {
  const Term& t = clause.args[i];
  if (t.kind == Term::Kind::Atom && t.atom == "inf")
    return Capacity::infinite();
  if (t.kind != Term::Kind::Number)
    fail(ErrorKind::Syntax, what + " must be a number or inf", t.pos);
  return Capacity(t.number);
}

LabelSet label_set_arg(const Clause& clause, std::size_t i,
                       const std::string& what) {
  const Term& t = clause.args[i];
  if (t.kind != Term::Kind::List)
    fail(ErrorKind::Syntax, what + " must be a bracketed list", t.pos);
  return LabelSet(t.list.begin(), t.list.end());
}

NodeSpec node_from_clause(const Clause& clause) {
  return {atom_arg(clause, 0, "node id"),
          label_set_arg(clause, 1, "software capabilities"),
          capacity_arg(clause, 2, "hardware capability"),
          label_set_arg(clause, 3, "device capabilities")};
}

LinkSpec link_from_clause(const Clause& clause) {
  LinkSpec link{atom_arg(clause, 0, "link source"),
                atom_arg(clause, 1, "link destination"),
                {number_arg(clause, 2, "latency"),
                 number_arg(clause, 3, "bandwidth")}};
  if (link.src == link.dst)
    fail(ErrorKind::InvalidValue, "self-link on node " + link.src, clause.pos);
  return link;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string join_labels(const LabelSet& labels) {
  std::string out = "[";
  for (const std::string& label : labels) {
    if (out.size() > 1) out += ", ";
    out += label;
  }
  return out + "]";
}

}  // namespace

ProblemFile parse_problem(std::string_view text) {
  ClauseReader reader(text);

  struct AppDecl {
    Identifier id;
    std::vector<Identifier> service_ids;
    Pos pos;
  };
  std::optional<AppDecl> app;
  std::map<Identifier, ServiceSpec> services;
  std::vector<std::pair<S2SReq, Pos>> reqs;
  std::set<std::pair<Identifier, Identifier>> req_keys;
  std::vector<std::pair<LinkSpec, Pos>> links;
  std::set<std::pair<Identifier, Identifier>> link_keys;
  Pos first_service_pos;

  ProblemFile out;

  while (std::optional<Clause> clause = reader.next()) {
    const Clause& c = *clause;
    if (c.functor == "application" || c.functor == "app") {
      check_arity(c, 2);
      if (app)
        fail(ErrorKind::DuplicateKey, "application already declared", c.pos);
      const Term& list = c.args[1];
      if (list.kind != Term::Kind::List)
        fail(ErrorKind::Syntax, "service list must be a bracketed list",
             list.pos);
      std::set<Identifier> seen;
      for (const std::string& id : list.list)
        if (!seen.insert(id).second)
          fail(ErrorKind::DuplicateKey,
               "service " + id + " listed twice in application", list.pos);
      app = {atom_arg(c, 0, "application id"), list.list, c.pos};
    } else if (c.functor == "service") {
      check_arity(c, 4);
      ServiceSpec spec{atom_arg(c, 0, "service id"),
                       label_set_arg(c, 1, "software requirements"),
                       number_arg(c, 2, "hardware requirement"),
                       label_set_arg(c, 3, "device requirements")};
      if (services.empty()) first_service_pos = c.pos;
      if (!services.emplace(spec.id, spec).second)
        fail(ErrorKind::DuplicateKey, "service " + spec.id + " declared twice",
             c.pos);
    } else if (c.functor == "s2s") {
      check_arity(c, 4);
      S2SReq req{atom_arg(c, 0, "interaction source"),
                 atom_arg(c, 1, "interaction target"),
                 number_arg(c, 2, "latency bound"),
                 number_arg(c, 3, "bandwidth requirement")};
      if (req.from == req.to)
        fail(ErrorKind::InvalidValue,
             "service " + req.from + " cannot interact with itself", c.pos);
      if (req.max_lat <= 0)
        fail(ErrorKind::InvalidValue, "latency bound must be positive", c.pos);
      if (!req_keys.insert({req.from, req.to}).second)
        fail(ErrorKind::DuplicateKey,
             "interaction " + req.from + " -> " + req.to + " declared twice",
             c.pos);
      reqs.emplace_back(std::move(req), c.pos);
    } else if (c.functor == "node") {
      check_arity(c, 4);
      NodeSpec node = node_from_clause(c);
      if (out.infra.find_node(node.id))
        fail(ErrorKind::DuplicateKey, "node " + node.id + " declared twice",
             c.pos);
      out.infra.upsert_node(node);
    } else if (c.functor == "link") {
      check_arity(c, 4);
      LinkSpec link = link_from_clause(c);
      if (!link_keys.insert({link.src, link.dst}).second)
        fail(ErrorKind::DuplicateKey,
             "link " + link.src + " -> " + link.dst + " declared twice",
             c.pos);
      links.emplace_back(std::move(link), c.pos);
    } else if (c.functor == "hwTh") {
      check_arity(c, 1);
      if (out.hw_th)
        fail(ErrorKind::DuplicateKey, "hwTh already declared", c.pos);
      out.hw_th = number_arg(c, 0, "hardware headroom");
    } else if (c.functor == "bwTh") {
      check_arity(c, 1);
      if (out.bw_th)
        fail(ErrorKind::DuplicateKey, "bwTh already declared", c.pos);
      out.bw_th = number_arg(c, 0, "bandwidth headroom");
    } else {
      fail(ErrorKind::UnknownFunctor,
           "unknown problem fact " + c.signature(), c.pos);
    }
  }

  if (app) {
    AppSpec spec;
    spec.id = app->id;
    for (const Identifier& id : app->service_ids) {
      auto it = services.find(id);
      if (it == services.end())
        fail(ErrorKind::DanglingReference,
             "application lists undeclared service " + id, app->pos);
      spec.services.push_back(it->second);
    }
    for (const auto& [req, pos] : reqs) {
      for (const Identifier& endpoint : {req.from, req.to})
        if (std::find(app->service_ids.begin(), app->service_ids.end(),
                      endpoint) == app->service_ids.end())
          fail(ErrorKind::DanglingReference,
               "interaction endpoint " + endpoint +
                   " is not a service of the application",
               pos);
      spec.s2s.push_back(req);
    }
    out.app = std::move(spec);
  } else if (!services.empty()) {
    fail(ErrorKind::DanglingReference,
         "service declared without an application", first_service_pos);
  } else if (!reqs.empty()) {
    fail(ErrorKind::DanglingReference,
         "interaction declared without an application", reqs.front().second);
  }
  if (app)
    for (const auto& [id, spec] : services)
      if (std::find(app->service_ids.begin(), app->service_ids.end(), id) ==
          app->service_ids.end())
        fail(ErrorKind::DanglingReference,
             "service " + id + " is not listed in the application", app->pos);

  for (const auto& [link, pos] : links) {
    for (const Identifier& endpoint : {link.src, link.dst})
      if (!out.infra.find_node(endpoint))
        fail(ErrorKind::DanglingReference,
             "link endpoint " + endpoint + " is not a declared node", pos);
    out.infra.upsert_link(link.src, link.dst, link.qos);
  }

  return out;
}

ProblemFile parse_problem_file(const std::string& path) {
  return parse_problem(read_file(path));
}

EventScript parse_events(std::string_view text) {
  ClauseReader reader(text);
  EventScript out;
  while (std::optional<Clause> clause = reader.next()) {
    const Clause& c = *clause;
    if (c.functor == "set_node") {
      check_arity(c, 4);
      out.emplace_back(ChangeEvent{UpsertNode{node_from_clause(c)}});
    } else if (c.functor == "remove_node") {
      check_arity(c, 1);
      out.emplace_back(ChangeEvent{RemoveNode{atom_arg(c, 0, "node id")}});
    } else if (c.functor == "set_link") {
      check_arity(c, 4);
      out.emplace_back(ChangeEvent{UpsertLink{link_from_clause(c)}});
    } else if (c.functor == "remove_link") {
      check_arity(c, 2);
      out.emplace_back(ChangeEvent{RemoveLink{atom_arg(c, 0, "link source"),
                                              atom_arg(c, 1,
                                                       "link destination")}});
    } else if (c.functor == "query") {
      check_arity(c, 0);
      out.emplace_back(QueryMarker{});
    } else {
      fail(ErrorKind::UnknownFunctor, "unknown event " + c.signature(), c.pos);
    }
  }
  if (out.empty())
    throw ParseError(ErrorKind::EmptyScript,
                     "event script declares no event and no query", 1, 1);
  return out;
}

EventScript parse_events_file(const std::string& path) {
  return parse_events(read_file(path));
}

std::string serialize_placement(const Placement& placement,
                                const HwLedger& hw_alloc,
                                const BwLedger& bw_alloc) {
  std::ostringstream out;
  for (const Assignment& a : placement.entries())
    out << "on(" << a.service << ", " << a.node << ")\n";
  for (const auto& [node, units] : hw_alloc)
    out << "hw(" << node << ", " << format_number(units) << ")\n";
  for (const auto& [key, mbps] : bw_alloc)
    out << "bw(" << key.first << ", " << key.second << ", "
        << format_number(mbps) << ")\n";
  return out.str();
}

ParsedPlacement parse_placement(std::string_view text) {
  // serialize_placement emits no clause periods; append one per line so the
  // clause reader accepts both bare and period-terminated forms.
  std::string normalized;
  {
    std::istringstream lines{std::string(text)};
    std::string line;
    while (std::getline(lines, line)) {
      std::string trimmed = line;
      while (!trimmed.empty() &&
             std::isspace(static_cast<unsigned char>(trimmed.back())))
        trimmed.pop_back();
      if (!trimmed.empty() && trimmed.back() != '.') line += '.';
      normalized += line + "\n";
    }
  }

  ClauseReader reader(normalized);
  ParsedPlacement out;
  std::vector<Assignment> assignments;
  std::set<Identifier> placed;
  while (std::optional<Clause> clause = reader.next()) {
    const Clause& c = *clause;
    if (c.functor == "on") {
      check_arity(c, 2);
      Assignment a{atom_arg(c, 0, "service id"), atom_arg(c, 1, "node id")};
      if (!placed.insert(a.service).second)
        fail(ErrorKind::DuplicateKey, "service " + a.service + " placed twice",
             c.pos);
      assignments.push_back(std::move(a));
    } else if (c.functor == "hw") {
      check_arity(c, 2);
      Identifier node = atom_arg(c, 0, "node id");
      Num units = number_arg(c, 1, "hardware allocation");
      if (units <= 0)
        fail(ErrorKind::InvalidValue,
             "hardware allocation must be positive", c.pos);
      if (!out.hw_alloc.emplace(node, units).second)
        fail(ErrorKind::DuplicateKey,
             "hardware allocation for " + node + " listed twice", c.pos);
    } else if (c.functor == "bw") {
      check_arity(c, 3);
      std::pair<Identifier, Identifier> key{atom_arg(c, 0, "link source"),
                                            atom_arg(c, 1,
                                                     "link destination")};
      Num mbps = number_arg(c, 2, "bandwidth allocation");
      if (mbps <= 0)
        fail(ErrorKind::InvalidValue,
             "bandwidth allocation must be positive", c.pos);
      if (!out.bw_alloc.emplace(key, mbps).second)
        fail(ErrorKind::DuplicateKey,
             "bandwidth allocation for " + key.first + " -> " + key.second +
                 " listed twice",
             c.pos);
    } else {
      fail(ErrorKind::UnknownFunctor,
           "unknown placement fact " + c.signature(), c.pos);
    }
  }
  for (auto it = assignments.rbegin(); it != assignments.rend(); ++it)
    out.placement.prepend(*it);
  return out;
}

std::string serialize_problem(const ProblemFile& problem) {
  std::ostringstream out;
  if (problem.app) {
    const AppSpec& app = *problem.app;
    out << "application(" << app.id << ", [";
    for (std::size_t i = 0; i < app.services.size(); ++i)
      out << (i ? ", " : "") << app.services[i].id;
    out << "]).\n";
    for (const ServiceSpec& s : app.services)
      out << "service(" << s.id << ", " << join_labels(s.sw_reqs) << ", "
          << format_number(s.hw_reqs) << ", " << join_labels(s.thing_reqs)
          << ").\n";
    for (const S2SReq& r : app.s2s)
      out << "s2s(" << r.from << ", " << r.to << ", "
          << format_number(r.max_lat) << ", " << format_number(r.min_bw)
          << ").\n";
  }
  for (const NodeSpec& n : problem.infra.nodes())
    out << "node(" << n.id << ", " << join_labels(n.sw_caps) << ", "
        << format_capacity(n.hw_caps) << ", " << join_labels(n.thing_caps)
        << ").\n";
  for (const auto& [key, qos] : problem.infra.links())
    out << "link(" << key.first << ", " << key.second << ", "
        << format_number(qos.lat) << ", " << format_number(qos.bw) << ").\n";
  if (problem.hw_th) out << "hwTh(" << format_number(*problem.hw_th) << ").\n";
  if (problem.bw_th) out << "bwTh(" << format_number(*problem.bw_th) << ").\n";
  return out.str();
}

}  // namespace fogplan
