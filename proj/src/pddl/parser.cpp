#include "pddlego/pddl/parser.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "pddlego/error.hpp"

namespace pddlego::pddl {
namespace {

struct SExpr {
  bool is_list = false;
  std::string symbol;
  std::vector<SExpr> items;
  int line = 1;
  int column = 1;

  bool is_symbol(std::string_view s) const { return !is_list && symbol == s; }
};

[[noreturn]] void fail(const SExpr& at, const std::string& message) {
  throw SyntaxError(message, at.line, at.column);
}

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  /// Reads exactly one expression followed only by whitespace/comments.
  SExpr read_single() {
    skip_blank();
    if (pos_ >= text_.size()) throw SyntaxError("empty input", line_, column_);
    SExpr e = read();
    skip_blank();
    if (pos_ < text_.size()) throw SyntaxError("unexpected trailing input", line_, column_);
    return e;
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_blank() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  SExpr read() {
    skip_blank();
    SExpr e;
    e.line = line_;
    e.column = column_;
    if (pos_ >= text_.size()) throw SyntaxError("unexpected end of input", line_, column_);
    char c = text_[pos_];
    if (c == ')') throw SyntaxError("unexpected ')'", line_, column_);
    if (c == '(') {
      advance();
      e.is_list = true;
      for (;;) {
        skip_blank();
        if (pos_ >= text_.size()) throw SyntaxError("missing ')'", e.line, e.column);
        if (text_[pos_] == ')') {
          advance();
          return e;
        }
        e.items.push_back(read());
      }
    }
    while (pos_ < text_.size()) {
      char d = text_[pos_];
      if (d == '(' || d == ')' || d == ';' || std::isspace(static_cast<unsigned char>(d))) break;
      e.symbol.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(d))));
      advance();
    }
    return e;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

bool valid_identifier(std::string_view s) {
  if (s.empty() || !std::islower(static_cast<unsigned char>(s.front()))) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) ||
           c == '_' || c == '-';
  });
}

const std::string& expect_identifier(const SExpr& e, const char* what) {
  if (e.is_list || !valid_identifier(e.symbol)) fail(e, std::string("expected ") + what);
  return e.symbol;
}

const std::string& expect_term(const SExpr& e) {
  if (!e.is_list) {
    if (valid_identifier(e.symbol)) return e.symbol;
    if (is_variable(e.symbol) && valid_identifier(std::string_view(e.symbol).substr(1))) return e.symbol;
  }
  fail(e, "expected a constant or ?variable");
}

const SExpr& expect_list(const SExpr& e, const char* what) {
  if (!e.is_list) fail(e, std::string("expected ") + what);
  return e;
}

/// `a b - t c - u d` ; untyped trailing names get the root type.
std::vector<TypedName> parse_typed_list(const std::vector<SExpr>& items, std::size_t begin, bool variables) {
  std::vector<TypedName> out;
  std::vector<std::string> pending;
  for (std::size_t i = begin; i < items.size(); ++i) {
    const SExpr& item = items[i];
    if (item.is_symbol("-")) {
      if (pending.empty()) fail(item, "'-' without preceding names");
      if (i + 1 >= items.size()) fail(item, "missing type after '-'");
      const std::string& type = expect_identifier(items[i + 1], "type name");
      for (auto& name : pending) out.push_back({std::move(name), type});
      pending.clear();
      ++i;
      continue;
    }
    if (variables) {
      const std::string& term = expect_term(item);
      if (!is_variable(term)) fail(item, "expected ?variable");
      pending.push_back(term);
    } else {
      pending.push_back(expect_identifier(item, "name"));
    }
  }
  for (auto& name : pending) out.push_back({std::move(name), std::string(kRootType)});
  return out;
}

Atom to_atom(const SExpr& e) {
  expect_list(e, "atom");
  if (e.items.empty()) fail(e, "empty atom");
  Atom atom;
  atom.predicate = expect_identifier(e.items[0], "predicate name");
  if (atom.predicate == "and" || atom.predicate == "or" || atom.predicate == "not")
    fail(e.items[0], "connective where an atom was expected");
  for (std::size_t i = 1; i < e.items.size(); ++i) atom.args.push_back(expect_term(e.items[i]));
  return atom;
}

Condition to_condition(const SExpr& e) {
  expect_list(e, "condition");
  if (e.items.empty()) fail(e, "empty condition");
  const SExpr& head = e.items[0];
  if (head.is_symbol("and") || head.is_symbol("or")) {
    std::vector<Condition> parts;
    for (std::size_t i = 1; i < e.items.size(); ++i) parts.push_back(to_condition(e.items[i]));
    return head.is_symbol("and") ? Condition::all(std::move(parts)) : Condition::any(std::move(parts));
  }
  if (head.is_symbol("not")) {
    if (e.items.size() != 2) fail(e, "'not' takes exactly one argument");
    const SExpr& inner = e.items[1];
    if (inner.is_list && !inner.items.empty() &&
        (inner.items[0].is_symbol("and") || inner.items[0].is_symbol("or") || inner.items[0].is_symbol("not")))
      fail(inner, "'not' applies to atoms only");
    return Condition::negation(to_atom(inner));
  }
  if (head.is_symbol("exists") || head.is_symbol("forall") || head.is_symbol("imply") || head.is_symbol("when"))
    fail(head, "unsupported construct '" + head.symbol + "'");
  return Condition::of(to_atom(e));
}

Literal to_literal(const SExpr& e) {
  expect_list(e, "effect literal");
  if (!e.items.empty() && e.items[0].is_symbol("not")) {
    if (e.items.size() != 2) fail(e, "'not' takes exactly one argument");
    return {false, to_atom(e.items[1])};
  }
  if (!e.items.empty() && (e.items[0].is_symbol("or") || e.items[0].is_symbol("when") ||
                           e.items[0].is_symbol("forall")))
    fail(e, "unsupported effect construct");
  return {true, to_atom(e)};
}

std::vector<Literal> to_effect(const SExpr& e) {
  expect_list(e, "effect");
  std::vector<Literal> out;
  if (!e.items.empty() && e.items[0].is_symbol("and")) {
    for (std::size_t i = 1; i < e.items.size(); ++i) {
      if (e.items[i].is_list && !e.items[i].items.empty() && e.items[i].items[0].is_symbol("and"))
        fail(e.items[i], "nested 'and' in effect");
      out.push_back(to_literal(e.items[i]));
    }
  } else {
    out.push_back(to_literal(e));
  }
  return out;
}

/// Checks `(define (KIND name) ...)` and returns the name.
std::string expect_define(const SExpr& root, std::string_view kind) {
  expect_list(root, "(define ...)");
  if (root.items.size() < 2 || !root.items[0].is_symbol("define")) fail(root, "expected (define ...)");
  const SExpr& header = expect_list(root.items[1], "definition header");
  if (header.items.size() != 2 || !header.items[0].is_symbol(kind))
    fail(header, "expected (" + std::string(kind) + " <name>)");
  return expect_identifier(header.items[1], "name");
}

const std::string& section_keyword(const SExpr& section) {
  expect_list(section, "section");
  if (section.items.empty() || section.items[0].is_list || section.items[0].symbol.empty() ||
      section.items[0].symbol.front() != ':')
    fail(section, "expected a :keyword section");
  return section.items[0].symbol;
}

void check_atom_against(const SExpr& where, const Atom& atom, const DomainFile& domain,
                        const std::vector<TypedName>& params) {
  const PredicateDecl* decl = domain.find_predicate(atom.predicate);
  if (decl == nullptr) fail(where, "undeclared predicate '" + atom.predicate + "'");
  if (decl->params.size() != atom.args.size()) fail(where, "wrong arity for '" + atom.predicate + "'");
  for (std::size_t i = 0; i < atom.args.size(); ++i) {
    const std::string& arg = atom.args[i];
    if (!is_variable(arg)) fail(where, "constants are not supported in action schemas");
    auto it = std::find_if(params.begin(), params.end(), [&](const TypedName& p) { return p.name == arg; });
    if (it == params.end()) fail(where, "variable " + arg + " is not a parameter");
    if (!domain.is_subtype(it->type, decl->params[i].type))
      fail(where, "type of " + arg + " does not match '" + atom.predicate + "'");
  }
}

ActionSchema to_action(const SExpr& e, const DomainFile& domain) {
  if (e.items.size() < 2) fail(e, "action needs a name");
  ActionSchema action;
  action.name = expect_identifier(e.items[1], "action name");
  const SExpr* precondition_expr = nullptr;
  const SExpr* effect_expr = nullptr;
  for (std::size_t i = 2; i < e.items.size(); i += 2) {
    const SExpr& key = e.items[i];
    if (i + 1 >= e.items.size()) fail(key, "missing value for action field");
    const SExpr& value = e.items[i + 1];
    if (key.is_symbol(":parameters")) {
      action.params = parse_typed_list(expect_list(value, "parameter list").items, 0, true);
    } else if (key.is_symbol(":precondition")) {
      action.precondition = to_condition(value);
      precondition_expr = &value;
    } else if (key.is_symbol(":effect")) {
      action.effect = to_effect(value);
      effect_expr = &value;
    } else {
      fail(key, "unknown action field '" + key.symbol + "'");
    }
  }
  for (const auto& p : action.params)
    if (!domain.has_type(p.type)) fail(e, "undeclared type '" + p.type + "'");
  std::vector<const Atom*> atoms;
  action.precondition.collect_atoms(atoms);
  for (const Atom* a : atoms) check_atom_against(*precondition_expr, *a, domain, action.params);
  for (const auto& lit : action.effect) check_atom_against(*effect_expr, lit.atom, domain, action.params);
  return action;
}

}  // namespace

DomainFile parse_domain(std::string_view text) {
  SExpr root = Reader(text).read_single();
  DomainFile domain;
  domain.name = expect_define(root, "domain");
  for (std::size_t i = 2; i < root.items.size(); ++i) {
    const SExpr& section = root.items[i];
    const std::string& key = section_keyword(section);
    if (key == ":requirements") {
      for (std::size_t j = 1; j < section.items.size(); ++j) {
        const SExpr& flag = section.items[j];
        if (flag.is_list) fail(flag, "expected requirement flag");
        const auto& supported = supported_requirements();
        if (std::find(supported.begin(), supported.end(), flag.symbol) == supported.end())
          throw UnsupportedRequirement("unsupported requirement " + flag.symbol + " at " + std::to_string(flag.line) +
                                       ":" + std::to_string(flag.column));
        if (std::find(domain.requirements.begin(), domain.requirements.end(), flag.symbol) ==
            domain.requirements.end())
          domain.requirements.push_back(flag.symbol);
      }
    } else if (key == ":types") {
      for (auto& t : parse_typed_list(section.items, 1, false)) {
        if (t.name == kRootType) continue;
        if (domain.has_type(t.name)) fail(section, "duplicate type '" + t.name + "'");
        domain.types.push_back({t.name, t.type});
      }
      for (const auto& t : domain.types)
        if (!domain.has_type(t.parent)) fail(section, "undeclared parent type '" + t.parent + "'");
    } else if (key == ":predicates") {
      for (std::size_t j = 1; j < section.items.size(); ++j) {
        const SExpr& p = expect_list(section.items[j], "predicate declaration");
        if (p.items.empty()) fail(p, "empty predicate declaration");
        PredicateDecl decl;
        decl.name = expect_identifier(p.items[0], "predicate name");
        decl.params = parse_typed_list(p.items, 1, true);
        if (domain.find_predicate(decl.name) != nullptr) fail(p, "duplicate predicate '" + decl.name + "'");
        for (const auto& param : decl.params)
          if (!domain.has_type(param.type)) fail(p, "undeclared type '" + param.type + "'");
        domain.predicates.push_back(std::move(decl));
      }
    } else if (key == ":action") {
      ActionSchema action = to_action(section, domain);
      if (domain.find_action(action.name) != nullptr) fail(section, "duplicate action '" + action.name + "'");
      domain.actions.push_back(std::move(action));
    } else {
      fail(section, "unsupported domain section '" + key + "'");
    }
  }
  return domain;
}

ProblemFile parse_problem(std::string_view text) {
  SExpr root = Reader(text).read_single();
  ProblemFile problem;
  problem.name = expect_define(root, "problem");
  for (std::size_t i = 2; i < root.items.size(); ++i) {
    const SExpr& section = root.items[i];
    const std::string& key = section_keyword(section);
    if (key == ":domain") {
      if (section.items.size() != 2) fail(section, "expected (:domain <name>)");
      problem.domain_name = expect_identifier(section.items[1], "domain name");
    } else if (key == ":objects") {
      for (auto& o : parse_typed_list(section.items, 1, false)) problem.objects.insert(std::move(o));
    } else if (key == ":init") {
      for (std::size_t j = 1; j < section.items.size(); ++j) {
        const SExpr& fact = section.items[j];
        if (fact.is_list && !fact.items.empty() && fact.items[0].is_symbol("not"))
          fail(fact, "negative literals are not allowed in :init");
        problem.init.insert(to_atom(fact));
      }
    } else if (key == ":goal") {
      if (section.items.size() != 2) fail(section, "expected (:goal <condition>)");
      problem.goal = to_condition(section.items[1]);
    } else {
      fail(section, "unsupported problem section '" + key + "'");
    }
  }
  return problem;
}

Atom parse_atom(std::string_view text) {
  SExpr e = Reader(text).read_single();
  return to_atom(e);
}

TypedName parse_object_line(std::string_view text) {
  // Wrap so the typed-list reader sees one flat list.
  std::string wrapped = "(" + std::string(text) + ")";
  SExpr e = Reader(wrapped).read_single();
  if (e.items.size() != 3 || !e.items[1].is_symbol("-"))
    throw SyntaxError("expected '<name> - <type>'", e.line, e.column);
  auto typed = parse_typed_list(e.items, 0, false);
  return typed.front();
}

Condition parse_condition(std::string_view text) {
  SExpr e = Reader(text).read_single();
  return to_condition(e);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace pddlego::pddl
