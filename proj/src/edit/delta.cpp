#include "pddlego/edit/delta.hpp"

#include <algorithm>
#include <json.hpp>
#include <set>

#include "pddlego/error.hpp"
#include "pddlego/pddl/parser.hpp"
#include "pddlego/pddl/printer.hpp"

namespace pddlego::edit {
namespace {

using nlohmann::ordered_json;
using pddl::Atom;
using pddl::ProblemFile;
using pddl::TypedName;

enum class SectionKind { kObjects, kInit };

std::string canonical_line(const std::string& line, SectionKind kind) {
  try {
    if (kind == SectionKind::kObjects) return pddl::to_string(pddl::parse_object_line(line));
    Atom atom = pddl::parse_atom(line);
    if (!atom.is_ground()) throw MalformedDelta("init line is not ground: " + line);
    return pddl::to_string(atom);
  } catch (const SyntaxError& e) {
    throw MalformedDelta("unparseable line '" + line + "': " + e.what());
  }
}

std::vector<std::string> string_array(const ordered_json& value, const std::string& where, SectionKind kind) {
  if (!value.is_array()) throw MalformedDelta(where + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& item : value) {
    if (!item.is_string()) throw MalformedDelta(where + " contains a non-string entry");
    out.push_back(canonical_line(item.get<std::string>(), kind));
  }
  return out;
}

SectionDelta parse_section(const ordered_json& value, const std::string& name, SectionKind kind) {
  if (!value.is_object()) throw MalformedDelta("section '" + name + "' must be an object");
  SectionDelta section;
  for (const auto& [key, body] : value.items()) {
    if (key == "add") {
      section.add = string_array(body, name + ".add", kind);
    } else if (key == "delete") {
      section.remove = string_array(body, name + ".delete", kind);
    } else if (key == "replace") {
      if (!body.is_object()) throw MalformedDelta(name + ".replace must be an object");
      for (const auto& [old_line, new_line] : body.items()) {
        if (!new_line.is_string()) throw MalformedDelta(name + ".replace has a non-string value");
        section.replace.emplace_back(canonical_line(old_line, kind), canonical_line(new_line.get<std::string>(), kind));
      }
    } else {
      throw MalformedDelta("unknown key '" + key + "' in section '" + name + "'");
    }
  }
  std::set<std::string> removed(section.remove.begin(), section.remove.end());
  for (const auto& line : section.add)
    if (removed.count(line)) throw MalformedDelta("line both added and deleted: " + line);
  for (const auto& [old_line, new_line] : section.replace)
    if (removed.count(old_line)) throw MalformedDelta("line both replaced and deleted: " + old_line);
  return section;
}

ordered_json section_json(const SectionDelta& s) {
  ordered_json out = ordered_json::object();
  out["add"] = ordered_json::array();
  for (const auto& l : s.add) out["add"].push_back(l);
  out["replace"] = ordered_json::object();
  for (const auto& [k, v] : s.replace) out["replace"][k] = v;
  out["delete"] = ordered_json::array();
  for (const auto& l : s.remove) out["delete"].push_back(l);
  return out;
}

Atom rename_in(Atom atom, const std::string& from, const std::string& to) {
  for (auto& arg : atom.args)
    if (arg == from) arg = to;
  return atom;
}

void apply_objects(ProblemFile& pf, const SectionDelta& s, std::vector<EditWarning>& warnings) {
  for (const auto& line : s.remove) {
    if (pf.objects.erase(pddl::parse_object_line(line)) == 0)
      warnings.push_back({EditWarning::Kind::kDanglingDelete, "objects", line});
  }
  for (const auto& [old_line, new_line] : s.replace) {
    TypedName from = pddl::parse_object_line(old_line);
    TypedName to = pddl::parse_object_line(new_line);
    auto it = pf.objects.find(from);
    if (it == pf.objects.end()) {
      warnings.push_back({EditWarning::Kind::kDanglingReplace, "objects", old_line});
      continue;
    }
    if (to.name != from.name && pf.has_object(to.name))
      throw RenameCollision("cannot rename " + from.name + " to already declared " + to.name);
    pf.objects.erase(it);
    pf.objects.insert(to);
    if (to.name != from.name) {
      std::set<Atom> renamed;
      for (const auto& atom : pf.init) renamed.insert(rename_in(atom, from.name, to.name));
      pf.init = std::move(renamed);
    }
  }
  for (const auto& line : s.add) pf.objects.insert(pddl::parse_object_line(line));
}

void apply_init(ProblemFile& pf, const SectionDelta& s, std::vector<EditWarning>& warnings) {
  for (const auto& line : s.remove) {
    if (pf.init.erase(pddl::parse_atom(line)) == 0)
      warnings.push_back({EditWarning::Kind::kDanglingDelete, "init", line});
  }
  for (const auto& [old_line, new_line] : s.replace) {
    if (pf.init.erase(pddl::parse_atom(old_line)) == 0) {
      warnings.push_back({EditWarning::Kind::kDanglingReplace, "init", old_line});
      continue;
    }
    pf.init.insert(pddl::parse_atom(new_line));
  }
  for (const auto& line : s.add) pf.init.insert(pddl::parse_atom(line));
}

template <typename T>
std::vector<std::string> lines_minus(const std::set<T>& a, const std::set<T>& b) {
  std::vector<std::string> out;
  for (const auto& item : a)
    if (!b.count(item)) out.push_back(pddl::to_string(item));
  return out;
}

bool is_visited_line(const std::string& line) { return pddl::parse_atom(line).predicate == "visited"; }

}  // namespace

Delta parse_delta_json(std::string_view text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text.begin(), text.end());
  } catch (const ordered_json::parse_error& e) {
    throw MalformedDelta(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw MalformedDelta("top level must be a JSON object");
  Delta delta;
  for (const auto& [key, value] : doc.items()) {
    if (key == "objects") {
      delta.objects = parse_section(value, key, SectionKind::kObjects);
    } else if (key == "init") {
      delta.init = parse_section(value, key, SectionKind::kInit);
    } else {
      throw MalformedDelta("unknown top-level key '" + key + "'");
    }
  }
  return delta;
}

std::string to_json(const Delta& delta) {
  ordered_json out = ordered_json::object();
  out["objects"] = section_json(delta.objects);
  out["init"] = section_json(delta.init);
  return out.dump(2);
}

ApplyResult apply_delta(const ProblemFile& problem, const Delta& delta) {
  ApplyResult result{problem, {}};
  apply_objects(result.problem, delta.objects, result.warnings);
  apply_init(result.problem, delta.init, result.warnings);
  return result;
}

ProblemFile set_goal(const ProblemFile& problem, pddl::Condition goal) {
  std::vector<const Atom*> atoms;
  goal.collect_atoms(atoms);
  for (const Atom* atom : atoms) {
    for (const auto& arg : atom->args) {
      if (pddl::is_variable(arg) || !problem.has_object(arg))
        throw UndeclaredObject("goal mentions undeclared object " + arg + " in " + pddl::to_string(*atom));
    }
  }
  ProblemFile out = problem;
  out.goal = std::move(goal);
  return out;
}

Delta diff_problems(const ProblemFile& a, const ProblemFile& b) {
  Delta d;
  d.objects.remove = lines_minus(a.objects, b.objects);
  d.objects.add = lines_minus(b.objects, a.objects);
  d.init.remove = lines_minus(a.init, b.init);
  d.init.add = lines_minus(b.init, a.init);
  return d;
}

bool deletes_visited(const Delta& delta) {
  if (std::any_of(delta.init.remove.begin(), delta.init.remove.end(), is_visited_line)) return true;
  return std::any_of(delta.init.replace.begin(), delta.init.replace.end(), [](const auto& kv) {
    return is_visited_line(kv.first) && kv.first != kv.second;
  });
}

}  // namespace pddlego::edit
