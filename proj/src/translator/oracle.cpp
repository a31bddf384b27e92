#include "pddlego/translator/oracle.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "pddlego/edit/delta.hpp"
#include "pddlego/envs/text.hpp"
#include "pddlego/error.hpp"
#include "pddlego/pddl/parser.hpp"
#include "pddlego/pddl/printer.hpp"
#include "pddlego/translator/observation.hpp"

namespace pddlego::translator {
namespace {

using pddl::Atom;
using pddl::ProblemFile;
using pddl::TypedName;
using Kind = ObservationView::Kind;
using Coord = std::pair<int, int>;

constexpr std::string_view kLocation = "location";

Coord offset(envs::Direction d) {
  switch (d) {
    case envs::Direction::kNorth: return {0, -1};
    case envs::Direction::kSouth: return {0, 1};
    case envs::Direction::kEast: return {1, 0};
    case envs::Direction::kWest: return {-1, 0};
  }
  return {0, 0};
}

std::string processed_predicate(std::string_view verb) {
  if (verb == "slice") return "sliced";
  if (verb == "chop") return "chopped";
  if (verb == "dice") return "diced";
  if (verb == "grill") return "grilled";
  if (verb == "roast") return "roasted";
  return "fried";
}

/// Parses "move <d>" and "open door to <d>".
std::optional<envs::Direction> command_direction(std::string_view cmd, std::string_view verb) {
  if (cmd.substr(0, verb.size()) != verb) return std::nullopt;
  return envs::parse_direction(cmd.substr(verb.size()));
}

/// Applies observations to a working problem while logging enough to emit
/// a delta against the problem it started from.
class Builder {
 public:
  Builder(ProblemFile start, std::string prefix, int& counter)
      : pf_(std::move(start)), prefix_(std::move(prefix)), counter_(counter) {
    for (const auto& o : pf_.objects) origin_[o.name] = o.name;
    for (const auto& o : pf_.objects) {
      if (o.name.rfind(prefix_, 0) != 0) continue;
      const std::string digits = o.name.substr(prefix_.size());
      if (!digits.empty() && std::all_of(digits.begin(), digits.end(), ::isdigit) && digits.size() < 9)
        counter_ = std::max(counter_, std::stoi(digits));
    }
  }

  void apply(const Exchange& ex) {
    const std::string cmd = envs::normalize_command(ex.command);
    const ObservationView view = read_observation(ex.observation);
    switch (view.kind) {
      case Kind::kRoom: enter_room(cmd, view.room); break;
      case Kind::kDoorOpened: door_opened(cmd, view.target); break;
      case Kind::kContainerOpened:
        if (auto here = current()) place_items(view.items, *here);
        break;
      case Kind::kTaken: taken(view.target); break;
      case Kind::kKnifed:
      case Kind::kCooked: processed(view.verb, view.target); break;
      case Kind::kRecipe:
      case Kind::kNoChange: break;
    }
  }

  const ProblemFile& problem() const { return pf_; }

  /// Edit that turns `prior` (the start problem) into the current problem.
  edit::Delta delta(const ProblemFile& prior) const {
    edit::Delta d;
    for (const auto& [from, to] : renames_) {
      const auto type = prior.type_of(from);
      d.objects.replace.emplace_back(pddl::to_string(TypedName{from, *type}), pddl::to_string(TypedName{to, *type}));
    }
    const ProblemFile renamed = edit::apply_delta(prior, d).problem;
    for (const auto& o : renamed.objects)
      if (!pf_.objects.count(o)) d.objects.remove.push_back(pddl::to_string(o));
    for (const auto& a : renamed.init)
      if (!pf_.init.count(a)) d.init.remove.push_back(pddl::to_string(a));
    std::set<TypedName> objects_done;
    for (const auto& o : object_log_)
      if (pf_.objects.count(o) && !renamed.objects.count(o) && objects_done.insert(o).second)
        d.objects.add.push_back(pddl::to_string(o));
    for (const auto& o : pf_.objects)
      if (!renamed.objects.count(o) && !objects_done.count(o)) d.objects.add.push_back(pddl::to_string(o));
    std::set<Atom> facts_done;
    for (const auto& a : fact_log_)
      if (pf_.init.count(a) && !renamed.init.count(a) && facts_done.insert(a).second)
        d.init.add.push_back(pddl::to_string(a));
    for (const auto& a : pf_.init)
      if (!renamed.init.count(a) && !facts_done.count(a)) d.init.add.push_back(pddl::to_string(a));
    return d;
  }

 private:
  std::optional<std::string> current() const {
    auto at = pf_.facts("at");
    if (at.size() != 1) return std::nullopt;
    return at.front().args[0];
  }

  std::optional<std::string> neighbour(const std::string& from, envs::Direction d) const {
    for (const auto& a : pf_.facts("connected"))
      if (a.args[0] == from && a.args[2] == envs::to_string(d)) return a.args[1];
    return std::nullopt;
  }

  void declare(const std::string& name, std::string_view type) {
    if (pf_.has_object(name)) return;
    TypedName o{name, std::string(type)};
    pf_.objects.insert(o);
    object_log_.push_back(o);
  }

  void add(Atom a) {
    if (pf_.init.insert(a).second) fact_log_.push_back(std::move(a));
  }

  void remove(const Atom& a) { pf_.init.erase(a); }

  std::string fresh_placeholder() {
    std::string name;
    do name = prefix_ + std::to_string(++counter_);
    while (pf_.has_object(name));
    return name;
  }

  static Atom substitute(Atom a, const std::string& from, const std::string& to) {
    for (auto& arg : a.args)
      if (arg == from) arg = to;
    return a;
  }

  /// Folds `from` into `to`: a rename when `to` is new, otherwise a
  /// substitution that drops `from`.
  void merge(const std::string& from, const std::string& to) {
    if (from == to) return;
    const auto type = pf_.type_of(from);
    if (!type) return;
    const bool rename = !pf_.has_object(to);
    pf_.objects.erase(TypedName{from, *type});
    if (rename) pf_.objects.insert(TypedName{to, *type});
    std::set<Atom> init;
    for (const auto& a : pf_.init) init.insert(substitute(a, from, to));
    pf_.init = std::move(init);
    for (auto& a : fact_log_) a = substitute(a, from, to);
    for (auto& o : object_log_)
      if (o.name == from) o.name = to;
    auto origin = origin_.find(from);
    if (origin != origin_.end()) {
      const std::string prior_name = origin->second;
      origin_.erase(origin);
      renames_.erase(std::remove_if(renames_.begin(), renames_.end(),
                                    [&](const auto& r) { return r.first == prior_name; }),
                     renames_.end());
      if (rename) {
        origin_[to] = prior_name;
        renames_.emplace_back(prior_name, to);
      }
    }
  }

  std::map<std::string, Coord> coordinates(const std::string& root) const {
    std::map<std::string, Coord> pos{{root, {0, 0}}};
    std::vector<std::string> queue{root};
    const auto edges = pf_.facts("connected");
    for (std::size_t i = 0; i < queue.size(); ++i) {
      const std::string cur = queue[i];
      for (const auto& a : edges) {
        const auto d = envs::parse_direction(a.args[2]);
        if (!d) continue;
        auto [dx, dy] = offset(*d);
        std::string next;
        Coord c = pos[cur];
        if (a.args[0] == cur) {
          next = a.args[1];
          c = {c.first + dx, c.second + dy};
        } else if (a.args[1] == cur) {
          next = a.args[0];
          c = {c.first - dx, c.second - dy};
        } else {
          continue;
        }
        if (pos.emplace(next, c).second) queue.push_back(next);
      }
    }
    return pos;
  }

  std::optional<std::string> located_at(const std::string& root, Coord target) const {
    for (const auto& [name, c] : coordinates(root))
      if (c == target) return name;
    return std::nullopt;
  }

  void enter_room(const std::string& cmd, const RoomView& view) {
    const std::string room = envs::to_identifier(view.room);
    const auto here = current();
    if (auto d = command_direction(cmd, "move "); d && here)
      if (auto target = neighbour(*here, *d)) merge(*target, room);
    declare(room, kLocation);
    for (const auto& a : pf_.facts("at"))
      if (a.args[0] != room) remove(a);
    add({"at", {room}});
    add({"visited", {room}});

    for (const auto& exit : view.exits) {
      std::optional<std::string> target = neighbour(room, exit.direction);
      if (!target) {
        auto [dx, dy] = offset(exit.direction);
        target = located_at(room, {dx, dy});
      }
      std::string name;
      if (exit.room) {
        name = envs::to_identifier(*exit.room);
        if (target && *target != name) merge(*target, name);
        declare(name, kLocation);
      } else if (target) {
        name = *target;
      } else {
        name = fresh_placeholder();
        declare(name, kLocation);
      }
      add({"connected", {room, name, envs::to_string(exit.direction)}});
      if (exit.door == envs::Door::kClosed) add({"closed_door", {room, name}});
      else remove({"closed_door", {room, name}});
    }
    for (const auto& f : view.furniture) {
      if (f.kind == envs::FurnitureKind::kAppliance) {
        const std::string id = envs::to_identifier(f.name);
        declare(id, f.name);
        add({"obj_at", {id, room}});
      } else if (f.kind == envs::FurnitureKind::kContainer) {
        const std::string id = envs::to_identifier(f.name);
        declare(id, "container");
        add({"obj_at", {id, room}});
      }
      place_items(f.items, room);
    }
  }

  void door_opened(const std::string& cmd, const std::string& revealed) {
    const auto here = current();
    const auto d = command_direction(cmd, "open door to ");
    if (!here || !d) return;
    const std::string room = envs::to_identifier(revealed);
    if (auto target = neighbour(*here, *d)) merge(*target, room);
    declare(room, kLocation);
    add({"connected", {*here, room, envs::to_string(*d)}});
    remove({"closed_door", {*here, room}});
    remove({"closed_door", {room, *here}});
  }

  static std::optional<std::string> item_type(const std::string& item) {
    if (item == "knife") return "knife";
    if (item == "cookbook" || item == "coin" || item == "meal") return std::nullopt;
    return "ingredient";
  }

  void place_items(const std::vector<std::string>& items, const std::string& room) {
    for (const auto& item : items) {
      const auto type = item_type(item);
      if (!type) continue;
      const std::string id = envs::to_identifier(item);
      declare(id, *type);
      if (!pf_.init.count(Atom{"have", {id}})) add({"obj_at", {id, room}});
    }
  }

  void taken(const std::string& item) {
    const auto type = item_type(item);
    if (!type) return;
    const std::string id = envs::to_identifier(item);
    declare(id, *type);
    for (const auto& a : pf_.facts("obj_at"))
      if (a.args[0] == id) remove(a);
    add({"have", {id}});
  }

  void processed(const std::string& verb, const std::string& item) {
    const std::string id = envs::to_identifier(item);
    declare(id, "ingredient");
    add({processed_predicate(verb), {id}});
  }

  ProblemFile pf_;
  std::string prefix_;
  int& counter_;
  std::map<std::string, std::string> origin_;  // current name -> name in the start problem
  std::vector<std::pair<std::string, std::string>> renames_;
  std::vector<TypedName> object_log_;
  std::vector<Atom> fact_log_;
};

std::string pick_action(const TranslatorRequest& request) {
  for (std::string_view prefix : {"eat meal", "prepare meal", "take ", "examine cookbook"})
    for (const auto& a : request.valid_actions)
      if (a.rfind(prefix, 0) == 0) return a;
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : request.observation) h = (h ^ c) * 1099511628211ULL;
  h ^= request.history.size() * 0x9e3779b97f4a7c15ULL;
  return request.valid_actions[h % request.valid_actions.size()];
}

}  // namespace

pddl::ProblemFile problem_skeleton(envs::EnvKind env) {
  ProblemFile pf;
  pf.name = env == envs::EnvKind::kCoin ? "coin-exploration" : "cooking-exploration";
  pf.domain_name = "environment";
  for (auto d : envs::kDirections) pf.objects.insert(TypedName{envs::to_string(d), "direction"});
  return pf;
}

OracleTranslator::OracleTranslator(OracleOptions options) : options_(std::move(options)) {}

TranslatorResponse OracleTranslator::translate(const TranslatorRequest& request) {
  request.check();
  TranslatorResponse response;
  response.mode = request.mode;
  if (request.mode == Mode::kAction) {
    response.text = pick_action(request);
  } else {
    ProblemFile prior = request.prior_problem.empty() ? problem_skeleton(request.env)
                                                      : pddl::parse_problem(request.prior_problem);
    Builder builder(prior, options_.placeholder_prefix, counter_);
    for (const auto& ex : parse_exchanges(request.observation)) builder.apply(ex);
    if (request.mode == Mode::kDelta) {
      response.text = edit::to_json(builder.delta(prior));
    } else {
      ProblemFile out = builder.problem();
      out.goal = pddl::Condition::all({});
      response.text = pddl::print_problem(out);
    }
  }
  response.raw = response.text;
  return response;
}

std::unique_ptr<Translator> OracleFactory::make(std::uint64_t, int) const {
  return std::make_unique<OracleTranslator>(options_);
}

}  // namespace pddlego::translator
