#include "pddlego/resources.hpp"

#include <string>

#include "pddlego/error.hpp"

namespace pddlego {

std::string_view resource(std::string_view name) {
  for (const auto& e : resource_entries())
    if (e.name == name) return e.text;
  throw Error("no embedded resource named " + std::string(name));
}

}  // namespace pddlego
