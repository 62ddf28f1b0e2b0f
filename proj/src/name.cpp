#include "glp/name.hpp"

namespace glp {

std::string Name::display() const {
  std::string out = is_resource() ? "#" + base : base;
  if (inst != 0) out += "'" + std::to_string(inst);
  return out;
}

std::string Name::key() const {
  std::string out = display();
  if (site != 0) out += "~" + std::to_string(site);
  return out;
}

bool substitutable(NameKind from, NameKind to) {
  return is_resource_kind(from) == is_resource_kind(to);
}

}  // namespace glp
