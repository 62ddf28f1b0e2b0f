#include "glp/symbol.hpp"

#include <deque>
#include <mutex>
#include <unordered_map>

namespace glp {

namespace {

struct Interner {
  std::mutex mutex;
  std::deque<std::string> strings{std::string()};
  std::unordered_map<std::string_view, uint32_t> index{{std::string_view(strings.front()), 0}};
};

Interner& interner() {
  static Interner table;
  return table;
}

}  // namespace

Symbol::Symbol(std::string_view text) {
  auto& table = interner();
  std::lock_guard lock(table.mutex);
  auto it = table.index.find(text);
  if (it != table.index.end()) {
    id_ = it->second;
    return;
  }
  id_ = static_cast<uint32_t>(table.strings.size());
  table.strings.emplace_back(text);
  table.index.emplace(std::string_view(table.strings.back()), id_);
}

const std::string& Symbol::str() const {
  auto& table = interner();
  std::lock_guard lock(table.mutex);
  return table.strings[id_];
}

}  // namespace glp
