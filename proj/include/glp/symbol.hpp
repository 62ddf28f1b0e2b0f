#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace glp {

/// Interned identifier. Used for action names and boundary labels, which
/// are compared and hashed far more often than they are printed.
class Symbol {
 public:
  Symbol() = default;
  explicit Symbol(std::string_view text);

  const std::string& str() const;
  uint32_t id() const { return id_; }

  friend bool operator==(Symbol a, Symbol b) { return a.id_ == b.id_; }
  friend auto operator<=>(Symbol a, Symbol b) { return a.id_ <=> b.id_; }

 private:
  uint32_t id_ = 0;  // 0 is the empty string
};

}  // namespace glp

template <>
struct std::hash<glp::Symbol> {
  size_t operator()(glp::Symbol s) const noexcept { return s.id(); }
};
