#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>

namespace glp {

enum class NameKind : uint8_t { Channel, ChannelVar, Resource, ResourceVar };

inline bool is_resource_kind(NameKind k) {
  return k == NameKind::Resource || k == NameKind::ResourceVar;
}
inline bool is_variable_kind(NameKind k) {
  return k == NameKind::ChannelVar || k == NameKind::ResourceVar;
}

/// A channel or resource name.
///
/// The canonical class of a name is (base, site): `site` is 0 for free
/// constants and the parse-time index of the binding occurrence otherwise.
/// Alpha-conversion only ever changes `inst`, so every copy of a binder
/// produced by replication or renaming stays in the class it was born in.
struct Name {
  std::string base;
  uint32_t site = 0;
  uint32_t inst = 0;
  NameKind kind = NameKind::Channel;

  static Name channel(std::string base) { return {std::move(base), 0, 0, NameKind::Channel}; }
  static Name resource(std::string base) { return {std::move(base), 0, 0, NameKind::Resource}; }

  bool is_resource() const { return is_resource_kind(kind); }
  bool is_variable() const { return is_variable_kind(kind); }
  bool is_constant() const { return site == 0; }

  /// Same class, instance erased.
  Name canonical() const { return {base, site, 0, kind}; }

  /// Printable form: `#` sigil for resources, `'n` for renamed instances.
  std::string display() const;
  /// Unambiguous form including the binding site; used for state keys.
  std::string key() const;

  friend bool operator==(const Name& a, const Name& b) {
    return a.site == b.site && a.inst == b.inst && a.kind == b.kind && a.base == b.base;
  }
  friend std::strong_ordering operator<=>(const Name& a, const Name& b) {
    if (auto c = a.base <=> b.base; c != 0) return c;
    if (auto c = a.site <=> b.site; c != 0) return c;
    if (auto c = a.inst <=> b.inst; c != 0) return c;
    return a.kind <=> b.kind;
  }
};

/// Whether a name of kind `to` may be substituted for a name of kind `from`.
bool substitutable(NameKind from, NameKind to);

}  // namespace glp

template <>
struct std::hash<glp::Name> {
  size_t operator()(const glp::Name& n) const noexcept {
    size_t h = std::hash<std::string>{}(n.base);
    h ^= (static_cast<size_t>(n.site) << 20) ^ (static_cast<size_t>(n.inst) << 8) ^
         static_cast<size_t>(n.kind);
    return h;
  }
};
