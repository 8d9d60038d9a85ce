#pragma once

#include <compare>
#include <set>
#include <string>
#include <utility>

namespace symcomp {

/// An opaque handle drawn from the shared symbol space. Identity is the full
/// id string; symbols are how components refer to values they exchange.
struct Symbol {
  std::string id;

  Symbol() = default;
  explicit Symbol(std::string i) : id(std::move(i)) {}

  auto operator<=>(const Symbol&) const = default;
  bool operator==(const Symbol&) const = default;
};

using SymbolSet = std::set<Symbol>;

/// hint + smallest ordinal that is not yet taken.
inline std::pair<Symbol, SymbolSet> fresh_symbol(SymbolSet sigma, const std::string& hint) {
  for (std::size_t i = 0;; ++i) {
    Symbol s(hint + std::to_string(i));
    if (!sigma.contains(s)) {
      sigma.insert(s);
      return {std::move(s), std::move(sigma)};
    }
  }
}

/// Variant used for register-named symbols: the bare hint if unused, otherwise
/// hint_1, hint_2, ...
inline Symbol fresh_named_symbol(const SymbolSet& sigma, const std::string& hint) {
  Symbol bare(hint);
  if (!sigma.contains(bare)) return bare;
  for (std::size_t i = 1;; ++i) {
    Symbol s(hint + "_" + std::to_string(i));
    if (!sigma.contains(s)) return s;
  }
}

inline bool is_subset(const SymbolSet& a, const SymbolSet& b) {
  for (const auto& s : a)
    if (!b.contains(s)) return false;
  return true;
}

}  // namespace symcomp
