#pragma once

#include <cstdint>
#include <functional>
#include <unordered_map>
#include <vector>

namespace ltlfsynth::detail {

/// Reduced ordered BDDs over variables 0..n. Lower variable index = closer to the root.
class BddManager {
 public:
  using Ref = std::uint32_t;
  static constexpr Ref kFalse = 0;
  static constexpr Ref kTrue = 1;
  static constexpr std::uint32_t kTerminalVar = 0xffffffffU;

  BddManager();

  Ref var(std::uint32_t v);
  Ref nvar(std::uint32_t v);
  Ref ite(Ref f, Ref g, Ref h);
  Ref land(Ref a, Ref b) { return ite(a, b, kFalse); }
  Ref lor(Ref a, Ref b) { return ite(a, kTrue, b); }
  Ref lnot(Ref a) { return ite(a, kFalse, kTrue); }

  /// Simultaneously substitutes `subst[v]` for every variable v < subst.size();
  /// variables beyond the vector are left in place.
  Ref compose(Ref f, const std::vector<Ref>& subst);

  bool is_terminal(Ref f) const noexcept { return f <= kTrue; }
  std::uint32_t var_of(Ref f) const noexcept { return nodes_[f].var; }
  Ref low(Ref f) const noexcept { return nodes_[f].lo; }
  Ref high(Ref f) const noexcept { return nodes_[f].hi; }

  /// Follows the path chosen by `value(var)` down to a terminal.
  template <typename ValueFn>
  bool eval(Ref f, ValueFn value) const {
    while (!is_terminal(f)) f = value(var_of(f)) ? high(f) : low(f);
    return f == kTrue;
  }

  std::size_t size() const noexcept { return nodes_.size(); }

 private:
  struct Node {
    std::uint32_t var;
    Ref lo;
    Ref hi;
  };
  struct Key {
    std::uint32_t var;
    Ref lo;
    Ref hi;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      std::uint64_t h = k.var * 0x9e3779b97f4a7c15ULL;
      h ^= (static_cast<std::uint64_t>(k.lo) << 32 | k.hi) + 0x7f4a7c159e3779b9ULL + (h << 6) + (h >> 2);
      return static_cast<std::size_t>(h);
    }
  };
  struct CacheEntry {
    Ref f = 0, g = 0, h = 0, result = 0;
    bool used = false;
  };

  Ref make(std::uint32_t var, Ref lo, Ref hi);
  std::uint32_t top(Ref f) const noexcept { return nodes_[f].var; }
  Ref cofactor(Ref f, std::uint32_t v, bool value) const noexcept {
    if (top(f) != v) return f;
    return value ? nodes_[f].hi : nodes_[f].lo;
  }
  Ref compose_rec(Ref f, const std::vector<Ref>& subst, std::unordered_map<Ref, Ref>& memo);

  std::vector<Node> nodes_;
  std::unordered_map<Key, Ref, KeyHash> unique_;
  std::vector<CacheEntry> cache_;
};

}  // namespace ltlfsynth::detail
