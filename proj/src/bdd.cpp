#include "bdd.hpp"

#include <algorithm>

namespace ltlfsynth::detail {

namespace {
constexpr std::size_t kCacheSize = std::size_t{1} << 18;
}

BddManager::BddManager() : cache_(kCacheSize) {
  nodes_.push_back({kTerminalVar, kFalse, kFalse});
  nodes_.push_back({kTerminalVar, kTrue, kTrue});
}

BddManager::Ref BddManager::make(std::uint32_t var, Ref lo, Ref hi) {
  if (lo == hi) return lo;
  Key key{var, lo, hi};
  auto it = unique_.find(key);
  if (it != unique_.end()) return it->second;
  Ref r = static_cast<Ref>(nodes_.size());
  nodes_.push_back({var, lo, hi});
  unique_.emplace(key, r);
  return r;
}

BddManager::Ref BddManager::var(std::uint32_t v) { return make(v, kFalse, kTrue); }
BddManager::Ref BddManager::nvar(std::uint32_t v) { return make(v, kTrue, kFalse); }

BddManager::Ref BddManager::ite(Ref f, Ref g, Ref h) {
  if (f == kTrue) return g;
  if (f == kFalse) return h;
  if (g == h) return g;
  if (g == kTrue && h == kFalse) return f;

  std::size_t slot = (f * 0x9e3779b1U ^ g * 0x85ebca6bU ^ h * 0xc2b2ae35U) & (kCacheSize - 1);
  const CacheEntry& e = cache_[slot];
  if (e.used && e.f == f && e.g == g && e.h == h) return e.result;

  std::uint32_t v = std::min({top(f), top(g), top(h)});
  Ref lo = ite(cofactor(f, v, false), cofactor(g, v, false), cofactor(h, v, false));
  Ref hi = ite(cofactor(f, v, true), cofactor(g, v, true), cofactor(h, v, true));
  Ref r = make(v, lo, hi);
  cache_[slot] = {f, g, h, r, true};
  return r;
}

BddManager::Ref BddManager::compose(Ref f, const std::vector<Ref>& subst) {
  std::unordered_map<Ref, Ref> memo;
  return compose_rec(f, subst, memo);
}

BddManager::Ref BddManager::compose_rec(Ref f, const std::vector<Ref>& subst, std::unordered_map<Ref, Ref>& memo) {
  if (is_terminal(f)) return f;
  auto it = memo.find(f);
  if (it != memo.end()) return it->second;
  std::uint32_t v = var_of(f);
  Ref lo = compose_rec(low(f), subst, memo);
  Ref hi = compose_rec(high(f), subst, memo);
  Ref g = v < subst.size() ? subst[v] : var(v);
  Ref r = ite(g, hi, lo);
  memo.emplace(f, r);
  return r;
}

}  // namespace ltlfsynth::detail
