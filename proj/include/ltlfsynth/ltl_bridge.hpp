#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ltlfsynth/formula.hpp"

namespace ltlfsynth {

/// Infinite word prefix . loop^omega over a declared alphabet.
class LassoWord {
 public:
  LassoWord(std::vector<std::string> alphabet, std::vector<Assignment> prefix, std::vector<Assignment> loop);

  const std::vector<std::string>& alphabet() const noexcept { return alphabet_; }
  const std::vector<Assignment>& prefix() const noexcept { return prefix_; }
  const std::vector<Assignment>& loop() const noexcept { return loop_; }

  /// Number of distinct positions (|prefix| + |loop|).
  std::size_t span() const noexcept { return prefix_.size() + loop_.size(); }
  /// Canonical representative of an arbitrary position.
  std::size_t canonical(std::size_t position) const noexcept;
  std::size_t successor(std::size_t canonical_position) const noexcept;
  Assignment at(std::size_t position) const noexcept { return symbol(canonical(position)); }

 private:
  Assignment symbol(std::size_t canonical_position) const noexcept;

  std::vector<std::string> alphabet_;
  std::vector<Assignment> prefix_;
  std::vector<Assignment> loop_;
};

/// Rewrites into the core connectives {true, false, atom, !, &, X, U}.
Formula to_core(const Formula& f);

/// Inductive `t` map: t(p) = p & alive, t(!f) = !t(f), t(f & g) = t(f) & t(g),
/// t(X f) = X(alive & t(f)), t(f U g) = t(f) U (alive & t(g)), constants fixed.
/// The input is first rewritten with `to_core`. Throws ReservedName if `f` mentions alive.
Formula translate_t(const Formula& f);

/// g(f) = t(f) & (alive U G !alive).
Formula translate_g(const Formula& f);

/// w, i |= f under infinite-trace semantics. Limited to lassos with at most 64 distinct positions.
bool evaluate_ltl(const Formula& f, const LassoWord& word, std::size_t position);

/// Finite trace rho  ->  (rho_0 + alive) ... (rho_n + alive) . {}^omega over alphabet + alive.
LassoWord lift_trace(const Trace& trace);

/// `Pmax=? [ ... ]` in PRISM property syntax. Propositions are emitted as
/// quoted label references ("p"), which is how explicit-model labels are named.
std::string export_prism_property(const Formula& f);

}  // namespace ltlfsynth
