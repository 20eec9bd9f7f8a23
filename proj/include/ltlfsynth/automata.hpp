#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "ltlfsynth/dfa.hpp"
#include "ltlfsynth/formula.hpp"

namespace ltlfsynth {

struct CompileOptions {
  /// Upper bound on progression states before ResourceLimit is thrown.
  std::size_t state_cap = 2'000'000;
};

/// Minimal DFA for the finite-trace language of `f` over propositions(f).
Dfa compile(const Formula& f, const CompileOptions& options = {});

/// The progression automaton before minimization: one state per
/// propositionally distinct obligation set, numbered in discovery order.
Dfa compile_unminimized(const Formula& f, const CompileOptions& options = {});

enum class MinimizeMethod {
  /// Hopcroft over explicit letter classes when states * 2^k is small enough,
  /// otherwise signature refinement over the guard trees.
  Auto,
  Hopcroft,
  Signature,
};

/// Minimal equivalent DFA. Unreachable states are dropped first. States are
/// numbered breadth-first from the initial state, visiting successors in
/// assignment order (lexicographic over props(), false before true).
Dfa minimize(const Dfa& a, MinimizeMethod method = MinimizeMethod::Auto);

std::string export_dot(const Dfa& a);
/// `{"props": [...], "states": N, "initial": i, "accepting": [...], "edges": [{"from", "guard", "to"}]}`.
std::string export_json(const Dfa& a);
/// Throws ModelError on malformed input or guards that do not partition the assignments of a state.
Dfa import_json(std::string_view text);
/// HOA v1 with the DFA-as-HOA convention: a finite run is accepting iff it ends in acceptance set 0.
std::string export_hoa(const Dfa& a);

struct LanguageCheckOptions {
  /// Maximum number of traces enumerated before switching to sampling.
  std::uint64_t budget = std::uint64_t{1} << 22;
  std::uint64_t samples = 200'000;
  std::uint64_t seed = 0x5eed;
};

struct LanguageCheckResult {
  bool equivalent = true;
  /// Shortest disagreeing trace found (the first in enumeration order among those).
  std::optional<Trace> counterexample;
  /// False when the trace space exceeded the budget and was sampled.
  bool exhaustive = true;
  std::uint64_t traces_checked = 0;
};

/// Compares a DFA with a formula on every nonempty trace of length <= max_len
/// over props(a) followed by the formula's remaining propositions.
LanguageCheckResult language_equivalent_upto(const Dfa& a, const Formula& f, std::size_t max_len,
                                             const LanguageCheckOptions& options = {});

}  // namespace ltlfsynth
