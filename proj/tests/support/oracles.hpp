#pragma once

// Independent reference implementations used by the tests. Nothing here calls
// the library's evaluators, compiler or solver; only the data types are shared.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ltlfsynth/formula.hpp"
#include "ltlfsynth/mdp.hpp"

namespace oracle {

using ltlfsynth::Assignment;
using ltlfsynth::Formula;

// Finite-trace truth by direct quantification over positions. Atoms are looked
// up by name in `alphabet`; unknown atoms are false.
bool ltlf_holds(const Formula& f, const std::vector<std::string>& alphabet, const std::vector<Assignment>& word,
                std::size_t i);

// Infinite-trace truth on prefix . loop^omega by walking the successor chain
// of canonical positions; loop must be nonempty.
bool ltl_holds(const Formula& f, const std::vector<std::string>& alphabet, const std::vector<Assignment>& prefix,
               const std::vector<Assignment>& loop, std::size_t i);

// Number of distinct residual languages among words of length <= prefix_len,
// each residual truncated to suffixes of length <= suffix_len. The empty
// word is never in the language.
std::size_t myhill_nerode_classes(const Formula& f, std::size_t prefix_len, std::size_t suffix_len);

// All words of length exactly n over 2^k letters, in odometer order.
std::vector<std::vector<Assignment>> all_words(std::size_t k, std::size_t n);

// Random formula of depth <= max_depth over props, built from the user-facing
// connectives only.
Formula random_formula(std::mt19937_64& rng, int max_depth, const std::vector<std::string>& props);

// Random valid MDP with 1..max_states states, actions from a0..a{max_actions-1},
// dyadic probabilities and random labels over props.
ltlfsynth::Mdp random_mdp(std::mt19937_64& rng, int max_states, int max_actions,
                          const std::vector<std::string>& props);

struct CorpusEntry {
  std::string text;
  Formula formula;
};

// Fixed corpus: hand-picked pattern formulas followed by seeded random ones,
// all over at most three of the propositions a, b, c.
const std::vector<CorpusEntry>& formula_corpus();

// Reachability probabilities of a Markov chain given as one row per state:
// graph pruning, then Gaussian elimination with partial pivoting.
std::vector<double> solve_reach(const std::vector<std::vector<ltlfsynth::Transition>>& rows,
                                const std::vector<bool>& target);

}  // namespace oracle
