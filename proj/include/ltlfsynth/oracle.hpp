#pragma once

#include <cstdint>

#include "ltlfsynth/formula.hpp"
#include "ltlfsynth/mdp.hpp"
#include "ltlfsynth/product.hpp"

namespace ltlfsynth {

/// Enumeration budget of the brute-force policy oracle.
struct OracleOptions {
  std::size_t max_states = 14;
  std::size_t max_actions = 3;
  std::uint64_t max_policies = std::uint64_t{1} << 18;
};

/// Maximum over every stationary deterministic product policy of the exact
/// (LU-solved) probability of reaching an accepting state from the initial
/// product state. Independent of value iteration. Throws BudgetExceeded when
/// the product or the policy space is larger than the budget.
double oracle_max_probability(const ProductMdp& p, const OracleOptions& options = {});
double oracle_max_probability(const Mdp& m, const Formula& f, const OracleOptions& options = {});

struct Lemma1Report {
  /// Optimum on the original MDP.
  double native = 0.0;
  /// Optimum on the augmented MDP over policies that terminate with an
  /// accepted prefix.
  double augmented = 0.0;
  double difference = 0.0;
};

/// Both sides by exhaustive policy enumeration. The augmented side runs the
/// DFA for `f` on the labels of augment(m) with `alive` ignored; a path
/// succeeds iff it takes a_term while the DFA is accepting. Throws BudgetExceeded.
Lemma1Report verify_lemma1(const Mdp& m, const Formula& f, const OracleOptions& options = {});

}  // namespace ltlfsynth
