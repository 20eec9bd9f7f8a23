#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ltlfsynth/automata.hpp"
#include "ltlfsynth/formula.hpp"
#include "ltlfsynth/mdp.hpp"
#include "ltlfsynth/product.hpp"

namespace ltlfsynth {

/// Product states from which no policy reaches an accepting state: the
/// complement of the backward closure of the accepting set.
std::vector<bool> prob0(const ProductMdp& p);

/// Product states from which some policy reaches an accepting state with
/// probability 1 (accepting states included). Graph-based, no arithmetic.
std::vector<bool> prob1e(const ProductMdp& p);

struct ViOptions {
  double epsilon = 1e-6;
  std::size_t max_iters = 1'000'000;
  /// 1 = Gauss-Seidel sweeps in ascending state order (the reference solver);
  /// more = Jacobi sweeps split across that many threads.
  unsigned threads = 1;
};

struct SynthesisStats {
  std::size_t product_states = 0;
  std::size_t product_transitions = 0;
  std::size_t product_choices = 0;
  std::size_t dfa_states = 0;
  std::size_t iterations = 0;
  double residual = 0.0;
  double seconds = 0.0;
  /// Number of state updates that decreased a value (should stay 0).
  std::size_t monotonicity_violations = 0;
};

struct SynthesisResult {
  /// Maximal probability of reaching an accepting state, per product state.
  std::vector<double> probability;
  double optimal_value = 0.0;
  /// Chosen global action id per product state.
  std::vector<ActionId> policy;
  SynthesisStats stats;
};

/// Value iteration from below on the product with accepting and Prob1E states
/// fixed at 1 and Prob0 states fixed at 0. Stops when the max-norm change of a sweep drops
/// below epsilon; throws ConvergenceError at the iteration cap.
///
/// Policy: among actions whose value is within epsilon of the best, each state
/// takes the smallest action id that moves it one layer closer to the accepting
/// set in a backward breadth-first search over such actions, so the policy makes
/// progress instead of idling on a value-preserving self-loop. States the search
/// does not reach (including Prob0 and accepting states) take the smallest-id argmax.
/// Prob1E states only consider actions that keep them inside Prob1E.
SynthesisResult value_iteration(const ProductMdp& p, const ViOptions& options = {});

struct Synthesis {
  Dfa dfa;
  ProductMdp product;
  SynthesisResult result;
};

/// compile -> build_product -> prob0 -> value_iteration.
Synthesis synthesize(const Mdp& m, const Formula& f, const ViOptions& options = {},
                     const ProductOptions& product_options = {}, const CompileOptions& compile_options = {});

/// JSON with the DFA, the optimal value and a policy entry per product state
/// (`mdp_state`, `dfa_state`, `action`), sorted by (mdp_state, dfa_state).
std::string export_policy(const SynthesisResult& r, const ProductMdp& p);

std::string stats_csv_header(bool timing);
std::string stats_csv(const SynthesisStats& s, bool timing);
std::string stats_human(const SynthesisStats& s, bool timing);

}  // namespace ltlfsynth
