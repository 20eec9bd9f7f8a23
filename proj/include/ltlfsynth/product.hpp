#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "ltlfsynth/dfa.hpp"
#include "ltlfsynth/mdp.hpp"

namespace ltlfsynth {

/// Forward-reachable synchronous product of an MDP and a DFA, stored in CSR form.
/// The DFA component of (s, q) has consumed the labels of every visited MDP
/// state including s: q_init = delta(q0, L(s_init)) and a move to s' goes to
/// (s', delta(q, L(s'))).
class ProductMdp {
 public:
  std::shared_ptr<const Mdp> base;
  std::shared_ptr<const Dfa> automaton;

  /// (mdp state, dfa state) per product state, in BFS discovery order.
  std::vector<std::pair<StateId, StateId>> states;
  StateId initial = 0;
  std::vector<bool> accepting;

  /// Choices of product state x are choice_start[x] .. choice_start[x+1]-1.
  std::vector<std::uint32_t> choice_start;
  std::vector<ActionId> choice_action;
  /// Transitions of choice c are trans_start[c] .. trans_start[c+1]-1.
  std::vector<std::uint64_t> trans_start;
  std::vector<StateId> trans_target;
  std::vector<double> trans_prob;

  std::size_t num_states() const noexcept { return states.size(); }
  std::size_t num_choices() const noexcept { return choice_action.size(); }
  std::size_t num_transitions() const noexcept { return trans_target.size(); }
};

struct ProductOptions {
  /// Upper bound on product states before ResourceLimit is thrown.
  std::size_t state_cap = 50'000'000;
};

/// Every DFA proposition must be an MDP proposition (AlphabetMismatch otherwise);
/// MDP propositions the DFA does not mention are ignored.
ProductMdp build_product(std::shared_ptr<const Mdp> m, std::shared_ptr<const Dfa> a, const ProductOptions& options = {});
ProductMdp build_product(const Mdp& m, const Dfa& a, const ProductOptions& options = {});

/// Letter of each MDP state over the DFA's propositions.
std::vector<Assignment> project_labels(const Mdp& m, const Dfa& a);

}  // namespace ltlfsynth
