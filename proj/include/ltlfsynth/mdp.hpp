#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ltlfsynth/dfa.hpp"

namespace ltlfsynth {

/// Index into Mdp::ap.
using PropId = std::uint32_t;
/// Index into Mdp::actions.
using ActionId = std::uint32_t;

struct Transition {
  StateId target;
  double probability;
  bool operator==(const Transition&) const = default;
};

/// One enabled action of a state and its successor distribution.
struct Choice {
  ActionId action;
  std::vector<Transition> transitions;
};

inline constexpr std::string_view kTermAction = "a_term";

/// Explicit-state labeled MDP. States are 0..num_states()-1.
struct Mdp {
  StateId initial = 0;
  std::vector<std::string> ap;
  /// Per state, the true propositions as sorted indices into `ap`.
  std::vector<std::vector<PropId>> labels;
  std::vector<std::string> actions;
  /// Per state, its enabled actions in order.
  std::vector<std::vector<Choice>> choices;

  /// Optional state valuations for the `.sta` sidecar; empty means "state id".
  std::vector<std::string> variables;
  std::vector<std::vector<std::int64_t>> valuations;

  std::size_t num_states() const noexcept { return choices.size(); }
  std::size_t num_choices() const noexcept;
  std::size_t num_transitions() const noexcept;
  bool has_label(StateId s, PropId p) const;
  std::optional<PropId> find_prop(std::string_view name) const;
  std::optional<ActionId> find_action(std::string_view name) const;
};

/// Same states, initial state, propositions (by name, in order), per-state label
/// names, per-state choices (compared by action name, in order) with identical
/// distributions, and valuations. The order of the global action list is ignored.
bool operator==(const Mdp& a, const Mdp& b);

/// Markov chain: one successor distribution per state.
struct Dtmc {
  StateId initial = 0;
  std::vector<std::string> ap;
  std::vector<std::vector<PropId>> labels;
  std::vector<std::vector<Transition>> rows;

  std::size_t num_states() const noexcept { return rows.size(); }
};

struct Violation {
  std::optional<StateId> state;
  /// Position of the offending choice within the state's choice list.
  std::optional<std::size_t> choice;
  /// Short machine-readable rule name, e.g. "deadlock" or "distribution-sum".
  std::string rule;
  std::string message;
};

/// Tolerance for distribution sums at validation and ingestion.
inline constexpr double kStochasticTolerance = 1e-9;

std::vector<Violation> validate(const Mdp& m);
std::vector<Violation> validate(const Dtmc& d);

/// Adds a labelless sink s_term (the new last state), labels every original
/// state with `alive`, and enables a_term everywhere with a sure move to s_term.
/// Original transitions are untouched. Throws ReservedName if `alive` or
/// `a_term` already exists.
Mdp augment(const Mdp& m);

/// Chain induced by choosing `policy[s]` (a global action id) at every state.
/// Throws InvalidArgument if the action is not enabled.
Dtmc induced_dtmc(const Mdp& m, const std::vector<ActionId>& policy);

/// Probability of eventually reaching `target` from every state, by a direct
/// LU solve after removing states that cannot reach the target.
std::vector<double> reach_probability(const std::vector<std::vector<Transition>>& rows,
                                      const std::vector<bool>& target);
std::vector<double> reach_probability(const Dtmc& d, const std::vector<StateId>& targets);

/// Example MDP with four states s0..s3 over {p1, p2} and actions {a0, a1}.
Mdp example_mdp();

}  // namespace ltlfsynth
