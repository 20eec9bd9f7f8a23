#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "ltlfsynth/formula.hpp"

namespace ltlfsynth {

using StateId = std::uint32_t;

/// Inner node of a per-state guard tree. `var` indexes the DFA's proposition
/// list. A child `c >= 0` is another node in the shared pool; `c < 0` is a leaf
/// whose successor state is `~c`.
struct GuardNode {
  std::uint32_t var;
  std::int32_t lo;
  std::int32_t hi;
  bool operator==(const GuardNode&) const = default;
};

/// Partial assignment: propositions in `care` are fixed to the bits of `value`.
struct Cube {
  Assignment care = 0;
  Assignment value = 0;
};

inline std::int32_t leaf(StateId q) noexcept { return ~static_cast<std::int32_t>(q); }
inline bool is_leaf(std::int32_t child) noexcept { return child < 0; }
inline StateId leaf_target(std::int32_t child) noexcept { return static_cast<StateId>(~child); }

/// Deterministic finite automaton over the 2^k assignments of an ordered
/// proposition list. Transitions are stored as one guard tree per state;
/// variables strictly increase along every root-to-leaf path.
class Dfa {
 public:
  /// Throws InvalidArgument if the structure is ill-formed (dangling ids,
  /// unordered variables, more than 64 propositions).
  Dfa(std::vector<std::string> props, StateId initial, std::vector<bool> accepting,
      std::vector<std::int32_t> roots, std::vector<GuardNode> nodes);

  /// Builds reduced guard trees from an explicit table: `table[q][a]` is the
  /// successor of q on assignment a, for all 2^k assignments.
  static Dfa from_table(std::vector<std::string> props, StateId initial, std::vector<bool> accepting,
                        const std::vector<std::vector<StateId>>& table);

  const std::vector<std::string>& props() const noexcept { return props_; }
  std::size_t num_props() const noexcept { return props_.size(); }
  std::size_t num_states() const noexcept { return accepting_.size(); }
  StateId initial() const noexcept { return initial_; }
  bool is_accepting(StateId q) const noexcept { return accepting_[q]; }
  const std::vector<bool>& accepting_mask() const noexcept { return accepting_; }
  /// Accepting state ids in increasing order.
  std::vector<StateId> accepting() const;

  const std::vector<std::int32_t>& roots() const noexcept { return roots_; }
  const std::vector<GuardNode>& nodes() const noexcept { return nodes_; }

  /// delta(q, a); bit i of `a` is the value of props()[i].
  StateId successor(StateId q, Assignment a) const noexcept {
    std::int32_t c = roots_[q];
    while (c >= 0) {
      const GuardNode& n = nodes_[static_cast<std::size_t>(c)];
      c = ((a >> n.var) & 1U) ? n.hi : n.lo;
    }
    return leaf_target(c);
  }

  /// Final state reached from the initial state on `trace`.
  StateId run(const Trace& trace) const;
  /// Throws AlphabetMismatch if a proposition outside props() is true somewhere in `trace`.
  bool accepts(const Trace& trace) const;

  /// Guard cubes of state q in assignment order, each paired with its successor.
  std::vector<std::pair<Cube, StateId>> edges(StateId q) const;

  /// Copy with a different accepting set.
  Dfa with_accepting(std::vector<bool> accepting) const;

  /// Every state reachable from the initial state.
  bool all_reachable() const;

  friend bool operator==(const Dfa&, const Dfa&);

 private:
  std::vector<std::string> props_;
  StateId initial_;
  std::vector<bool> accepting_;
  std::vector<std::int32_t> roots_;
  std::vector<GuardNode> nodes_;
};

/// Human-readable guard: `true`, or literals such as `p & !q` joined by ` & `.
std::string cube_to_string(const Cube& cube, const std::vector<std::string>& props);

namespace detail {

/// Hash-consed builder of reduced guard trees (no node has lo == hi; equal
/// subtrees share one node).
class GuardPool {
 public:
  std::int32_t make(std::uint32_t var, std::int32_t lo, std::int32_t hi);
  std::vector<GuardNode> release() { return std::move(nodes_); }
  const std::vector<GuardNode>& nodes() const noexcept { return nodes_; }

 private:
  std::vector<GuardNode> nodes_;
  struct KeyHash {
    std::size_t operator()(const GuardNode& n) const noexcept {
      std::uint64_t h = n.var * 0x9e3779b97f4a7c15ULL;
      h ^= (static_cast<std::uint64_t>(static_cast<std::uint32_t>(n.lo)) << 32 |
            static_cast<std::uint32_t>(n.hi)) + (h << 6) + (h >> 2);
      return static_cast<std::size_t>(h);
    }
  };
  std::unordered_map<GuardNode, std::int32_t, KeyHash> unique_;
};

}  // namespace detail

}  // namespace ltlfsynth
