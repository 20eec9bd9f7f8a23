#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ltlfsynth {

/// Node kinds of the temporal-logic syntax tree.
///
/// `WeakNext` and `Release` are internal: they only appear in the output of
/// `to_nnf` and cannot be written in concrete syntax.
enum class Op : std::uint8_t {
  True,
  False,
  Atom,
  Not,
  And,
  Or,
  Implies,
  Equiv,
  Next,
  WeakNext,
  Until,
  Release,
  Eventually,
  Globally,
};

bool is_unary(Op op) noexcept;
bool is_binary(Op op) noexcept;

/// Interned proposition identifier.
using AtomId = std::uint32_t;

/// Immutable, structurally-compared formula handle. Copies share the tree.
class Formula {
 public:
  Formula() = default;

  static Formula tt();
  static Formula ff();
  static Formula atom(std::string_view name);
  static Formula negate(Formula child);
  static Formula conj(Formula left, Formula right);
  static Formula disj(Formula left, Formula right);
  static Formula implies(Formula left, Formula right);
  static Formula equiv(Formula left, Formula right);
  static Formula next(Formula child);
  static Formula weak_next(Formula child);
  static Formula until(Formula left, Formula right);
  static Formula release(Formula left, Formula right);
  static Formula eventually(Formula child);
  static Formula globally(Formula child);

  /// Builds a node of kind `op` from the given children (one for unary kinds).
  static Formula make(Op op, Formula left, Formula right = {});

  Op op() const noexcept;
  AtomId atom_id() const noexcept;
  const std::string& name() const noexcept;

  /// Child of a unary node, or left operand of a binary node.
  const Formula& child() const noexcept;
  const Formula& left() const noexcept;
  const Formula& right() const noexcept;

  std::size_t hash() const noexcept;
  /// Number of nodes in the tree.
  std::size_t size() const noexcept;
  /// Height of the tree; atoms and constants have depth 0.
  std::size_t depth() const noexcept;

  bool valid() const noexcept { return node_ != nullptr; }

  friend bool operator==(const Formula& a, const Formula& b) noexcept;

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const noexcept { return f.hash(); }
};

/// Interns a proposition name. Names must match `[a-zA-Z_][a-zA-Z0-9_]*`.
AtomId intern_atom(std::string_view name);
const std::string& atom_name(AtomId id);
bool is_identifier(std::string_view text) noexcept;

/// Atom names occurring in `f`, in first-occurrence (left-to-right) order.
std::vector<std::string> propositions(const Formula& f);

/// Native concrete syntax. Binary subterms are always parenthesized, so the
/// output re-parses to the same tree.
std::string to_string(const Formula& f);

/// Negation normal form over {Not-on-atoms, And, Or, Next, WeakNext, Until,
/// Release, Eventually, Globally}; preserves finite-trace semantics.
Formula to_nnf(const Formula& f);

/// Assignment over an ordered proposition list: bit i set iff proposition i holds.
using Assignment = std::uint64_t;
inline constexpr std::size_t kMaxAlphabet = 64;

/// Nonempty finite sequence of assignments over a declared alphabet.
class Trace {
 public:
  Trace(std::vector<std::string> alphabet, std::vector<Assignment> symbols);

  /// Builds a trace from per-step sets of true propositions.
  static Trace from_sets(std::vector<std::string> alphabet,
                         const std::vector<std::vector<std::string>>& steps);

  const std::vector<std::string>& alphabet() const noexcept { return alphabet_; }
  const std::vector<Assignment>& symbols() const noexcept { return symbols_; }
  std::size_t size() const noexcept { return symbols_.size(); }
  bool holds(std::size_t position, std::size_t prop) const noexcept {
    return (symbols_[position] >> prop) & 1U;
  }
  /// Set of true propositions at `position`, in alphabet order.
  std::vector<std::string> true_at(std::size_t position) const;

  friend bool operator==(const Trace&, const Trace&) = default;

 private:
  std::vector<std::string> alphabet_;
  std::vector<Assignment> symbols_;
};

std::string to_string(const Trace& trace);

/// rho, i |= f under finite-trace semantics (strong Next).
bool evaluate(const Formula& f, const Trace& trace, std::size_t position);
bool satisfies(const Formula& f, const Trace& trace);

/// Evaluates one formula against many traces over a fixed alphabet. Positions
/// are packed into 64-bit words, so traces are limited to 64 steps. Holds
/// scratch space: one evaluator per thread.
class TraceEvaluator {
 public:
  TraceEvaluator(const Formula& f, const std::vector<std::string>& alphabet);

  /// Truth of the formula at position 0 of `symbols` (nonempty).
  bool satisfied(std::span<const Assignment> symbols) const {
    return positions(symbols) & 1U;
  }
  /// Bit i of the result is set iff the formula holds at position i.
  std::uint64_t positions(std::span<const Assignment> symbols) const;

 private:
  struct Instr {
    Op op;
    std::uint32_t a;
    std::uint32_t b;
  };
  std::vector<Instr> program_;
  mutable std::vector<std::uint64_t> scratch_;
};

}  // namespace ltlfsynth

template <>
struct std::hash<ltlfsynth::Formula> {
  std::size_t operator()(const ltlfsynth::Formula& f) const noexcept { return f.hash(); }
};
