#include "ltlfsynth/formula.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "ltlfsynth/errors.hpp"

namespace ltlfsynth {

namespace {

class AtomTable {
 public:
  AtomId intern(std::string_view name) {
    std::lock_guard lock(mutex_);
    auto it = ids_.find(std::string(name));
    if (it != ids_.end()) return it->second;
    auto id = static_cast<AtomId>(names_.size());
    names_.push_back(std::make_unique<std::string>(name));
    ids_.emplace(*names_.back(), id);
    return id;
  }

  const std::string& name(AtomId id) {
    std::lock_guard lock(mutex_);
    return *names_.at(id);
  }

  // Stable address: the string is heap-allocated and never freed.
  const std::string* name_ptr(AtomId id) {
    std::lock_guard lock(mutex_);
    return names_.at(id).get();
  }

 private:
  std::mutex mutex_;
  std::vector<std::unique_ptr<std::string>> names_;
  std::unordered_map<std::string, AtomId> ids_;
};

AtomTable& atom_table() {
  static AtomTable table;
  return table;
}

std::size_t mix(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

struct Formula::Node {
  Op op;
  AtomId atom = 0;
  const std::string* name = nullptr;
  Formula lhs;
  Formula rhs;
  std::size_t hash = 0;
  std::size_t size = 1;
  std::size_t depth = 0;
};

bool is_unary(Op op) noexcept {
  switch (op) {
    case Op::Not:
    case Op::Next:
    case Op::WeakNext:
    case Op::Eventually:
    case Op::Globally:
      return true;
    default:
      return false;
  }
}

bool is_binary(Op op) noexcept {
  switch (op) {
    case Op::And:
    case Op::Or:
    case Op::Implies:
    case Op::Equiv:
    case Op::Until:
    case Op::Release:
      return true;
    default:
      return false;
  }
}

bool is_identifier(std::string_view text) noexcept {
  if (text.empty()) return false;
  auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
  if (!alpha(text.front())) return false;
  return std::all_of(text.begin() + 1, text.end(),
                     [&](char c) { return alpha(c) || (c >= '0' && c <= '9'); });
}

AtomId intern_atom(std::string_view name) {
  if (!is_identifier(name)) {
    throw InvalidArgument("invalid proposition name '" + std::string(name) + "'");
  }
  return atom_table().intern(name);
}

const std::string& atom_name(AtomId id) { return atom_table().name(id); }

Formula Formula::make(Op op, Formula left, Formula right) {
  auto node = std::make_shared<Node>();
  node->op = op;
  std::size_t h = mix(0x51ed27, static_cast<std::size_t>(op));
  if (is_unary(op)) {
    if (!left.valid()) throw InvalidArgument("unary node without operand");
    h = mix(h, left.hash());
    node->size = 1 + left.size();
    node->depth = 1 + left.depth();
    node->lhs = std::move(left);
  } else if (is_binary(op)) {
    if (!left.valid() || !right.valid()) throw InvalidArgument("binary node without operands");
    h = mix(mix(h, left.hash()), right.hash());
    node->size = 1 + left.size() + right.size();
    node->depth = 1 + std::max(left.depth(), right.depth());
    node->lhs = std::move(left);
    node->rhs = std::move(right);
  } else if (op == Op::Atom) {
    throw InvalidArgument("use Formula::atom for atoms");
  }
  node->hash = h;
  return Formula(std::move(node));
}

Formula Formula::tt() {
  static const Formula f = make(Op::True, {});
  return f;
}
Formula Formula::ff() {
  static const Formula f = make(Op::False, {});
  return f;
}

Formula Formula::atom(std::string_view name) {
  auto node = std::make_shared<Node>();
  node->op = Op::Atom;
  node->atom = intern_atom(name);
  node->name = atom_table().name_ptr(node->atom);
  node->hash = mix(mix(0x51ed27, static_cast<std::size_t>(Op::Atom)), node->atom);
  return Formula(std::move(node));
}

Formula Formula::negate(Formula c) { return make(Op::Not, std::move(c)); }
Formula Formula::conj(Formula l, Formula r) { return make(Op::And, std::move(l), std::move(r)); }
Formula Formula::disj(Formula l, Formula r) { return make(Op::Or, std::move(l), std::move(r)); }
Formula Formula::implies(Formula l, Formula r) { return make(Op::Implies, std::move(l), std::move(r)); }
Formula Formula::equiv(Formula l, Formula r) { return make(Op::Equiv, std::move(l), std::move(r)); }
Formula Formula::next(Formula c) { return make(Op::Next, std::move(c)); }
Formula Formula::weak_next(Formula c) { return make(Op::WeakNext, std::move(c)); }
Formula Formula::until(Formula l, Formula r) { return make(Op::Until, std::move(l), std::move(r)); }
Formula Formula::release(Formula l, Formula r) { return make(Op::Release, std::move(l), std::move(r)); }
Formula Formula::eventually(Formula c) { return make(Op::Eventually, std::move(c)); }
Formula Formula::globally(Formula c) { return make(Op::Globally, std::move(c)); }

Op Formula::op() const noexcept { return node_->op; }
AtomId Formula::atom_id() const noexcept { return node_->atom; }
const std::string& Formula::name() const noexcept { return *node_->name; }
const Formula& Formula::child() const noexcept { return node_->lhs; }
const Formula& Formula::left() const noexcept { return node_->lhs; }
const Formula& Formula::right() const noexcept { return node_->rhs; }
std::size_t Formula::hash() const noexcept { return node_ ? node_->hash : 0; }
std::size_t Formula::size() const noexcept { return node_->size; }
std::size_t Formula::depth() const noexcept { return node_->depth; }

bool operator==(const Formula& a, const Formula& b) noexcept {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.node_->hash != b.node_->hash || a.node_->op != b.node_->op) return false;
  if (a.node_->op == Op::Atom) return a.node_->atom == b.node_->atom;
  return a.node_->lhs == b.node_->lhs && a.node_->rhs == b.node_->rhs;
}

std::vector<std::string> propositions(const Formula& f) {
  std::vector<std::string> out;
  std::unordered_set<AtomId> seen;
  auto walk = [&](auto&& self, const Formula& g) -> void {
    if (g.op() == Op::Atom) {
      if (seen.insert(g.atom_id()).second) out.push_back(g.name());
      return;
    }
    if (is_unary(g.op())) {
      self(self, g.child());
    } else if (is_binary(g.op())) {
      self(self, g.left());
      self(self, g.right());
    }
  };
  walk(walk, f);
  return out;
}

namespace {

const char* binary_symbol(Op op) {
  switch (op) {
    case Op::And: return "&";
    case Op::Or: return "|";
    case Op::Implies: return "->";
    case Op::Equiv: return "<->";
    case Op::Until: return "U";
    case Op::Release: return "R";
    default: return "?";
  }
}

const char* unary_prefix(Op op) {
  switch (op) {
    case Op::Not: return "!";
    case Op::Next: return "X ";
    case Op::WeakNext: return "WX ";
    case Op::Eventually: return "F ";
    case Op::Globally: return "G ";
    default: return "?";
  }
}

void print(const Formula& f, std::string& out) {
  auto operand = [&](const Formula& g) {
    if (is_binary(g.op())) {
      out += '(';
      print(g, out);
      out += ')';
    } else {
      print(g, out);
    }
  };
  switch (f.op()) {
    case Op::True: out += "true"; return;
    case Op::False: out += "false"; return;
    case Op::Atom: out += f.name(); return;
    default: break;
  }
  if (is_unary(f.op())) {
    out += unary_prefix(f.op());
    operand(f.child());
    return;
  }
  operand(f.left());
  out += ' ';
  out += binary_symbol(f.op());
  out += ' ';
  operand(f.right());
}

Formula nnf(const Formula& f, bool negated) {
  using F = Formula;
  switch (f.op()) {
    case Op::True: return negated ? F::ff() : F::tt();
    case Op::False: return negated ? F::tt() : F::ff();
    case Op::Atom: return negated ? F::negate(f) : f;
    case Op::Not: return nnf(f.child(), !negated);
    case Op::And:
      return negated ? F::disj(nnf(f.left(), true), nnf(f.right(), true))
                     : F::conj(nnf(f.left(), false), nnf(f.right(), false));
    case Op::Or:
      return negated ? F::conj(nnf(f.left(), true), nnf(f.right(), true))
                     : F::disj(nnf(f.left(), false), nnf(f.right(), false));
    case Op::Implies:
      return negated ? F::conj(nnf(f.left(), false), nnf(f.right(), true))
                     : F::disj(nnf(f.left(), true), nnf(f.right(), false));
    case Op::Equiv: {
      auto l = nnf(f.left(), false);
      auto nl = nnf(f.left(), true);
      auto r = nnf(f.right(), false);
      auto nr = nnf(f.right(), true);
      return negated ? F::disj(F::conj(l, nr), F::conj(nl, r))
                     : F::disj(F::conj(l, r), F::conj(nl, nr));
    }
    case Op::Next:
      return negated ? F::weak_next(nnf(f.child(), true)) : F::next(nnf(f.child(), false));
    case Op::WeakNext:
      return negated ? F::next(nnf(f.child(), true)) : F::weak_next(nnf(f.child(), false));
    case Op::Until:
      return negated ? F::release(nnf(f.left(), true), nnf(f.right(), true))
                     : F::until(nnf(f.left(), false), nnf(f.right(), false));
    case Op::Release:
      return negated ? F::until(nnf(f.left(), true), nnf(f.right(), true))
                     : F::release(nnf(f.left(), false), nnf(f.right(), false));
    case Op::Eventually:
      return negated ? F::globally(nnf(f.child(), true)) : F::eventually(nnf(f.child(), false));
    case Op::Globally:
      return negated ? F::eventually(nnf(f.child(), true)) : F::globally(nnf(f.child(), false));
  }
  return f;
}

using Truth = std::vector<std::uint8_t>;

// Truth value at every position, computed backwards from the last position.
Truth eval_all(const Formula& f, const Trace& t,
               const std::unordered_map<AtomId, std::size_t>& index) {
  const std::size_t n = t.size();
  Truth v(n, 0);
  switch (f.op()) {
    case Op::True: std::fill(v.begin(), v.end(), 1); return v;
    case Op::False: return v;
    case Op::Atom: {
      auto prop = index.at(f.atom_id());
      for (std::size_t i = 0; i < n; ++i) v[i] = t.holds(i, prop);
      return v;
    }
    default: break;
  }
  if (is_unary(f.op())) {
    Truth c = eval_all(f.child(), t, index);
    for (std::size_t k = n; k-- > 0;) {
      bool has_next = k + 1 < n;
      switch (f.op()) {
        case Op::Not: v[k] = !c[k]; break;
        case Op::Next: v[k] = has_next && c[k + 1]; break;
        case Op::WeakNext: v[k] = !has_next || c[k + 1]; break;
        case Op::Eventually: v[k] = c[k] || (has_next && v[k + 1]); break;
        case Op::Globally: v[k] = c[k] && (!has_next || v[k + 1]); break;
        default: break;
      }
    }
    return v;
  }
  Truth a = eval_all(f.left(), t, index);
  Truth b = eval_all(f.right(), t, index);
  for (std::size_t k = n; k-- > 0;) {
    bool has_next = k + 1 < n;
    switch (f.op()) {
      case Op::And: v[k] = a[k] && b[k]; break;
      case Op::Or: v[k] = a[k] || b[k]; break;
      case Op::Implies: v[k] = !a[k] || b[k]; break;
      case Op::Equiv: v[k] = a[k] == b[k]; break;
      case Op::Until: v[k] = b[k] || (a[k] && has_next && v[k + 1]); break;
      case Op::Release: v[k] = b[k] && (a[k] || !has_next || v[k + 1]); break;
      default: break;
    }
  }
  return v;
}

std::unordered_map<AtomId, std::size_t> resolve_atoms(const Formula& f,
                                                      const std::vector<std::string>& alphabet) {
  std::unordered_map<AtomId, std::size_t> index;
  for (const auto& name : propositions(f)) {
    auto it = std::find(alphabet.begin(), alphabet.end(), name);
    if (it == alphabet.end()) {
      throw AlphabetMismatch("proposition '" + name + "' is not in the trace alphabet");
    }
    index.emplace(intern_atom(name), static_cast<std::size_t>(it - alphabet.begin()));
  }
  return index;
}

}  // namespace

std::string to_string(const Formula& f) {
  std::string out;
  print(f, out);
  return out;
}

Formula to_nnf(const Formula& f) { return nnf(f, false); }

Trace::Trace(std::vector<std::string> alphabet, std::vector<Assignment> symbols)
    : alphabet_(std::move(alphabet)), symbols_(std::move(symbols)) {
  if (symbols_.empty()) throw InvalidArgument("traces must be nonempty");
  if (alphabet_.size() > kMaxAlphabet) throw InvalidArgument("trace alphabet exceeds 64 propositions");
  for (std::size_t i = 0; i < alphabet_.size(); ++i) {
    if (!is_identifier(alphabet_[i])) throw InvalidArgument("invalid proposition name '" + alphabet_[i] + "'");
    for (std::size_t j = 0; j < i; ++j) {
      if (alphabet_[j] == alphabet_[i]) throw InvalidArgument("duplicate proposition '" + alphabet_[i] + "'");
    }
  }
  const Assignment allowed =
      alphabet_.size() == kMaxAlphabet ? ~Assignment{0} : (Assignment{1} << alphabet_.size()) - 1;
  for (auto s : symbols_) {
    if (s & ~allowed) throw InvalidArgument("assignment sets propositions outside the alphabet");
  }
}

Trace Trace::from_sets(std::vector<std::string> alphabet,
                       const std::vector<std::vector<std::string>>& steps) {
  std::vector<Assignment> symbols;
  symbols.reserve(steps.size());
  for (const auto& step : steps) {
    Assignment a = 0;
    for (const auto& name : step) {
      auto it = std::find(alphabet.begin(), alphabet.end(), name);
      if (it == alphabet.end()) throw AlphabetMismatch("proposition '" + name + "' is not in the trace alphabet");
      a |= Assignment{1} << (it - alphabet.begin());
    }
    symbols.push_back(a);
  }
  return Trace(std::move(alphabet), std::move(symbols));
}

std::vector<std::string> Trace::true_at(std::size_t position) const {
  std::vector<std::string> out;
  for (std::size_t p = 0; p < alphabet_.size(); ++p) {
    if (holds(position, p)) out.push_back(alphabet_[p]);
  }
  return out;
}

std::string to_string(const Trace& trace) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (i) os << ", ";
    os << '{';
    auto props = trace.true_at(i);
    for (std::size_t j = 0; j < props.size(); ++j) os << (j ? "," : "") << props[j];
    os << '}';
  }
  os << ']';
  return os.str();
}

bool evaluate(const Formula& f, const Trace& trace, std::size_t position) {
  if (position >= trace.size()) {
    throw InvalidArgument("position " + std::to_string(position) + " out of range for trace of length " +
                          std::to_string(trace.size()));
  }
  auto index = resolve_atoms(f, trace.alphabet());
  return eval_all(f, trace, index)[position] != 0;
}

bool satisfies(const Formula& f, const Trace& trace) { return evaluate(f, trace, 0); }

TraceEvaluator::TraceEvaluator(const Formula& f, const std::vector<std::string>& alphabet) {
  auto index = resolve_atoms(f, alphabet);
  auto emit = [&](auto&& self, const Formula& g) -> std::uint32_t {
    Instr ins{g.op(), 0, 0};
    if (g.op() == Op::Atom) {
      ins.a = static_cast<std::uint32_t>(index.at(g.atom_id()));
    } else if (is_unary(g.op())) {
      ins.a = self(self, g.child());
    } else if (is_binary(g.op())) {
      ins.a = self(self, g.left());
      ins.b = self(self, g.right());
    }
    program_.push_back(ins);
    return static_cast<std::uint32_t>(program_.size() - 1);
  };
  emit(emit, f);
  scratch_.resize(program_.size());
}

std::uint64_t TraceEvaluator::positions(std::span<const Assignment> symbols) const {
  const std::size_t n = symbols.size();
  if (n == 0 || n > 64) throw InvalidArgument("TraceEvaluator supports traces of length 1..64");
  const std::uint64_t full = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  const std::uint64_t last = std::uint64_t{1} << (n - 1);
  auto& r = scratch_;
  // Least/greatest solutions coincide on finite chains; iterate to the unique fixpoint.
  auto fix = [](std::uint64_t v, auto step) {
    for (;;) {
      std::uint64_t next = step(v);
      if (next == v) return v;
      v = next;
    }
  };
  for (std::size_t k = 0; k < program_.size(); ++k) {
    const Instr& ins = program_[k];
    std::uint64_t v = 0;
    switch (ins.op) {
      case Op::True: v = full; break;
      case Op::False: v = 0; break;
      case Op::Atom:
        for (std::size_t i = 0; i < n; ++i) v |= ((symbols[i] >> ins.a) & 1U) << i;
        break;
      case Op::Not: v = ~r[ins.a] & full; break;
      case Op::And: v = r[ins.a] & r[ins.b]; break;
      case Op::Or: v = r[ins.a] | r[ins.b]; break;
      case Op::Implies: v = (~r[ins.a] | r[ins.b]) & full; break;
      case Op::Equiv: v = ~(r[ins.a] ^ r[ins.b]) & full; break;
      case Op::Next: v = r[ins.a] >> 1; break;
      case Op::WeakNext: v = (r[ins.a] >> 1) | last; break;
      case Op::Until: {
        auto a = r[ins.a], b = r[ins.b];
        v = fix(b, [&](std::uint64_t x) { return b | (a & (x >> 1)); });
        break;
      }
      case Op::Release: {
        auto a = r[ins.a], b = r[ins.b];
        v = fix(b, [&](std::uint64_t x) { return b & (a | (x >> 1) | last); });
        break;
      }
      case Op::Eventually: {
        auto c = r[ins.a];
        v = fix(c, [&](std::uint64_t x) { return c | (x >> 1); });
        break;
      }
      case Op::Globally: {
        auto c = r[ins.a];
        v = fix(c, [&](std::uint64_t x) { return c & ((x >> 1) | last); });
        break;
      }
    }
    r[k] = v;
  }
  return r.back();
}

}  // namespace ltlfsynth
