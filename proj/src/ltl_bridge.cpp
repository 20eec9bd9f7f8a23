#include "ltlfsynth/ltl_bridge.hpp"

#include <algorithm>
#include <unordered_map>

#include "ltlfsynth/errors.hpp"
#include "ltlfsynth/parser.hpp"

namespace ltlfsynth {

LassoWord::LassoWord(std::vector<std::string> alphabet, std::vector<Assignment> prefix,
                     std::vector<Assignment> loop)
    : alphabet_(std::move(alphabet)), prefix_(std::move(prefix)), loop_(std::move(loop)) {
  if (loop_.empty()) throw InvalidArgument("lasso loop must be nonempty");
  if (alphabet_.size() > kMaxAlphabet) throw InvalidArgument("lasso alphabet exceeds 64 propositions");
  const Assignment allowed =
      alphabet_.size() == kMaxAlphabet ? ~Assignment{0} : (Assignment{1} << alphabet_.size()) - 1;
  auto check = [&](Assignment a) {
    if (a & ~allowed) throw InvalidArgument("lasso assignment sets propositions outside the alphabet");
  };
  std::for_each(prefix_.begin(), prefix_.end(), check);
  std::for_each(loop_.begin(), loop_.end(), check);
}

std::size_t LassoWord::canonical(std::size_t position) const noexcept {
  if (position < prefix_.size()) return position;
  return prefix_.size() + (position - prefix_.size()) % loop_.size();
}

std::size_t LassoWord::successor(std::size_t canonical_position) const noexcept {
  return canonical_position + 1 < span() ? canonical_position + 1 : prefix_.size();
}

Assignment LassoWord::symbol(std::size_t canonical_position) const noexcept {
  return canonical_position < prefix_.size() ? prefix_[canonical_position]
                                             : loop_[canonical_position - prefix_.size()];
}

Formula to_core(const Formula& f) {
  using F = Formula;
  switch (f.op()) {
    case Op::True:
    case Op::False:
    case Op::Atom:
      return f;
    case Op::Not: return F::negate(to_core(f.child()));
    case Op::And: return F::conj(to_core(f.left()), to_core(f.right()));
    case Op::Or:
      return F::negate(F::conj(F::negate(to_core(f.left())), F::negate(to_core(f.right()))));
    case Op::Implies: return F::negate(F::conj(to_core(f.left()), F::negate(to_core(f.right()))));
    case Op::Equiv: {
      auto l = to_core(f.left());
      auto r = to_core(f.right());
      return F::conj(F::negate(F::conj(l, F::negate(r))), F::negate(F::conj(r, F::negate(l))));
    }
    case Op::Next: return F::next(to_core(f.child()));
    case Op::WeakNext: return F::negate(F::next(F::negate(to_core(f.child()))));
    case Op::Until: return F::until(to_core(f.left()), to_core(f.right()));
    case Op::Release:
      return F::negate(F::until(F::negate(to_core(f.left())), F::negate(to_core(f.right()))));
    case Op::Eventually: return F::until(F::tt(), to_core(f.child()));
    case Op::Globally: return F::negate(F::until(F::tt(), F::negate(to_core(f.child()))));
  }
  return f;
}

namespace {

Formula alive() { return Formula::atom(kAliveProp); }

Formula translate_core(const Formula& f) {
  using F = Formula;
  switch (f.op()) {
    case Op::True:
    case Op::False:
      return f;
    case Op::Atom: return F::conj(f, alive());
    case Op::Not: return F::negate(translate_core(f.child()));
    case Op::And: return F::conj(translate_core(f.left()), translate_core(f.right()));
    case Op::Next: return F::next(F::conj(alive(), translate_core(f.child())));
    case Op::Until:
      return F::until(translate_core(f.left()), F::conj(alive(), translate_core(f.right())));
    default:
      throw InvalidArgument("translate_t expects a core formula");
  }
}

}  // namespace

Formula translate_t(const Formula& f) {
  auto props = propositions(f);
  if (std::find(props.begin(), props.end(), kAliveProp) != props.end()) {
    throw ReservedName("formula mentions the reserved proposition 'alive'");
  }
  return translate_core(to_core(f));
}

Formula translate_g(const Formula& f) {
  using F = Formula;
  return F::conj(translate_t(f), F::until(alive(), F::globally(F::negate(alive()))));
}

namespace {

class LassoEvaluator {
 public:
  LassoEvaluator(const LassoWord& w, std::unordered_map<AtomId, std::size_t> index)
      : w_(w), index_(std::move(index)) {
    n_ = w.span();
    full_ = n_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_) - 1;
  }

  std::uint64_t eval(const Formula& f) const {
    switch (f.op()) {
      case Op::True: return full_;
      case Op::False: return 0;
      case Op::Atom: {
        std::uint64_t v = 0;
        auto prop = index_.at(f.atom_id());
        for (std::size_t i = 0; i < n_; ++i) v |= ((w_.at(i) >> prop) & 1U) << i;
        return v;
      }
      case Op::Not: return ~eval(f.child()) & full_;
      case Op::And: return eval(f.left()) & eval(f.right());
      case Op::Or: return eval(f.left()) | eval(f.right());
      case Op::Implies: return (~eval(f.left()) | eval(f.right())) & full_;
      case Op::Equiv: return ~(eval(f.left()) ^ eval(f.right())) & full_;
      case Op::Next:
      case Op::WeakNext:
        return shift(eval(f.child()));
      case Op::Until: {
        auto a = eval(f.left()), b = eval(f.right());
        return fix(b, [&](std::uint64_t x) { return b | (a & shift(x)); });
      }
      case Op::Release: {
        auto a = eval(f.left()), b = eval(f.right());
        return fix(b, [&](std::uint64_t x) { return b & (a | shift(x)); });
      }
      case Op::Eventually: {
        auto c = eval(f.child());
        return fix(c, [&](std::uint64_t x) { return c | shift(x); });
      }
      case Op::Globally: {
        auto c = eval(f.child());
        return fix(c, [&](std::uint64_t x) { return c & shift(x); });
      }
    }
    return 0;
  }

 private:
  // Bit i of the result is bit successor(i) of v.
  std::uint64_t shift(std::uint64_t v) const {
    std::uint64_t wrapped = (v >> w_.prefix().size()) & 1U;
    return ((v >> 1) | (wrapped << (n_ - 1))) & full_;
  }

  // Starting from b, the iteration rises to the least (Until, F) or falls to the
  // greatest (Release, G) fixpoint.
  template <typename Step>
  static std::uint64_t fix(std::uint64_t v, Step step) {
    for (;;) {
      auto next = step(v);
      if (next == v) return v;
      v = next;
    }
  }

  const LassoWord& w_;
  std::unordered_map<AtomId, std::size_t> index_;
  std::size_t n_;
  std::uint64_t full_;
};

}  // namespace

bool evaluate_ltl(const Formula& f, const LassoWord& word, std::size_t position) {
  if (word.span() > 64) throw InvalidArgument("lasso evaluation supports at most 64 distinct positions");
  std::unordered_map<AtomId, std::size_t> index;
  const auto& alphabet = word.alphabet();
  for (const auto& name : propositions(f)) {
    auto it = std::find(alphabet.begin(), alphabet.end(), name);
    if (it == alphabet.end()) throw AlphabetMismatch("proposition '" + name + "' is not in the lasso alphabet");
    index.emplace(intern_atom(name), static_cast<std::size_t>(it - alphabet.begin()));
  }
  LassoEvaluator eval(word, std::move(index));
  return (eval.eval(f) >> word.canonical(position)) & 1U;
}

LassoWord lift_trace(const Trace& trace) {
  auto alphabet = trace.alphabet();
  if (std::find(alphabet.begin(), alphabet.end(), kAliveProp) != alphabet.end()) {
    throw ReservedName("trace alphabet already contains 'alive'");
  }
  if (alphabet.size() + 1 > kMaxAlphabet) throw InvalidArgument("no room for 'alive' in a 64-proposition alphabet");
  const Assignment alive_bit = Assignment{1} << alphabet.size();
  alphabet.emplace_back(kAliveProp);
  std::vector<Assignment> prefix = trace.symbols();
  for (auto& a : prefix) a |= alive_bit;
  return LassoWord(std::move(alphabet), std::move(prefix), {Assignment{0}});
}

namespace {

void print_prism(const Formula& f, std::string& out) {
  auto group = [&](const Formula& g, Op parent) {
    bool flat = g.op() == parent && (parent == Op::And || parent == Op::Or);
    if (is_binary(g.op()) && !flat) {
      out += '(';
      print_prism(g, out);
      out += ')';
    } else {
      print_prism(g, out);
    }
  };
  switch (f.op()) {
    case Op::True: out += "true"; return;
    case Op::False: out += "false"; return;
    case Op::Atom: out += '"' + f.name() + '"'; return;
    case Op::Not: out += '!'; group(f.child(), Op::Not); return;
    case Op::Next: out += "X "; group(f.child(), Op::Next); return;
    case Op::WeakNext:
      if (f.child().op() == Op::Not) {
        out += "!X ";
        group(f.child().child(), Op::Next);
      } else {
        out += "!X !";
        group(f.child(), Op::Not);
      }
      return;
    case Op::Eventually: out += "F "; group(f.child(), Op::Eventually); return;
    case Op::Globally: out += "G "; group(f.child(), Op::Globally); return;
    default: break;
  }
  const char* sym = "";
  switch (f.op()) {
    case Op::And: sym = " & "; break;
    case Op::Or: sym = " | "; break;
    case Op::Implies: sym = " => "; break;
    case Op::Equiv: sym = " <=> "; break;
    case Op::Until: sym = " U "; break;
    case Op::Release: sym = " R "; break;
    default: break;
  }
  group(f.left(), f.op());
  out += sym;
  group(f.right(), f.op());
}

}  // namespace

std::string export_prism_property(const Formula& f) {
  std::string body;
  print_prism(f, body);
  return "Pmax=? [ " + body + " ]";
}

}  // namespace ltlfsynth
