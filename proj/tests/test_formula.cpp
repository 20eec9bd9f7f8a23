#include <doctest.h>

#include <random>

#include "ltlfsynth/errors.hpp"
#include "ltlfsynth/formula.hpp"
#include "ltlfsynth/parser.hpp"
#include "oracles.hpp"

using namespace ltlfsynth;

namespace {

Trace tr(std::vector<std::string> alphabet, const std::vector<std::vector<std::string>>& steps) {
  return Trace::from_sets(std::move(alphabet), steps);
}

Formula A(const char* n) { return Formula::atom(n); }

}  // namespace

TEST_CASE("parse builds the expected trees") {
  CHECK(parse("F (g1 & g2)") == Formula::eventually(Formula::conj(A("g1"), A("g2"))));
  CHECK(parse("a U b U c") == Formula::until(A("a"), Formula::until(A("b"), A("c"))));
  CHECK(parse("a -> b -> c") == Formula::implies(A("a"), Formula::implies(A("b"), A("c"))));
  CHECK(parse("a | b & c") == Formula::disj(A("a"), Formula::conj(A("b"), A("c"))));
  CHECK(parse("a & b U c") == Formula::conj(A("a"), Formula::until(A("b"), A("c"))));
  CHECK(parse("!a U b") == Formula::until(Formula::negate(A("a")), A("b")));
  CHECK(parse("a <-> b -> c") == Formula::equiv(A("a"), Formula::implies(A("b"), A("c"))));
  CHECK(parse("X F G !p") == Formula::next(Formula::eventually(Formula::globally(Formula::negate(A("p"))))));
  CHECK(parse("  true\t&\n false ") == Formula::conj(Formula::tt(), Formula::ff()));
  CHECK(parse("((p))") == A("p"));
}

TEST_CASE("parse reports position and expected tokens") {
  try {
    parse("X");
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("expected operand") != std::string::npos);
    CHECK(e.line() == 1);
    CHECK(e.column() == 2);
    CHECK_FALSE(e.expected().empty());
  }
  try {
    parse("a &\n  (b | ");
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse("(a & b"), ParseError);
  CHECK_THROWS_AS(parse("a & b)"), ParseError);
  CHECK_THROWS_AS(parse("a # b"), ParseError);
  CHECK_THROWS_AS(parse("a R b"), ParseError);
  CHECK_THROWS_AS(parse("WX a"), ParseError);
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("alive"), ParseError);
  CHECK(parse("alive & p", ParseOptions{true}) == Formula::conj(A("alive"), A("p")));
}

TEST_CASE("print then parse is a fixpoint") {
  for (const auto& e : oracle::formula_corpus()) {
    Formula once = parse(to_string(e.formula));
    CHECK_MESSAGE(once == e.formula, e.text);
    CHECK(parse(to_string(once)) == once);
  }
  std::mt19937_64 rng(7);
  for (int i = 0; i < 300; ++i) {
    Formula f = oracle::random_formula(rng, 5, {"a", "b", "c"});
    CHECK(parse(to_string(f)) == f);
  }
}

TEST_CASE("propositions in first-occurrence order") {
  CHECK(propositions(parse("F (g1 & g2)")) == std::vector<std::string>{"g1", "g2"});
  CHECK(propositions(parse("true")).empty());
  CHECK(propositions(parse("p & !p")) == std::vector<std::string>{"p"});
  CHECK(propositions(parse("b U (a & b)")) == std::vector<std::string>{"b", "a"});
}

TEST_CASE("evaluate examples") {
  CHECK(evaluate(A("p"), tr({"p"}, {{"p"}}), 0));
  CHECK_FALSE(evaluate(Formula::next(A("p")), tr({"p"}, {{"p"}}), 0));
  CHECK(evaluate(parse("a U b"), tr({"a", "b"}, {{"a"}, {"a"}, {"b"}}), 0));
  CHECK_FALSE(evaluate(parse("G !bad"), tr({"bad"}, {{}, {"bad"}}), 0));
  CHECK(satisfies(Formula::tt(), tr({}, {{}})));
  CHECK(satisfies(parse("F (p1 & p2)"), tr({"p1", "p2"}, {{"p1"}, {"p1", "p2"}})));
  CHECK_FALSE(satisfies(parse("X p2"), tr({"p1", "p2"}, {{"p1"}})));
  CHECK(evaluate(parse("X p"), tr({"p"}, {{}, {"p"}}), 0));
  CHECK_FALSE(evaluate(parse("X p"), tr({"p"}, {{}, {"p"}}), 1));
}

TEST_CASE("evaluate errors") {
  CHECK_THROWS_AS(evaluate(A("p"), tr({"p"}, {{"p"}}), 1), InvalidArgument);
  CHECK_THROWS_AS(evaluate(A("q"), tr({"p"}, {{"p"}}), 0), AlphabetMismatch);
}

TEST_CASE("to_nnf examples") {
  CHECK(to_nnf(parse("!(a U b)")) == Formula::release(Formula::negate(A("a")), Formula::negate(A("b"))));
  CHECK(to_nnf(parse("!X a")) == Formula::weak_next(Formula::negate(A("a"))));
  CHECK(to_nnf(parse("!!a")) == A("a"));
}

namespace {

bool nnf_shape(const Formula& f) {
  switch (f.op()) {
    case Op::Not: return f.child().op() == Op::Atom;
    case Op::Implies:
    case Op::Equiv: return false;
    case Op::True:
    case Op::False:
    case Op::Atom: return true;
    default:
      if (is_unary(f.op())) return nnf_shape(f.child());
      return nnf_shape(f.left()) && nnf_shape(f.right());
  }
}

}  // namespace

TEST_CASE("library evaluator agrees with the direct-quantifier oracle, NNF included") {
  const std::vector<std::string> props = {"a", "b", "c"};
  std::mt19937_64 rng(11);
  for (int i = 0; i < 150; ++i) {
    Formula f = oracle::random_formula(rng, 4, props);
    Formula n = to_nnf(f);
    CHECK(nnf_shape(n));
    TraceEvaluator fast(f, props);
    for (std::size_t len = 1; len <= 4; ++len) {
      for (const auto& w : oracle::all_words(3, len)) {
        Trace t(props, w);
        bool ref = oracle::ltlf_holds(f, props, w, 0);
        REQUIRE(satisfies(f, t) == ref);
        REQUIRE(satisfies(n, t) == ref);
        REQUIRE(fast.satisfied(w) == ref);
        std::uint64_t pos = fast.positions(w);
        for (std::size_t j = 0; j < len; ++j) REQUIRE((((pos >> j) & 1U) != 0) == oracle::ltlf_holds(f, props, w, j));
      }
    }
  }
}

TEST_CASE("derived operators: F f == true U f and G f == !F!f, |rho| <= 6 over 3 props") {
  const std::vector<std::string> props = {"a", "b", "c"};
  std::mt19937_64 rng(3);
  for (int i = 0; i < 12; ++i) {
    Formula f = oracle::random_formula(rng, 2, props);
    TraceEvaluator ev_f(Formula::eventually(f), props), ev_u(Formula::until(Formula::tt(), f), props);
    TraceEvaluator ev_g(Formula::globally(f), props),
        ev_n(Formula::negate(Formula::eventually(Formula::negate(f))), props);
    for (std::size_t len = 1; len <= 6; ++len) {
      for (const auto& w : oracle::all_words(3, len)) {
        REQUIRE(ev_f.positions(w) == ev_u.positions(w));
        REQUIRE(ev_g.positions(w) == ev_n.positions(w));
      }
    }
  }
}

TEST_CASE("NNF soundness exhaustively over {a,b}, length <= 5") {
  const std::vector<std::string> props = {"a", "b"};
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    Formula f = oracle::random_formula(rng, 4, props);
    TraceEvaluator e1(f, props), e2(to_nnf(f), props);
    for (std::size_t len = 1; len <= 5; ++len) {
      for (const auto& w : oracle::all_words(2, len)) REQUIRE(e1.positions(w) == e2.positions(w));
    }
  }
}

TEST_CASE("trace construction") {
  Trace t = tr({"p", "q"}, {{"p"}, {"q", "p"}, {}});
  CHECK(t.size() == 3);
  CHECK(t.holds(1, 1));
  CHECK(t.true_at(1) == std::vector<std::string>{"p", "q"});
  CHECK_THROWS(tr({"p"}, {{"r"}}));
  CHECK_THROWS(Trace({"p"}, {}));
}
