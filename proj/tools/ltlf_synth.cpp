// ltlf-synth: command-line front end.
//
// Exit codes: 0 ok, 1 bad input, 2 resource limit, 3 verification failure.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "ltlfsynth/automata.hpp"
#include "ltlfsynth/benchmarks.hpp"
#include "ltlfsynth/errors.hpp"
#include "ltlfsynth/explicit_io.hpp"
#include "ltlfsynth/ltl_bridge.hpp"
#include "ltlfsynth/mdp.hpp"
#include "ltlfsynth/oracle.hpp"
#include "ltlfsynth/parser.hpp"
#include "ltlfsynth/synthesis.hpp"

using namespace ltlfsynth;

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kResourceLimit = 2;
constexpr int kVerifyFailed = 3;

struct FormulaArg {
  std::string inline_text;
  std::string file;

  void add_to(CLI::App* app) {
    auto* f = app->add_option("-f,--formula", inline_text, "LTLf formula text");
    auto* ff = app->add_option("--formula-file", file, "file whose first non-comment line is the formula");
    f->excludes(ff);
  }

  Formula load() const {
    if (!inline_text.empty()) return parse(inline_text);
    if (file.empty()) throw InvalidArgument("no formula given (use -f or --formula-file)");
    std::ifstream in(file);
    if (!in) throw InvalidArgument("cannot open formula file " + file);
    std::string line;
    while (std::getline(in, line)) {
      auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      return parse(line);
    }
    throw InvalidArgument("formula file " + file + " has no formula line");
  }
};

std::string fixed9(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", x);
  return buf;
}

std::string sci(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + path);
  out << text;
  if (!out) throw InvalidArgument("error writing " + path);
}

std::size_t default_state_cap() {
  std::size_t cap = ProductOptions{}.state_cap;
  if (const char* env = std::getenv("LTLF_SYNTH_STATE_CAP")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0' || v == 0) throw InvalidArgument("LTLF_SYNTH_STATE_CAP must be a positive integer");
    cap = static_cast<std::size_t>(v);
  }
  return cap;
}

std::string extension(const std::string& path) {
  auto slash = path.find_last_of('/');
  auto dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return "";
  return path.substr(dot + 1);
}

// --- compile ---------------------------------------------------------------

struct CompileCmd {
  FormulaArg formula;
  std::string out;
  bool dot = false, json = false, hoa = false;

  int run() const {
    Formula f = formula.load();
    Dfa a = compile(f);
    std::string fmt = dot ? "dot" : json ? "json" : hoa ? "hoa" : extension(out);
    if (!out.empty() || dot || json || hoa) {
      std::string text;
      if (fmt == "dot") {
        text = export_dot(a);
      } else if (fmt == "json" || fmt.empty()) {
        text = export_json(a);
      } else if (fmt == "hoa") {
        text = export_hoa(a);
      } else {
        throw InvalidArgument("cannot infer format from '" + out + "'; use --dot, --json or --hoa");
      }
      if (out.empty() || out == "-") {
        std::cout << text;
      } else {
        write_file(out, text);
      }
    }
    std::cout << "states: " << a.num_states() << "\n";
    return kOk;
  }
};

// --- translate -------------------------------------------------------------

struct TranslateCmd {
  FormulaArg formula;

  int run() const {
    Formula g = translate_g(formula.load());
    std::cout << "ltl:   " << to_string(g) << "\n";
    std::cout << "prism: " << export_prism_property(g) << "\n";
    return kOk;
  }
};

// --- augment ---------------------------------------------------------------

struct AugmentCmd {
  std::string model;
  std::string out;

  int run() const {
    Mdp m = read_explicit(model);
    Mdp aug = augment(m);
    write_explicit(aug, out);
    std::cout << "+1 state, +1 action\n";
    std::cout << "states: " << aug.num_states() << ", choices: " << aug.num_choices()
              << ", transitions: " << aug.num_transitions() << "\n";
    return kOk;
  }
};

// --- synthesize ------------------------------------------------------------

struct SynthesizeCmd {
  std::string model;
  FormulaArg formula;
  double epsilon = ViOptions{}.epsilon;
  std::size_t max_iters = ViOptions{}.max_iters;
  unsigned threads = 1;
  std::string policy_out;
  bool oracle = false;
  bool timing = false;
  bool human = false;
  std::size_t state_cap = 0;

  int run() const {
    if (!(epsilon > 0.0)) throw InvalidArgument("--epsilon must be positive");
    Mdp m = read_explicit(model);
    Formula f = formula.load();
    ViOptions vi{epsilon, max_iters, threads};
    ProductOptions po;
    po.state_cap = state_cap ? state_cap : default_state_cap();
    Synthesis s = synthesize(m, f, vi, po);
    std::cout << fixed9(s.result.optimal_value) << "\n";
    if (human) {
      std::cout << stats_human(s.result.stats, timing) << "\n";
    } else {
      std::cout << stats_csv_header(timing) << "\n" << stats_csv(s.result.stats, timing) << "\n";
    }
    if (!policy_out.empty()) write_file(policy_out, export_policy(s.result, s.product));
    if (oracle) {
      try {
        double o = oracle_max_probability(s.product);
        double diff = std::abs(o - s.result.optimal_value);
        bool ok = diff <= 1e-6;
        std::cout << "oracle: " << fixed9(o) << " diff " << sci(diff) << " " << (ok ? "PASS" : "FAIL") << "\n";
        if (!ok) return kVerifyFailed;
      } catch (const BudgetExceeded& e) {
        std::cout << "oracle: SKIPPED: budget (" << e.what() << ")\n";
      }
    }
    return kOk;
  }
};

// --- gen -------------------------------------------------------------------

void write_benchmark(const Mdp& m, const Formula& f, const std::string& prefix, const std::string& comment) {
  write_explicit(m, prefix);
  write_file(prefix + ".ltlf", "# " + comment + "\n" + to_string(f) + "\n");
  std::cout << "wrote " << prefix << ".tra/.sta/.lab/.ltlf (" << m.num_states() << " states, " << m.num_choices()
            << " choices, " << m.num_transitions() << " transitions)\n";
}

struct GenGridCmd {
  GridOptions opt;
  std::string layout = "plain";
  std::string family = "fn";
  std::string out = "gridworld";

  int run() {
    if (layout == "plain") {
      opt.layout = GridLayout::Plain;
    } else if (layout == "random") {
      opt.layout = GridLayout::Random;
    } else if (layout == "hallways") {
      opt.layout = GridLayout::Hallways;
    } else {
      throw InvalidArgument("unknown layout '" + layout + "'");
    }
    Formula f = Formula::tt();
    std::string name;
    if (family == "fn") {
      f = gen_fn_formula(opt.goals);
      name = "F" + std::to_string(opt.goals);
    } else if (family == "os") {
      if (opt.goals < 3) throw InvalidArgument("OS needs at least 3 goals");
      f = gen_os_formula();
      name = "OS";
    } else if (family == "ol") {
      if (opt.goals < 4) throw InvalidArgument("OL needs at least 4 goals");
      f = gen_ol_formula();
      name = "OL";
    } else {
      throw InvalidArgument("unknown formula family '" + family + "'");
    }
    Mdp m = gen_gridworld(make_grid(opt));
    write_benchmark(m, f, out,
                    "gridworld " + std::to_string(opt.width) + "x" + std::to_string(opt.height) + " " + layout +
                        " seed " + std::to_string(opt.seed) + ", " + name);
    return kOk;
  }
};

struct GenNimCmd {
  int heap = 10;
  int takes = 3;
  int n_targets = 2;
  int n_forbidden = 1;
  std::vector<int> targets;
  std::vector<int> forbidden;
  std::uint64_t seed = 1;
  std::string out = "nim";

  int run() const {
    NimSpec spec;
    if (!targets.empty() || !forbidden.empty()) {
      spec = NimSpec{heap, takes, targets, forbidden};
    } else {
      spec = random_nim_spec(heap, takes, n_targets, n_forbidden, seed);
    }
    Benchmark b = gen_nim(spec);
    write_benchmark(b.mdp, b.formula, out,
                    "nim heap " + std::to_string(heap) + " takes " + std::to_string(takes) + " seed " +
                        std::to_string(seed));
    return kOk;
  }
};

struct GenCounterCmd {
  CounterSpec spec;
  std::string out = "counter";

  int run() const {
    Benchmark b = gen_double_counter(spec);
    write_benchmark(b.mdp, b.formula, out, "double counter bits " + std::to_string(spec.bits));
    return kOk;
  }
};

// --- verify ----------------------------------------------------------------

struct VerifyCmd {
  std::string model;
  FormulaArg formula;
  std::size_t max_len = 6;
  bool corrupt_dfa = false;

  int run() const {
    Mdp m = read_explicit(model);
    Formula f = formula.load();
    bool failed = false;

    try {
      Lemma1Report r = verify_lemma1(m, f);
      bool ok = r.difference < 1e-9;
      failed |= !ok;
      std::cout << "termination: " << (ok ? "PASS" : "FAIL") << " (native " << fixed9(r.native) << ", augmented "
                << fixed9(r.augmented) << ", diff " << sci(r.difference) << ")\n";
    } catch (const BudgetExceeded& e) {
      std::cout << "termination: SKIPPED: budget (" << e.what() << ")\n";
    }

    Dfa a = compile(f);
    if (corrupt_dfa) {
      std::vector<bool> flipped(a.num_states());
      for (StateId q = 0; q < a.num_states(); ++q) flipped[q] = !a.is_accepting(q);
      a = a.with_accepting(flipped);
    }
    LanguageCheckResult lc = language_equivalent_upto(a, f, max_len);
    failed |= !lc.equivalent;
    std::cout << "language: " << (lc.equivalent ? "PASS" : "FAIL") << " (" << lc.traces_checked << " traces up to length "
              << max_len << (lc.exhaustive ? ", exhaustive" : ", sampled") << ")\n";
    if (lc.counterexample) std::cout << "counterexample: " << to_string(*lc.counterexample) << "\n";
    return failed ? kVerifyFailed : kOk;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LTLf policy synthesis on explicit MDPs"};
  app.require_subcommand(1);

  CompileCmd compile_cmd;
  auto* c = app.add_subcommand("compile", "compile a formula to its minimal DFA and print the state count");
  compile_cmd.formula.add_to(c);
  c->add_option("-o,--out", compile_cmd.out, "output file (format from extension unless a format flag is given)");
  auto* fd = c->add_flag("--dot", compile_cmd.dot, "Graphviz output");
  auto* fj = c->add_flag("--json", compile_cmd.json, "JSON output");
  auto* fh = c->add_flag("--hoa", compile_cmd.hoa, "HOA v1 output");
  fd->excludes(fj)->excludes(fh);
  fj->excludes(fh);

  TranslateCmd translate_cmd;
  auto* t = app.add_subcommand("translate", "print g(phi) in native and PRISM syntax");
  translate_cmd.formula.add_to(t);

  AugmentCmd augment_cmd;
  auto* a = app.add_subcommand("augment", "add the terminal state, a_term and the alive label");
  a->add_option("model", augment_cmd.model, "input prefix (PREFIX.tra, .sta, .lab)")->required();
  a->add_option("-o,--out", augment_cmd.out, "output prefix")->required();

  SynthesizeCmd synth_cmd;
  auto* s = app.add_subcommand("synthesize",
                               "maximal probability of satisfying phi and an optimal policy. Value iteration "
                               "stops on a tolerance, so the result is approximate to about epsilon");
  s->add_option("model", synth_cmd.model, "input prefix (PREFIX.tra, .sta, .lab)")->required();
  synth_cmd.formula.add_to(s);
  s->add_option("--epsilon", synth_cmd.epsilon, "convergence threshold")->capture_default_str();
  s->add_option("--max-iters", synth_cmd.max_iters, "iteration cap")->capture_default_str();
  s->add_option("--threads", synth_cmd.threads, "1 = Gauss-Seidel reference solver, more = parallel Jacobi")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  s->add_option("--policy", synth_cmd.policy_out, "write the policy JSON here");
  s->add_option("--state-cap", synth_cmd.state_cap, "product state cap (default: LTLF_SYNTH_STATE_CAP or 50000000)");
  s->add_flag("--oracle", synth_cmd.oracle, "cross-check with policy enumeration (small models only)");
  s->add_flag("--timing", synth_cmd.timing, "add wall time to the stats");
  s->add_flag("--human", synth_cmd.human, "human-readable stats instead of CSV");

  auto* g = app.add_subcommand("gen", "generate benchmark models");
  g->require_subcommand(1);
  GenGridCmd grid_cmd;
  auto* gg = g->add_subcommand("gridworld", "gridworld; row 0 is the bottom row");
  gg->add_option("width", grid_cmd.opt.width)->capture_default_str();
  gg->add_option("height", grid_cmd.opt.height)->capture_default_str();
  gg->add_option("--goals", grid_cmd.opt.goals, "number of goal cells")->capture_default_str();
  gg->add_option("--avoid", grid_cmd.opt.avoid, "number of `bad` cells")->capture_default_str();
  gg->add_option("--layout", grid_cmd.layout, "plain | random (20% blocked) | hallways (walls with one gap)")
      ->capture_default_str();
  gg->add_option("--seed", grid_cmd.opt.seed)->capture_default_str();
  gg->add_option("--formula", grid_cmd.family, "fn | os | ol")->capture_default_str();
  gg->add_option("-o,--out", grid_cmd.out, "output prefix")->capture_default_str();

  GenNimCmd nim_cmd;
  auto* gn = g->add_subcommand("nim", "Nim against a uniformly random opponent");
  gn->add_option("--heap", nim_cmd.heap)->capture_default_str();
  gn->add_option("--takes", nim_cmd.takes, "maximal removal per move")->capture_default_str();
  gn->add_option("--targets", nim_cmd.targets, "heights to reach (default: random)");
  gn->add_option("--forbidden", nim_cmd.forbidden, "heights to avoid (default: random)");
  gn->add_option("--num-targets", nim_cmd.n_targets)->capture_default_str();
  gn->add_option("--num-forbidden", nim_cmd.n_forbidden)->capture_default_str();
  gn->add_option("--seed", nim_cmd.seed)->capture_default_str();
  gn->add_option("-o,--out", nim_cmd.out, "output prefix")->capture_default_str();

  GenCounterCmd counter_cmd;
  std::vector<int> counter_start;
  auto* gc = g->add_subcommand("counter", "system counter chasing a random environment counter");
  gc->add_option("--bits", counter_cmd.spec.bits)->capture_default_str();
  gc->add_option("--p-env", counter_cmd.spec.p_env, "environment increment probability")->capture_default_str();
  gc->add_option("--start", counter_start, "system and environment start values")->expected(2);
  gc->add_option("-o,--out", counter_cmd.out, "output prefix")->capture_default_str();

  std::string example_out = "example";
  auto* ge = g->add_subcommand("example", "the four-state worked example MDP");
  ge->add_option("-o,--out", example_out, "output prefix")->capture_default_str();

  VerifyCmd verify_cmd;
  auto* v = app.add_subcommand("verify", "desk-scale checks: augmented vs native optimum by policy enumeration and DFA language");
  v->add_option("model", verify_cmd.model, "input prefix (PREFIX.tra, .sta, .lab)")->required();
  verify_cmd.formula.add_to(v);
  v->add_option("--max-len", verify_cmd.max_len, "trace length bound of the language check")->capture_default_str();
  v->add_flag("--corrupt-dfa", verify_cmd.corrupt_dfa, "debug: complement the DFA before checking");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }

  try {
    if (c->parsed()) return compile_cmd.run();
    if (t->parsed()) return translate_cmd.run();
    if (a->parsed()) return augment_cmd.run();
    if (s->parsed()) return synth_cmd.run();
    if (gg->parsed()) return grid_cmd.run();
    if (gn->parsed()) return nim_cmd.run();
    if (gc->parsed()) {
      if (!counter_start.empty()) counter_cmd.spec.start = std::pair{counter_start[0], counter_start[1]};
      return counter_cmd.run();
    }
    if (ge->parsed()) {
      write_benchmark(example_mdp(), parse("F (p1 & p2)"), example_out, "worked example");
      return kOk;
    }
    if (v->parsed()) return verify_cmd.run();
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kInputError;
  } catch (const ResourceLimit& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kResourceLimit;
  } catch (const ConvergenceError& e) {
    std::cerr << "not converged: " << e.what() << "\n";
    return kResourceLimit;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
