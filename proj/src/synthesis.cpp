#include "ltlfsynth/synthesis.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <barrier>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <thread>

#include "ltlfsynth/errors.hpp"

namespace ltlfsynth {

namespace {

constexpr double kMonotoneSlack = 1e-12;

// Predecessor choices of every product state, as CSR over choice ids.
struct Reverse {
  std::vector<std::uint64_t> start;
  std::vector<std::uint32_t> choice;
};

Reverse reverse_edges(const ProductMdp& p) {
  const std::size_t n = p.num_states();
  Reverse r;
  r.start.assign(n + 1, 0);
  for (std::size_t i = 0; i < p.num_transitions(); ++i) {
    if (p.trans_prob[i] > 0.0) ++r.start[p.trans_target[i] + 1];
  }
  for (std::size_t i = 0; i < n; ++i) r.start[i + 1] += r.start[i];
  r.choice.resize(r.start[n]);
  std::vector<std::uint64_t> fill(r.start.begin(), r.start.end() - 1);
  for (std::uint32_t c = 0; c < p.num_choices(); ++c) {
    for (auto i = p.trans_start[c]; i < p.trans_start[c + 1]; ++i) {
      if (p.trans_prob[i] > 0.0) r.choice[fill[p.trans_target[i]]++] = c;
    }
  }
  return r;
}

std::vector<StateId> owner_of_choice(const ProductMdp& p) {
  std::vector<StateId> owner(p.num_choices());
  for (StateId x = 0; x < p.num_states(); ++x) {
    for (auto c = p.choice_start[x]; c < p.choice_start[x + 1]; ++c) owner[c] = x;
  }
  return owner;
}

inline double q_value(const ProductMdp& p, std::uint32_t c, const double* v) {
  double sum = 0.0;
  for (auto i = p.trans_start[c]; i < p.trans_start[c + 1]; ++i) sum += p.trans_prob[i] * v[p.trans_target[i]];
  return sum;
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

}  // namespace

std::vector<bool> prob0(const ProductMdp& p) {
  const std::size_t n = p.num_states();
  Reverse r = reverse_edges(p);
  std::vector<StateId> owner = owner_of_choice(p);
  std::vector<bool> reach(n, false);
  std::vector<StateId> stack;
  for (StateId x = 0; x < n; ++x) {
    if (p.accepting[x]) {
      reach[x] = true;
      stack.push_back(x);
    }
  }
  while (!stack.empty()) {
    StateId y = stack.back();
    stack.pop_back();
    for (auto i = r.start[y]; i < r.start[y + 1]; ++i) {
      StateId x = owner[r.choice[i]];
      if (!reach[x]) {
        reach[x] = true;
        stack.push_back(x);
      }
    }
  }
  std::vector<bool> zero(n);
  for (StateId x = 0; x < n; ++x) zero[x] = !reach[x];
  return zero;
}

std::vector<bool> prob1e(const ProductMdp& p) {
  const std::size_t n = p.num_states();
  Reverse r = reverse_edges(p);
  std::vector<StateId> owner = owner_of_choice(p);
  const std::vector<bool> zero = prob0(p);
  std::vector<bool> u(n);
  for (StateId x = 0; x < n; ++x) u[x] = !zero[x];
  // Greatest fixpoint: shrink U to the states that reach the accepting set
  // through actions whose every successor stays in U.
  for (;;) {
    std::vector<bool> reach(n, false);
    std::vector<StateId> stack;
    for (StateId x = 0; x < n; ++x) {
      if (p.accepting[x]) {
        reach[x] = true;
        stack.push_back(x);
      }
    }
    while (!stack.empty()) {
      StateId y = stack.back();
      stack.pop_back();
      for (auto i = r.start[y]; i < r.start[y + 1]; ++i) {
        std::uint32_t c = r.choice[i];
        StateId x = owner[c];
        if (reach[x] || !u[x]) continue;
        bool closed = true;
        for (auto j = p.trans_start[c]; j < p.trans_start[c + 1] && closed; ++j) closed = u[p.trans_target[j]];
        if (closed) {
          reach[x] = true;
          stack.push_back(x);
        }
      }
    }
    if (reach == u) return u;
    u = std::move(reach);
  }
}

SynthesisResult value_iteration(const ProductMdp& p, const ViOptions& options) {
  if (!(options.epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
  if (options.threads == 0) throw InvalidArgument("threads must be at least 1");
  const auto started = std::chrono::steady_clock::now();
  const std::size_t n = p.num_states();
  const std::vector<bool> zero = prob0(p);
  const std::vector<bool> one = prob1e(p);

  std::vector<StateId> active;
  std::vector<double> v(n, 0.0);
  for (StateId x = 0; x < n; ++x) {
    if (p.accepting[x] || one[x]) {
      v[x] = 1.0;
    } else if (!zero[x]) {
      active.push_back(x);
    }
  }

  SynthesisResult r;
  r.stats.residual = 0.0;
  std::size_t iterations = 0;
  double residual = 0.0;
  std::size_t violations = 0;

  if (!active.empty() && options.threads == 1) {
    do {
      if (iterations >= options.max_iters) {
        throw ConvergenceError("value iteration did not converge within " + std::to_string(options.max_iters) +
                                   " iterations (residual " + fmt("%.3e", residual) + ")",
                               residual);
      }
      residual = 0.0;
      for (StateId x : active) {
        double best = 0.0;
        for (auto c = p.choice_start[x]; c < p.choice_start[x + 1]; ++c) best = std::max(best, q_value(p, c, v.data()));
        double diff = best - v[x];
        if (diff < -kMonotoneSlack) ++violations;
        residual = std::max(residual, std::abs(diff));
        v[x] = best;
      }
      ++iterations;
    } while (residual >= options.epsilon);
  } else if (!active.empty()) {
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(options.threads, active.size()));
    std::vector<double> next = v;
    double* cur_ptr = v.data();
    double* next_ptr = next.data();
    std::vector<double> part_residual(workers, 0.0);
    std::vector<std::size_t> part_violations(workers, 0);
    std::atomic<bool> stop{false};
    bool capped = false;
    auto on_sweep = [&]() noexcept {
      residual = *std::max_element(part_residual.begin(), part_residual.end());
      std::swap(cur_ptr, next_ptr);
      ++iterations;
      if (residual < options.epsilon) {
        stop = true;
      } else if (iterations >= options.max_iters) {
        capped = true;
        stop = true;
      }
    };
    std::barrier sync(static_cast<std::ptrdiff_t>(workers), on_sweep);
    auto work = [&](unsigned w) {
      const std::size_t lo = active.size() * w / workers;
      const std::size_t hi = active.size() * (w + 1) / workers;
      while (!stop.load()) {
        double res = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
          StateId x = active[i];
          double best = 0.0;
          for (auto c = p.choice_start[x]; c < p.choice_start[x + 1]; ++c) {
            best = std::max(best, q_value(p, c, cur_ptr));
          }
          double diff = best - cur_ptr[x];
          if (diff < -kMonotoneSlack) ++part_violations[w];
          res = std::max(res, std::abs(diff));
          next_ptr[x] = best;
        }
        part_residual[w] = res;
        sync.arrive_and_wait();
      }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work, w);
    work(0);
    for (auto& t : pool) t.join();
    if (cur_ptr != v.data()) v.assign(cur_ptr, cur_ptr + n);
    violations = std::accumulate(part_violations.begin(), part_violations.end(), std::size_t{0});
    if (capped) {
      throw ConvergenceError("value iteration did not converge within " + std::to_string(options.max_iters) +
                                 " iterations (residual " + fmt("%.3e", residual) + ")",
                             residual);
    }
  }

  // Policy extraction.
  std::vector<ActionId> policy(n, 0);
  std::vector<double> best(n, 0.0);
  for (StateId x = 0; x < n; ++x) {
    double b = -1.0;
    ActionId arg = std::numeric_limits<ActionId>::max();
    for (auto c = p.choice_start[x]; c < p.choice_start[x + 1]; ++c) {
      double q = q_value(p, c, v.data());
      ActionId a = p.choice_action[c];
      if (q > b || (q == b && a < arg)) {
        b = q;
        arg = a;
      }
    }
    best[x] = b;
    policy[x] = arg;
  }
  {
    Reverse rev = reverse_edges(p);
    std::vector<StateId> owner = owner_of_choice(p);
    std::vector<StateId> layer;
    for (StateId x = 0; x < n; ++x) {
      if (p.accepting[x]) layer.push_back(x);
    }
    std::vector<bool> reached(n, false);
    for (auto x : layer) reached[x] = true;
    std::vector<ActionId> pick(n, std::numeric_limits<ActionId>::max());
    while (!layer.empty()) {
      std::vector<StateId> next;
      for (StateId y : layer) {
        for (auto i = rev.start[y]; i < rev.start[y + 1]; ++i) {
          std::uint32_t c = rev.choice[i];
          StateId x = owner[c];
          if (reached[x] || zero[x]) continue;
          if (one[x]) {
            // Value-1 states must stay inside the value-1 region.
            bool closed = true;
            for (auto j = p.trans_start[c]; j < p.trans_start[c + 1] && closed; ++j) closed = one[p.trans_target[j]];
            if (!closed) continue;
          } else if (q_value(p, c, v.data()) < best[x] - options.epsilon) {
            continue;
          }
          if (pick[x] == std::numeric_limits<ActionId>::max()) next.push_back(x);
          pick[x] = std::min(pick[x], p.choice_action[c]);
        }
      }
      std::sort(next.begin(), next.end());
      for (StateId x : next) {
        reached[x] = true;
        policy[x] = pick[x];
      }
      layer = std::move(next);
    }
  }

  r.probability = std::move(v);
  r.optimal_value = r.probability[p.initial];
  r.policy = std::move(policy);
  r.stats.product_states = n;
  r.stats.product_transitions = p.num_transitions();
  r.stats.product_choices = p.num_choices();
  r.stats.dfa_states = p.automaton ? p.automaton->num_states() : 0;
  r.stats.iterations = iterations;
  r.stats.residual = residual;
  r.stats.monotonicity_violations = violations;
  r.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return r;
}

Synthesis synthesize(const Mdp& m, const Formula& f, const ViOptions& options, const ProductOptions& product_options,
                     const CompileOptions& compile_options) {
  auto dfa = std::make_shared<const Dfa>(compile(f, compile_options));
  auto mdp = std::make_shared<const Mdp>(m);
  ProductMdp product = build_product(mdp, dfa, product_options);
  SynthesisResult result = value_iteration(product, options);
  return Synthesis{*dfa, std::move(product), std::move(result)};
}

std::string export_policy(const SynthesisResult& r, const ProductMdp& p) {
  using Json = nlohmann::ordered_json;
  Json j;
  j["optimal_value"] = r.optimal_value;
  j["initial"] = Json{{"mdp_state", p.states[p.initial].first}, {"dfa_state", p.states[p.initial].second}};
  j["dfa"] = Json::parse(export_json(*p.automaton));
  std::vector<StateId> order(p.num_states());
  std::iota(order.begin(), order.end(), StateId{0});
  std::sort(order.begin(), order.end(), [&](StateId a, StateId b) { return p.states[a] < p.states[b]; });
  Json entries = Json::array();
  for (StateId x : order) {
    entries.push_back(Json{{"mdp_state", p.states[x].first},
                           {"dfa_state", p.states[x].second},
                           {"action", p.base->actions[r.policy[x]]},
                           {"value", r.probability[x]}});
  }
  j["policy"] = std::move(entries);
  return j.dump(2) + "\n";
}

std::string stats_csv_header(bool timing) {
  return std::string("states,transitions,choices,dfa_states,iterations,residual") + (timing ? ",seconds" : "");
}

std::string stats_csv(const SynthesisStats& s, bool timing) {
  std::string out = std::to_string(s.product_states) + "," + std::to_string(s.product_transitions) + "," +
                    std::to_string(s.product_choices) + "," + std::to_string(s.dfa_states) + "," +
                    std::to_string(s.iterations) + "," + fmt("%.3e", s.residual);
  if (timing) out += "," + fmt("%.3f", s.seconds);
  return out;
}

std::string stats_human(const SynthesisStats& s, bool timing) {
  std::string out = "product: " + std::to_string(s.product_states) + " states, " +
                    std::to_string(s.product_transitions) + " transitions, " + std::to_string(s.product_choices) +
                    " choices; dfa: " + std::to_string(s.dfa_states) + " states; iterations: " +
                    std::to_string(s.iterations) + "; residual: " + fmt("%.3e", s.residual);
  if (timing) out += "; time: " + fmt("%.3f", s.seconds) + " s";
  return out;
}

}  // namespace ltlfsynth
