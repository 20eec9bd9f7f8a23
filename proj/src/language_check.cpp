#include <algorithm>
#include <random>

#include "ltlfsynth/automata.hpp"
#include "ltlfsynth/errors.hpp"

namespace ltlfsynth {

namespace {

// sum_{l=1..max_len} letters^l, saturating at `cap + 1`.
std::uint64_t trace_count(std::uint64_t letters, std::size_t max_len, std::uint64_t cap) {
  std::uint64_t total = 0, power = 1;
  for (std::size_t l = 1; l <= max_len; ++l) {
    if (power > (cap + 1) / letters) return cap + 1;
    power *= letters;
    total += power;
    if (total > cap) return cap + 1;
  }
  return total;
}

}  // namespace

LanguageCheckResult language_equivalent_upto(const Dfa& a, const Formula& f, std::size_t max_len,
                                             const LanguageCheckOptions& options) {
  if (max_len < 1) throw InvalidArgument("max_len must be at least 1");
  if (max_len > 64) throw InvalidArgument("max_len is limited to 64");

  std::vector<std::string> alphabet = a.props();
  for (const auto& p : propositions(f)) {
    if (std::find(alphabet.begin(), alphabet.end(), p) == alphabet.end()) alphabet.push_back(p);
  }
  if (alphabet.size() > 32) throw InvalidArgument("language check is limited to 32 propositions");
  const std::uint64_t letters = std::uint64_t{1} << alphabet.size();
  const Assignment dfa_mask = a.num_props() == 64 ? ~Assignment{0} : (Assignment{1} << a.num_props()) - 1;

  TraceEvaluator eval(f, alphabet);
  std::vector<Assignment> symbols(max_len, 0);
  LanguageCheckResult result;

  auto disagrees = [&](std::size_t len) {
    StateId q = a.initial();
    for (std::size_t i = 0; i < len; ++i) q = a.successor(q, symbols[i] & dfa_mask);
    ++result.traces_checked;
    return a.is_accepting(q) != eval.satisfied(std::span<const Assignment>(symbols.data(), len));
  };
  auto record = [&](std::size_t len) {
    result.equivalent = false;
    result.counterexample = Trace(alphabet, std::vector<Assignment>(symbols.begin(), symbols.begin() + len));
  };

  if (trace_count(letters, max_len, options.budget) <= options.budget) {
    for (std::size_t len = 1; len <= max_len; ++len) {
      std::fill(symbols.begin(), symbols.end(), 0);
      for (;;) {
        if (disagrees(len)) {
          record(len);
          return result;
        }
        // Odometer increment, last position fastest.
        std::size_t i = len;
        while (i > 0 && ++symbols[i - 1] == letters) symbols[--i] = 0;
        if (i == 0) break;
      }
    }
    return result;
  }

  result.exhaustive = false;
  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<std::size_t> length(1, max_len);
  std::uniform_int_distribution<Assignment> letter(0, letters - 1);
  std::size_t best = max_len + 1;
  for (std::uint64_t s = 0; s < options.samples; ++s) {
    std::size_t len = length(rng);
    for (std::size_t i = 0; i < len; ++i) symbols[i] = letter(rng);
    if (disagrees(len) && len < best) {
      best = len;
      record(len);
    }
  }
  return result;
}

}  // namespace ltlfsynth
