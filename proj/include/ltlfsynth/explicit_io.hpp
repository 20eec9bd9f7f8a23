#pragma once

#include <string>
#include <string_view>

#include "ltlfsynth/mdp.hpp"

namespace ltlfsynth {

/// Contents of the three PRISM explicit-model files.
struct ExplicitFiles {
  std::string tra;
  std::string sta;
  std::string lab;
};

/// `.tra`: `numStates numChoices numTransitions`, then `src choice dst prob action`.
/// `.sta`: `(v1,v2,...)`, then `id:(x1,x2,...)`; a model without valuations uses `(s)` = state id.
/// `.lab`: `0="init" 1="p" ...`, then `state: ids` for every state with at least one label.
/// Probabilities use the shortest decimal that reads back to the same double.
ExplicitFiles export_explicit(const Mdp& m);

/// Parses explicit files; `sta` may be empty. Distributions within 1e-9 of
/// stochastic are renormalized, larger deviations are rejected. Throws
/// ModelError with the file name and line number of the first problem.
Mdp import_explicit(std::string_view tra, std::string_view sta, std::string_view lab);

/// Reads/writes PREFIX.tra, PREFIX.sta and PREFIX.lab. A missing .sta is allowed on read.
void write_explicit(const Mdp& m, const std::string& prefix);
Mdp read_explicit(const std::string& prefix);

/// Shortest round-trip decimal for a double.
std::string format_double(double x);

}  // namespace ltlfsynth
