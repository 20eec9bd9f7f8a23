#pragma once

#include <string_view>

#include "ltlfsynth/formula.hpp"

namespace ltlfsynth {

/// Proposition reserved for the termination encoding of the LTL reduction.
inline constexpr std::string_view kAliveProp = "alive";

struct ParseOptions {
  /// Accept the reserved `alive` proposition (used when re-reading translated formulas).
  bool allow_reserved = false;
};

/// Parses concrete syntax:
///
///     formula := equiv
///     equiv   := implies ('<->' implies)*
///     implies := or ('->' implies)?
///     or      := and ('|' and)*
///     and     := until ('&' until)*
///     until   := unary ('U' until)?
///     unary   := ('!' | 'X' | 'F' | 'G') unary | primary
///     primary := 'true' | 'false' | identifier | '(' formula ')'
///
/// `X`, `F`, `G`, `U`, `R`, `WX`, `true` and `false` are keywords. Throws ParseError.
Formula parse(std::string_view text, ParseOptions options = {});

}  // namespace ltlfsynth
