#pragma once

#include <optional>

#include "lapc/term.hpp"

namespace lapc {

enum class LogicalSymbol { Bot, Not, And, Or, Iff, Eq, Exists };

// Closed λC term of a logical symbol as an abbreviation over U0. The level
// is required exactly for Eq and Exists.
Term logicalSymbol(LogicalSymbol which, std::optional<Level> level = std::nullopt);
Term logicalSymbolType(LogicalSymbol which, std::optional<Level> level = std::nullopt);

// Builders for applied connectives over arbitrary propositions, expanded to
// the abbreviations above (no constants).
Term mkBotTerm();
Term mkImp(const Term& p, const Term& q);

}  // namespace lapc
