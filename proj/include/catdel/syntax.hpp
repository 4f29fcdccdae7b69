#ifndef CATDEL_SYNTAX_HPP_
#define CATDEL_SYNTAX_HPP_

// Concrete syntax for formulas:
//
//   φ ::= true | false | p | F(t, ...) | ~φ | φ & φ | φ | φ | φ -> φ
//       | [a]φ | <a>φ | [!φ]φ | <!φ>φ | [E,e]φ | <E,e>φ
//       | forall x . φ | exists x . φ | (φ)
//   t ::= x | f(t, ...)
//
// Precedence ~ > & > | > ->; & and | associate left, -> right. Modalities
// bind like ~; a quantifier body extends as far right as possible.
// A formula in context is written `ctx x, y | φ`.

#include <string>
#include <string_view>
#include <variant>

#include "catdel/formula.hpp"

namespace catdel {

/// Throws ParseError on malformed input or trailing tokens.
Formula parse_formula(std::string_view text);
Term parse_term(std::string_view text);
/// Requires the `ctx ... |` prefix.
FormulaInContext parse_in_context(std::string_view text);
/// Either form, decided by the presence of the `ctx` prefix.
std::variant<Formula, FormulaInContext> parse_any(std::string_view text);

std::string print_term(const Term& t);
std::string print_formula(const Formula& f);
std::string print_formula(const FormulaInContext& f);

}  // namespace catdel

#endif  // CATDEL_SYNTAX_HPP_
