// Concrete formula syntax.
//
//   formula   :=  'forall' VAR [ '<' term ] '.' formula
//              |  'exists' VAR [ '<' term ] '.' formula
//              |  implies
//   implies   :=  or [ '->' implies ]            (desugared to !A | B)
//   or        :=  and ( '|' and )*
//   and       :=  unary ( '&' unary )*
//   unary     :=  '!' unary | '(' formula ')' | quantified | atom
//   atom      :=  NAME '(' term {',' term} ')' | term ('='|'<') term
//   term      :=  prod ( '+' prod )*             (left associative)
//   prod      :=  primary ( '*' primary )*
//   primary   :=  NUMERAL | NAME | NAME '(' term {',' term} ')' | '(' term ')'
//
// Numerals are sugar for S-towers over 0 and require the arithmetic symbols.
// Bounded quantifiers expand: exists y<t. f  =>  exists y. (y<t & f),
// forall y<t. f  =>  forall y. (!(y<t) | f). Implication desugars at parse
// time, so parsed trees contain core connectives only.

#ifndef FLAB_PARSER_HPP
#define FLAB_PARSER_HPP

#include <string>

#include "flab/logic.hpp"

namespace flab {

// Throws ParseError (syntax, with position), SignatureError (undeclared
// symbol / arity mismatch).
Formula parse_formula(const std::string& text, const Signature& sig);
Term parse_term(const std::string& text, const Signature& sig);

// Inverse of parse_formula up to whitespace: parse(render(f), sig) == f.
std::string render_formula(const Formula& f);
std::string render_term(const Term& t);

}  // namespace flab

#endif
