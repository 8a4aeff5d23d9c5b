#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mltt/term.hpp"

namespace mltt {

// Surface syntax, named variables resolved to de Bruijn indices:
//
//   e ::= \x:e. e | (x : e) -> e | (x : e) * e | a -> e | a * e | a
//   a ::= h atom*
//   h ::= succ atom | fst atom | snd atom | Id atom atom atom | refl atom atom
//       | pair {x:e. e} (e, e) | natrec (x. e) atom (x y. e) atom
//       | emptyrec (x. e) atom | idrec atom atom (x y. e) atom atom | atom
//   atom ::= x | U | Nat | Empty | zero | (e)
//
// `--` starts a comment running to the end of the line.

struct ParseError : std::runtime_error {
  enum class Kind { Syntax, Scope };
  ParseError(Kind kind, std::size_t line, std::size_t column, std::vector<std::string> expected, std::string message);

  Kind kind;
  std::size_t line;
  std::size_t column;
  std::vector<std::string> expected;  // empty for scope errors
};

template <class T>
using ParseResult = std::variant<T, ParseError>;

struct Token {
  enum class Kind { Ident, Symbol, End };
  Kind kind;
  std::string text;
  std::size_t line;
  std::size_t column;
  std::size_t offset;  // byte offset into the source
};

/// Recursive-descent parser over the surface grammar. Shared by the query
/// parser and the derivation fixture reader. Methods throw ParseError.
class SurfaceParser {
 public:
  explicit SurfaceParser(std::string_view src, std::size_t line = 1, std::size_t column = 1);

  const Token& peek(std::size_t ahead = 0) const;
  Token next();
  bool at_end() const { return peek().kind == Token::Kind::End; }
  bool at_symbol(std::string_view s) const;
  bool at_ident(std::string_view s) const;
  void expect_symbol(std::string_view s);
  void expect_end();
  std::string expect_ident();
  // The unconsumed remainder of the source, with surrounding blanks removed.
  std::string_view rest() const;

  // Parses an expression; `names` holds the variables in scope, innermost
  // last.
  Term parse_expr(std::vector<std::string>& names);

  // Parses `(x : T)*` up to and including `|-`, appending the names and the
  // types (each scoped in the preceding entries).
  Context parse_context(std::vector<std::string>& names);

  [[noreturn]] void fail(std::vector<std::string> expected) const;

 private:
  Term parse_app(std::vector<std::string>& names);
  Term parse_head(std::vector<std::string>& names);
  Term parse_atom(std::vector<std::string>& names);
  bool starts_atom() const;
  Term binder_body(std::vector<std::string>& names, const std::string& name);
  Term binder2_body(std::vector<std::string>& names, const std::string& x, const std::string& y);

  std::string_view src_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

ParseResult<Term> parse_term(std::string_view src, std::vector<std::string> names = {});

// Pretty-prints with the given names for the free variables (innermost
// last). Bound variables get fresh names x0, x1, ... that avoid capture.
std::string print(const Term& t, const std::vector<std::string>& names = {});

// Prints `(x : T) (y : U) ` style binders for a context and fills `names`.
std::string print_context(const Context& ctx, std::vector<std::string>& names);

std::string fresh_name(const std::vector<std::string>& in_scope);

}  // namespace mltt
