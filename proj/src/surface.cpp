#include "mltt/surface.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>

namespace mltt {

namespace {

constexpr std::array<std::string_view, 13> kReserved = {
    "U", "Nat", "Empty", "zero", "succ", "fst", "snd", "Id", "refl", "pair", "natrec", "emptyrec", "idrec",
};

constexpr std::array<std::string_view, 9> kHeads = {
    "succ", "fst", "snd", "Id", "refl", "pair", "natrec", "emptyrec", "idrec",
};

template <std::size_t N>
bool contains(const std::array<std::string_view, N>& words, std::string_view w) {
  return std::find(words.begin(), words.end(), w) != words.end();
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

std::vector<Token> tokenize(std::string_view src, std::size_t line, std::size_t column) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (src.substr(i, 2) == "--") {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token tok{Token::Kind::Symbol, "", line, column, i};
    std::size_t len = 1;
    if (ident_start(c)) {
      tok.kind = Token::Kind::Ident;
      while (i + len < src.size() && ident_char(src[i + len])) ++len;
    } else {
      for (std::string_view sym : {"->", "|-", "==", "~>"}) {
        if (src.substr(i, 2) == sym) len = 2;
      }
    }
    tok.text = std::string(src.substr(i, len));
    out.push_back(std::move(tok));
    advance(len);
  }
  out.push_back(Token{Token::Kind::End, "", line, column, src.size()});
  return out;
}

std::string describe(const Token& t) {
  if (t.kind == Token::Kind::End) return "end of input";
  return "'" + t.text + "'";
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += items[i];
  }
  return out;
}

}  // namespace

ParseError::ParseError(Kind kind_, std::size_t line_, std::size_t column_, std::vector<std::string> expected_,
                       std::string message)
    : std::runtime_error(std::move(message)),
      kind(kind_),
      line(line_),
      column(column_),
      expected(std::move(expected_)) {}

SurfaceParser::SurfaceParser(std::string_view src, std::size_t line, std::size_t column)
    : src_(src), tokens_(tokenize(src, line, column)) {}

const Token& SurfaceParser::peek(std::size_t ahead) const {
  return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
}

Token SurfaceParser::next() {
  Token t = peek();
  if (pos_ + 1 < tokens_.size()) ++pos_;
  return t;
}

bool SurfaceParser::at_symbol(std::string_view s) const {
  return peek().kind == Token::Kind::Symbol && peek().text == s;
}

bool SurfaceParser::at_ident(std::string_view s) const {
  return peek().kind == Token::Kind::Ident && peek().text == s;
}

void SurfaceParser::fail(std::vector<std::string> expected) const {
  const Token& t = peek();
  std::ostringstream msg;
  msg << "line " << t.line << ", column " << t.column << ": unexpected " << describe(t) << "; expected "
      << join(expected);
  throw ParseError(ParseError::Kind::Syntax, t.line, t.column, std::move(expected), msg.str());
}

void SurfaceParser::expect_symbol(std::string_view s) {
  if (!at_symbol(s)) fail({"'" + std::string(s) + "'"});
  next();
}

void SurfaceParser::expect_end() {
  if (!at_end()) fail({"end of input"});
}

std::string SurfaceParser::expect_ident() {
  if (peek().kind != Token::Kind::Ident || contains(kReserved, peek().text)) fail({"identifier"});
  return next().text;
}

std::string_view SurfaceParser::rest() const {
  std::string_view r = src_.substr(std::min(peek().offset, src_.size()));
  while (!r.empty() && std::isspace(static_cast<unsigned char>(r.back()))) r.remove_suffix(1);
  return r;
}

Term SurfaceParser::binder_body(std::vector<std::string>& names, const std::string& name) {
  names.push_back(name);
  Term body = parse_expr(names);
  names.pop_back();
  return body;
}

Term SurfaceParser::binder2_body(std::vector<std::string>& names, const std::string& x, const std::string& y) {
  names.push_back(x);
  names.push_back(y);
  Term body = parse_expr(names);
  names.pop_back();
  names.pop_back();
  return body;
}

Term SurfaceParser::parse_expr(std::vector<std::string>& names) {
  if (at_symbol("\\")) {
    next();
    const std::string x = expect_ident();
    expect_symbol(":");
    Term ann = parse_expr(names);
    expect_symbol(".");
    return Term::lam(ann, binder_body(names, x));
  }
  if (at_symbol("(") && peek(1).kind == Token::Kind::Ident && peek(2).kind == Token::Kind::Symbol &&
      peek(2).text == ":") {
    next();
    const std::string x = expect_ident();
    expect_symbol(":");
    Term dom = parse_expr(names);
    expect_symbol(")");
    if (!at_symbol("->") && !at_symbol("*")) fail({"'->'", "'*'"});
    const bool is_pi = next().text == "->";
    Term cod = binder_body(names, x);
    return is_pi ? Term::pi(dom, cod) : Term::sig(dom, cod);
  }
  Term lhs = parse_app(names);
  if (at_symbol("->") || at_symbol("*")) {
    const bool is_pi = next().text == "->";
    Term rhs = shift(parse_expr(names));
    return is_pi ? Term::pi(lhs, rhs) : Term::sig(lhs, rhs);
  }
  return lhs;
}

bool SurfaceParser::starts_atom() const {
  const Token& t = peek();
  if (t.kind == Token::Kind::Ident) return !contains(kHeads, t.text);
  return t.kind == Token::Kind::Symbol && t.text == "(";
}

Term SurfaceParser::parse_app(std::vector<std::string>& names) {
  Term t = parse_head(names);
  while (starts_atom()) t = Term::app(t, parse_atom(names));
  return t;
}

Term SurfaceParser::parse_head(std::vector<std::string>& names) {
  if (peek().kind != Token::Kind::Ident || !contains(kHeads, peek().text)) return parse_atom(names);
  const std::string kw = next().text;
  if (kw == "succ") return Term::succ(parse_atom(names));
  if (kw == "fst") return Term::fst(parse_atom(names));
  if (kw == "snd") return Term::snd(parse_atom(names));
  if (kw == "Id") {
    Term a = parse_atom(names);
    Term l = parse_atom(names);
    return Term::id(a, l, parse_atom(names));
  }
  if (kw == "refl") {
    Term a = parse_atom(names);
    return Term::refl(a, parse_atom(names));
  }
  if (kw == "pair") {
    expect_symbol("{");
    const std::string x = expect_ident();
    expect_symbol(":");
    Term dom = parse_expr(names);
    expect_symbol(".");
    Term cod = binder_body(names, x);
    expect_symbol("}");
    expect_symbol("(");
    Term first = parse_expr(names);
    expect_symbol(",");
    Term second = parse_expr(names);
    expect_symbol(")");
    return Term::pair(dom, cod, first, second);
  }
  if (kw == "natrec") {
    expect_symbol("(");
    const std::string x = expect_ident();
    expect_symbol(".");
    Term motive = binder_body(names, x);
    expect_symbol(")");
    Term base = parse_atom(names);
    expect_symbol("(");
    const std::string n = expect_ident();
    const std::string r = expect_ident();
    expect_symbol(".");
    Term step = binder2_body(names, n, r);
    expect_symbol(")");
    return Term::nat_elim(motive, base, step, parse_atom(names));
  }
  if (kw == "emptyrec") {
    expect_symbol("(");
    const std::string x = expect_ident();
    expect_symbol(".");
    Term motive = binder_body(names, x);
    expect_symbol(")");
    return Term::empty_elim(motive, parse_atom(names));
  }
  // idrec
  Term ty = parse_atom(names);
  Term lhs = parse_atom(names);
  expect_symbol("(");
  const std::string x = expect_ident();
  const std::string e = expect_ident();
  expect_symbol(".");
  Term motive = binder2_body(names, x, e);
  expect_symbol(")");
  Term branch = parse_atom(names);
  return Term::id_elim(ty, lhs, motive, branch, parse_atom(names));
}

Term SurfaceParser::parse_atom(std::vector<std::string>& names) {
  const Token& t = peek();
  if (t.kind == Token::Kind::Ident && !contains(kHeads, t.text)) {
    if (t.text == "U") return next(), Term::univ();
    if (t.text == "Nat") return next(), Term::nat();
    if (t.text == "Empty") return next(), Term::empty();
    if (t.text == "zero") return next(), Term::zero();
    for (std::size_t k = names.size(); k-- > 0;) {
      if (names[k] == t.text) {
        next();
        return Term::var(names.size() - 1 - k);
      }
    }
    throw ParseError(ParseError::Kind::Scope, t.line, t.column, {},
                     "line " + std::to_string(t.line) + ", column " + std::to_string(t.column) +
                         ": unbound variable '" + t.text + "'");
  }
  if (at_symbol("(")) {
    next();
    Term inner = parse_expr(names);
    expect_symbol(")");
    return inner;
  }
  fail({"identifier", "'U'", "'Nat'", "'Empty'", "'zero'", "'('"});
}

Context SurfaceParser::parse_context(std::vector<std::string>& names) {
  std::vector<Term> entries;
  while (!at_symbol("|-")) {
    if (!at_symbol("(")) fail({"'('", "'|-'"});
    next();
    const std::string x = expect_ident();
    expect_symbol(":");
    entries.push_back(parse_expr(names));
    expect_symbol(")");
    names.push_back(x);
  }
  next();
  return Context(std::move(entries));
}

ParseResult<Term> parse_term(std::string_view src, std::vector<std::string> names) {
  try {
    SurfaceParser p(src);
    Term t = p.parse_expr(names);
    p.expect_end();
    return t;
  } catch (const ParseError& e) {
    return e;
  }
}

std::string fresh_name(const std::vector<std::string>& in_scope) {
  for (std::size_t k = 0;; ++k) {
    std::string candidate = "x" + std::to_string(k);
    if (std::find(in_scope.begin(), in_scope.end(), candidate) == in_scope.end()) return candidate;
  }
}

namespace {

// Precedence levels: 0 binders and arrows, 1 applications, 2 atoms.
class Printer {
 public:
  explicit Printer(std::vector<std::string> names) : names_(std::move(names)) {}

  std::string go(const Term& t, int level) {
    const int own = level_of(t);
    std::string s = render(t);
    return own < level ? "(" + s + ")" : s;
  }

 private:
  static int level_of(const Term& t) {
    switch (t.tag()) {
      case Tag::Var:
      case Tag::Univ:
      case Tag::Nat:
      case Tag::Zero:
      case Tag::Empty:
        return 2;
      case Tag::Pi:
      case Tag::Sig:
      case Tag::Lam:
        return 0;
      default:
        return 1;
    }
  }

  std::string under(const std::string& name, const Term& body) {
    names_.push_back(name);
    std::string s = go(body, 0);
    names_.pop_back();
    return s;
  }

  std::string under2(const std::string& x, const std::string& y, const Term& body) {
    names_.push_back(x);
    names_.push_back(y);
    std::string s = go(body, 0);
    names_.pop_back();
    names_.pop_back();
    return s;
  }

  std::string render(const Term& t) {
    switch (t.tag()) {
      case Tag::Var:
        if (t.index() < names_.size()) return names_[names_.size() - 1 - t.index()];
        return "#" + std::to_string(t.index() - names_.size());
      case Tag::Univ:
        return "U";
      case Tag::Nat:
        return "Nat";
      case Tag::Empty:
        return "Empty";
      case Tag::Zero:
        return "zero";
      case Tag::Pi:
      case Tag::Sig: {
        const std::string op = t.is(Tag::Pi) ? " -> " : " * ";
        const std::string x = fresh_name(names_);
        if (!occurs_free(t.cod(), 0)) return go(t.dom(), 1) + op + under(x, t.cod());
        return "(" + x + " : " + go(t.dom(), 0) + ")" + op + under(x, t.cod());
      }
      case Tag::Lam: {
        const std::string x = fresh_name(names_);
        return "\\" + x + ":" + go(t.ann(), 0) + ". " + under(x, t.body());
      }
      case Tag::App:
        return go(t.fn(), 1) + " " + go(t.arg(), 2);
      case Tag::Pair: {
        const std::string x = fresh_name(names_);
        return "pair {" + x + ":" + go(t.dom(), 0) + ". " + under(x, t.cod()) + "} (" + go(t.first(), 0) + ", " +
               go(t.second(), 0) + ")";
      }
      case Tag::Fst:
        return "fst " + go(t.scrut(), 2);
      case Tag::Snd:
        return "snd " + go(t.scrut(), 2);
      case Tag::Succ:
        return "succ " + go(t.pred(), 2);
      case Tag::NatElim: {
        const std::string x = fresh_name(names_);
        std::string motive = under(x, t.motive());
        const std::string base = go(t.base(), 2);
        names_.push_back(x);
        const std::string y = fresh_name(names_);
        names_.pop_back();
        return "natrec (" + x + ". " + motive + ") " + base + " (" + x + " " + y + ". " + under2(x, y, t.step()) +
               ") " + go(t.scrut(), 2);
      }
      case Tag::EmptyElim: {
        const std::string x = fresh_name(names_);
        return "emptyrec (" + x + ". " + under(x, t.motive()) + ") " + go(t.scrut(), 2);
      }
      case Tag::Id:
        return "Id " + go(t.ty(), 2) + " " + go(t.lhs(), 2) + " " + go(t.rhs(), 2);
      case Tag::Refl:
        return "refl " + go(t.ty(), 2) + " " + go(t.tm(), 2);
      case Tag::IdElim: {
        const std::string x = fresh_name(names_);
        names_.push_back(x);
        const std::string e = fresh_name(names_);
        names_.pop_back();
        return "idrec " + go(t.ty(), 2) + " " + go(t.lhs(), 2) + " (" + x + " " + e + ". " +
               under2(x, e, t.motive()) + ") " + go(t.branch(), 2) + " " + go(t.scrut(), 2);
      }
    }
    return "?";
  }

  std::vector<std::string> names_;
};

}  // namespace

std::string print(const Term& t, const std::vector<std::string>& names) { return Printer(names).go(t, 0); }

std::string print_context(const Context& ctx, std::vector<std::string>& names) {
  std::string out;
  for (const Term& entry : ctx.entries()) {
    const std::string x = fresh_name(names);
    out += "(" + x + " : " + print(entry, names) + ") ";
    names.push_back(x);
  }
  return out;
}

}  // namespace mltt
