#include <string>
#include <vector>

#include "mltt/declarative.hpp"
#include "mltt/derive.hpp"

namespace mltt {

namespace {

const JudgmentKind kAllKinds[] = {
    JudgmentKind::CtxWf,    JudgmentKind::SubstWf, JudgmentKind::TyWf,     JudgmentKind::Typed,
    JudgmentKind::ConvTy,   JudgmentKind::ConvTm,  JudgmentKind::NeuCmp,   JudgmentKind::DnfTy,
    JudgmentKind::DnfTyRed, JudgmentKind::DnfTm,   JudgmentKind::DnfTmRed, JudgmentKind::DneTm,
    JudgmentKind::DneTmRed, JudgmentKind::Red,
};

std::string payload(const Judgment& j, std::vector<std::string>& names) {
  auto p = [&](std::size_t i) { return print(j.terms[i], names); };
  switch (j.kind) {
    case JudgmentKind::CtxWf:
      return "";
    case JudgmentKind::SubstWf: {
      std::string out = "[";
      for (std::size_t i = 0; i < j.subst.size(); ++i) {
        if (i) out += ", ";
        out += print(j.subst[i], names);
      }
      std::vector<std::string> dnames;
      std::string delta = print_context(j.delta, dnames);
      if (!delta.empty()) delta.pop_back();
      return out + "] :" + (delta.empty() ? "" : " " + delta);
    }
    case JudgmentKind::TyWf:
    case JudgmentKind::DnfTy:
    case JudgmentKind::DnfTyRed:
      return p(0);
    case JudgmentKind::Typed:
      return p(0) + " : " + p(1);
    case JudgmentKind::ConvTy:
      return p(0) + " == " + p(1);
    case JudgmentKind::ConvTm:
      return p(1) + " == " + p(2) + " : " + p(0);
    case JudgmentKind::NeuCmp:
      return p(0) + " == " + p(1) + " : " + p(2);
    case JudgmentKind::DnfTm:
    case JudgmentKind::DnfTmRed:
      return p(1) + " : " + p(0);
    case JudgmentKind::DneTm:
    case JudgmentKind::DneTmRed:
      return p(0) + " : " + p(1);
    case JudgmentKind::Red:
      return p(0) + " ~> " + p(1);
  }
  return "";
}

void print_node(const Derivation& d, std::size_t indent, std::string& out) {
  out += std::string(indent, ' ') + "(" + d.rule + " " + print_judgment(d.conclusion);
  for (const auto& p : d.premises) {
    out += "\n";
    print_node(p, indent + 2, out);
  }
  out += ")";
}

Judgment parse_judgment(SurfaceParser& p, std::vector<std::string>& names) {
  p.expect_symbol("(");
  if (p.peek().kind != Token::Kind::Ident) p.fail({"judgment keyword"});
  std::string keyword = p.next().text;
  if (p.at_symbol("*")) {
    p.next();
    keyword += "*";
  }
  Judgment j;
  bool known = false;
  for (JudgmentKind k : kAllKinds) {
    if (judgment_keyword(k) == keyword) {
      j.kind = k;
      known = true;
    }
  }
  if (!known) p.fail({"judgment keyword"});
  j.ctx = p.parse_context(names);
  auto expr = [&] { return p.parse_expr(names); };
  switch (j.kind) {
    case JudgmentKind::CtxWf:
      break;
    case JudgmentKind::SubstWf: {
      p.expect_symbol("[");
      while (!p.at_symbol("]")) {
        if (!j.subst.empty()) p.expect_symbol(",");
        j.subst.push_back(expr());
      }
      p.next();
      p.expect_symbol(":");
      std::vector<std::string> dnames;
      std::vector<Term> delta;
      while (p.at_symbol("(")) {
        p.next();
        const std::string x = p.expect_ident();
        p.expect_symbol(":");
        delta.push_back(p.parse_expr(dnames));
        p.expect_symbol(")");
        dnames.push_back(x);
      }
      j.delta = Context(std::move(delta));
      break;
    }
    case JudgmentKind::TyWf:
    case JudgmentKind::DnfTy:
    case JudgmentKind::DnfTyRed:
      j.terms = {expr()};
      break;
    case JudgmentKind::Typed:
    case JudgmentKind::DneTm:
    case JudgmentKind::DneTmRed: {
      Term t = expr();
      p.expect_symbol(":");
      j.terms = {t, expr()};
      break;
    }
    case JudgmentKind::DnfTm:
    case JudgmentKind::DnfTmRed: {
      Term t = expr();
      p.expect_symbol(":");
      j.terms = {expr(), t};
      break;
    }
    case JudgmentKind::ConvTy: {
      Term a = expr();
      p.expect_symbol("==");
      j.terms = {a, expr()};
      break;
    }
    case JudgmentKind::ConvTm: {
      Term t = expr();
      p.expect_symbol("==");
      Term u = expr();
      p.expect_symbol(":");
      j.terms = {expr(), t, u};
      break;
    }
    case JudgmentKind::NeuCmp: {
      Term n = expr();
      p.expect_symbol("==");
      Term m = expr();
      p.expect_symbol(":");
      j.terms = {n, m, expr()};
      break;
    }
    case JudgmentKind::Red: {
      Term t = expr();
      p.expect_symbol("~>");
      j.terms = {t, expr()};
      break;
    }
  }
  p.expect_symbol(")");
  return j;
}

Derivation parse_node(SurfaceParser& p) {
  p.expect_symbol("(");
  if (p.peek().kind != Token::Kind::Ident) p.fail({"rule name"});
  Derivation d;
  d.rule = p.next().text;
  std::vector<std::string> names;
  d.conclusion = parse_judgment(p, names);
  while (p.at_symbol("(")) d.premises.push_back(parse_node(p));
  p.expect_symbol(")");
  return d;
}

FixtureRoot parse_root(SurfaceParser& p) {
  if (p.peek().kind != Token::Kind::Ident) p.fail({"rule name"});
  FixtureRoot r;
  r.rule = p.next().text;
  std::vector<std::string> names;
  r.conclusion = parse_judgment(p, names);
  while (p.at_symbol("[")) {
    p.next();
    if (p.peek().kind != Token::Kind::Ident) p.fail({"metavariable"});
    const std::string name = p.next().text;
    std::vector<std::string> scope = names;
    while (!p.at_symbol(":")) scope.push_back(p.expect_ident());
    p.next();
    p.expect_symbol("=");
    r.extra[name] = p.parse_expr(scope);
    p.expect_symbol("]");
  }
  return r;
}

}  // namespace

ParseResult<std::vector<FixtureRoot>> parse_fixture_roots(std::string_view text) {
  try {
    SurfaceParser p(text);
    std::vector<FixtureRoot> out;
    while (!p.at_end()) out.push_back(parse_root(p));
    return out;
  } catch (const ParseError& e) {
    return e;
  }
}

std::string print_judgment(const Judgment& j) {
  std::vector<std::string> names;
  std::string out = "(" + std::string(judgment_keyword(j.kind)) + " " + print_context(j.ctx, names) + "|-";
  const std::string body = payload(j, names);
  if (!body.empty()) out += " " + body;
  return out + ")";
}

std::string print_derivation(const Derivation& d) {
  std::string out;
  print_node(d, 0, out);
  return out;
}

ParseResult<std::vector<Derivation>> parse_derivations(std::string_view text) {
  try {
    SurfaceParser p(text);
    std::vector<Derivation> out;
    while (!p.at_end()) out.push_back(parse_node(p));
    return out;
  } catch (const ParseError& e) {
    return e;
  }
}

}  // namespace mltt
