#include "mltt/query.hpp"

#include <fstream>
#include <sstream>

#include "mltt/conv_typed.hpp"
#include "mltt/conv_untyped.hpp"
#include "mltt/declarative.hpp"
#include "mltt/normalize.hpp"
#include "mltt/reduction.hpp"

namespace mltt {

std::string_view directive_name(Directive d) {
  switch (d) {
    case Directive::Check:
      return "check";
    case Directive::Infer:
      return "infer";
    case Directive::Conv:
      return "conv";
    case Directive::Whnf:
      return "whnf";
    case Directive::Nf:
      return "nf";
    case Directive::Validate:
      return "validate";
  }
  return "?";
}

ParseResult<Query> parse_query(std::string_view line, std::size_t line_number) {
  try {
    SurfaceParser p(line, line_number);
    Query q;
    const Token head = p.peek();
    bool known = false;
    for (Directive d : {Directive::Check, Directive::Infer, Directive::Conv, Directive::Whnf, Directive::Nf,
                        Directive::Validate}) {
      if (head.kind == Token::Kind::Ident && head.text == directive_name(d)) {
        q.directive = d;
        known = true;
      }
    }
    if (!known) p.fail({"check", "infer", "conv", "whnf", "nf", "validate"});
    p.next();
    if (q.directive == Directive::Validate) {
      q.path = std::string(p.rest());
      if (q.path.empty()) p.fail({"fixture path"});
      return q;
    }
    q.ctx = p.parse_context(q.names);
    auto expr = [&] { return p.parse_expr(q.names); };
    switch (q.directive) {
      case Directive::Conv: {
        Term t = expr();
        p.expect_symbol("==");
        Term u = expr();
        p.expect_symbol(":");
        q.terms = {t, u, expr()};
        break;
      }
      case Directive::Check: {
        Term t = expr();
        p.expect_symbol(":");
        q.terms = {t, expr()};
        break;
      }
      default:
        q.terms = {expr()};
        break;
    }
    p.expect_end();
    return q;
  } catch (const ParseError& e) {
    return e;
  }
}

template <class T>
QueryResult failure_result(const Outcome<T>& o, std::uint64_t used) {
  if (o.out_of_fuel()) return {kExitOutOfFuel, "OutOfFuel", used};
  std::string out = "Reject: " + o.reason().message;
  if (!o.reason().path.empty()) {
    out += "\n  path:";
    for (const auto& r : o.reason().path) out += " " + r;
  }
  return {kExitReject, out, used};
}

template QueryResult failure_result(const Outcome<Unit>&, std::uint64_t);
template QueryResult failure_result(const Outcome<Term>&, std::uint64_t);

namespace {

QueryResult validate_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) return {kExitParse, "error: cannot read " + path, 0};
  std::stringstream ss;
  ss << in.rdbuf();
  auto parsed = parse_derivations(ss.str());
  if (auto* e = std::get_if<ParseError>(&parsed)) return {kExitParse, "error: " + path + ": " + e->what(), 0};
  const auto& ds = std::get<0>(parsed);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    auto v = validate(ds[i]);
    if (!v.accepted()) {
      QueryResult r = failure_result(v, 0);
      r.output = "derivation " + std::to_string(i) + ": " + r.output;
      return r;
    }
  }
  return {kExitAccept, "Accept (" + std::to_string(ds.size()) + " derivations)", 0};
}

}  // namespace

QueryResult run_query(const Query& q, const RunOptions& opts) {
  if (q.directive == Directive::Validate) return validate_file(q.path);
  const ConvBackend& conv = backend(opts.algo);
  const auto& names = q.names;
  if (opts.debug_assert_preconditions) {
    ConvVerdict pre = accept();
    switch (q.directive) {
      case Directive::Conv:
        pre = precondition_conv_tm(q.ctx, q.terms[2], q.terms[0], q.terms[1], opts.fuel);
        break;
      case Directive::Check:
        pre = check_ctx(q.ctx, conv, opts.fuel);
        if (pre.accepted()) pre = check_ty(q.ctx, q.terms[1], conv, opts.fuel);
        break;
      default:
        pre = check_ctx(q.ctx, conv, opts.fuel);
        break;
    }
    if (!pre.accepted()) return failure_result(pre, 0);
  }
  Session s(opts.fuel, opts.trace);
  switch (q.directive) {
    case Directive::Check: {
      auto r = check(s, q.ctx, q.terms[0], q.terms[1], conv);
      if (!r.accepted()) return failure_result(r, s.used());
      return {kExitAccept, "Accept", s.used()};
    }
    case Directive::Infer: {
      auto r = infer(s, q.ctx, q.terms[0], conv);
      if (!r.accepted()) return failure_result(r, s.used());
      return {kExitAccept, print(r.value(), names), s.used()};
    }
    case Directive::Conv: {
      auto r = opts.algo == Algo::Typed ? conv_tm(s, q.ctx, q.terms[2], q.terms[0], q.terms[1])
                                        : uconv(s, q.terms[0], q.terms[1]);
      if (!r.accepted()) return failure_result(r, s.used());
      return {kExitAccept, "Accept", s.used()};
    }
    case Directive::Whnf: {
      auto r = whnf(s, q.terms[0]);
      if (!r.accepted()) return failure_result(r, s.used());
      return {kExitAccept, print(r.value(), names), s.used()};
    }
    case Directive::Nf: {
      const Term& t = q.terms[0];
      Outcome<Term> r = t.is(Tag::Univ) ? Outcome<Term>(t) : infer(s, q.ctx, t, conv);
      if (r.out_of_fuel()) return failure_result(r, s.used());
      if (r.accepted() && !t.is(Tag::Univ)) {
        r = deep_nf_tm(s, q.ctx, r.value(), t);
      } else {
        // Not a term with an inferable type: normalise it as a type.
        r = deep_nf_ty(s, q.ctx, t);
      }
      if (!r.accepted()) return failure_result(r, s.used());
      return {kExitAccept, print(r.value(), names), s.used()};
    }
    case Directive::Validate:
      break;
  }
  return {kExitParse, "error: unknown directive", 0};
}

QueryResult run_line(std::string_view line, const RunOptions& opts, std::size_t line_number) {
  auto q = parse_query(line, line_number);
  if (auto* e = std::get_if<ParseError>(&q)) {
    return {kExitParse, std::string(e->kind == ParseError::Kind::Scope ? "scope error: " : "syntax error: ") + e->what(),
            0};
  }
  return run_query(std::get<Query>(q), opts);
}

}  // namespace mltt
