#include "mltt/declarative.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <unordered_map>

#include "mltt/reduction.hpp"

namespace mltt {

std::string_view judgment_keyword(JudgmentKind k) {
  switch (k) {
    case JudgmentKind::CtxWf:
      return "ctx";
    case JudgmentKind::SubstWf:
      return "subst";
    case JudgmentKind::TyWf:
      return "type";
    case JudgmentKind::Typed:
      return "typed";
    case JudgmentKind::ConvTy:
      return "convty";
    case JudgmentKind::ConvTm:
      return "conv";
    case JudgmentKind::NeuCmp:
      return "neu";
    case JudgmentKind::DnfTy:
      return "dnfty";
    case JudgmentKind::DnfTyRed:
      return "dnfty*";
    case JudgmentKind::DnfTm:
      return "dnf";
    case JudgmentKind::DnfTmRed:
      return "dnf*";
    case JudgmentKind::DneTm:
      return "dne";
    case JudgmentKind::DneTmRed:
      return "dne*";
    case JudgmentKind::Red:
      return "red";
  }
  return "?";
}

std::size_t judgment_arity(JudgmentKind k) {
  switch (k) {
    case JudgmentKind::CtxWf:
    case JudgmentKind::SubstWf:
      return 0;
    case JudgmentKind::TyWf:
    case JudgmentKind::DnfTy:
    case JudgmentKind::DnfTyRed:
      return 1;
    case JudgmentKind::ConvTm:
    case JudgmentKind::NeuCmp:
      return 3;
    default:
      return 2;
  }
}

std::size_t Derivation::size() const {
  std::size_t n = 1;
  for (const auto& p : premises) n += p.size();
  return n;
}

namespace {

// ---------------------------------------------------------------------------
// Schemas: first-order patterns over terms and contexts. Computed positions
// (shifts and substitutions) are evaluated once their metavariables are bound
// elsewhere and then compared structurally.

struct Pat;
using P = std::shared_ptr<const Pat>;

struct Pat {
  enum class K { MVar, Lit, Con, Shift, Subst1, Subst2, NatStep, Apply };
  K k;
  std::string name;  // MVar; for Apply the substitution metavariable
  Term lit;
  Tag tag = Tag::Var;
  std::vector<P> kids;
};

struct CtxPat;
using CP = std::shared_ptr<const CtxPat>;

// Also used for the image lists of substitutions.
struct CtxPat {
  enum class K { MVar, Empty, Ext };
  K k;
  std::string name;
  CP parent;
  P entry;
};

struct JPat {
  JudgmentKind kind;
  CP ctx;
  std::vector<P> terms;
  CP subst;
  CP delta;
};

struct Bindings {
  std::map<std::string, Term> terms;
  std::map<std::string, Context> lists;

  const Term& term(const std::string& n) const { return terms.at(n); }
};

using Side = std::function<std::optional<std::string>(const Bindings&)>;

struct Schema {
  std::string name;
  JPat conclusion;
  std::vector<JPat> premises;
  std::vector<Side> sides;
  bool reconstructed = false;
};

P mk(Pat::K k, std::vector<P> kids = {}) { return std::make_shared<const Pat>(Pat{k, "", Term(), Tag::Var, std::move(kids)}); }
P mv(std::string n) {
  auto p = std::make_shared<Pat>(Pat{Pat::K::MVar, std::move(n), Term(), Tag::Var, {}});
  return p;
}
P lit(Term t) { return std::make_shared<const Pat>(Pat{Pat::K::Lit, "", std::move(t), Tag::Var, {}}); }
P con(Tag tag, std::vector<P> kids) {
  return std::make_shared<const Pat>(Pat{Pat::K::Con, "", Term(), tag, std::move(kids)});
}
P sh(P p) { return mk(Pat::K::Shift, {std::move(p)}); }
P s1(P body, P u) { return mk(Pat::K::Subst1, {std::move(body), std::move(u)}); }
P s2(P body, P outer, P inner) { return mk(Pat::K::Subst2, {std::move(body), std::move(outer), std::move(inner)}); }
P nstep(P motive) { return mk(Pat::K::NatStep, {std::move(motive)}); }
P under(P body, std::string list) {
  return std::make_shared<const Pat>(Pat{Pat::K::Apply, std::move(list), Term(), Tag::Var, {std::move(body)}});
}

CP cmv(std::string n) { return std::make_shared<const CtxPat>(CtxPat{CtxPat::K::MVar, std::move(n), nullptr, nullptr}); }
CP cempty() { return std::make_shared<const CtxPat>(CtxPat{CtxPat::K::Empty, "", nullptr, nullptr}); }
CP ext(CP parent, P entry) {
  return std::make_shared<const CtxPat>(CtxPat{CtxPat::K::Ext, "", std::move(parent), std::move(entry)});
}

// Term shorthands.
const P U = lit(Term::univ());
const P N = lit(Term::nat());
const P E = lit(Term::empty());
const P Z = lit(Term::zero());
const P V0 = lit(Term::var(0));
P pi(P a, P b) { return con(Tag::Pi, {a, b}); }
P sig(P a, P b) { return con(Tag::Sig, {a, b}); }
P lam(P a, P t) { return con(Tag::Lam, {a, t}); }
P app(P f, P u) { return con(Tag::App, {f, u}); }
P pair(P a, P b, P t, P u) { return con(Tag::Pair, {a, b, t, u}); }
P fst(P p) { return con(Tag::Fst, {p}); }
P snd(P p) { return con(Tag::Snd, {p}); }
P succ(P n) { return con(Tag::Succ, {n}); }
P natelim(P m, P b, P s, P n) { return con(Tag::NatElim, {m, b, s, n}); }
P emptyelim(P m, P e) { return con(Tag::EmptyElim, {m, e}); }
P id(P a, P t, P u) { return con(Tag::Id, {a, t, u}); }
P refl(P a, P t) { return con(Tag::Refl, {a, t}); }
P idelim(P a, P t, P m, P h, P e) { return con(Tag::IdElim, {a, t, m, h, e}); }

// G, x : A, y : Id(A, a, x)
CP idctx(CP g, P a, P t) { return ext(ext(g, a), id(sh(a), sh(t), V0)); }

JPat j0(JudgmentKind k, CP c, std::vector<P> ts) { return JPat{k, std::move(c), std::move(ts), nullptr, nullptr}; }
JPat ctxwf(CP c) { return j0(JudgmentKind::CtxWf, c, {}); }
JPat substwf(CP c, CP s, CP d) { return JPat{JudgmentKind::SubstWf, c, {}, s, d}; }
JPat tywf(CP c, P t) { return j0(JudgmentKind::TyWf, c, {t}); }
JPat typed(CP c, P t, P ty) { return j0(JudgmentKind::Typed, c, {t, ty}); }
JPat convty(CP c, P a, P b) { return j0(JudgmentKind::ConvTy, c, {a, b}); }
JPat convtm(CP c, P ty, P t, P u) { return j0(JudgmentKind::ConvTm, c, {ty, t, u}); }
JPat neu(CP c, P n, P m, P ty) { return j0(JudgmentKind::NeuCmp, c, {n, m, ty}); }
JPat dnfty(CP c, P t) { return j0(JudgmentKind::DnfTy, c, {t}); }
JPat dnfty_r(CP c, P t) { return j0(JudgmentKind::DnfTyRed, c, {t}); }
JPat dnf(CP c, P ty, P t) { return j0(JudgmentKind::DnfTm, c, {ty, t}); }
JPat dnf_r(CP c, P ty, P t) { return j0(JudgmentKind::DnfTmRed, c, {ty, t}); }
JPat dne(CP c, P n, P ty) { return j0(JudgmentKind::DneTm, c, {n, ty}); }
JPat dne_r(CP c, P n, P ty) { return j0(JudgmentKind::DneTmRed, c, {n, ty}); }
JPat red(CP c, P t, P u) { return j0(JudgmentKind::Red, c, {t, u}); }

// Side conditions.
Side in_context(std::string ctx, std::string var, std::string ty) {
  return [=](const Bindings& b) -> std::optional<std::string> {
    const Term& x = b.term(var);
    if (!x.is(Tag::Var)) return "the subject is not a variable";
    auto found = b.lists.at(ctx).lookup(x.index());
    if (!found) return "variable not in the context";
    if (!(*found == b.term(ty))) return "the type differs from the context entry";
    return std::nullopt;
  };
}

bool reaches(Term from, const Term& to) {
  for (std::uint64_t i = 0; i <= kValidatorFuel; ++i) {
    if (from == to) return true;
    auto next = step(from);
    if (!next) return false;
    from = std::move(*next);
  }
  return false;
}

Side reduces(std::string from, std::string to) {
  return [=](const Bindings& b) -> std::optional<std::string> {
    if (reaches(b.term(from), b.term(to))) return std::nullopt;
    return "side condition " + from + " =>* " + to + " fails";
  };
}

Side positive(std::string ty) {
  return [=](const Bindings& b) -> std::optional<std::string> {
    if (is_pos(b.term(ty))) return std::nullopt;
    return "side condition: " + ty + " is not a positive type";
  };
}

std::vector<Schema> build_schemas() {
  const CP G = cmv("G");
  const P A = mv("A"), A2 = mv("A'"), A3 = mv("A''"), B = mv("B"), B2 = mv("B'"), C = mv("C");
  const P t = mv("t"), t2 = mv("t'"), u = mv("u"), u2 = mv("u'"), v = mv("v");
  const P a = mv("a"), a2 = mv("a'"), a3 = mv("a''"), b = mv("b"), b2 = mv("b'"), b3 = mv("b''");
  const P f = mv("f"), f2 = mv("f'"), p = mv("p"), p2 = mv("p'"), n = mv("n"), n2 = mv("n'");
  const P e = mv("e"), e2 = mv("e'"), h = mv("h"), h2 = mv("h'"), s = mv("s"), s2_ = mv("s'");
  const P M = mv("P"), M2 = mv("P'"), T = mv("T"), S = mv("S"), x = mv("x");
  const P Uu = mv("U"), uu = mv("u0");
  const CP GN = ext(G, N), GE = ext(G, E), GA = ext(G, A);

  std::vector<Schema> r;
  auto add = [&](std::string name, JPat concl, std::vector<JPat> prem, std::vector<Side> sides = {},
                 bool recon = false) {
    r.push_back(Schema{std::move(name), std::move(concl), std::move(prem), std::move(sides), recon});
  };

  // Contexts and substitutions.
  add("CtxEmpty", ctxwf(cempty()), {});
  add("CtxExt", ctxwf(GA), {ctxwf(G), tywf(G, A)});
  add("SubstEmpty", substwf(G, cempty(), cempty()), {});
  add("SubstExt", substwf(G, ext(cmv("sigma"), t), ext(cmv("D"), A)),
      {substwf(G, cmv("sigma"), cmv("D")), typed(G, t, under(A, "sigma"))});

  // Types.
  add("FunTy", tywf(G, pi(A, B)), {tywf(G, A), tywf(GA, B)});
  add("SigTy", tywf(G, sig(A, B)), {tywf(G, A), tywf(GA, B)});
  add("NatTy", tywf(G, N), {ctxwf(G)});
  add("EmptyTy", tywf(G, E), {ctxwf(G)});
  add("IdTy", tywf(G, id(A, a, b)), {tywf(G, A), typed(G, a, A), typed(G, b, A)});
  add("El", tywf(G, A), {typed(G, A, U)});
  add("UnivTy", tywf(G, U), {ctxwf(G)});

  // Typing.
  add("Conv", typed(G, t, B), {typed(G, t, A), convty(G, A, B)});
  add("Var", typed(G, x, A), {ctxwf(G)}, {in_context("G", "x", "A")});
  add("FunUni", typed(G, pi(A, B), U), {typed(G, A, U), typed(GA, B, U)});
  add("Abs", typed(G, lam(A, t), pi(A, B)), {tywf(G, A), tywf(GA, B), typed(GA, t, B)});
  add("App", typed(G, app(f, u), s1(B, u)), {typed(G, f, pi(A, B)), typed(G, u, A)});
  add("SigUni", typed(G, sig(A, B), U), {typed(G, A, U), typed(GA, B, U)});
  add("Pair", typed(G, pair(A, B, t, u), sig(A, B)),
      {tywf(G, A), tywf(GA, B), typed(G, t, A), typed(G, u, s1(B, t))});
  add("Proj1", typed(G, fst(p), A), {typed(G, p, sig(A, B))});
  add("Proj2", typed(G, snd(p), s1(B, fst(p))), {typed(G, p, sig(A, B))});
  add("NatUni", typed(G, N, U), {ctxwf(G)});
  add("Zero", typed(G, Z, N), {ctxwf(G)});
  add("Succ", typed(G, succ(n), N), {typed(G, n, N)});
  add("NatRec", typed(G, natelim(M, b, s, n), s1(M, n)),
      {typed(G, n, N), tywf(GN, M), typed(G, b, s1(M, Z)), typed(ext(GN, M), s, nstep(M))});
  add("EmptyUni", typed(G, E, U), {ctxwf(G)});
  add("EmptyInd", typed(G, emptyelim(M, e), s1(M, e)), {typed(G, e, E), tywf(GE, M)});
  add("IdUni", typed(G, id(A, a, b), U), {typed(G, A, U), typed(G, a, A), typed(G, b, A)});
  add("ReflTm", typed(G, refl(A, a), id(A, a, a)), {tywf(G, A), typed(G, a, A)});
  add("IdInd", typed(G, idelim(A, a, M, h, e), s2(M, b, e)),
      {tywf(G, A), typed(G, a, A), typed(G, b, A), typed(G, e, id(A, a, b)), tywf(idctx(G, A, a), M),
       typed(G, h, s2(M, a, refl(A, a)))});

  // Type conversion.
  add("ReflTy", convty(G, A, A), {tywf(G, A)});
  add("SymTy", convty(G, B, A), {convty(G, A, B)});
  add("TransTy", convty(G, A, C), {convty(G, A, B), convty(G, B, C)});
  add("ElC", convty(G, A, A2), {convtm(G, U, A, A2)});
  add("FunTyC", convty(G, pi(A, B), pi(A2, B2)), {convty(G, A, A2), convty(GA, B, B2)});
  add("SigTyC", convty(G, sig(A, B), sig(A2, B2)), {convty(G, A, A2), convty(GA, B, B2)});
  add("IdTyC", convty(G, id(A, t, u), id(A2, t2, u2)), {convty(G, A, A2), convtm(G, A, t, t2), convtm(G, A, u, u2)});

  // Term conversion.
  add("Refl", convtm(G, A, t, t), {typed(G, t, A)});
  add("Sym", convtm(G, A, u, t), {convtm(G, A, t, u)});
  add("Trans", convtm(G, A, t, v), {convtm(G, A, t, u), convtm(G, A, u, v)});
  add("TmConv", convtm(G, B, t, t2), {convtm(G, A, t, t2), convty(G, A, B)});
  add("FunCong", convtm(G, U, pi(A, B), pi(A2, B2)), {convtm(G, U, A, A2), convtm(GA, U, B, B2)});
  add("SigCong", convtm(G, U, sig(A, B), sig(A2, B2)), {convtm(G, U, A, A2), convtm(GA, U, B, B2)}, {}, true);
  add("IdCong", convtm(G, U, id(A, t, u), id(A2, t2, u2)),
      {convtm(G, U, A, A2), convtm(G, A, t, t2), convtm(G, A, u, u2)}, {}, true);
  add("LamCong", convtm(G, pi(A, B), lam(A, t), lam(A2, t2)), {tywf(G, A), convty(G, A, A2), convtm(GA, B, t, t2)},
      {}, true);
  add("AppCong", convtm(G, s1(B, u), app(f, u), app(f2, u2)), {convtm(G, pi(A, B), f, f2), convtm(G, A, u, u2)}, {},
      true);
  add("PairCong", convtm(G, sig(A, B), pair(A, B, t, u), pair(A2, B2, t2, u2)),
      {tywf(G, A), tywf(GA, B), convty(G, A, A2), convty(GA, B, B2), convtm(G, A, t, t2),
       convtm(G, s1(B, t), u, u2)},
      {}, true);
  add("FstCong", convtm(G, A, fst(p), fst(p2)), {convtm(G, sig(A, B), p, p2)}, {}, true);
  add("SndCong", convtm(G, s1(B, fst(p)), snd(p), snd(p2)), {convtm(G, sig(A, B), p, p2)}, {}, true);
  add("SuccCong", convtm(G, N, succ(n), succ(n2)), {convtm(G, N, n, n2)}, {}, true);
  add("NatElimCong", convtm(G, s1(M, n), natelim(M, b, s, n), natelim(M2, b2, s2_, n2)),
      {convty(GN, M, M2), convtm(G, s1(M, Z), b, b2), convtm(ext(GN, M), nstep(M), s, s2_), convtm(G, N, n, n2)}, {},
      true);
  add("EmptyElimCong", convtm(G, s1(M, e), emptyelim(M, e), emptyelim(M2, e2)),
      {convty(GE, M, M2), convtm(G, E, e, e2)}, {}, true);
  add("ReflCong", convtm(G, id(A, a, a), refl(A, a), refl(A2, a2)), {convty(G, A, A2), convtm(G, A, a, a2)}, {},
      true);
  add("IdElimCong", convtm(G, s2(M, b, e), idelim(A, a, M, h, e), idelim(A2, a2, M2, h2, e2)),
      {convty(G, A, A2), convtm(G, A, a, a2), convty(idctx(G, A, a), M, M2),
       convtm(G, s2(M, a, refl(A, a)), h, h2), convtm(G, id(A, a, b), e, e2)},
      {}, true);
  add("BetaFun", convtm(G, s1(B, u), app(lam(A, t), u), s1(t, u)),
      {tywf(G, A), tywf(GA, B), typed(GA, t, B), typed(G, u, A)});
  add("EtaFun", convtm(G, pi(A, B), f, lam(A, app(sh(f), V0))), {typed(G, f, pi(A, B))});
  add("BetaSig1", convtm(G, A, fst(pair(A, B, t, u)), t),
      {tywf(G, A), tywf(GA, B), typed(G, t, A), typed(G, u, s1(B, t))});
  add("BetaSig2", convtm(G, s1(B, t), snd(pair(A, B, t, u)), u),
      {tywf(G, A), tywf(GA, B), typed(G, t, A), typed(G, u, s1(B, t))});
  add("EtaSig", convtm(G, sig(A, B), p, pair(A, B, fst(p), snd(p))),
      {tywf(G, A), tywf(GA, B), typed(G, p, sig(A, B))});
  add("BetaZero", convtm(G, s1(M, Z), natelim(M, b, s, Z), b),
      {tywf(GN, M), typed(G, b, s1(M, Z)), typed(ext(GN, M), s, nstep(M))});
  add("BetaSucc", convtm(G, s1(M, succ(n)), natelim(M, b, s, succ(n)), s2(s, n, natelim(M, b, s, n))),
      {typed(G, n, N), tywf(GN, M), typed(G, b, s1(M, Z)), typed(ext(GN, M), s, nstep(M))});
  add("BetaRefl", convtm(G, s2(M, a, refl(A, a)), idelim(A, a, M, h, refl(A, a)), h),
      {tywf(G, A), typed(G, a, A), tywf(idctx(G, A, a), M), typed(G, h, s2(M, a, refl(A, a)))});

  // Neutral comparison.
  add("NConv", neu(G, n, n2, S), {neu(G, n, n2, T), convty(G, T, S)});
  add("NVar", neu(G, x, x, A), {}, {in_context("G", "x", "A")});
  add("NApp", neu(G, app(n, u), app(n2, u2), s1(B, u)), {neu(G, n, n2, pi(A, B)), convtm(G, A, u, u2)});
  add("NSig1", neu(G, fst(n), fst(n2), A), {neu(G, n, n2, sig(A, B))});
  add("NSig2", neu(G, snd(n), snd(n2), s1(B, fst(n))), {neu(G, n, n2, sig(A, B))});
  add("NNatElim", neu(G, natelim(M, b, s, n), natelim(M2, b2, s2_, n2), s1(M, n)),
      {neu(G, n, n2, N), convty(GN, M, M2), convtm(G, s1(M, Z), b, b2), convtm(ext(GN, M), nstep(M), s, s2_)});
  add("NEmptyElim", neu(G, emptyelim(M, n), emptyelim(M2, n2), s1(M, n)), {neu(G, n, n2, E), convty(GE, M, M2)});
  add("NIdInd", neu(G, idelim(A, a, M, h, n), idelim(A2, a2, M2, h2, n2), s2(M, b3, n)),
      {neu(G, n, n2, id(A3, a3, b3)), convty(idctx(G, A, a), M, M2), convtm(G, s2(M, a, refl(A, a)), h, h2)});

  // Deep normalisation.
  add("DnfTy", dnfty(G, T), {dnfty_r(G, Uu)}, {reduces("T", "U")});
  add("DnfTm", dnf(G, T, t), {dnf_r(G, Uu, uu)}, {reduces("T", "U"), reduces("t", "u0")});
  add("DnfPi", dnfty_r(G, pi(A, B)), {dnfty(G, A), dnfty(GA, B)});
  add("DnfSig", dnfty_r(G, sig(A, B)), {dnfty(G, A), dnfty(GA, B)});
  add("DnfNat", dnfty_r(G, N), {});
  add("DnfEmpty", dnfty_r(G, E), {});
  add("DnfId", dnfty_r(G, id(A, t, u)), {dnfty(G, A), dnf(G, A, t), dnf(G, A, u)});
  add("DnfUniv", dnfty_r(G, U), {});
  add("DnfNeTy", dnfty_r(G, n), {dne(G, n, T)});
  add("DnfPiCode", dnf_r(G, U, pi(A, B)), {dnf(G, U, A), dnf(GA, U, B)});
  add("DnfFun", dnf_r(G, pi(A, B), f), {dnf(GA, B, app(sh(f), V0))});
  add("DnfSigCode", dnf_r(G, U, sig(A, B)), {dnf(G, U, A), dnf(GA, U, B)});
  add("DnfPair", dnf_r(G, sig(A, B), p), {dnf(G, A, fst(p)), dnf(G, s1(B, fst(p)), snd(p))});
  add("DnfNatCode", dnf_r(G, U, N), {});
  add("DnfZero", dnf_r(G, N, Z), {});
  add("DnfSucc", dnf_r(G, N, succ(t)), {dnf(G, N, t)});
  add("DnfEmptyCode", dnf_r(G, U, E), {});
  add("DnfIdCode", dnf_r(G, U, id(A, t, u)), {dnf(G, U, A), dnf(G, A, t), dnf(G, A, u)});
  add("DnfRefl", dnf_r(G, id(A3, t, u), refl(A, a)), {});
  add("DnfNe", dnf_r(G, T, n), {dne(G, n, S)}, {positive("T")});
  add("DneRed", dne_r(G, n, S), {dne(G, n, T)}, {reduces("T", "S")});
  add("DneVar", dne(G, x, A), {}, {in_context("G", "x", "A")});
  add("DneApp", dne(G, app(n, u), s1(B, u)), {dne_r(G, n, pi(A, B)), dnf(G, A, u)});
  add("DneFst", dne(G, fst(n), A), {dne_r(G, n, sig(A, B))});
  add("DneSnd", dne(G, snd(n), s1(B, fst(n))), {dne_r(G, n, sig(A, B))});
  add("DneNatElim", dne(G, natelim(M, b, s, n), s1(M, n)),
      {dne_r(G, n, N), dnfty(GN, M), dnf(G, s1(M, Z), b), dnf(ext(GN, M), nstep(M), s)});
  add("DneEmptyElim", dne(G, emptyelim(M, n), s1(M, n)), {dne_r(G, n, E), dnfty(GE, M)});
  add("DneIdElim", dne(G, idelim(A, a, M, h, n), s2(M, b3, n)),
      {dne_r(G, n, id(A3, a3, b3)), dnfty(idctx(G, A, a), M), dnf(G, s2(M, a, refl(A, a)), h)});
  add("Red", red(G, t, u), {}, {reduces("t", "u")});
  return r;
}

const std::vector<Schema>& schemas() {
  static const std::vector<Schema> all = build_schemas();
  return all;
}

const Schema* find_schema(std::string_view name) {
  static const auto index = [] {
    std::unordered_map<std::string, const Schema*> m;
    for (const auto& s : schemas()) m.emplace(s.name, &s);
    return m;
  }();
  auto it = index.find(std::string(name));
  return it == index.end() ? nullptr : it->second;
}

// ---------------------------------------------------------------------------
// Matching.

class Matcher {
 public:
  Bindings b;
  std::string error;

  bool judgment(const JPat& p, const Judgment& j, const std::string& where) {
    where_ = where;
    if (p.kind != j.kind) {
      return fail("expected a " + std::string(judgment_keyword(p.kind)) + " judgment, found " +
                  std::string(judgment_keyword(j.kind)));
    }
    if (!list(p.ctx, j.ctx)) return false;
    if (p.kind == JudgmentKind::SubstWf) {
      return list(p.subst, Context(j.subst)) && list(p.delta, j.delta);
    }
    if (p.terms.size() != j.terms.size()) return fail("wrong number of judgment components");
    for (std::size_t i = 0; i < p.terms.size(); ++i) {
      if (!term(p.terms[i], j.terms[i])) return false;
    }
    return true;
  }

  // The judgment a pattern denotes under the current bindings.
  std::optional<Judgment> build(const JPat& p) const {
    Judgment j;
    j.kind = p.kind;
    auto ctx = build_list(p.ctx);
    if (!ctx) return std::nullopt;
    j.ctx = *ctx;
    if (p.kind == JudgmentKind::SubstWf) {
      auto images = build_list(p.subst);
      auto delta = build_list(p.delta);
      if (!images || !delta) return std::nullopt;
      j.subst = images->entries();
      j.delta = *delta;
      return j;
    }
    for (const auto& t : p.terms) {
      if (!ready(t)) return std::nullopt;
      j.terms.push_back(instantiate(t));
    }
    return j;
  }

  // Evaluates the deferred computed positions.
  bool resolve() {
    bool progress = true;
    while (progress && !deferred_.empty()) {
      progress = false;
      for (auto it = deferred_.begin(); it != deferred_.end();) {
        if (!ready(it->p)) {
          ++it;
          continue;
        }
        where_ = it->where;
        if (!(instantiate(it->p) == it->t)) return fail("computed position differs (substitution or shift)");
        it = deferred_.erase(it);
        progress = true;
      }
    }
    if (!deferred_.empty()) return fail("underdetermined metavariable in a computed position");
    return true;
  }

 private:
  struct Deferred {
    P p;
    Term t;
    std::string where;
  };

  bool fail(std::string why) {
    error = where_.empty() ? why : where_ + ": " + why;
    return false;
  }

  bool term(const P& p, const Term& t) {
    switch (p->k) {
      case Pat::K::MVar: {
        auto [it, fresh] = b.terms.emplace(p->name, t);
        if (!fresh && !(it->second == t)) return fail("metavariable " + p->name + " bound to two different terms");
        return true;
      }
      case Pat::K::Lit:
        if (!(p->lit == t)) return fail("expected " + print(p->lit) + ", found " + std::string(tag_name(t.tag())));
        return true;
      case Pat::K::Con:
        if (!t.is(p->tag)) {
          return fail("expected " + std::string(tag_name(p->tag)) + ", found " + std::string(tag_name(t.tag())));
        }
        for (std::size_t i = 0; i < p->kids.size(); ++i) {
          if (!term(p->kids[i], t.child(i))) return false;
        }
        return true;
      default:
        if (ready(p)) {
          if (!(instantiate(p) == t)) return fail("computed position differs (substitution or shift)");
          return true;
        }
        deferred_.push_back({p, t, where_});
        return true;
    }
  }

  bool list(const CP& p, const Context& c) {
    switch (p->k) {
      case CtxPat::K::MVar: {
        auto [it, fresh] = b.lists.emplace(p->name, c);
        if (!fresh && !(it->second == c)) return fail("context " + p->name + " bound to two different contexts");
        return true;
      }
      case CtxPat::K::Empty:
        if (!c.empty()) return fail("expected an empty context");
        return true;
      case CtxPat::K::Ext:
        if (c.empty()) return fail("expected a context extension, found an empty context");
        return term(p->entry, c.entries().back()) && list(p->parent, c.prefix_dropping(1));
    }
    return false;
  }

  bool ready(const P& p) const {
    switch (p->k) {
      case Pat::K::MVar:
        return b.terms.count(p->name) > 0;
      case Pat::K::Lit:
        return true;
      case Pat::K::Apply:
        if (!b.lists.count(p->name)) return false;
        [[fallthrough]];
      default:
        return std::all_of(p->kids.begin(), p->kids.end(), [&](const P& k) { return ready(k); });
    }
  }

  Term instantiate(const P& p) const {
    switch (p->k) {
      case Pat::K::MVar:
        return b.terms.at(p->name);
      case Pat::K::Lit:
        return p->lit;
      case Pat::K::Con: {
        std::vector<Term> kids;
        for (const auto& k : p->kids) kids.push_back(instantiate(k));
        return Term::make(p->tag, std::move(kids));
      }
      case Pat::K::Shift:
        return shift(instantiate(p->kids[0]));
      case Pat::K::Subst1:
        return subst1(instantiate(p->kids[0]), instantiate(p->kids[1]));
      case Pat::K::Subst2:
        return subst2(instantiate(p->kids[0]), instantiate(p->kids[1]), instantiate(p->kids[2]));
      case Pat::K::NatStep:
        return nat_step_type(instantiate(p->kids[0]));
      case Pat::K::Apply: {
        const auto& images = b.lists.at(p->name).entries();
        return apply_subst(instantiate(p->kids[0]), Substitution::prefix({images.rbegin(), images.rend()}));
      }
    }
    return Term();
  }

  std::optional<Context> build_list(const CP& p) const {
    switch (p->k) {
      case CtxPat::K::MVar: {
        auto it = b.lists.find(p->name);
        if (it == b.lists.end()) return std::nullopt;
        return it->second;
      }
      case CtxPat::K::Empty:
        return Context();
      case CtxPat::K::Ext: {
        auto parent = build_list(p->parent);
        if (!parent || !ready(p->entry)) return std::nullopt;
        return parent->extend(instantiate(p->entry));
      }
    }
    return std::nullopt;
  }

  std::vector<Deferred> deferred_;
  std::string where_;
};

std::optional<std::string> scope_error(const Judgment& j) {
  const auto& entries = j.ctx.entries();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].free_bound() > i) return "context entry " + std::to_string(i) + " is not scoped in its prefix";
  }
  for (const Term& t : j.terms) {
    if (t.free_bound() > entries.size()) return "a judgment component is not scoped in the context";
  }
  for (const Term& t : j.subst) {
    if (t.free_bound() > entries.size()) return "a substitution image is not scoped in the context";
  }
  const auto& d = j.delta.entries();
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i].free_bound() > i) return "target context entry " + std::to_string(i) + " is not scoped in its prefix";
  }
  if (j.terms.size() != judgment_arity(j.kind)) return "wrong number of judgment components";
  return std::nullopt;
}

std::optional<std::string> check_node(const Derivation& d) {
  if (auto err = scope_error(d.conclusion)) return *err;
  const Schema* schema = find_schema(d.rule);
  if (!schema) return "unknown rule " + d.rule;
  if (schema->premises.size() != d.premises.size()) {
    return "rule " + d.rule + " takes " + std::to_string(schema->premises.size()) + " premises, found " +
           std::to_string(d.premises.size());
  }
  Matcher m;
  if (!m.judgment(schema->conclusion, d.conclusion, "conclusion")) return m.error;
  for (std::size_t i = 0; i < d.premises.size(); ++i) {
    if (!m.judgment(schema->premises[i], d.premises[i].conclusion, "premise " + std::to_string(i))) return m.error;
  }
  if (!m.resolve()) return m.error;
  for (const auto& side : schema->sides) {
    if (auto err = side(m.b)) return *err;
  }
  return std::nullopt;
}

std::optional<Reject> validate_at(const Derivation& d, std::vector<std::string>& path) {
  if (auto err = check_node(d)) return Reject{*err, path};
  for (std::size_t i = 0; i < d.premises.size(); ++i) {
    path.push_back(std::to_string(i) + ":" + d.premises[i].rule);
    if (auto r = validate_at(d.premises[i], path)) return r;
    path.pop_back();
  }
  return std::nullopt;
}

}  // namespace

const std::vector<RuleInfo>& rule_catalog() {
  static const std::vector<RuleInfo> infos = [] {
    std::vector<RuleInfo> out;
    for (const auto& s : schemas()) out.push_back({s.name, s.conclusion.kind, s.premises.size(), s.reconstructed});
    return out;
  }();
  return infos;
}

const RuleInfo* find_rule(std::string_view name) {
  for (const auto& r : rule_catalog()) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

std::variant<std::vector<Judgment>, std::string> premises_for(std::string_view rule, const Judgment& conclusion,
                                                              const std::map<std::string, Term>& extra) {
  const Schema* schema = find_schema(rule);
  if (!schema) return "unknown rule " + std::string(rule);
  Matcher m;
  m.b.terms = extra;
  if (!m.judgment(schema->conclusion, conclusion, "conclusion") || !m.resolve()) return m.error;
  std::vector<Judgment> out;
  for (std::size_t i = 0; i < schema->premises.size(); ++i) {
    auto j = m.build(schema->premises[i]);
    if (!j) return "premise " + std::to_string(i) + " of " + std::string(rule) + " has an unbound metavariable";
    out.push_back(std::move(*j));
  }
  return out;
}

ConvVerdict validate(const Derivation& d) {
  std::vector<std::string> path{d.rule};
  if (auto r = validate_at(d, path)) return *r;
  return accept();
}

// ---------------------------------------------------------------------------
// Mutation.

namespace {

void collect(Derivation& d, std::vector<Derivation*>& out) {
  out.push_back(&d);
  for (auto& p : d.premises) collect(p, out);
}

Term perturb(const Term& t, std::mt19937_64& rng) {
  if (t.is(Tag::Var)) return Term::var(t.index() + 1);
  const std::vector<Term> options = {Term::nat(), Term::zero(), Term::univ(), Term::succ(t), Term::empty()};
  for (int tries = 0; tries < 8; ++tries) {
    const Term& pick = options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
    if (!(pick == t)) return pick;
  }
  return Term::succ(t);
}

}  // namespace

Derivation mutate(const Derivation& d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Derivation out = d;
  std::vector<Derivation*> nodes;
  collect(out, nodes);
  Derivation& node = *nodes[std::uniform_int_distribution<std::size_t>(0, nodes.size() - 1)(rng)];
  int kind = std::uniform_int_distribution<int>(0, 3)(rng);
  if (kind == 2 && node.premises.empty()) kind = 0;
  if (kind == 0 && node.conclusion.terms.empty()) kind = 3;
  switch (kind) {
    case 0: {
      auto& terms = node.conclusion.terms;
      Term& target = terms[std::uniform_int_distribution<std::size_t>(0, terms.size() - 1)(rng)];
      std::size_t k = std::uniform_int_distribution<std::size_t>(0, target.size() - 1)(rng);
      target = replace_subterm(target, k, [&](const Term& sub) { return perturb(sub, rng); });
      break;
    }
    case 1: {
      std::vector<const RuleInfo*> same;
      for (const auto& r : rule_catalog()) {
        if (r.conclusion == node.conclusion.kind && r.name != node.rule) same.push_back(&r);
      }
      if (same.empty()) {
        for (const auto& r : rule_catalog()) {
          if (r.name != node.rule) same.push_back(&r);
        }
      }
      node.rule = same[std::uniform_int_distribution<std::size_t>(0, same.size() - 1)(rng)]->name;
      break;
    }
    case 2:
      node.premises.erase(node.premises.begin() +
                          static_cast<long>(std::uniform_int_distribution<std::size_t>(0, node.premises.size() - 1)(rng)));
      break;
    default: {
      Context& ctx = node.conclusion.ctx;
      ctx = ctx.empty() ? ctx.extend(Term::nat()) : ctx.prefix_dropping(1);
      break;
    }
  }
  return out;
}

}  // namespace mltt
