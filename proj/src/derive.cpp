#include "mltt/derive.hpp"

#include <variant>

#include "mltt/reduction.hpp"

namespace mltt {

namespace {

constexpr std::uint64_t kBuilderFuel = 1'000'000;

using K = JudgmentKind;

Judgment judgment(K kind, const Context& g, std::vector<Term> terms) {
  Judgment j;
  j.kind = kind;
  j.ctx = g;
  j.terms = std::move(terms);
  return j;
}

Derivation node(std::string rule, Judgment j, std::vector<Derivation> premises = {}) {
  return Derivation{std::move(rule), std::move(j), std::move(premises)};
}

// The type position of a conclusion.
const Term& type_of(const Derivation& d) {
  switch (d.conclusion.kind) {
    case K::Typed:
    case K::DneTm:
    case K::DneTmRed:
      return d.conclusion.terms[1];
    case K::ConvTm:
      return d.conclusion.terms[0];
    case K::NeuCmp:
      return d.conclusion.terms[2];
    default:
      throw DeriveError("judgment without a type position");
  }
}

Term wh(const Term& t) {
  auto r = whnf(t, kBuilderFuel);
  if (!r.accepted()) throw DeriveError("whnf did not terminate");
  return r.value();
}

Term lookup(const Context& g, const Term& x) {
  auto ty = g.lookup(x.index());
  if (!ty) throw DeriveError("variable out of scope");
  return *ty;
}

const Term kU = Term::univ();
const Term kN = Term::nat();
const Term kE = Term::empty();

// Retypes a Typed derivation to the weak-head normal form of its type, which
// must have the given former.
std::pair<Derivation, Term> with_former(const Context& g, Derivation d, Tag former) {
  const Term ty = type_of(d);
  const Term w = wh(ty);
  if (!w.is(former)) throw DeriveError("expected a " + std::string(tag_name(former)) + " type");
  if (w == ty) return {std::move(d), w};
  Judgment j = d.conclusion;
  j.terms[1] = w;
  return {node("Conv", j, {std::move(d), derive_convty(g, ty, w)}), w};
}

// Retypes a ConvTm derivation.
Derivation at_type(const Context& g, Derivation d, const Term& ty) {
  const Term from = type_of(d);
  if (from == ty) return d;
  Judgment j = d.conclusion;
  j.terms[0] = ty;
  return node("TmConv", j, {std::move(d), derive_convty(g, from, ty)});
}

Derivation refl_tm(const Context& g, const Term& ty, const Term& t) {
  return node("Refl", judgment(K::ConvTm, g, {ty, t, t}), {derive_check(g, t, ty)});
}

Derivation refl_ty(const Context& g, const Term& ty) {
  return node("ReflTy", judgment(K::ConvTy, g, {ty, ty}), {derive_ty(g, ty)});
}

// A derivation of t == step(t) at the type the rules produce.
Derivation step_conv(const Context& g, const Term& t) {
  switch (t.tag()) {
    case Tag::App: {
      const Term& f = t.fn();
      const Term& u = t.arg();
      if (f.is(Tag::Lam)) {
        const Context ga = g.extend(f.ann());
        Derivation body = derive_infer(ga, f.body());
        const Term b = type_of(body);
        return node("BetaFun", judgment(K::ConvTm, g, {subst1(b, u), t, subst1(f.body(), u)}),
                    {derive_ty(g, f.ann()), derive_ty(ga, b), std::move(body), derive_check(g, u, f.ann())});
      }
      Derivation fd = step_conv(g, f);
      const Term pi = wh(type_of(fd));
      if (!pi.is(Tag::Pi)) throw DeriveError("applied term is not a function");
      const Term f1 = fd.conclusion.terms[2];
      return node("AppCong", judgment(K::ConvTm, g, {subst1(pi.cod(), u), t, Term::app(f1, u)}),
                  {at_type(g, std::move(fd), pi), refl_tm(g, pi.dom(), u)});
    }
    case Tag::Fst:
    case Tag::Snd: {
      const bool first = t.is(Tag::Fst);
      const Term& p = t.scrut();
      if (p.is(Tag::Pair)) {
        const Term &a = p.dom(), &b = p.cod(), &l = p.first(), &r = p.second();
        std::vector<Derivation> prem;
        prem.push_back(derive_ty(g, a));
        prem.push_back(derive_ty(g.extend(a), b));
        prem.push_back(derive_check(g, l, a));
        prem.push_back(derive_check(g, r, subst1(b, l)));
        if (first) return node("BetaSig1", judgment(K::ConvTm, g, {a, t, l}), std::move(prem));
        return node("BetaSig2", judgment(K::ConvTm, g, {subst1(b, l), t, r}), std::move(prem));
      }
      Derivation pd = step_conv(g, p);
      const Term sig = wh(type_of(pd));
      if (!sig.is(Tag::Sig)) throw DeriveError("projected term is not a pair");
      const Term p1 = pd.conclusion.terms[2];
      if (first) {
        return node("FstCong", judgment(K::ConvTm, g, {sig.dom(), t, Term::fst(p1)}), {at_type(g, std::move(pd), sig)});
      }
      return node("SndCong", judgment(K::ConvTm, g, {subst1(sig.cod(), Term::fst(p)), t, Term::snd(p1)}),
                  {at_type(g, std::move(pd), sig)});
    }
    case Tag::NatElim: {
      const Term &m = t.motive(), &b = t.base(), &s = t.step(), &n = t.scrut();
      const Context gn = g.extend(kN);
      const Term base_ty = subst1(m, Term::zero());
      if (n.is(Tag::Zero)) {
        return node("BetaZero", judgment(K::ConvTm, g, {base_ty, t, b}),
                    {derive_ty(gn, m), derive_check(g, b, base_ty), derive_check(gn.extend(m), s, nat_step_type(m))});
      }
      if (n.is(Tag::Succ)) {
        const Term& k = n.pred();
        return node("BetaSucc",
                    judgment(K::ConvTm, g, {subst1(m, n), t, subst2(s, k, Term::nat_elim(m, b, s, k))}),
                    {derive_check(g, k, kN), derive_ty(gn, m), derive_check(g, b, base_ty),
                     derive_check(gn.extend(m), s, nat_step_type(m))});
      }
      Derivation nd = at_type(g, step_conv(g, n), kN);
      const Term n1 = nd.conclusion.terms[2];
      return node("NatElimCong", judgment(K::ConvTm, g, {subst1(m, n), t, Term::nat_elim(m, b, s, n1)}),
                  {refl_ty(gn, m), refl_tm(g, base_ty, b), refl_tm(gn.extend(m), nat_step_type(m), s),
                   std::move(nd)});
    }
    case Tag::EmptyElim: {
      const Term &m = t.motive(), &e = t.scrut();
      Derivation ed = at_type(g, step_conv(g, e), kE);
      const Term e1 = ed.conclusion.terms[2];
      return node("EmptyElimCong", judgment(K::ConvTm, g, {subst1(m, e), t, Term::empty_elim(m, e1)}),
                  {refl_ty(g.extend(kE), m), std::move(ed)});
    }
    case Tag::IdElim: {
      const Term &a = t.ty(), &l = t.lhs(), &m = t.motive(), &h = t.branch(), &e = t.scrut();
      const Context mctx = id_motive_context(g, a, l);
      const Term branch_ty = id_branch_type(m, a, l);
      if (e.is(Tag::Refl)) {
        if (!(e.ty() == a && e.tm() == l)) throw DeriveError("refl annotations differ from the eliminator's");
        return node("BetaRefl", judgment(K::ConvTm, g, {branch_ty, t, h}),
                    {derive_ty(g, a), derive_check(g, l, a), derive_ty(mctx, m), derive_check(g, h, branch_ty)});
      }
      const Term idty = wh(type_of(derive_infer(g, e)));
      if (!idty.is(Tag::Id)) throw DeriveError("idElim scrutinee is not an identity proof");
      const Term& r = idty.rhs();
      Derivation ed = at_type(g, step_conv(g, e), Term::id(a, l, r));
      const Term e1 = ed.conclusion.terms[2];
      return node("IdElimCong", judgment(K::ConvTm, g, {subst2(m, r, e), t, Term::id_elim(a, l, m, h, e1)}),
                  {refl_ty(g, a), refl_tm(g, a, l), refl_ty(mctx, m), refl_tm(g, branch_ty, h), std::move(ed)});
    }
    default:
      throw DeriveError("term is in weak-head normal form");
  }
}

Derivation conv_natural(const Context& g, const Term& ty, const Term& t, const Term& u);

Derivation eta_fun(const Context& g, const Term& pi, const Term& f) {
  const Term expanded = Term::lam(pi.dom(), Term::app(shift(f), Term::var(0)));
  return node("EtaFun", judgment(K::ConvTm, g, {pi, f, expanded}), {derive_check(g, f, pi)});
}

Derivation eta_sig(const Context& g, const Term& sig, const Term& p) {
  const Term expanded = Term::pair(sig.dom(), sig.cod(), Term::fst(p), Term::snd(p));
  return node("EtaSig", judgment(K::ConvTm, g, {sig, p, expanded}),
              {derive_ty(g, sig.dom()), derive_ty(g.extend(sig.dom()), sig.cod()), derive_check(g, p, sig)});
}

Derivation trans(const Context& g, Derivation left, Derivation right) {
  const Term ty = type_of(left);
  right = at_type(g, std::move(right), ty);
  Judgment j = judgment(K::ConvTm, g, {ty, left.conclusion.terms[1], right.conclusion.terms[2]});
  return node("Trans", std::move(j), {std::move(left), std::move(right)});
}

Derivation sym(const Context& g, Derivation d) {
  Judgment j = judgment(K::ConvTm, g, {type_of(d), d.conclusion.terms[2], d.conclusion.terms[1]});
  return node("Sym", std::move(j), {std::move(d)});
}

// Congruence on two weak-head normal forms with the same head.
Derivation congruence(const Context& g, const Term& w, const Term& t, const Term& u) {
  if (t.tag() != u.tag()) {
    throw DeriveError("heads differ: " + std::string(tag_name(t.tag())) + " and " + std::string(tag_name(u.tag())));
  }
  auto concl = [&](const Term& ty) { return judgment(K::ConvTm, g, {ty, t, u}); };
  switch (t.tag()) {
    case Tag::Lam: {
      const Term& a = t.ann();
      const Context ga = g.extend(a);
      const Term b = w.is(Tag::Pi) && w.dom() == a ? w.cod() : type_of(derive_infer(ga, t.body()));
      return node("LamCong", concl(Term::pi(a, b)),
                  {derive_ty(g, a), derive_convty(g, a, u.ann()), derive_convtm(ga, b, t.body(), u.body())});
    }
    case Tag::Pi:
    case Tag::Sig:
      return node(t.is(Tag::Pi) ? "FunCong" : "SigCong", concl(kU),
                  {derive_convtm(g, kU, t.dom(), u.dom()), derive_convtm(g.extend(t.dom()), kU, t.cod(), u.cod())});
    case Tag::Id:
      return node("IdCong", concl(kU),
                  {derive_convtm(g, kU, t.ty(), u.ty()), derive_convtm(g, t.ty(), t.lhs(), u.lhs()),
                   derive_convtm(g, t.ty(), t.rhs(), u.rhs())});
    case Tag::Pair: {
      const Term &a = t.dom(), &b = t.cod();
      const Context ga = g.extend(a);
      return node("PairCong", concl(Term::sig(a, b)),
                  {derive_ty(g, a), derive_ty(ga, b), derive_convty(g, a, u.dom()), derive_convty(ga, b, u.cod()),
                   derive_convtm(g, a, t.first(), u.first()),
                   derive_convtm(g, subst1(b, t.first()), t.second(), u.second())});
    }
    case Tag::Succ:
      return node("SuccCong", concl(kN), {derive_convtm(g, kN, t.pred(), u.pred())});
    case Tag::Refl:
      return node("ReflCong", concl(Term::id(t.ty(), t.tm(), t.tm())),
                  {derive_convty(g, t.ty(), u.ty()), derive_convtm(g, t.ty(), t.tm(), u.tm())});
    case Tag::App: {
      auto [fd, pi] = with_former(g, derive_infer(g, t.fn()), Tag::Pi);
      return node("AppCong", concl(subst1(pi.cod(), t.arg())),
                  {derive_convtm(g, pi, t.fn(), u.fn()), derive_convtm(g, pi.dom(), t.arg(), u.arg())});
    }
    case Tag::Fst:
    case Tag::Snd: {
      auto [pd, sig] = with_former(g, derive_infer(g, t.scrut()), Tag::Sig);
      const Term ty = t.is(Tag::Fst) ? sig.dom() : subst1(sig.cod(), Term::fst(t.scrut()));
      return node(t.is(Tag::Fst) ? "FstCong" : "SndCong", concl(ty),
                  {derive_convtm(g, sig, t.scrut(), u.scrut())});
    }
    case Tag::NatElim: {
      const Term& m = t.motive();
      const Context gn = g.extend(kN);
      return node("NatElimCong", concl(subst1(m, t.scrut())),
                  {derive_convty(gn, m, u.motive()), derive_convtm(g, subst1(m, Term::zero()), t.base(), u.base()),
                   derive_convtm(gn.extend(m), nat_step_type(m), t.step(), u.step()),
                   derive_convtm(g, kN, t.scrut(), u.scrut())});
    }
    case Tag::EmptyElim:
      return node("EmptyElimCong", concl(subst1(t.motive(), t.scrut())),
                  {derive_convty(g.extend(kE), t.motive(), u.motive()), derive_convtm(g, kE, t.scrut(), u.scrut())});
    case Tag::IdElim: {
      const Term &a = t.ty(), &l = t.lhs(), &m = t.motive();
      const Term idty = wh(type_of(derive_infer(g, t.scrut())));
      if (!idty.is(Tag::Id)) throw DeriveError("idElim scrutinee is not an identity proof");
      const Term& r = idty.rhs();
      return node("IdElimCong", concl(subst2(m, r, t.scrut())),
                  {derive_convty(g, a, u.ty()), derive_convtm(g, a, l, u.lhs()),
                   derive_convty(id_motive_context(g, a, l), m, u.motive()),
                   derive_convtm(g, id_branch_type(m, a, l), t.branch(), u.branch()),
                   derive_convtm(g, Term::id(a, l, r), t.scrut(), u.scrut())});
    }
    default:
      throw DeriveError("distinct " + std::string(tag_name(t.tag())) + " terms");
  }
}

Derivation conv_natural(const Context& g, const Term& ty, const Term& t, const Term& u) {
  if (t == u) return refl_tm(g, ty, t);
  if (!is_whnf(t)) {
    Derivation s = step_conv(g, t);
    const Term t1 = s.conclusion.terms[2];
    const Term ty1 = type_of(s);
    return trans(g, std::move(s), derive_convtm(g, ty1, t1, u));
  }
  if (!is_whnf(u)) {
    Derivation s = step_conv(g, u);
    const Term u1 = s.conclusion.terms[2];
    const Term ty1 = type_of(s);
    return trans(g, derive_convtm(g, ty1, t, u1), sym(g, std::move(s)));
  }
  const Term w = wh(ty);
  if (w.is(Tag::Pi) && !(t.is(Tag::Lam) && u.is(Tag::Lam))) {
    if (!t.is(Tag::Lam)) {
      Derivation e = eta_fun(g, w, t);
      const Term t1 = e.conclusion.terms[2];
      return trans(g, std::move(e), derive_convtm(g, w, t1, u));
    }
    Derivation e = eta_fun(g, w, u);
    const Term u1 = e.conclusion.terms[2];
    return trans(g, derive_convtm(g, w, t, u1), sym(g, std::move(e)));
  }
  if (w.is(Tag::Sig) && !(t.is(Tag::Pair) && u.is(Tag::Pair))) {
    if (!t.is(Tag::Pair)) {
      Derivation e = eta_sig(g, w, t);
      const Term t1 = e.conclusion.terms[2];
      return trans(g, std::move(e), derive_convtm(g, w, t1, u));
    }
    Derivation e = eta_sig(g, w, u);
    const Term u1 = e.conclusion.terms[2];
    return trans(g, derive_convtm(g, w, t, u1), sym(g, std::move(e)));
  }
  return congruence(g, w, t, u);
}

Derivation neu_natural(const Context& g, const Term& n, const Term& m);

Derivation derive_neu(const Context& g, const Term& n, const Term& m, const Term& ty) {
  Derivation d = neu_natural(g, n, m);
  const Term from = type_of(d);
  if (from == ty) return d;
  return node("NConv", judgment(K::NeuCmp, g, {n, m, ty}), {std::move(d), derive_convty(g, from, ty)});
}

// A neutral comparison retyped to the weak-head normal form of its type.
std::pair<Derivation, Term> neu_former(const Context& g, const Term& n, const Term& m, Tag former) {
  Derivation d = neu_natural(g, n, m);
  const Term w = wh(type_of(d));
  if (!w.is(former)) throw DeriveError("expected a " + std::string(tag_name(former)) + " type");
  return {derive_neu(g, n, m, w), w};
}

Derivation neu_natural(const Context& g, const Term& n, const Term& m) {
  if (n.tag() != m.tag()) throw DeriveError("neutral heads differ");
  auto concl = [&](const Term& ty) { return judgment(K::NeuCmp, g, {n, m, ty}); };
  switch (n.tag()) {
    case Tag::Var:
      if (!(n == m)) throw DeriveError("distinct variables");
      return node("NVar", concl(lookup(g, n)));
    case Tag::App: {
      auto [d, pi] = neu_former(g, n.fn(), m.fn(), Tag::Pi);
      return node("NApp", concl(subst1(pi.cod(), n.arg())),
                  {std::move(d), derive_convtm(g, pi.dom(), n.arg(), m.arg())});
    }
    case Tag::Fst:
    case Tag::Snd: {
      auto [d, sig] = neu_former(g, n.scrut(), m.scrut(), Tag::Sig);
      if (n.is(Tag::Fst)) return node("NSig1", concl(sig.dom()), {std::move(d)});
      return node("NSig2", concl(subst1(sig.cod(), Term::fst(n.scrut()))), {std::move(d)});
    }
    case Tag::NatElim: {
      const Term& p = n.motive();
      const Context gn = g.extend(kN);
      return node("NNatElim", concl(subst1(p, n.scrut())),
                  {derive_neu(g, n.scrut(), m.scrut(), kN), derive_convty(gn, p, m.motive()),
                   derive_convtm(g, subst1(p, Term::zero()), n.base(), m.base()),
                   derive_convtm(gn.extend(p), nat_step_type(p), n.step(), m.step())});
    }
    case Tag::EmptyElim:
      return node("NEmptyElim", concl(subst1(n.motive(), n.scrut())),
                  {derive_neu(g, n.scrut(), m.scrut(), kE), derive_convty(g.extend(kE), n.motive(), m.motive())});
    case Tag::IdElim: {
      const Term &a = n.ty(), &l = n.lhs(), &p = n.motive();
      auto [d, idty] = neu_former(g, n.scrut(), m.scrut(), Tag::Id);
      return node("NIdInd", concl(subst2(p, idty.rhs(), n.scrut())),
                  {std::move(d), derive_convty(id_motive_context(g, a, l), p, m.motive()),
                   derive_convtm(g, id_branch_type(p, a, l), n.branch(), m.branch())});
    }
    default:
      throw DeriveError("not a neutral");
  }
}

// Deep normalisation.

Derivation dnf_ty(const Context& g, const Term& ty);
Derivation dnf_tm(const Context& g, const Term& ty, const Term& t);
Derivation dne(const Context& g, const Term& n);

Derivation dne_red(const Context& g, const Term& n, const Term& target) {
  Derivation d = dne(g, n);
  return node("DneRed", judgment(K::DneTmRed, g, {n, target}), {std::move(d)});
}

std::pair<Derivation, Term> dne_former(const Context& g, const Term& n, Tag former) {
  const Term w = wh(type_of(dne(g, n)));
  if (!w.is(former)) throw DeriveError("expected a " + std::string(tag_name(former)) + " type");
  return {dne_red(g, n, w), w};
}

Derivation dne(const Context& g, const Term& n) {
  auto concl = [&](const Term& ty) { return judgment(K::DneTm, g, {n, ty}); };
  switch (n.tag()) {
    case Tag::Var:
      return node("DneVar", concl(lookup(g, n)));
    case Tag::App: {
      auto [d, pi] = dne_former(g, n.fn(), Tag::Pi);
      return node("DneApp", concl(subst1(pi.cod(), n.arg())), {std::move(d), dnf_tm(g, pi.dom(), n.arg())});
    }
    case Tag::Fst:
    case Tag::Snd: {
      auto [d, sig] = dne_former(g, n.scrut(), Tag::Sig);
      if (n.is(Tag::Fst)) return node("DneFst", concl(sig.dom()), {std::move(d)});
      return node("DneSnd", concl(subst1(sig.cod(), Term::fst(n.scrut()))), {std::move(d)});
    }
    case Tag::NatElim: {
      const Term& p = n.motive();
      const Context gn = g.extend(kN);
      auto [d, nat] = dne_former(g, n.scrut(), Tag::Nat);
      return node("DneNatElim", concl(subst1(p, n.scrut())),
                  {std::move(d), dnf_ty(gn, p), dnf_tm(g, subst1(p, Term::zero()), n.base()),
                   dnf_tm(gn.extend(p), nat_step_type(p), n.step())});
    }
    case Tag::EmptyElim: {
      auto [d, empty] = dne_former(g, n.scrut(), Tag::Empty);
      return node("DneEmptyElim", concl(subst1(n.motive(), n.scrut())),
                  {std::move(d), dnf_ty(g.extend(kE), n.motive())});
    }
    case Tag::IdElim: {
      const Term &a = n.ty(), &l = n.lhs(), &p = n.motive();
      auto [d, idty] = dne_former(g, n.scrut(), Tag::Id);
      return node("DneIdElim", concl(subst2(p, idty.rhs(), n.scrut())),
                  {std::move(d), dnf_ty(id_motive_context(g, a, l), p),
                   dnf_tm(g, id_branch_type(p, a, l), n.branch())});
    }
    default:
      throw DeriveError("not a neutral");
  }
}

Derivation dnf_ty_red(const Context& g, const Term& w) {
  const Judgment j = judgment(K::DnfTyRed, g, {w});
  switch (w.tag()) {
    case Tag::Pi:
    case Tag::Sig:
      return node(w.is(Tag::Pi) ? "DnfPi" : "DnfSig", j, {dnf_ty(g, w.dom()), dnf_ty(g.extend(w.dom()), w.cod())});
    case Tag::Nat:
      return node("DnfNat", j);
    case Tag::Empty:
      return node("DnfEmpty", j);
    case Tag::Univ:
      return node("DnfUniv", j);
    case Tag::Id:
      return node("DnfId", j, {dnf_ty(g, w.ty()), dnf_tm(g, w.ty(), w.lhs()), dnf_tm(g, w.ty(), w.rhs())});
    default: {
      Derivation d = dne(g, w);
      return node("DnfNeTy", j, {std::move(d)});
    }
  }
}

Derivation dnf_tm_red(const Context& g, const Term& w, const Term& u) {
  const Judgment j = judgment(K::DnfTmRed, g, {w, u});
  if (w.is(Tag::Pi)) return node("DnfFun", j, {dnf_tm(g.extend(w.dom()), w.cod(), Term::app(shift(u), Term::var(0)))});
  if (w.is(Tag::Sig)) {
    const Term p1 = Term::fst(u);
    return node("DnfPair", j, {dnf_tm(g, w.dom(), p1), dnf_tm(g, subst1(w.cod(), p1), Term::snd(u))});
  }
  if (is_neutral(u)) {
    Derivation d = dne(g, u);
    return node("DnfNe", j, {std::move(d)});
  }
  switch (u.tag()) {
    case Tag::Pi:
    case Tag::Sig:
      return node(u.is(Tag::Pi) ? "DnfPiCode" : "DnfSigCode", j,
                  {dnf_tm(g, kU, u.dom()), dnf_tm(g.extend(u.dom()), kU, u.cod())});
    case Tag::Nat:
      return node("DnfNatCode", j);
    case Tag::Empty:
      return node("DnfEmptyCode", j);
    case Tag::Id:
      return node("DnfIdCode", j, {dnf_tm(g, kU, u.ty()), dnf_tm(g, u.ty(), u.lhs()), dnf_tm(g, u.ty(), u.rhs())});
    case Tag::Zero:
      return node("DnfZero", j);
    case Tag::Succ:
      return node("DnfSucc", j, {dnf_tm(g, kN, u.pred())});
    case Tag::Refl:
      return node("DnfRefl", j);
    default:
      throw DeriveError("no deep normalisation rule for " + std::string(tag_name(u.tag())));
  }
}

Derivation dnf_ty(const Context& g, const Term& ty) {
  return node("DnfTy", judgment(K::DnfTy, g, {ty}), {dnf_ty_red(g, wh(ty))});
}

Derivation dnf_tm(const Context& g, const Term& ty, const Term& t) {
  const Term w = wh(ty);
  const Term u = w.is(Tag::Pi) || w.is(Tag::Sig) ? t : wh(t);
  return node("DnfTm", judgment(K::DnfTm, g, {ty, t}), {dnf_tm_red(g, w, u)});
}

Derivation derive_subst(const Context& g, const std::vector<Term>& images, const Context& delta) {
  Judgment j;
  j.kind = K::SubstWf;
  j.ctx = g;
  j.subst = images;
  j.delta = delta;
  if (images.size() != delta.size()) throw DeriveError("substitution and target context differ in length");
  if (images.empty()) return node("SubstEmpty", j);
  std::vector<Term> init(images.begin(), images.end() - 1);
  const Context d0 = delta.prefix_dropping(1);
  const Term ty = apply_subst(delta.entries().back(), Substitution::prefix({init.rbegin(), init.rend()}));
  return node("SubstExt", j, {derive_subst(g, init, d0), derive_check(g, images.back(), ty)});
}

}  // namespace

Derivation derive_ctx(const Context& g) {
  const Judgment j = judgment(K::CtxWf, g, {});
  if (g.empty()) return node("CtxEmpty", j);
  const Context parent = g.prefix_dropping(1);
  return node("CtxExt", j, {derive_ctx(parent), derive_ty(parent, g.entries().back())});
}

Derivation derive_ty(const Context& g, const Term& ty) {
  const Judgment j = judgment(K::TyWf, g, {ty});
  switch (ty.tag()) {
    case Tag::Pi:
    case Tag::Sig:
      return node(ty.is(Tag::Pi) ? "FunTy" : "SigTy", j,
                  {derive_ty(g, ty.dom()), derive_ty(g.extend(ty.dom()), ty.cod())});
    case Tag::Nat:
      return node("NatTy", j, {derive_ctx(g)});
    case Tag::Empty:
      return node("EmptyTy", j, {derive_ctx(g)});
    case Tag::Univ:
      return node("UnivTy", j, {derive_ctx(g)});
    case Tag::Id:
      return node("IdTy", j,
                  {derive_ty(g, ty.ty()), derive_check(g, ty.lhs(), ty.ty()), derive_check(g, ty.rhs(), ty.ty())});
    default:
      return node("El", j, {derive_check(g, ty, kU)});
  }
}

Derivation derive_infer(const Context& g, const Term& t) {
  auto concl = [&](const Term& ty) { return judgment(K::Typed, g, {t, ty}); };
  switch (t.tag()) {
    case Tag::Var:
      return node("Var", concl(lookup(g, t)), {derive_ctx(g)});
    case Tag::Pi:
    case Tag::Sig:
      return node(t.is(Tag::Pi) ? "FunUni" : "SigUni", concl(kU),
                  {derive_check(g, t.dom(), kU), derive_check(g.extend(t.dom()), t.cod(), kU)});
    case Tag::Nat:
      return node("NatUni", concl(kU), {derive_ctx(g)});
    case Tag::Empty:
      return node("EmptyUni", concl(kU), {derive_ctx(g)});
    case Tag::Id:
      return node("IdUni", concl(kU),
                  {derive_check(g, t.ty(), kU), derive_check(g, t.lhs(), t.ty()), derive_check(g, t.rhs(), t.ty())});
    case Tag::Lam: {
      const Context ga = g.extend(t.ann());
      Derivation body = derive_infer(ga, t.body());
      const Term b = type_of(body);
      return node("Abs", concl(Term::pi(t.ann(), b)), {derive_ty(g, t.ann()), derive_ty(ga, b), std::move(body)});
    }
    case Tag::App: {
      auto [fd, pi] = with_former(g, derive_infer(g, t.fn()), Tag::Pi);
      return node("App", concl(subst1(pi.cod(), t.arg())), {std::move(fd), derive_check(g, t.arg(), pi.dom())});
    }
    case Tag::Pair: {
      const Term &a = t.dom(), &b = t.cod();
      return node("Pair", concl(Term::sig(a, b)),
                  {derive_ty(g, a), derive_ty(g.extend(a), b), derive_check(g, t.first(), a),
                   derive_check(g, t.second(), subst1(b, t.first()))});
    }
    case Tag::Fst:
    case Tag::Snd: {
      auto [pd, sig] = with_former(g, derive_infer(g, t.scrut()), Tag::Sig);
      if (t.is(Tag::Fst)) return node("Proj1", concl(sig.dom()), {std::move(pd)});
      return node("Proj2", concl(subst1(sig.cod(), Term::fst(t.scrut()))), {std::move(pd)});
    }
    case Tag::Zero:
      return node("Zero", concl(kN), {derive_ctx(g)});
    case Tag::Succ:
      return node("Succ", concl(kN), {derive_check(g, t.pred(), kN)});
    case Tag::NatElim: {
      const Term& p = t.motive();
      const Context gn = g.extend(kN);
      return node("NatRec", concl(subst1(p, t.scrut())),
                  {derive_check(g, t.scrut(), kN), derive_ty(gn, p), derive_check(g, t.base(), subst1(p, Term::zero())),
                   derive_check(gn.extend(p), t.step(), nat_step_type(p))});
    }
    case Tag::EmptyElim:
      return node("EmptyInd", concl(subst1(t.motive(), t.scrut())),
                  {derive_check(g, t.scrut(), kE), derive_ty(g.extend(kE), t.motive())});
    case Tag::Refl:
      return node("ReflTm", concl(Term::id(t.ty(), t.tm(), t.tm())),
                  {derive_ty(g, t.ty()), derive_check(g, t.tm(), t.ty())});
    case Tag::IdElim: {
      const Term &a = t.ty(), &l = t.lhs(), &p = t.motive();
      const Term idty = wh(type_of(derive_infer(g, t.scrut())));
      if (!idty.is(Tag::Id)) throw DeriveError("idElim scrutinee is not an identity proof");
      const Term& r = idty.rhs();
      return node("IdInd", concl(subst2(p, r, t.scrut())),
                  {derive_ty(g, a), derive_check(g, l, a), derive_check(g, r, a),
                   derive_check(g, t.scrut(), Term::id(a, l, r)), derive_ty(id_motive_context(g, a, l), p),
                   derive_check(g, t.branch(), id_branch_type(p, a, l))});
    }
    default:
      throw DeriveError("no typing rule for " + std::string(tag_name(t.tag())));
  }
}

Derivation derive_check(const Context& g, const Term& t, const Term& ty) {
  Derivation d = derive_infer(g, t);
  const Term from = type_of(d);
  if (from == ty) return d;
  return node("Conv", judgment(K::Typed, g, {t, ty}), {std::move(d), derive_convty(g, from, ty)});
}

Derivation derive_convty(const Context& g, const Term& a, const Term& b) {
  const Judgment j = judgment(K::ConvTy, g, {a, b});
  if (a == b) return refl_ty(g, a);
  if (a.tag() == b.tag() && (a.is(Tag::Pi) || a.is(Tag::Sig))) {
    return node(a.is(Tag::Pi) ? "FunTyC" : "SigTyC", j,
                {derive_convty(g, a.dom(), b.dom()), derive_convty(g.extend(a.dom()), a.cod(), b.cod())});
  }
  if (a.is(Tag::Id) && b.is(Tag::Id)) {
    return node("IdTyC", j,
                {derive_convty(g, a.ty(), b.ty()), derive_convtm(g, a.ty(), a.lhs(), b.lhs()),
                 derive_convtm(g, a.ty(), a.rhs(), b.rhs())});
  }
  return node("ElC", j, {derive_convtm(g, kU, a, b)});
}

Derivation derive_convtm(const Context& g, const Term& ty, const Term& t, const Term& u) {
  return at_type(g, conv_natural(g, ty, t, u), ty);
}

Derivation derive(const Judgment& j) {
  const Context& g = j.ctx;
  const auto& t = j.terms;
  switch (j.kind) {
    case K::CtxWf:
      return derive_ctx(g);
    case K::SubstWf:
      return derive_subst(g, j.subst, j.delta);
    case K::TyWf:
      return derive_ty(g, t[0]);
    case K::Typed:
      return derive_check(g, t[0], t[1]);
    case K::ConvTy:
      return derive_convty(g, t[0], t[1]);
    case K::ConvTm:
      return derive_convtm(g, t[0], t[1], t[2]);
    case K::NeuCmp:
      return derive_neu(g, t[0], t[1], t[2]);
    case K::DnfTy:
      return dnf_ty(g, t[0]);
    case K::DnfTyRed:
      return dnf_ty_red(g, t[0]);
    case K::DnfTm:
      return dnf_tm(g, t[0], t[1]);
    case K::DnfTmRed:
      return dnf_tm_red(g, t[0], t[1]);
    case K::DneTm: {
      Derivation d = dne(g, t[0]);
      if (!(type_of(d) == t[1])) throw DeriveError("the neutral has a different type");
      return d;
    }
    case K::DneTmRed:
      return dne_red(g, t[0], t[1]);
    case K::Red:
      return node("Red", j);
  }
  throw DeriveError("unknown judgment");
}

Derivation derive_by_rule(std::string_view rule, const Judgment& conclusion, const std::map<std::string, Term>& extra) {
  auto premises = premises_for(rule, conclusion, extra);
  if (auto* err = std::get_if<std::string>(&premises)) throw DeriveError(*err);
  Derivation d{std::string(rule), conclusion, {}};
  for (const auto& j : std::get<0>(premises)) d.premises.push_back(derive(j));
  return d;
}

std::map<std::string, std::vector<Derivation>> derive_roots(const std::vector<FixtureRoot>& roots) {
  std::map<std::string, std::vector<Derivation>> out;
  for (const auto& r : roots) {
    try {
      out[r.rule].push_back(derive_by_rule(r.rule, r.conclusion, r.extra));
    } catch (const DeriveError& e) {
      throw DeriveError(r.rule + " " + print_judgment(r.conclusion) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace mltt
