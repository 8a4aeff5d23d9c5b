#include "mltt/normalize.hpp"

#include <string>

#include "mltt/reduction.hpp"

namespace mltt {

namespace {

#define MLTT_OUT_OF_FUEL_IF(scope) \
  if (!(scope)) return OutOfFuel {}

// Binds the payload of an accepted outcome or returns its failure.
#define MLTT_BIND(var, expr, Result)                 \
  auto var##_o = (expr);                             \
  if (!var##_o.accepted()) return var##_o.template failure<Result>(); \
  const auto var = var##_o.value()

Outcome<Term> neutral_part(Session& s, const Context& ctx, const Term& n) {
  auto r = deep_nf_ne(s, ctx, n);
  if (!r.accepted()) return r.failure<Term>();
  return r.value().term;
}

}  // namespace

Outcome<Term> deep_nf_ty(Session& s, const Context& ctx, const Term& ty) {
  MLTT_BIND(u, whnf(s, ty), Term);
  switch (u.tag()) {
    case Tag::Pi:
    case Tag::Sig: {
      auto g = s.rule(u.is(Tag::Pi) ? "DnfPi" : "DnfSig");
      MLTT_OUT_OF_FUEL_IF(g);
      MLTT_BIND(dom, deep_nf_ty(s, ctx, u.dom()), Term);
      MLTT_BIND(cod, deep_nf_ty(s, ctx.extend(u.dom()), u.cod()), Term);
      return Term::make(u.tag(), {dom, cod});
    }
    case Tag::Nat:
    case Tag::Empty:
    case Tag::Univ: {
      auto g = s.rule("DnfBaseTy");
      MLTT_OUT_OF_FUEL_IF(g);
      return u;
    }
    case Tag::Id: {
      auto g = s.rule("DnfIdTy");
      MLTT_OUT_OF_FUEL_IF(g);
      MLTT_BIND(a, deep_nf_ty(s, ctx, u.ty()), Term);
      MLTT_BIND(l, deep_nf_tm(s, ctx, u.ty(), u.lhs()), Term);
      MLTT_BIND(r, deep_nf_tm(s, ctx, u.ty(), u.rhs()), Term);
      return Term::id(a, l, r);
    }
    default:
      if (is_neutral(u)) {
        auto g = s.rule("DnfNeTy");
        MLTT_OUT_OF_FUEL_IF(g);
        return neutral_part(s, ctx, u);
      }
      return s.reject("not a type: " + std::string(tag_name(u.tag())), "deep_nf_ty");
  }
}

Outcome<Term> deep_nf_tm(Session& s, const Context& ctx, const Term& ty, const Term& t) {
  MLTT_BIND(a, whnf(s, ty), Term);
  if (a.is(Tag::Pi)) {
    auto g = s.rule("DnfFun");
    MLTT_OUT_OF_FUEL_IF(g);
    MLTT_BIND(dom, deep_nf_ty(s, ctx, a.dom()), Term);
    MLTT_BIND(body, deep_nf_tm(s, ctx.extend(a.dom()), a.cod(), Term::app(shift(t), Term::var(0))), Term);
    return Term::lam(dom, body);
  }
  if (a.is(Tag::Sig)) {
    auto g = s.rule("DnfPair");
    MLTT_OUT_OF_FUEL_IF(g);
    const Term p1 = Term::fst(t);
    MLTT_BIND(dom, deep_nf_ty(s, ctx, a.dom()), Term);
    MLTT_BIND(cod, deep_nf_ty(s, ctx.extend(a.dom()), a.cod()), Term);
    MLTT_BIND(first, deep_nf_tm(s, ctx, a.dom(), p1), Term);
    MLTT_BIND(second, deep_nf_tm(s, ctx, subst1(a.cod(), p1), Term::snd(t)), Term);
    return Term::pair(dom, cod, first, second);
  }
  MLTT_BIND(u, whnf(s, t), Term);
  if (!is_pos(a)) return s.reject("not a type: " + std::string(tag_name(a.tag())), "deep_nf_tm");
  if (is_neutral(u)) {
    auto g = s.rule("DnfNe");
    MLTT_OUT_OF_FUEL_IF(g);
    return neutral_part(s, ctx, u);
  }
  const Term univ = Term::univ();
  switch (a.tag()) {
    case Tag::Univ:
      switch (u.tag()) {
        case Tag::Pi:
        case Tag::Sig: {
          auto g = s.rule(u.is(Tag::Pi) ? "DnfPiCode" : "DnfSigCode");
          MLTT_OUT_OF_FUEL_IF(g);
          MLTT_BIND(dom, deep_nf_tm(s, ctx, univ, u.dom()), Term);
          MLTT_BIND(cod, deep_nf_tm(s, ctx.extend(u.dom()), univ, u.cod()), Term);
          return Term::make(u.tag(), {dom, cod});
        }
        case Tag::Nat:
        case Tag::Empty: {
          auto g = s.rule("DnfBaseCode");
          MLTT_OUT_OF_FUEL_IF(g);
          return u;
        }
        case Tag::Id: {
          auto g = s.rule("DnfIdCode");
          MLTT_OUT_OF_FUEL_IF(g);
          MLTT_BIND(ty0, deep_nf_tm(s, ctx, univ, u.ty()), Term);
          MLTT_BIND(l, deep_nf_tm(s, ctx, u.ty(), u.lhs()), Term);
          MLTT_BIND(r, deep_nf_tm(s, ctx, u.ty(), u.rhs()), Term);
          return Term::id(ty0, l, r);
        }
        default:
          break;
      }
      break;
    case Tag::Nat:
      if (u.is(Tag::Zero)) {
        auto g = s.rule("DnfZero");
        MLTT_OUT_OF_FUEL_IF(g);
        return u;
      }
      if (u.is(Tag::Succ)) {
        auto g = s.rule("DnfSucc");
        MLTT_OUT_OF_FUEL_IF(g);
        MLTT_BIND(p, deep_nf_tm(s, ctx, a, u.pred()), Term);
        return Term::succ(p);
      }
      break;
    case Tag::Id:
      if (u.is(Tag::Refl)) {
        auto g = s.rule("DnfRefl");
        MLTT_OUT_OF_FUEL_IF(g);
        return u;
      }
      break;
    default:
      break;
  }
  return s.reject(std::string(tag_name(u.tag())) + " is not a normal form at type " + std::string(tag_name(a.tag())),
                  "deep_nf_tm");
}

Outcome<NormalNeutral> deep_nf_ne(Session& s, const Context& ctx, const Term& n) {
  using R = NormalNeutral;
  switch (n.tag()) {
    case Tag::Var: {
      auto g = s.rule("DneVar");
      MLTT_OUT_OF_FUEL_IF(g);
      auto ty = ctx.lookup(n.index());
      if (!ty) return s.reject("variable out of scope", "deep_nf_ne");
      MLTT_BIND(w, whnf(s, *ty), R);
      return R{n, w};
    }
    case Tag::App: {
      auto g = s.rule("DneApp");
      MLTT_OUT_OF_FUEL_IF(g);
      MLTT_BIND(head, deep_nf_ne(s, ctx, n.fn()), R);
      if (!head.type.is(Tag::Pi)) return s.reject("applied neutral is not a function", "deep_nf_ne");
      MLTT_BIND(arg, deep_nf_tm(s, ctx, head.type.dom(), n.arg()), R);
      MLTT_BIND(w, whnf(s, subst1(head.type.cod(), n.arg())), R);
      return R{Term::app(head.term, arg), w};
    }
    case Tag::Fst:
    case Tag::Snd: {
      const bool first = n.is(Tag::Fst);
      auto g = s.rule(first ? "DneFst" : "DneSnd");
      MLTT_OUT_OF_FUEL_IF(g);
      MLTT_BIND(inner, deep_nf_ne(s, ctx, n.scrut()), R);
      if (!inner.type.is(Tag::Sig)) return s.reject("projected neutral is not a pair", "deep_nf_ne");
      const Term ty = first ? inner.type.dom() : subst1(inner.type.cod(), Term::fst(n.scrut()));
      MLTT_BIND(w, whnf(s, ty), R);
      return R{first ? Term::fst(inner.term) : Term::snd(inner.term), w};
    }
    case Tag::NatElim: {
      auto g = s.rule("DneNatElim");
      MLTT_OUT_OF_FUEL_IF(g);
      const Term& p = n.motive();
      const Term nat = Term::nat();
      MLTT_BIND(scrut, deep_nf_ne(s, ctx, n.scrut()), R);
      if (!scrut.type.is(Tag::Nat)) return s.reject("natElim scrutinee is not a natural number", "deep_nf_ne");
      MLTT_BIND(motive, deep_nf_ty(s, ctx.extend(nat), p), R);
      MLTT_BIND(base, deep_nf_tm(s, ctx, subst1(p, Term::zero()), n.base()), R);
      MLTT_BIND(stp, deep_nf_tm(s, ctx.extend(nat, p), nat_step_type(p), n.step()), R);
      MLTT_BIND(w, whnf(s, subst1(p, n.scrut())), R);
      return R{Term::nat_elim(motive, base, stp, scrut.term), w};
    }
    case Tag::EmptyElim: {
      auto g = s.rule("DneEmptyElim");
      MLTT_OUT_OF_FUEL_IF(g);
      MLTT_BIND(scrut, deep_nf_ne(s, ctx, n.scrut()), R);
      if (!scrut.type.is(Tag::Empty)) return s.reject("emptyElim scrutinee is not empty", "deep_nf_ne");
      MLTT_BIND(motive, deep_nf_ty(s, ctx.extend(Term::empty()), n.motive()), R);
      MLTT_BIND(w, whnf(s, subst1(n.motive(), n.scrut())), R);
      return R{Term::empty_elim(motive, scrut.term), w};
    }
    case Tag::IdElim: {
      auto g = s.rule("DneIdElim");
      MLTT_OUT_OF_FUEL_IF(g);
      const Term& p = n.motive();
      MLTT_BIND(scrut, deep_nf_ne(s, ctx, n.scrut()), R);
      if (!scrut.type.is(Tag::Id)) return s.reject("idElim scrutinee is not an identity proof", "deep_nf_ne");
      MLTT_BIND(motive, deep_nf_ty(s, id_motive_context(ctx, n.ty(), n.lhs()), p), R);
      MLTT_BIND(br, deep_nf_tm(s, ctx, id_branch_type(p, n.ty(), n.lhs()), n.branch()), R);
      MLTT_BIND(w, whnf(s, subst2(p, scrut.type.rhs(), n.scrut())), R);
      return R{Term::id_elim(n.ty(), n.lhs(), motive, br, scrut.term), w};
    }
    default:
      return s.reject("not a neutral: " + std::string(tag_name(n.tag())), "deep_nf_ne");
  }
}

Term erase_annotations(const Term& t) {
  if (t.is(Tag::Var)) return t;
  const Term u = Term::univ();
  Term r = map_children(t, [](const Term& c, std::size_t) { return erase_annotations(c); });
  switch (r.tag()) {
    case Tag::Lam:
      return Term::lam(u, r.body());
    case Tag::Pair:
      return Term::pair(u, u, r.first(), r.second());
    case Tag::Refl:
      return Term::refl(u, u);
    case Tag::IdElim:
      return Term::id_elim(u, u, r.motive(), r.branch(), r.scrut());
    default:
      return r;
  }
}

}  // namespace mltt
