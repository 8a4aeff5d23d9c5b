#include "mltt/conv_typed.hpp"

#include <string>

#include "mltt/reduction.hpp"

namespace mltt {

namespace {

std::string mismatch(const Term& a, const Term& b) {
  return std::string(tag_name(a.tag())) + " vs " + std::string(tag_name(b.tag()));
}

// Sequences sub-verdicts: the first non-Accept wins.
#define MLTT_TRY(expr)                  \
  do {                                  \
    ConvVerdict mltt_v_ = (expr);       \
    if (!mltt_v_.accepted()) return mltt_v_; \
  } while (0)

#define MLTT_OUT_OF_FUEL_IF(scope) \
  if (!(scope)) return OutOfFuel {}

}  // namespace

ConvVerdict conv_ty(Session& s, const Context& ctx, const Term& ty1, const Term& ty2) {
  auto g = s.wrapper("TyRed");
  auto a = whnf(s, ty1);
  if (!a.accepted()) return a.failure<Unit>();
  auto b = whnf(s, ty2);
  if (!b.accepted()) return b.failure<Unit>();
  return conv_ty_red(s, ctx, a.value(), b.value());
}

ConvVerdict conv_ty_red(Session& s, const Context& ctx, const Term& a, const Term& b) {
  if (a.tag() == b.tag()) {
    switch (a.tag()) {
      case Tag::Pi: {
        auto g = s.rule("CProdTy");
        MLTT_OUT_OF_FUEL_IF(g);
        MLTT_TRY(conv_ty(s, ctx, a.dom(), b.dom()));
        return conv_ty(s, ctx.extend(b.dom()), a.cod(), b.cod());
      }
      case Tag::Sig: {
        auto g = s.rule("CSigTy");
        MLTT_OUT_OF_FUEL_IF(g);
        MLTT_TRY(conv_ty(s, ctx, a.dom(), b.dom()));
        return conv_ty(s, ctx.extend(a.dom()), a.cod(), b.cod());
      }
      case Tag::Nat: {
        auto g = s.rule("CNatTy");
        MLTT_OUT_OF_FUEL_IF(g);
        return accept();
      }
      case Tag::Empty: {
        auto g = s.rule("CEmptyTy");
        MLTT_OUT_OF_FUEL_IF(g);
        return accept();
      }
      case Tag::Univ: {
        auto g = s.rule("CUniTy");
        MLTT_OUT_OF_FUEL_IF(g);
        return accept();
      }
      case Tag::Id: {
        auto g = s.rule("CIdTy");
        MLTT_OUT_OF_FUEL_IF(g);
        MLTT_TRY(conv_ty(s, ctx, a.ty(), b.ty()));
        MLTT_TRY(conv_tm(s, ctx, a.ty(), a.lhs(), b.lhs()));
        return conv_tm(s, ctx, a.ty(), a.rhs(), b.rhs());
      }
      default:
        break;
    }
  }
  if (is_neutral(a) && is_neutral(b)) {
    auto g = s.rule("NeuTy");
    MLTT_OUT_OF_FUEL_IF(g);
    auto n = conv_neu(s, ctx, a, b);
    if (!n.accepted()) return n.failure<Unit>();
    return accept();
  }
  return s.reject("types differ: " + mismatch(a, b), "conv_ty_red");
}

ConvVerdict conv_tm(Session& s, const Context& ctx, const Term& ty, const Term& t1, const Term& t2) {
  auto g = s.wrapper("TTmRed");
  auto a = whnf(s, ty);
  if (!a.accepted()) return a.failure<Unit>();
  auto u1 = whnf(s, t1);
  if (!u1.accepted()) return u1.failure<Unit>();
  auto u2 = whnf(s, t2);
  if (!u2.accepted()) return u2.failure<Unit>();
  return conv_tm_red(s, ctx, a.value(), u1.value(), u2.value());
}

ConvVerdict conv_tm_red(Session& s, const Context& ctx, const Term& ty, const Term& t1, const Term& t2) {
  // Negative types: compare observations.
  if (ty.is(Tag::Pi)) {
    auto g = s.rule("FunExp");
    MLTT_OUT_OF_FUEL_IF(g);
    const Term x = Term::var(0);
    return conv_tm(s, ctx.extend(ty.dom()), ty.cod(), Term::app(shift(t1), x), Term::app(shift(t2), x));
  }
  if (ty.is(Tag::Sig)) {
    auto g = s.rule("CSigEta");
    MLTT_OUT_OF_FUEL_IF(g);
    const Term p1 = Term::fst(t1);
    MLTT_TRY(conv_tm(s, ctx, ty.dom(), p1, Term::fst(t2)));
    return conv_tm(s, ctx, subst1(ty.cod(), p1), Term::snd(t1), Term::snd(t2));
  }
  if (!is_pos(ty)) return s.reject("not a type in whnf: " + std::string(tag_name(ty.tag())), "conv_tm_red");

  if (is_neutral(t1) && is_neutral(t2)) {
    auto g = s.rule("NePos");
    MLTT_OUT_OF_FUEL_IF(g);
    auto n = conv_neu(s, ctx, t1, t2);
    if (!n.accepted()) return n.failure<Unit>();
    return accept();
  }
  if (t1.tag() != t2.tag() || !is_canonical(t1)) {
    return s.reject("terms differ: " + mismatch(t1, t2), "conv_tm_red");
  }

  // Positive types: congruence on matching canonical forms.
  const Term univ = Term::univ();
  switch (ty.tag()) {
    case Tag::Univ:
      switch (t1.tag()) {
        case Tag::Pi: {
          auto g = s.rule("TFun");
          MLTT_OUT_OF_FUEL_IF(g);
          MLTT_TRY(conv_tm(s, ctx, univ, t1.dom(), t2.dom()));
          return conv_tm(s, ctx.extend(t2.dom()), univ, t1.cod(), t2.cod());
        }
        case Tag::Sig: {
          auto g = s.rule("CSig");
          MLTT_OUT_OF_FUEL_IF(g);
          MLTT_TRY(conv_tm(s, ctx, univ, t1.dom(), t2.dom()));
          return conv_tm(s, ctx.extend(t2.dom()), univ, t1.cod(), t2.cod());
        }
        case Tag::Nat: {
          auto g = s.rule("CNat");
          MLTT_OUT_OF_FUEL_IF(g);
          return accept();
        }
        case Tag::Empty: {
          auto g = s.rule("CEmpty");
          MLTT_OUT_OF_FUEL_IF(g);
          return accept();
        }
        case Tag::Id: {
          auto g = s.rule("CId");
          MLTT_OUT_OF_FUEL_IF(g);
          MLTT_TRY(conv_tm(s, ctx, univ, t1.ty(), t2.ty()));
          MLTT_TRY(conv_tm(s, ctx, t1.ty(), t1.lhs(), t2.lhs()));
          return conv_tm(s, ctx, t1.ty(), t1.rhs(), t2.rhs());
        }
        default:
          break;
      }
      break;
    case Tag::Nat:
      if (t1.is(Tag::Zero)) {
        auto g = s.rule("CZero");
        MLTT_OUT_OF_FUEL_IF(g);
        return accept();
      }
      if (t1.is(Tag::Succ)) {
        auto g = s.rule("TSucc");
        MLTT_OUT_OF_FUEL_IF(g);
        return conv_tm(s, ctx, ty, t1.pred(), t2.pred());
      }
      break;
    case Tag::Id:
      if (t1.is(Tag::Refl)) {
        auto g = s.rule("ReflRefl");
        MLTT_OUT_OF_FUEL_IF(g);
        return accept();
      }
      break;
    default:
      break;
  }
  return s.reject(std::string(tag_name(t1.tag())) + " is not a canonical form of type " +
                      std::string(tag_name(ty.tag())),
                  "conv_tm_red");
}

NeuVerdict conv_neu(Session& s, const Context& ctx, const Term& n1, const Term& n2) {
  if (n1.tag() != n2.tag()) return s.reject("neutrals differ: " + mismatch(n1, n2), "conv_neu");
  switch (n1.tag()) {
    case Tag::Var: {
      auto g = s.rule("NVar");
      MLTT_OUT_OF_FUEL_IF(g);
      if (n1.index() != n2.index()) {
        return s.reject("distinct variables " + std::to_string(n1.index()) + " and " + std::to_string(n2.index()),
                        "conv_neu");
      }
      auto ty = ctx.lookup(n1.index());
      if (!ty) return s.reject("variable out of scope", "conv_neu");
      return *ty;
    }
    case Tag::App: {
      auto g = s.rule("NApp");
      MLTT_OUT_OF_FUEL_IF(g);
      auto head = conv_neu_red(s, ctx, n1.fn(), n2.fn());
      if (!head.accepted()) return head;
      const Term& fty = head.value();
      if (!fty.is(Tag::Pi)) return s.reject("applied neutral has type " + std::string(tag_name(fty.tag())), "conv_neu");
      auto arg = conv_tm(s, ctx, fty.dom(), n1.arg(), n2.arg());
      if (!arg.accepted()) return arg.failure<Term>();
      return subst1(fty.cod(), n1.arg());
    }
    case Tag::Fst:
    case Tag::Snd: {
      const bool first = n1.is(Tag::Fst);
      auto g = s.rule(first ? "NSig1" : "NSig2");
      MLTT_OUT_OF_FUEL_IF(g);
      auto inner = conv_neu_red(s, ctx, n1.scrut(), n2.scrut());
      if (!inner.accepted()) return inner;
      const Term& pty = inner.value();
      if (!pty.is(Tag::Sig)) return s.reject("projected neutral has type " + std::string(tag_name(pty.tag())), "conv_neu");
      if (first) return pty.dom();
      return subst1(pty.cod(), Term::fst(n1.scrut()));
    }
    case Tag::NatElim: {
      auto g = s.rule("NNatElim");
      MLTT_OUT_OF_FUEL_IF(g);
      auto scrut = conv_neu_red(s, ctx, n1.scrut(), n2.scrut());
      if (!scrut.accepted()) return scrut;
      if (!scrut.value().is(Tag::Nat)) return s.reject("natElim scrutinee is not a natural number", "conv_neu");
      const Term& p = n1.motive();
      auto motive = conv_ty(s, ctx.extend(Term::nat()), p, n2.motive());
      if (!motive.accepted()) return motive.failure<Term>();
      auto base = conv_tm(s, ctx, subst1(p, Term::zero()), n1.base(), n2.base());
      if (!base.accepted()) return base.failure<Term>();
      auto stp = conv_tm(s, ctx.extend(Term::nat(), p), nat_step_type(p), n1.step(), n2.step());
      if (!stp.accepted()) return stp.failure<Term>();
      return subst1(p, n1.scrut());
    }
    case Tag::EmptyElim: {
      auto g = s.rule("NEmptyElim");
      MLTT_OUT_OF_FUEL_IF(g);
      auto scrut = conv_neu_red(s, ctx, n1.scrut(), n2.scrut());
      if (!scrut.accepted()) return scrut;
      if (!scrut.value().is(Tag::Empty)) return s.reject("emptyElim scrutinee is not of the empty type", "conv_neu");
      auto motive = conv_ty(s, ctx.extend(Term::empty()), n1.motive(), n2.motive());
      if (!motive.accepted()) return motive.failure<Term>();
      return subst1(n1.motive(), n1.scrut());
    }
    case Tag::IdElim: {
      auto g = s.rule("NIdInd");
      MLTT_OUT_OF_FUEL_IF(g);
      auto scrut = conv_neu_red(s, ctx, n1.scrut(), n2.scrut());
      if (!scrut.accepted()) return scrut;
      const Term& ity = scrut.value();
      if (!ity.is(Tag::Id)) return s.reject("idElim scrutinee is not an identity proof", "conv_neu");
      const Term& p = n1.motive();
      auto motive = conv_ty(s, id_motive_context(ctx, n1.ty(), n1.lhs()), p, n2.motive());
      if (!motive.accepted()) return motive.failure<Term>();
      auto br = conv_tm(s, ctx, id_branch_type(p, n1.ty(), n1.lhs()), n1.branch(), n2.branch());
      if (!br.accepted()) return br.failure<Term>();
      return subst2(p, ity.rhs(), n1.scrut());
    }
    default:
      return s.reject("not a neutral: " + std::string(tag_name(n1.tag())), "conv_neu");
  }
}

NeuVerdict conv_neu_red(Session& s, const Context& ctx, const Term& n1, const Term& n2) {
  auto g = s.wrapper("NRed");
  auto ty = conv_neu(s, ctx, n1, n2);
  if (!ty.accepted()) return ty;
  return whnf(s, ty.value());
}

}  // namespace mltt
