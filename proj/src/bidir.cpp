#include "mltt/bidir.hpp"

#include <string>

#include "mltt/conv_typed.hpp"
#include "mltt/conv_untyped.hpp"
#include "mltt/reduction.hpp"

namespace mltt {

ConvVerdict TypedBackend::type_conv(Session& s, const Context& ctx, const Term& a, const Term& b) const {
  return conv_ty(s, ctx, a, b);
}
ConvVerdict TypedBackend::term_conv(Session& s, const Context& ctx, const Term& ty, const Term& a,
                                    const Term& b) const {
  return conv_tm(s, ctx, ty, a, b);
}
ConvVerdict UntypedBackend::type_conv(Session& s, const Context&, const Term& a, const Term& b) const {
  return uconv(s, a, b);
}
ConvVerdict UntypedBackend::term_conv(Session& s, const Context&, const Term&, const Term& a,
                                      const Term& b) const {
  return uconv(s, a, b);
}

const ConvBackend& typed_backend() {
  static const TypedBackend b;
  return b;
}
const ConvBackend& untyped_backend() {
  static const UntypedBackend b;
  return b;
}
const ConvBackend& backend(Algo algo) { return algo == Algo::Typed ? typed_backend() : untyped_backend(); }

namespace {

#define MLTT_TRY(expr)                       \
  do {                                       \
    ConvVerdict mltt_v_ = (expr);            \
    if (!mltt_v_.accepted()) return mltt_v_; \
  } while (0)

// For functions returning InferVerdict.
#define MLTT_TRY_T(expr)                                   \
  do {                                                     \
    ConvVerdict mltt_v_ = (expr);                          \
    if (!mltt_v_.accepted()) return mltt_v_.failure<Term>(); \
  } while (0)

#define MLTT_OUT_OF_FUEL_IF(scope) \
  if (!(scope)) return OutOfFuel {}

std::string head(const Term& t) { return std::string(tag_name(t.tag())); }

// infer_red, then demand a universe.
ConvVerdict infer_univ(Session& s, const Context& ctx, const Term& t, const ConvBackend& conv) {
  auto r = infer_red(s, ctx, t, conv);
  if (!r.accepted()) return r.failure<Unit>();
  if (!r.value().is(Tag::Univ)) return s.reject("expected a type code, inferred " + head(r.value()), "infer");
  return accept();
}

}  // namespace

ConvVerdict check_ty(Session& s, const Context& ctx, const Term& ty, const ConvBackend& conv) {
  switch (ty.tag()) {
    case Tag::Univ: {
      auto g = s.rule("Sort");
      MLTT_OUT_OF_FUEL_IF(g);
      return accept();
    }
    case Tag::Pi:
    case Tag::Sig: {
      auto g = s.rule(ty.is(Tag::Pi) ? "FunTy" : "SigTy");
      MLTT_OUT_OF_FUEL_IF(g);
      MLTT_TRY(check_ty(s, ctx, ty.dom(), conv));
      return check_ty(s, ctx.extend(ty.dom()), ty.cod(), conv);
    }
    case Tag::Nat: {
      auto g = s.rule("NatTy");
      MLTT_OUT_OF_FUEL_IF(g);
      return accept();
    }
    case Tag::Empty: {
      auto g = s.rule("EmptyTy");
      MLTT_OUT_OF_FUEL_IF(g);
      return accept();
    }
    case Tag::Id: {
      auto g = s.rule("IdTy");
      MLTT_OUT_OF_FUEL_IF(g);
      MLTT_TRY(check_ty(s, ctx, ty.ty(), conv));
      MLTT_TRY(check(s, ctx, ty.lhs(), ty.ty(), conv));
      return check(s, ctx, ty.rhs(), ty.ty(), conv);
    }
    default: {
      auto g = s.rule("El");
      MLTT_OUT_OF_FUEL_IF(g);
      return infer_univ(s, ctx, ty, conv);
    }
  }
}

InferVerdict infer(Session& s, const Context& ctx, const Term& t, const ConvBackend& conv) {
  const Term univ = Term::univ();
  const Term nat = Term::nat();
  switch (t.tag()) {
    case Tag::Var: {
      auto g = s.rule("Var");
      MLTT_OUT_OF_FUEL_IF(g);
      auto ty = ctx.lookup(t.index());
      if (!ty) return s.reject("variable " + std::to_string(t.index()) + " is out of scope", "infer");
      return *ty;
    }
    case Tag::Univ:
      return s.reject("the universe is not a term of any type", "infer");
    case Tag::Pi:
    case Tag::Sig: {
      auto g = s.rule(t.is(Tag::Pi) ? "Fun" : "SigUniv");
      MLTT_OUT_OF_FUEL_IF(g);
      MLTT_TRY_T(infer_univ(s, ctx, t.dom(), conv));
      MLTT_TRY_T(infer_univ(s, ctx.extend(t.dom()), t.cod(), conv));
      return univ;
    }
    case Tag::Lam: {
      auto g = s.rule("Abs");
      MLTT_OUT_OF_FUEL_IF(g);
      MLTT_TRY_T(check_ty(s, ctx, t.ann(), conv));
      auto body = infer(s, ctx.extend(t.ann()), t.body(), conv);
      if (!body.accepted()) return body;
      return Term::pi(t.ann(), body.value());
    }
    case Tag::App: {
      auto g = s.rule("App");
      MLTT_OUT_OF_FUEL_IF(g);
      auto fty = infer_red(s, ctx, t.fn(), conv);
      if (!fty.accepted()) return fty;
      if (!fty.value().is(Tag::Pi)) return s.reject("applying a term of type " + head(fty.value()), "infer");
      MLTT_TRY_T(check(s, ctx, t.arg(), fty.value().dom(), conv));
      return subst1(fty.value().cod(), t.arg());
    }
    case Tag::Pair: {
      auto g = s.rule("Pair");
      MLTT_OUT_OF_FUEL_IF(g);
      MLTT_TRY_T(check_ty(s, ctx, t.dom(), conv));
      MLTT_TRY_T(check_ty(s, ctx.extend(t.dom()), t.cod(), conv));
      MLTT_TRY_T(check(s, ctx, t.first(), t.dom(), conv));
      MLTT_TRY_T(check(s, ctx, t.second(), subst1(t.cod(), t.first()), conv));
      return Term::sig(t.dom(), t.cod());
    }
    case Tag::Fst:
    case Tag::Snd: {
      const bool first = t.is(Tag::Fst);
      auto g = s.rule(first ? "Proj1" : "Proj2");
      MLTT_OUT_OF_FUEL_IF(g);
      auto pty = infer_red(s, ctx, t.scrut(), conv);
      if (!pty.accepted()) return pty;
      if (!pty.value().is(Tag::Sig)) return s.reject("projecting from a term of type " + head(pty.value()), "infer");
      if (first) return pty.value().dom();
      return subst1(pty.value().cod(), Term::fst(t.scrut()));
    }
    case Tag::Nat: {
      auto g = s.rule("NatUniv");
      MLTT_OUT_OF_FUEL_IF(g);
      return univ;
    }
    case Tag::Zero: {
      auto g = s.rule("Zero");
      MLTT_OUT_OF_FUEL_IF(g);
      return nat;
    }
    case Tag::Succ: {
      auto g = s.rule("Succ");
      MLTT_OUT_OF_FUEL_IF(g);
      MLTT_TRY_T(check(s, ctx, t.pred(), nat, conv));
      return nat;
    }
    case Tag::NatElim: {
      auto g = s.rule("NatRec");
      MLTT_OUT_OF_FUEL_IF(g);
      const Term& p = t.motive();
      MLTT_TRY_T(check(s, ctx, t.scrut(), nat, conv));
      MLTT_TRY_T(check_ty(s, ctx.extend(nat), p, conv));
      MLTT_TRY_T(check(s, ctx, t.base(), subst1(p, Term::zero()), conv));
      MLTT_TRY_T(check(s, ctx.extend(nat, p), t.step(), nat_step_type(p), conv));
      return subst1(p, t.scrut());
    }
    case Tag::Empty: {
      auto g = s.rule("Empty");
      MLTT_OUT_OF_FUEL_IF(g);
      return univ;
    }
    case Tag::EmptyElim: {
      auto g = s.rule("EmptyInd");
      MLTT_OUT_OF_FUEL_IF(g);
      MLTT_TRY_T(check(s, ctx, t.scrut(), Term::empty(), conv));
      MLTT_TRY_T(check_ty(s, ctx.extend(Term::empty()), t.motive(), conv));
      return subst1(t.motive(), t.scrut());
    }
    case Tag::Id: {
      auto g = s.rule("IdTy");
      MLTT_OUT_OF_FUEL_IF(g);
      MLTT_TRY_T(infer_univ(s, ctx, t.ty(), conv));
      MLTT_TRY_T(check(s, ctx, t.lhs(), t.ty(), conv));
      MLTT_TRY_T(check(s, ctx, t.rhs(), t.ty(), conv));
      return univ;
    }
    case Tag::Refl: {
      auto g = s.rule("ReflTm");
      MLTT_OUT_OF_FUEL_IF(g);
      MLTT_TRY_T(check_ty(s, ctx, t.ty(), conv));
      MLTT_TRY_T(check(s, ctx, t.tm(), t.ty(), conv));
      return Term::id(t.ty(), t.tm(), t.tm());
    }
    case Tag::IdElim: {
      auto g = s.rule("IdInd");
      MLTT_OUT_OF_FUEL_IF(g);
      const Term& a = t.ty();
      const Term& lhs = t.lhs();
      MLTT_TRY_T(check_ty(s, ctx, a, conv));
      MLTT_TRY_T(check(s, ctx, lhs, a, conv));
      auto ety = infer_red(s, ctx, t.scrut(), conv);
      if (!ety.accepted()) return ety;
      if (!ety.value().is(Tag::Id)) return s.reject("eliminating a term of type " + head(ety.value()), "infer");
      const Term& rhs = ety.value().rhs();
      // The scrutinee must be an equation out of the annotated point.
      MLTT_TRY_T(conv.type_conv(s, ctx, ety.value(), Term::id(a, lhs, rhs)));
      MLTT_TRY_T(check_ty(s, id_motive_context(ctx, a, lhs), t.motive(), conv));
      MLTT_TRY_T(check(s, ctx, t.branch(), id_branch_type(t.motive(), a, lhs), conv));
      return subst2(t.motive(), rhs, t.scrut());
    }
  }
  return s.reject("unknown term former", "infer");
}

InferVerdict infer_red(Session& s, const Context& ctx, const Term& t, const ConvBackend& conv) {
  auto g = s.wrapper("InfRed");
  auto ty = infer(s, ctx, t, conv);
  if (!ty.accepted()) return ty;
  return whnf(s, ty.value());
}

ConvVerdict check(Session& s, const Context& ctx, const Term& t, const Term& ty, const ConvBackend& conv) {
  auto g = s.rule("Check");
  MLTT_OUT_OF_FUEL_IF(g);
  auto inferred = infer(s, ctx, t, conv);
  if (inferred.out_of_fuel()) return OutOfFuel{};
  if (inferred.rejected()) {
    Reject r = inferred.reason();
    r.message = "inference: " + r.message;
    return r;
  }
  auto c = conv.type_conv(s, ctx, inferred.value(), ty);
  if (c.rejected()) {
    Reject r = c.reason();
    r.message = "conversion: " + r.message;
    return r;
  }
  return c;
}

ConvVerdict check_ctx(Session& s, const Context& ctx, const ConvBackend& conv) {
  Context prefix;
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    const Term& entry = ctx.entries()[i];
    auto v = check_ty(s, prefix, entry, conv);
    if (v.out_of_fuel()) return v;
    if (v.rejected()) {
      Reject r = v.reason();
      r.message = "context entry " + std::to_string(i) + ": " + r.message;
      return r;
    }
    prefix = prefix.extend(entry);
  }
  return accept();
}

namespace {

ConvVerdict precondition(ConvVerdict v, std::string_view what) {
  if (v.accepted()) return v;
  if (v.out_of_fuel()) return Reject{"precondition: fuel exhausted checking " + std::string(what), {"precondition"}};
  return Reject{"precondition: " + std::string(what) + ": " + v.reason().message, {"precondition"}};
}

}  // namespace

ConvVerdict precondition_conv_ty(const Context& ctx, const Term& a, const Term& b, std::uint64_t fuel) {
  const auto& conv = typed_backend();
  auto c = precondition(check_ctx(ctx, conv, fuel), "context");
  if (!c.accepted()) return c;
  auto l = precondition(check_ty(ctx, a, conv, fuel), "left type");
  if (!l.accepted()) return l;
  return precondition(check_ty(ctx, b, conv, fuel), "right type");
}

ConvVerdict precondition_conv_tm(const Context& ctx, const Term& ty, const Term& a, const Term& b,
                                 std::uint64_t fuel) {
  const auto& conv = typed_backend();
  auto c = precondition(check_ctx(ctx, conv, fuel), "context");
  if (!c.accepted()) return c;
  auto t = precondition(check_ty(ctx, ty, conv, fuel), "type");
  if (!t.accepted()) return t;
  auto l = precondition(check(ctx, a, ty, conv, fuel), "left term");
  if (!l.accepted()) return l;
  return precondition(check(ctx, b, ty, conv, fuel), "right term");
}

}  // namespace mltt
