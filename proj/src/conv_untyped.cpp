#include "mltt/conv_untyped.hpp"

#include <string>

#include "mltt/reduction.hpp"

namespace mltt {

namespace {

#define MLTT_TRY(expr)                       \
  do {                                       \
    ConvVerdict mltt_v_ = (expr);            \
    if (!mltt_v_.accepted()) return mltt_v_; \
  } while (0)

#define MLTT_OUT_OF_FUEL_IF(scope) \
  if (!(scope)) return OutOfFuel {}

std::string mismatch(const Term& a, const Term& b) {
  return std::string(tag_name(a.tag())) + " vs " + std::string(tag_name(b.tag()));
}

// Rules with no premises.
ConvVerdict axiom(Session& s, const char* rule) {
  auto g = s.rule(rule);
  MLTT_OUT_OF_FUEL_IF(g);
  return accept();
}

}  // namespace

ConvVerdict uconv(Session& s, const Term& t1, const Term& t2) {
  auto g = s.wrapper("UTmRed");
  auto u1 = whnf(s, t1);
  if (!u1.accepted()) return u1.failure<Unit>();
  auto u2 = whnf(s, t2);
  if (!u2.accepted()) return u2.failure<Unit>();
  return uconv_red(s, u1.value(), u2.value());
}

ConvVerdict uconv_red(Session& s, const Term& a, const Term& b) {
  const bool na = is_neutral(a);
  const bool nb = is_neutral(b);
  if (na && nb) {
    auto g = s.rule("NeuNeu");
    MLTT_OUT_OF_FUEL_IF(g);
    return uconv_neu(s, a, b);
  }
  const Term x = Term::var(0);
  if (a.is(Tag::Lam) && nb) {
    auto g = s.rule("CLamNe");
    MLTT_OUT_OF_FUEL_IF(g);
    return uconv(s, a.body(), Term::app(shift(b), x));
  }
  if (na && b.is(Tag::Lam)) {
    auto g = s.rule("CNeLam");
    MLTT_OUT_OF_FUEL_IF(g);
    return uconv(s, Term::app(shift(a), x), b.body());
  }
  if (a.is(Tag::Pair) && nb) {
    auto g = s.rule("CPairNe");
    MLTT_OUT_OF_FUEL_IF(g);
    MLTT_TRY(uconv(s, a.first(), Term::fst(b)));
    return uconv(s, a.second(), Term::snd(b));
  }
  if (na && b.is(Tag::Pair)) {
    auto g = s.rule("CNePair");
    MLTT_OUT_OF_FUEL_IF(g);
    MLTT_TRY(uconv(s, Term::fst(a), b.first()));
    return uconv(s, Term::snd(a), b.second());
  }
  if (a.tag() != b.tag() || !is_canonical(a)) return s.reject("terms differ: " + mismatch(a, b), "uconv_red");

  switch (a.tag()) {
    case Tag::Univ:
      return axiom(s, "CUni");
    case Tag::Pi: {
      auto g = s.rule("CFun");
      MLTT_OUT_OF_FUEL_IF(g);
      MLTT_TRY(uconv(s, a.dom(), b.dom()));
      return uconv(s, a.cod(), b.cod());
    }
    case Tag::Lam: {
      auto g = s.rule("CLam");
      MLTT_OUT_OF_FUEL_IF(g);
      return uconv(s, a.body(), b.body());
    }
    case Tag::Sig: {
      auto g = s.rule("CSig");
      MLTT_OUT_OF_FUEL_IF(g);
      MLTT_TRY(uconv(s, a.dom(), b.dom()));
      return uconv(s, a.cod(), b.cod());
    }
    case Tag::Pair: {
      auto g = s.rule("CPair");
      MLTT_OUT_OF_FUEL_IF(g);
      MLTT_TRY(uconv(s, a.first(), b.first()));
      return uconv(s, a.second(), b.second());
    }
    case Tag::Nat:
      return axiom(s, "CNat");
    case Tag::Zero:
      return axiom(s, "CZero");
    case Tag::Succ: {
      auto g = s.rule("CSucc");
      MLTT_OUT_OF_FUEL_IF(g);
      return uconv(s, a.pred(), b.pred());
    }
    case Tag::Empty:
      return axiom(s, "CEmpty");
    case Tag::Id: {
      auto g = s.rule("CId");
      MLTT_OUT_OF_FUEL_IF(g);
      MLTT_TRY(uconv(s, a.ty(), b.ty()));
      MLTT_TRY(uconv(s, a.lhs(), b.lhs()));
      return uconv(s, a.rhs(), b.rhs());
    }
    case Tag::Refl:
      return axiom(s, "ReflRefl");
    default:
      return s.reject("terms differ: " + mismatch(a, b), "uconv_red");
  }
}

ConvVerdict uconv_neu(Session& s, const Term& n1, const Term& n2) {
  if (n1.tag() != n2.tag()) return s.reject("neutrals differ: " + mismatch(n1, n2), "uconv_neu");
  switch (n1.tag()) {
    case Tag::Var: {
      auto g = s.rule("UVar");
      MLTT_OUT_OF_FUEL_IF(g);
      if (n1.index() != n2.index()) {
        return s.reject("distinct variables " + std::to_string(n1.index()) + " and " + std::to_string(n2.index()),
                        "uconv_neu");
      }
      return accept();
    }
    case Tag::App: {
      auto g = s.rule("UApp");
      MLTT_OUT_OF_FUEL_IF(g);
      MLTT_TRY(uconv_neu(s, n1.fn(), n2.fn()));
      return uconv(s, n1.arg(), n2.arg());
    }
    case Tag::Fst: {
      auto g = s.rule("NSig1");
      MLTT_OUT_OF_FUEL_IF(g);
      return uconv_neu(s, n1.scrut(), n2.scrut());
    }
    case Tag::Snd: {
      auto g = s.rule("NSig2");
      MLTT_OUT_OF_FUEL_IF(g);
      return uconv_neu(s, n1.scrut(), n2.scrut());
    }
    case Tag::NatElim: {
      auto g = s.rule("NNatElim");
      MLTT_OUT_OF_FUEL_IF(g);
      MLTT_TRY(uconv_neu(s, n1.scrut(), n2.scrut()));
      MLTT_TRY(uconv(s, n1.motive(), n2.motive()));
      MLTT_TRY(uconv(s, n1.base(), n2.base()));
      return uconv(s, n1.step(), n2.step());
    }
    case Tag::EmptyElim: {
      auto g = s.rule("NEmptyElim");
      MLTT_OUT_OF_FUEL_IF(g);
      MLTT_TRY(uconv_neu(s, n1.scrut(), n2.scrut()));
      return uconv(s, n1.motive(), n2.motive());
    }
    case Tag::IdElim: {
      auto g = s.rule("NIdInd");
      MLTT_OUT_OF_FUEL_IF(g);
      MLTT_TRY(uconv_neu(s, n1.scrut(), n2.scrut()));
      MLTT_TRY(uconv(s, n1.motive(), n2.motive()));
      return uconv(s, n1.branch(), n2.branch());
    }
    default:
      return s.reject("not a neutral: " + std::string(tag_name(n1.tag())), "uconv_neu");
  }
}

}  // namespace mltt
