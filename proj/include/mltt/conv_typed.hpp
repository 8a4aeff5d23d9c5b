#pragma once

#include <cstdint>

#include "mltt/outcome.hpp"
#include "mltt/term.hpp"

namespace mltt {

// Type-directed conversion. All five functions share the session's fuel and
// emit trace events with the rule names TyRed, CProdTy, CSigTy, CNatTy,
// CEmptyTy, CIdTy, CUniTy, NeuTy, TTmRed, FunExp, CSigEta, TFun, CSig, CNat,
// CZero, TSucc, CEmpty, CId, ReflRefl, NePos, NRed, NVar, NApp, NSig1, NSig2,
// NNatElim, NEmptyElim, NIdInd.
//
// Preconditions (not checked here): the inputs are well-typed in `ctx` as
// described per function; the `_red` variants additionally expect whnfs.

// T and T' are types in ctx.
ConvVerdict conv_ty(Session& s, const Context& ctx, const Term& ty1, const Term& ty2);
ConvVerdict conv_ty_red(Session& s, const Context& ctx, const Term& ty1, const Term& ty2);

// t and t' both have type A in ctx.
ConvVerdict conv_tm(Session& s, const Context& ctx, const Term& ty, const Term& t1, const Term& t2);
ConvVerdict conv_tm_red(Session& s, const Context& ctx, const Term& ty, const Term& t1, const Term& t2);

// Both sides are neutrals well-typed in ctx. On Accept returns the type
// inferred for the left neutral.
NeuVerdict conv_neu(Session& s, const Context& ctx, const Term& n1, const Term& n2);
// As conv_neu, with the inferred type put in whnf.
NeuVerdict conv_neu_red(Session& s, const Context& ctx, const Term& n1, const Term& n2);

inline ConvVerdict conv_ty(const Context& ctx, const Term& a, const Term& b, std::uint64_t fuel) {
  Session s(fuel);
  return conv_ty(s, ctx, a, b);
}
inline ConvVerdict conv_ty_red(const Context& ctx, const Term& a, const Term& b, std::uint64_t fuel) {
  Session s(fuel);
  return conv_ty_red(s, ctx, a, b);
}
inline ConvVerdict conv_tm(const Context& ctx, const Term& ty, const Term& a, const Term& b, std::uint64_t fuel) {
  Session s(fuel);
  return conv_tm(s, ctx, ty, a, b);
}
inline ConvVerdict conv_tm_red(const Context& ctx, const Term& ty, const Term& a, const Term& b, std::uint64_t fuel) {
  Session s(fuel);
  return conv_tm_red(s, ctx, ty, a, b);
}
inline NeuVerdict conv_neu(const Context& ctx, const Term& a, const Term& b, std::uint64_t fuel) {
  Session s(fuel);
  return conv_neu(s, ctx, a, b);
}
inline NeuVerdict conv_neu_red(const Context& ctx, const Term& a, const Term& b, std::uint64_t fuel) {
  Session s(fuel);
  return conv_neu_red(s, ctx, a, b);
}

}  // namespace mltt
