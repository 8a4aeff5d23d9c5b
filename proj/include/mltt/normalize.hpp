#pragma once

#include <cstdint>
#include <utility>

#include "mltt/outcome.hpp"
#include "mltt/term.hpp"

namespace mltt {

// Type-directed deep normalisation to eta-long normal forms. Functions are
// expanded to lambdas whose annotation is the normalised domain, pairs to
// pairs of normalised projections; refl and the type/point annotations of
// idElim are left untouched. Every rule application costs one unit of fuel,
// every weak-head step one more.
//
// Rejects only on ill-typed input (a term that is not a canonical form or
// neutral of its type).
Outcome<Term> deep_nf_ty(Session& s, const Context& ctx, const Term& ty);
Outcome<Term> deep_nf_tm(Session& s, const Context& ctx, const Term& ty, const Term& t);

struct NormalNeutral {
  Term term;
  Term type;  // whnf of the inferred type
};
Outcome<NormalNeutral> deep_nf_ne(Session& s, const Context& ctx, const Term& n);

inline Outcome<Term> deep_nf_ty(const Context& ctx, const Term& ty, std::uint64_t fuel) {
  Session s(fuel);
  return deep_nf_ty(s, ctx, ty);
}
inline Outcome<Term> deep_nf_tm(const Context& ctx, const Term& ty, const Term& t, std::uint64_t fuel) {
  Session s(fuel);
  return deep_nf_tm(s, ctx, ty, t);
}
inline Outcome<NormalNeutral> deep_nf_ne(const Context& ctx, const Term& n, std::uint64_t fuel) {
  Session s(fuel);
  return deep_nf_ne(s, ctx, n);
}

// Replaces the annotations the conversion algorithms never compare (lambda
// domains, pair type annotations, refl arguments, idElim type and point)
// with Univ, so that two normal forms can be compared up to annotations.
Term erase_annotations(const Term& t);

}  // namespace mltt
