#pragma once

#include <cstdint>

#include "mltt/outcome.hpp"
#include "mltt/term.hpp"

namespace mltt {

// Term-directed ("untyped") conversion. No types are consulted: eta is
// handled by the lambda-vs-neutral and pair-vs-neutral rules and there is
// no eta between two neutrals. Trace rule names: UTmRed, CUni, CFun, CLam,
// CLamNe, CNeLam, CSig, CPair, CPairNe, CNePair, CNat, CZero, CSucc, CEmpty,
// CId, ReflRefl, NeuNeu, UVar, UApp, NSig1, NSig2, NNatElim, NEmptyElim,
// NIdInd.
//
// Precondition (never inspected): both sides have a common type in some
// context.
ConvVerdict uconv(Session& s, const Term& t1, const Term& t2);
ConvVerdict uconv_red(Session& s, const Term& t1, const Term& t2);
ConvVerdict uconv_neu(Session& s, const Term& n1, const Term& n2);

inline ConvVerdict uconv(const Term& a, const Term& b, std::uint64_t fuel) {
  Session s(fuel);
  return uconv(s, a, b);
}
inline ConvVerdict uconv_red(const Term& a, const Term& b, std::uint64_t fuel) {
  Session s(fuel);
  return uconv_red(s, a, b);
}
inline ConvVerdict uconv_neu(const Term& a, const Term& b, std::uint64_t fuel) {
  Session s(fuel);
  return uconv_neu(s, a, b);
}

}  // namespace mltt
