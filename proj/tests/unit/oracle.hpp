#pragma once

// Test-only reference implementations: textbook shifting and single-variable
// substitution with an explicit cutoff, written without any of the sharing
// or short-circuits of the library versions.

#include <cstddef>
#include <vector>

#include "mltt/term.hpp"

namespace oracle {

using mltt::Tag;
using mltt::Term;

// Adds d to every index >= cutoff (d may be negative).
inline Term shift(const Term& t, long d, std::size_t cutoff = 0) {
  if (t.is(Tag::Var)) {
    if (t.index() < cutoff) return t;
    return Term::var(static_cast<std::size_t>(static_cast<long>(t.index()) + d));
  }
  std::vector<Term> kids;
  for (std::size_t i = 0; i < t.children().size(); ++i) {
    kids.push_back(oracle::shift(t.child(i), d, cutoff + mltt::binders(t.tag(), i)));
  }
  return Term::make(t.tag(), kids);
}

// [j := s] t, with s scoped like t.
inline Term subst_var(const Term& t, std::size_t j, const Term& s) {
  if (t.is(Tag::Var)) return t.index() == j ? s : t;
  std::vector<Term> kids;
  for (std::size_t i = 0; i < t.children().size(); ++i) {
    const std::size_t b = mltt::binders(t.tag(), i);
    kids.push_back(subst_var(t.child(i), j + b, oracle::shift(s, static_cast<long>(b))));
  }
  return Term::make(t.tag(), kids);
}

// Beta-style substitution of u for index 0, lowering the other indices.
inline Term subst1(const Term& t, const Term& u) { return oracle::shift(subst_var(t, 0, oracle::shift(u, 1)), -1); }

// Parallel substitution as a sequence of single-variable steps: the
// free indices below `images.size()` are first moved out of the way, then
// each is replaced in turn.
inline Term apply(const Term& t, const std::vector<Term>& images, std::size_t tail_shift) {
  const std::size_t k = images.size();
  const std::size_t n = std::max(t.free_bound(), k);
  // Free index i >= k goes to i - k + tail_shift. Put every free variable at
  // a fresh slot above all images first.
  std::size_t top = n + tail_shift + 1;
  for (const Term& im : images) top = std::max(top, im.free_bound() + 1);
  Term r = oracle::shift(t, static_cast<long>(top));
  for (std::size_t i = 0; i < n; ++i) {
    const Term target = i < k ? images[i] : Term::var(i - k + tail_shift);
    r = subst_var(r, i + top, target);
  }
  return r;
}

}  // namespace oracle
