#pragma once

// Random raw (not necessarily well-typed) terms for syntax-level properties.

#include <random>
#include <vector>

#include "mltt/term.hpp"

namespace testgen {

using mltt::Tag;
using mltt::Term;

// A term whose free indices are below `scope`.
inline Term raw_term(std::mt19937_64& rng, std::size_t scope, int depth) {
  std::uniform_int_distribution<int> pick(0, static_cast<int>(mltt::kTagCount) - 1);
  if (depth <= 0) {
    const int leaf = std::uniform_int_distribution<int>(0, 4)(rng);
    if (leaf < 2 && scope > 0) return Term::var(std::uniform_int_distribution<std::size_t>(0, scope - 1)(rng));
    switch (leaf) {
      case 2:
        return Term::nat();
      case 3:
        return Term::zero();
      default:
        return Term::univ();
    }
  }
  const Tag tag = static_cast<Tag>(pick(rng));
  if (tag == Tag::Var) {
    if (scope == 0) return Term::zero();
    return Term::var(std::uniform_int_distribution<std::size_t>(0, scope - 1)(rng));
  }
  std::vector<Term> kids;
  for (std::size_t i = 0; i < mltt::arity(tag); ++i) {
    kids.push_back(raw_term(rng, scope + mltt::binders(tag, i), depth - 1));
  }
  return Term::make(tag, kids);
}

inline mltt::Substitution raw_subst(std::mt19937_64& rng, std::size_t scope, int depth) {
  mltt::Substitution s;
  const std::size_t k = std::uniform_int_distribution<std::size_t>(0, 3)(rng);
  for (std::size_t i = 0; i < k; ++i) s.images.push_back(raw_term(rng, scope, depth));
  s.tail_shift = std::uniform_int_distribution<std::size_t>(0, 3)(rng);
  return s;
}

}  // namespace testgen
