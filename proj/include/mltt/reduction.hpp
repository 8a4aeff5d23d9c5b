#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mltt/outcome.hpp"
#include "mltt/term.hpp"

namespace mltt {

// One-step weak-head reduction. Absent when no rule applies: on whnfs, and
// on ill-typed stuck terms such as `zero zero`.
std::optional<Term> step(const Term& t);

// Iterates `step` until it stops, charging one unit of fuel per step.
// Never rejects.
Outcome<Term> whnf(Session& s, const Term& t);
Outcome<Term> whnf(const Term& t, std::uint64_t fuel);

/// An eliminator with a hole in its scrutinee position.
struct Frame {
  enum class Kind : std::uint8_t { AppArg, Fst, Snd, NatElim, EmptyElim, IdElim };
  Kind kind;
  // The eliminator node the frame was cut from; its scrutinee is ignored.
  Term elim;

  Term plug(Term scrut) const;
  friend bool operator==(const Frame&, const Frame&) = default;
};

/// Eliminator frames around a head; frames[0] is adjacent to the head,
/// the outermost frame is last.
struct Stack {
  std::vector<Frame> frames;
  friend bool operator==(const Stack&, const Stack&) = default;
};

struct Decomposed {
  Term head;
  Stack stack;
};

Decomposed decompose(const Term& t);
Term plug(const Term& head, const Stack& stack);

// Stack machine with the same observable contract as `whnf`, including the
// fuel charged: one unit per fired beta rule.
Outcome<Term> machine_whnf(Session& s, const Term& t);
Outcome<Term> machine_whnf(const Term& t, std::uint64_t fuel);

}  // namespace mltt
