#include "mltt/reduction.hpp"

#include <algorithm>

namespace mltt {

namespace {

// Contracts a head redex, if `t` is one.
std::optional<Term> contract(const Term& t) {
  switch (t.tag()) {
    case Tag::App:
      if (t.fn().is(Tag::Lam)) return subst1(t.fn().body(), t.arg());
      return std::nullopt;
    case Tag::Fst:
      if (t.scrut().is(Tag::Pair)) return t.scrut().first();
      return std::nullopt;
    case Tag::Snd:
      if (t.scrut().is(Tag::Pair)) return t.scrut().second();
      return std::nullopt;
    case Tag::NatElim: {
      const Term& n = t.scrut();
      if (n.is(Tag::Zero)) return t.base();
      if (n.is(Tag::Succ)) {
        Term rec = Term::nat_elim(t.motive(), t.base(), t.step(), n.pred());
        return subst2(t.step(), n.pred(), rec);
      }
      return std::nullopt;
    }
    case Tag::IdElim:
      if (t.scrut().is(Tag::Refl)) return t.branch();
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

bool is_eliminator(Tag tag) {
  switch (tag) {
    case Tag::App:
    case Tag::Fst:
    case Tag::Snd:
    case Tag::NatElim:
    case Tag::EmptyElim:
    case Tag::IdElim:
      return true;
    default:
      return false;
  }
}

const Term& elim_scrut(const Term& t) { return t.is(Tag::App) ? t.fn() : t.scrut(); }

Term replace_scrut(const Term& t, Term scrut) {
  std::vector<Term> kids(t.children().begin(), t.children().end());
  switch (t.tag()) {
    case Tag::App:
    case Tag::Fst:
    case Tag::Snd:
      kids[0] = std::move(scrut);
      break;
    case Tag::NatElim:
      kids[3] = std::move(scrut);
      break;
    case Tag::EmptyElim:
      kids[1] = std::move(scrut);
      break;
    case Tag::IdElim:
      kids[4] = std::move(scrut);
      break;
    default:
      break;
  }
  return Term::make(t.tag(), std::move(kids));
}

Frame::Kind frame_kind(Tag tag) {
  switch (tag) {
    case Tag::App:
      return Frame::Kind::AppArg;
    case Tag::Fst:
      return Frame::Kind::Fst;
    case Tag::Snd:
      return Frame::Kind::Snd;
    case Tag::NatElim:
      return Frame::Kind::NatElim;
    case Tag::EmptyElim:
      return Frame::Kind::EmptyElim;
    default:
      return Frame::Kind::IdElim;
  }
}

}  // namespace

std::optional<Term> step(const Term& t) {
  if (!is_eliminator(t.tag())) return std::nullopt;
  if (auto r = contract(t)) return r;
  // Head congruences: AppRed, AppFst, AppSnd, RedNatElim, RedIdElim, and the
  // same congruence for emptyElim, whose scrutinee must reduce too.
  auto inner = step(elim_scrut(t));
  if (!inner) return std::nullopt;
  return replace_scrut(t, std::move(*inner));
}

Outcome<Term> whnf(Session& s, const Term& t) {
  Term cur = t;
  while (auto next = step(cur)) {
    if (!s.spend()) return OutOfFuel{};
    cur = std::move(*next);
  }
  return cur;
}

Outcome<Term> whnf(const Term& t, std::uint64_t fuel) {
  Session s(fuel);
  return whnf(s, t);
}

Term Frame::plug(Term scrut) const { return replace_scrut(elim, std::move(scrut)); }

Decomposed decompose(const Term& t) {
  Decomposed d{t, {}};
  while (is_eliminator(d.head.tag())) {
    d.stack.frames.push_back({frame_kind(d.head.tag()), d.head});
    d.head = elim_scrut(d.head);
  }
  std::reverse(d.stack.frames.begin(), d.stack.frames.end());
  return d;
}

Term plug(const Term& head, const Stack& stack) {
  Term cur = head;
  for (const auto& f : stack.frames) cur = f.plug(std::move(cur));
  return cur;
}

Outcome<Term> machine_whnf(Session& s, const Term& t) {
  // Frames are kept innermost-last here so the machine can push and pop.
  std::vector<Frame> frames;
  Term head = t;
  auto unwind = [&] {
    while (is_eliminator(head.tag())) {
      frames.push_back({frame_kind(head.tag()), head});
      head = elim_scrut(head);
    }
  };
  unwind();
  while (!frames.empty()) {
    const Frame& top = frames.back();
    // Fire the innermost frame against the head, if it forms a redex.
    std::optional<Term> fired = contract(top.plug(head));
    if (!fired) break;
    if (!s.spend()) return OutOfFuel{};
    head = std::move(*fired);
    frames.pop_back();
    unwind();
  }
  Term out = head;
  for (auto it = frames.rbegin(); it != frames.rend(); ++it) out = it->plug(std::move(out));
  return out;
}

Outcome<Term> machine_whnf(const Term& t, std::uint64_t fuel) {
  Session s(fuel);
  return machine_whnf(s, t);
}

}  // namespace mltt
