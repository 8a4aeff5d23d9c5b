#pragma once

#include <cstdint>
#include <memory>
#include <string_view>

#include "mltt/outcome.hpp"
#include "mltt/term.hpp"

namespace mltt {

/// The conversion algorithm used by the typing rules. Implementations must
/// be safe to share across threads.
class ConvBackend {
 public:
  virtual ~ConvBackend() = default;
  virtual std::string_view name() const = 0;
  virtual ConvVerdict type_conv(Session& s, const Context& ctx, const Term& ty1, const Term& ty2) const = 0;
  virtual ConvVerdict term_conv(Session& s, const Context& ctx, const Term& ty, const Term& t1,
                                const Term& t2) const = 0;
};

class TypedBackend final : public ConvBackend {
 public:
  std::string_view name() const override { return "typed"; }
  ConvVerdict type_conv(Session& s, const Context& ctx, const Term& a, const Term& b) const override;
  ConvVerdict term_conv(Session& s, const Context& ctx, const Term& ty, const Term& a, const Term& b) const override;
};

// Ignores the context and type arguments.
class UntypedBackend final : public ConvBackend {
 public:
  std::string_view name() const override { return "untyped"; }
  ConvVerdict type_conv(Session& s, const Context& ctx, const Term& a, const Term& b) const override;
  ConvVerdict term_conv(Session& s, const Context& ctx, const Term& ty, const Term& a, const Term& b) const override;
};

const ConvBackend& typed_backend();
const ConvBackend& untyped_backend();

enum class Algo : std::uint8_t { Typed, Untyped };
const ConvBackend& backend(Algo algo);

// Bidirectional typing. Rule names in traces: Sort, FunTy, SigTy, NatTy,
// EmptyTy, IdTy, El (types); Var, Fun, Abs, App, SigUniv, Pair, Proj1,
// Proj2, NatUniv, Zero, Succ, NatRec, Empty, EmptyInd, IdTy, ReflTm, IdInd
// (inference); Check; InfRed.
//
// Precondition: ctx is well-formed (see check_ctx).
InferVerdict infer(Session& s, const Context& ctx, const Term& t, const ConvBackend& conv);
InferVerdict infer_red(Session& s, const Context& ctx, const Term& t, const ConvBackend& conv);
ConvVerdict check(Session& s, const Context& ctx, const Term& t, const Term& ty, const ConvBackend& conv);
ConvVerdict check_ty(Session& s, const Context& ctx, const Term& ty, const ConvBackend& conv);
ConvVerdict check_ctx(Session& s, const Context& ctx, const ConvBackend& conv);

inline InferVerdict infer(const Context& ctx, const Term& t, const ConvBackend& conv, std::uint64_t fuel) {
  Session s(fuel);
  return infer(s, ctx, t, conv);
}
inline InferVerdict infer_red(const Context& ctx, const Term& t, const ConvBackend& conv, std::uint64_t fuel) {
  Session s(fuel);
  return infer_red(s, ctx, t, conv);
}
inline ConvVerdict check(const Context& ctx, const Term& t, const Term& ty, const ConvBackend& conv,
                         std::uint64_t fuel) {
  Session s(fuel);
  return check(s, ctx, t, ty, conv);
}
inline ConvVerdict check_ty(const Context& ctx, const Term& ty, const ConvBackend& conv, std::uint64_t fuel) {
  Session s(fuel);
  return check_ty(s, ctx, ty, conv);
}
inline ConvVerdict check_ctx(const Context& ctx, const ConvBackend& conv, std::uint64_t fuel) {
  Session s(fuel);
  return check_ctx(s, ctx, conv);
}

// Runtime checks of the conversion preconditions, each run with its own
// fuel budget: the context is well-formed and the compared sides are
// well-typed. Reject reasons start with "precondition".
ConvVerdict precondition_conv_ty(const Context& ctx, const Term& a, const Term& b, std::uint64_t fuel);
ConvVerdict precondition_conv_tm(const Context& ctx, const Term& ty, const Term& a, const Term& b,
                                 std::uint64_t fuel);

}  // namespace mltt
