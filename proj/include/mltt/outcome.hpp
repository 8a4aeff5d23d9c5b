#pragma once

#include <cassert>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "mltt/term.hpp"

namespace mltt {

struct Unit {
  friend bool operator==(Unit, Unit) { return true; }
};

/// Why an algorithm answered negatively: a message and the path of rule
/// names from the root query down to the failing subgoal.
struct Reject {
  std::string message;
  std::vector<std::string> path;
};

struct OutOfFuel {};

enum class Verdict : std::uint8_t { Accept, Reject, OutOfFuel };

std::string_view verdict_name(Verdict v);

/// Result of a fuel-bounded algorithm.
template <class T>
class Outcome {
 public:
  Outcome(T value) : v_(std::in_place_index<0>, std::move(value)) {}
  Outcome(Reject r) : v_(std::in_place_index<1>, std::move(r)) {}
  Outcome(OutOfFuel) : v_(std::in_place_index<2>) {}

  Verdict verdict() const { return static_cast<Verdict>(v_.index()); }
  bool accepted() const { return v_.index() == 0; }
  bool rejected() const { return v_.index() == 1; }
  bool out_of_fuel() const { return v_.index() == 2; }

  const T& value() const {
    assert(accepted());
    return std::get<0>(v_);
  }
  const Reject& reason() const {
    assert(rejected());
    return std::get<1>(v_);
  }

  // Propagates a failure into an outcome of another payload type.
  template <class U>
  Outcome<U> failure() const {
    assert(!accepted());
    if (rejected()) return reason();
    return OutOfFuel{};
  }

 private:
  std::variant<T, Reject, OutOfFuel> v_;
};

using ConvVerdict = Outcome<Unit>;
using NeuVerdict = Outcome<Term>;
using InferVerdict = Outcome<Term>;

inline ConvVerdict accept() { return Unit{}; }

// Receives (rule name, depth) for every rule an algorithm applies.
using TraceSink = std::function<void(std::string_view rule, std::size_t depth)>;

/// Shared state of one algorithm run: a single fuel budget consumed by every
/// reduction step and every rule application, the rule path used in Reject
/// reasons, and an optional trace sink.
class Session {
 public:
  explicit Session(std::uint64_t fuel, TraceSink sink = {}) : remaining_(fuel), sink_(std::move(sink)) {}

  std::uint64_t remaining() const { return remaining_; }
  std::uint64_t used() const { return used_; }
  std::size_t depth() const { return path_.size(); }
  const std::vector<std::string>& path() const { return path_; }

  bool spend() {
    if (remaining_ == 0) return false;
    --remaining_;
    ++used_;
    return true;
  }

  class Scope {
   public:
    Scope(const Scope&) = delete;
    Scope& operator=(const Scope&) = delete;
    ~Scope() {
      if (entered_) session_.path_.pop_back();
    }
    explicit operator bool() const { return entered_; }

   private:
    friend class Session;
    Scope(Session& s, bool entered) : session_(s), entered_(entered) {}
    Session& session_;
    bool entered_;
  };

  // Applies a rule: spends one unit of fuel, emits a trace event and pushes
  // the rule on the path. The scope is false when fuel ran out.
  [[nodiscard]] Scope rule(std::string_view name) {
    if (!spend()) return Scope(*this, false);
    return enter(name);
  }

  // Reduction wrapper rules cost nothing themselves; the whnf steps they
  // trigger are charged instead.
  [[nodiscard]] Scope wrapper(std::string_view name) { return enter(name); }

  Reject reject(std::string message, std::string_view where) const {
    Reject r{std::move(message), path_};
    if (r.path.empty()) r.path.emplace_back(where);
    return r;
  }

 private:
  Scope enter(std::string_view name) {
    if (sink_) sink_(name, path_.size());
    path_.emplace_back(name);
    return Scope(*this, true);
  }

  std::uint64_t remaining_;
  std::uint64_t used_ = 0;
  TraceSink sink_;
  std::vector<std::string> path_;
};

}  // namespace mltt
