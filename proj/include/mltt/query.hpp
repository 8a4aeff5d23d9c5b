#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mltt/bidir.hpp"
#include "mltt/outcome.hpp"
#include "mltt/surface.hpp"
#include "mltt/term.hpp"

namespace mltt {

enum class Directive : std::uint8_t { Check, Infer, Conv, Whnf, Nf, Validate };

std::string_view directive_name(Directive d);

/// One line of batch input: `DIRECTIVE (x : T)* |- PAYLOAD`, or
/// `validate PATH`. Payloads: conv `t == t' : T`, check `t : T`,
/// infer/whnf/nf `t`.
struct Query {
  Directive directive = Directive::Check;
  std::vector<std::string> names;  // context names, outermost first
  Context ctx;
  std::vector<Term> terms;  // conv [t, t', T]; check [t, T]; others [t]
  std::string path;         // validate
};

ParseResult<Query> parse_query(std::string_view line, std::size_t line_number = 1);

// Exit codes of the batch front end.
inline constexpr int kExitAccept = 0;
inline constexpr int kExitReject = 1;
inline constexpr int kExitOutOfFuel = 2;
inline constexpr int kExitParse = 3;

struct RunOptions {
  Algo algo = Algo::Typed;
  std::uint64_t fuel = 100'000;
  TraceSink trace;
  // Checks the typing preconditions of conv before running it; a violation
  // is reported as a Reject.
  bool debug_assert_preconditions = false;
};

struct QueryResult {
  int exit_code = kExitAccept;
  std::string output;  // one or more lines, no trailing newline
  std::uint64_t fuel_used = 0;
};

QueryResult run_query(const Query& q, const RunOptions& opts);

// Parses and runs one line; parse and scope errors give exit code 3.
QueryResult run_line(std::string_view line, const RunOptions& opts, std::size_t line_number = 1);

// Renders an outcome's failure: "Reject: message" plus the rule path, or
// "OutOfFuel".
template <class T>
QueryResult failure_result(const Outcome<T>& o, std::uint64_t used);

}  // namespace mltt
