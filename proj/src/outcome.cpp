#include "mltt/outcome.hpp"

namespace mltt {

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Accept:
      return "Accept";
    case Verdict::Reject:
      return "Reject";
    case Verdict::OutOfFuel:
      return "OutOfFuel";
  }
  return "?";
}

}  // namespace mltt
