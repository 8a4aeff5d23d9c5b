// Python bindings: terms, the kernel operations and the harness runners.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mltt/bidir.hpp"
#include "mltt/conv_typed.hpp"
#include "mltt/conv_untyped.hpp"
#include "mltt/declarative.hpp"
#include "mltt/harness.hpp"
#include "mltt/normalize.hpp"
#include "mltt/query.hpp"
#include "mltt/reduction.hpp"
#include "mltt/surface.hpp"

namespace py = pybind11;
using namespace mltt;

namespace {

// Outcome of one kernel call, flattened for Python.
struct Result {
  std::string verdict;
  std::optional<Term> value;
  std::string message;
  std::vector<std::string> path;
  std::uint64_t fuel_used = 0;
};

template <class T>
Result flatten(const Outcome<T>& o, const Session& s) {
  Result r;
  r.verdict = std::string(verdict_name(o.verdict()));
  r.fuel_used = s.used();
  if (o.rejected()) {
    r.message = o.reason().message;
    r.path = o.reason().path;
  }
  if constexpr (std::is_same_v<T, Term>) {
    if (o.accepted()) r.value = o.value();
  }
  return r;
}

Algo parse_algo(const std::string& name) {
  if (name == "typed") return Algo::Typed;
  if (name == "untyped") return Algo::Untyped;
  throw py::value_error("algo must be 'typed' or 'untyped', got '" + name + "'");
}

Term parse_or_throw(const std::string& src, const std::vector<std::string>& names) {
  auto r = parse_term(src, names);
  if (auto* e = std::get_if<ParseError>(&r)) throw py::value_error(e->what());
  return std::get<Term>(r);
}

GenConfig config(std::uint64_t seed, std::size_t max_depth, std::size_t max_ctx_len) {
  GenConfig cfg;
  cfg.seed = seed;
  cfg.max_depth = max_depth;
  cfg.max_ctx_len = max_ctx_len;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw py::value_error(e.what());
  }
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_mltt, m) {
  m.doc() = "MLTT kernel: bidirectional typing, typed and untyped conversion, normalisation";

  py::class_<Term>(m, "Term")
      .def_static("parse", &parse_or_throw, py::arg("src"), py::arg("names") = std::vector<std::string>{},
                  "Parses surface syntax; `names` are the context names, outermost first.")
      .def_static("var", &Term::var)
      .def_static("nat", &Term::nat)
      .def_static("zero", &Term::zero)
      .def_static("univ", &Term::univ)
      .def_static("numeral", &Term::numeral)
      .def_property_readonly("tag", [](const Term& t) { return std::string(tag_name(t.tag())); })
      .def_property_readonly("size", &Term::size)
      .def_property_readonly("children", [](const Term& t) {
        return std::vector<Term>(t.children().begin(), t.children().end());
      })
      .def("shift", [](const Term& t, std::size_t by) { return shift(t, by); }, py::arg("by") = 1)
      .def("subst1", [](const Term& t, const Term& u) { return subst1(t, u); })
      .def("show", [](const Term& t, const std::vector<std::string>& names) { return print(t, names); },
           py::arg("names") = std::vector<std::string>{})
      .def("__str__", [](const Term& t) { return print(t); })
      .def("__repr__", [](const Term& t) { return "Term('" + print(t) + "')"; })
      .def("__eq__", [](const Term& a, const Term& b) { return a == b; });

  py::class_<Result>(m, "Result")
      .def_readonly("verdict", &Result::verdict)
      .def_readonly("value", &Result::value)
      .def_readonly("message", &Result::message)
      .def_readonly("path", &Result::path)
      .def_readonly("fuel_used", &Result::fuel_used)
      .def("__bool__", [](const Result& r) { return r.verdict == "Accept"; })
      .def("__repr__", [](const Result& r) {
        std::string out = "Result(" + r.verdict;
        if (r.value) out += ", " + print(*r.value);
        if (!r.message.empty()) out += ", " + r.message;
        return out + ")";
      });

  m.def(
      "whnf",
      [](const Term& t, std::uint64_t fuel) {
        Session s(fuel);
        return flatten(whnf(s, t), s);
      },
      py::arg("term"), py::arg("fuel") = kHarnessFuel);

  m.def(
      "infer",
      [](const std::vector<Term>& ctx, const Term& t, const std::string& algo, std::uint64_t fuel) {
        Session s(fuel);
        return flatten(infer(s, Context(ctx), t, backend(parse_algo(algo))), s);
      },
      py::arg("ctx"), py::arg("term"), py::arg("algo") = "typed", py::arg("fuel") = kHarnessFuel);

  m.def(
      "check",
      [](const std::vector<Term>& ctx, const Term& t, const Term& ty, const std::string& algo, std::uint64_t fuel) {
        Session s(fuel);
        return flatten(check(s, Context(ctx), t, ty, backend(parse_algo(algo))), s);
      },
      py::arg("ctx"), py::arg("term"), py::arg("ty"), py::arg("algo") = "typed", py::arg("fuel") = kHarnessFuel);

  m.def(
      "conv",
      [](const std::vector<Term>& ctx, const Term& ty, const Term& a, const Term& b, const std::string& algo,
         std::uint64_t fuel) {
        Session s(fuel);
        if (parse_algo(algo) == Algo::Typed) return flatten(conv_tm(s, Context(ctx), ty, a, b), s);
        return flatten(uconv(s, a, b), s);
      },
      py::arg("ctx"), py::arg("ty"), py::arg("lhs"), py::arg("rhs"), py::arg("algo") = "typed",
      py::arg("fuel") = kHarnessFuel);

  m.def(
      "normalize",
      [](const std::vector<Term>& ctx, const Term& ty, const Term& t, std::uint64_t fuel) {
        Session s(fuel);
        return flatten(deep_nf_tm(s, Context(ctx), ty, t), s);
      },
      py::arg("ctx"), py::arg("ty"), py::arg("term"), py::arg("fuel") = kHarnessFuel);

  m.def(
      "run",
      [](const std::string& line, const std::string& algo, std::uint64_t fuel, bool debug_assert_preconditions) {
        RunOptions opts;
        opts.algo = parse_algo(algo);
        opts.fuel = fuel;
        opts.debug_assert_preconditions = debug_assert_preconditions;
        std::vector<std::string> trace;
        opts.trace = [&](std::string_view rule, std::size_t depth) {
          trace.push_back(std::string(depth * 2, ' ') + std::string(rule));
        };
        const QueryResult r = run_line(line, opts);
        return py::make_tuple(r.exit_code, r.output, trace);
      },
      py::arg("line"), py::arg("algo") = "typed", py::arg("fuel") = 100'000,
      py::arg("debug_assert_preconditions") = false,
      "Runs one query line; returns (exit_code, output, trace lines).");

  m.def(
      "validate",
      [](const std::string& text) {
        auto parsed = parse_derivations(text);
        if (auto* e = std::get_if<ParseError>(&parsed)) throw py::value_error(e->what());
        std::vector<Result> out;
        for (const auto& d : std::get<0>(parsed)) {
          const auto v = validate(d);
          Result r;
          r.verdict = std::string(verdict_name(v.verdict()));
          if (v.rejected()) {
            r.message = v.reason().message;
            r.path = v.reason().path;
          }
          out.push_back(std::move(r));
        }
        return out;
      },
      py::arg("text"), "Validates every derivation in a fixture text.");

  m.def(
      "diff_run",
      [](std::size_t n, std::uint64_t seed, std::size_t max_depth, std::size_t max_ctx_len, std::uint64_t fuel) {
        const DiffReport r = diff_run(n, config(seed, max_depth, max_ctx_len), fuel);
        py::list disagreements;
        for (const auto& d : r.disagreements) {
          disagreements.append(py::dict(py::arg("index") = d.index, py::arg("seed") = d.seed,
                                        py::arg("query") = describe({d.ctx, d.ty, {d.lhs, d.rhs}}),
                                        py::arg("typed") = std::string(verdict_name(d.typed)),
                                        py::arg("untyped") = std::string(verdict_name(d.untyped))));
        }
        return py::dict(py::arg("total") = r.total, py::arg("agreements") = r.agreements,
                        py::arg("accepted") = r.accepted, py::arg("fuel_exhausted") = r.fuel_exhausted,
                        py::arg("disagreements") = disagreements, py::arg("report") = serialize(r));
      },
      py::arg("n"), py::arg("seed") = 1, py::arg("max_depth") = GenConfig{}.max_depth,
      py::arg("max_ctx_len") = GenConfig{}.max_ctx_len, py::arg("fuel") = kHarnessFuel);

  m.def("property_suites", &property_suites);

  m.def(
      "property_run",
      [](const std::string& suite, std::size_t n, std::uint64_t seed, std::size_t max_depth,
         std::size_t max_ctx_len) {
        PropReport r;
        try {
          r = property_run(suite, n, config(seed, max_depth, max_ctx_len));
        } catch (const std::invalid_argument& e) {
          throw py::value_error(e.what());
        }
        py::list failures;
        for (const auto& f : r.failures) {
          failures.append(py::dict(py::arg("index") = f.index, py::arg("seed") = f.seed,
                                   py::arg("message") = f.message, py::arg("counterexample") = f.counterexample));
        }
        return py::dict(py::arg("suite") = r.suite, py::arg("total") = r.total, py::arg("skipped") = r.skipped,
                        py::arg("failures") = failures);
      },
      py::arg("suite"), py::arg("n"), py::arg("seed") = 1, py::arg("max_depth") = GenConfig{}.max_depth,
      py::arg("max_ctx_len") = GenConfig{}.max_ctx_len);
}
