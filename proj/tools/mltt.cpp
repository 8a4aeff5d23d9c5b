// Batch front end: one query per line from -e arguments or files.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mltt/derive.hpp"
#include "mltt/harness.hpp"
#include "mltt/query.hpp"

using namespace mltt;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool blank_or_comment(std::string_view line) {
  const auto start = line.find_first_not_of(" \t\r");
  return start == std::string_view::npos || line.substr(start, 2) == "--";
}

int run_queries(const std::vector<std::string>& exprs, const std::vector<std::string>& files, const RunOptions& opts) {
  int code = kExitAccept;
  auto one = [&](std::string_view line, std::size_t number) {
    QueryResult r = run_line(line, opts, number);
    (r.exit_code == kExitParse ? std::cerr : std::cout) << r.output << "\n";
    code = std::max(code, r.exit_code);
  };
  for (const auto& e : exprs) one(e, 1);
  for (const auto& f : files) {
    std::string text;
    try {
      text = slurp(f);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      code = std::max(code, kExitParse);
      continue;
    }
    std::istringstream in(text);
    std::string line;
    for (std::size_t n = 1; std::getline(in, line); ++n) {
      if (!blank_or_comment(line)) one(line, n);
    }
  }
  return code;
}

int write_fixtures(const std::string& roots_path, const std::string& out_dir) {
  auto parsed = parse_fixture_roots(slurp(roots_path));
  if (auto* e = std::get_if<ParseError>(&parsed)) {
    std::cerr << "error: " << roots_path << ": " << e->what() << "\n";
    return kExitParse;
  }
  std::map<std::string, std::vector<Derivation>> groups;
  try {
    groups = derive_roots(std::get<0>(parsed));
  } catch (const DeriveError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitReject;
  }
  std::filesystem::create_directories(out_dir);
  std::size_t total = 0;
  for (const auto& [rule, ds] : groups) {
    std::ofstream out(std::filesystem::path(out_dir) / (rule + ".drv"));
    for (const auto& d : ds) {
      auto v = validate(d);
      if (!v.accepted()) {
        std::cerr << "error: derived " << rule << " tree does not validate\n";
        return kExitReject;
      }
      out << print_derivation(d) << "\n\n";
      ++total;
    }
  }
  std::cout << total << " derivations in " << groups.size() << " files\n";
  return kExitAccept;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MLTT kernel: type checking, conversion and normalisation queries"};
  std::string algo = "typed";
  RunOptions opts;
  bool trace = false;
  std::vector<std::string> exprs, files;
  app.add_option("--algo", algo, "conversion algorithm")->check(CLI::IsMember({"typed", "untyped"}));
  app.add_option("--fuel", opts.fuel, "fuel per query")->default_val(100000);
  app.add_flag("--trace", trace, "print applied rules to stderr");
  app.add_flag("--debug-assert-preconditions", opts.debug_assert_preconditions,
               "check typing preconditions before running a query");
  app.add_option("-e", exprs, "query text");
  app.add_option("files", files, "query files, one query per line");

  auto* fixtures = app.add_subcommand("fixtures", "derive the fixture corpus from its roots");
  std::string roots = "tests/fixtures/roots.txt", out_dir = "tests/fixtures/derivations";
  fixtures->add_option("--roots", roots);
  fixtures->add_option("--out", out_dir);

  GenConfig cfg;
  std::size_t count = 1000;
  std::uint64_t harness_fuel = kHarnessFuel;
  auto generator_options = [&](CLI::App* sub) {
    sub->add_option("-n", count, "number of generated instances");
    sub->add_option("--seed", cfg.seed, "run seed");
    sub->add_option("--max-depth", cfg.max_depth, "generator depth bound");
    sub->add_option("--max-ctx", cfg.max_ctx_len, "generated context length bound");
  };
  auto* diff = app.add_subcommand("diff", "differential run of the two conversion algorithms");
  generator_options(diff);
  diff->add_option("--fuel", harness_fuel, "fuel per algorithm per query");
  auto* props = app.add_subcommand("props", "run a property suite, or all of them");
  generator_options(props);
  std::string suite = "all";
  props->add_option("suite", suite, "suite name or 'all'");

  CLI11_PARSE(app, argc, argv);
  opts.algo = algo == "typed" ? Algo::Typed : Algo::Untyped;
  if (trace) {
    opts.trace = [](std::string_view rule, std::size_t depth) {
      std::cerr << std::string(depth * 2, ' ') << rule << "\n";
    };
  }
  try {
    if (*fixtures) return write_fixtures(roots, out_dir);
    if (*diff) {
      const DiffReport r = diff_run(count, cfg, harness_fuel);
      std::cout << serialize(r);
      return r.disagreements.empty() ? kExitAccept : kExitReject;
    }
    if (*props) {
      int code = kExitAccept;
      for (const auto& name : property_suites()) {
        if (suite != "all" && suite != name) continue;
        const PropReport r = property_run(name, count, cfg);
        std::cout << serialize(r);
        if (!r.failures.empty()) code = kExitReject;
      }
      if (suite != "all") {
        const auto& names = property_suites();
        if (std::find(names.begin(), names.end(), suite) == names.end()) {
          std::cerr << "error: unknown suite " << suite << "\n";
          return kExitParse;
        }
      }
      return code;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }
  if (exprs.empty() && files.empty()) {
    std::cerr << app.help();
    return kExitParse;
  }
  return run_queries(exprs, files, opts);
}
