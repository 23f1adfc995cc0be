// holoform CLI: build/verify flat-manifold presentations, classify their
// holonomy forms, compare family pairs, reproduce the summary tables, and run
// the built-in property suites.
//
// Exit codes: 0 all assertions pass, 1 assertion failure, 2 input error,
// 3 dimension-guard refusal.

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "holoform/classify.hpp"
#include "holoform/constructions.hpp"
#include "holoform/selftest.hpp"
#include "holoform/table.hpp"

using nlohmann::json;
using namespace holoform;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInput = 2;
constexpr int kExitGuard = 3;

struct Options {
  int samples = 200;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "json";
  int max_dim = 40;
  bool long_running = false;
};

void write_output(const json& j, const Options& opt) {
  if (!opt.out.empty()) {
    std::ofstream f(opt.out);
    f << j.dump(2) << "\n";
  }
  if (opt.format == "json") std::cout << j.dump(2) << "\n";
}

int guard_dim(const std::string& spec, const Options& opt) {
  int d = family_dim(spec);
  if (d > opt.max_dim && !opt.long_running) {
    std::cerr << "refusing '" << spec << "' (dim " << d << " > guard " << opt.max_dim
              << "); pass --long-running to override\n";
    return kExitGuard;
  }
  return kExitPass;
}

int cmd_build(const std::string& spec, const Options& opt) {
  int g = guard_dim(spec, opt);
  if (g != kExitPass) return g;
  FlatManifoldPresentation P = build_family(spec);
  HolonomyData H = verify_flat_manifold(P);
  json j = {{"schema_version", 1},
            {"family", spec},
            {"dim", P.dim},
            {"holonomy_order", H.order},
            {"b1", H.b1},
            {"orientable", H.orientable},
            {"presentation", presentation_to_json(P)}};
  write_output(j, opt);
  if (opt.format == "table")
    std::cout << P.label << ": dim " << P.dim << ", holonomy order " << H.order
              << ", b1 " << H.b1 << ", " << (H.orientable ? "orientable" : "non-orientable")
              << "\n";
  return kExitPass;
}

void print_class_report(const ClassReport& r) {
  std::cout << r.label << ": dim " << r.dim << ", " << r.classes.size()
            << " projective class(es) from " << r.samples << " samples (" << r.skipped
            << " skipped), seed " << r.seed << ", ucc_candidate "
            << (r.ucc_candidate ? "yes" : "no") << ", seed_stable "
            << (r.seed_stable ? "yes" : "no") << "\n";
  for (const auto& c : r.classes) {
    std::cout << "  class: disc " << c.fp.disc << ", eps";
    for (const auto& [p, e] : c.fp.eps) std::cout << " " << p << "->" << e;
    if (c.fp.eps.empty()) std::cout << " (all +1)";
    std::cout << ", " << c.sample_count << " sample(s)\n";
  }
}

int cmd_classify(const std::string& spec, const Options& opt) {
  int g = guard_dim(spec, opt);
  if (g != kExitPass) return g;
  ClassReport r = enumerate_classes(build_family(spec), opt.samples, opt.seed);
  write_output(class_report_to_json(r), opt);
  if (opt.format == "table") print_class_report(r);
  return kExitPass;
}

int cmd_pair(const std::string& spec1, const std::string& spec2, const Options& opt) {
  if (family_dim(spec1) != family_dim(spec2)) {
    std::cerr << "pair: dimensions differ (" << family_dim(spec1) << " vs "
              << family_dim(spec2) << ")\n";
    return kExitInput;
  }
  int g = guard_dim(spec1, opt);
  if (g != kExitPass) return g;
  ClassReport r1 = enumerate_classes(build_family(spec1), opt.samples, opt.seed);
  ClassReport r2 = enumerate_classes(build_family(spec2), opt.samples, opt.seed);
  PairReport pr = pair_verdict(r1, r2);
  write_output(pair_report_to_json(pr), opt);
  if (opt.format == "table") {
    std::cout << pr.label1 << " vs " << pr.label2 << ": " << pr.verdict;
    if (!pr.separating_invariant.empty()) std::cout << " (" << pr.separating_invariant << ")";
    std::cout << "\n";
  }
  return kExitPass;
}

// ---- table command -------------------------------------------------------

int cmd_table(const std::string& which, const Options& opt) {
  std::vector<TableRow> rows;
  if (which == "ucc")
    rows = ucc_table_rows();
  else if (which == "pairs")
    rows = pair_table_rows();
  else {
    std::cerr << "table: expected 'ucc' or 'pairs'\n";
    return kExitInput;
  }
  json jrows = json::array();
  bool all_pass = true;
  for (const auto& row : rows) {
    std::string status, note;
    if ((row.long_running || row.dim > opt.max_dim) && !opt.long_running) {
      status = "SKIPPED";
      note = "long-running row; pass --long-running to include";
    } else {
      RowOutcome o = row.run(table_row_samples(opt.samples, row.dim), opt.seed);
      status = o.pass ? "PASS" : "FAIL";
      note = o.note;
      if (!o.pass) all_pass = false;
    }
    jrows.push_back({{"dims", row.dims},
                     {"instance", row.instance},
                     {"dim", row.dim},
                     {"status", status},
                     {"note", note}});
    if (opt.format == "table")
      std::cout << status << "  " << row.dims << "  [" << row.instance << "]  " << note
                << "\n";
  }
  const std::string& footer = table_footer();
  json j = {{"schema_version", 1}, {"table", which}, {"rows", jrows}, {"footer", footer}};
  write_output(j, opt);
  if (opt.format == "table") std::cout << footer << "\n";
  return all_pass ? kExitPass : kExitFail;
}

int cmd_selftest(const Options& opt) {
  bool ok = true;
  json jsuites = json::array();
  for (std::uint64_t s : {opt.seed, opt.seed + 1}) {
    auto results = run_selftests(s);
    for (const auto& r : results) {
      jsuites.push_back(
          {{"suite", r.suite}, {"seed", s}, {"checks", r.checks}, {"failures", r.failures}});
      if (opt.format == "table")
        std::cout << r.suite << " (seed " << s << "): " << r.checks << " checks, "
                  << r.failures << " failures\n";
    }
    ok = ok && all_passed(results);
  }
  json j = {{"schema_version", 1}, {"suites", jsuites}, {"passed", ok}};
  write_output(j, opt);
  if (opt.format == "table") std::cout << (ok ? "all suites passed" : "FAILURES") << "\n";
  return ok ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flat-manifold holonomy form toolkit"};
  app.require_subcommand(1);
  Options opt;

  std::string spec, spec2, which;
  app.add_option("--samples", opt.samples, "sample count")->check(CLI::PositiveNumber);
  app.add_option("--seed", opt.seed, "RNG seed");
  app.add_option("--out", opt.out, "write JSON output to this path");
  app.add_option("--format", opt.format, "output format")
      ->check(CLI::IsMember({"json", "table"}));
  app.add_option("--max-dim", opt.max_dim, "refuse constructions above this dimension");
  app.add_flag("--long-running", opt.long_running, "allow long-running constructions");

  auto* build = app.add_subcommand("build", "construct and verify a flat manifold");
  build->add_option("spec", spec, "family spec, e.g. hw, C:k=5, mt:k=2,l=0")->required();
  auto* classify = app.add_subcommand("classify", "enumerate projective form classes");
  classify->add_option("spec", spec, "family spec")->required();
  auto* pair = app.add_subcommand("pair", "compare the form classes of two families");
  pair->add_option("spec1", spec, "first family spec")->required();
  pair->add_option("spec2", spec2, "second family spec")->required();
  auto* table = app.add_subcommand("table", "reproduce a summary table (ucc | pairs)");
  table->add_option("which", which, "ucc or pairs")->required();
  app.add_subcommand("selftest", "run the built-in property suites");
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitPass : kExitInput;
  }

  try {
    if (build->parsed()) return cmd_build(spec, opt);
    if (classify->parsed()) return cmd_classify(spec, opt);
    if (pair->parsed()) return cmd_pair(spec, spec2, opt);
    if (table->parsed()) return cmd_table(which, opt);
    return cmd_selftest(opt);
  } catch (const ConstructionError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
}
