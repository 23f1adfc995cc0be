#include "holoform/table.hpp"

#include <algorithm>

#include "holoform/constructions.hpp"

namespace holoform {

namespace {

RowOutcome ucc_row(const std::string& spec, bool want_orientable, const Int& want_disc,
                   int samples, std::uint64_t seed) {
  FlatManifoldPresentation P = build_family(spec);
  HolonomyData H = verify_flat_manifold(P);
  ClassReport r = enumerate_classes(H, P.label, samples, seed);
  RowOutcome out;
  if (H.orientable != want_orientable) {
    out.note = "orientability mismatch";
    return out;
  }
  if (!r.ucc_candidate || !r.seed_stable) {
    out.note = std::to_string(r.classes.size()) + " classes observed";
    return out;
  }
  if (want_disc != 0 && r.classes[0].fp.disc != want_disc) {
    out.note = "disc " + r.classes[0].fp.disc.str();
    return out;
  }
  out.pass = true;
  out.note = "single class, disc " + r.classes[0].fp.disc.str();
  return out;
}

RowOutcome pair_row(const std::string& s1, const std::string& s2, int samples,
                    std::uint64_t seed) {
  ClassReport r1 = enumerate_classes(build_family(s1), samples, seed);
  ClassReport r2 = enumerate_classes(build_family(s2), samples, seed);
  PairReport pr = pair_verdict(r1, r2);
  RowOutcome out;
  out.pass = pr.verdict == "disjoint";
  out.note = pr.verdict +
             (pr.separating_invariant.empty() ? "" : " (" + pr.separating_invariant + ")");
  return out;
}

}  // namespace

int table_row_samples(int requested, int dim) {
  // dims 16-26 include the C-type families whose sample fingerprints factor
  // slowly (several seconds each); the long-running rows (>= 27) are cheap
  // per sample again
  if (dim >= 27) return std::min(requested, 30);
  if (dim >= 20) return std::min(requested, 12);
  if (dim >= 16) return std::min(requested, 20);
  if (dim >= 14) return std::min(requested, 50);
  return requested;
}

std::vector<TableRow> ucc_table_rows() {
  auto U = [](const std::string& spec, bool orient, long disc) {
    return [spec, orient, disc](int samples, std::uint64_t seed) {
      return ucc_row(spec, orient, Int(disc), samples, seed);
    };
  };
  return {
      {"n = 1", "S1", 1, false, U("S1", true, 0)},
      {"n = 6 (non-orientable)", "C:k=3", 6, false, U("C:k=3", false, 1)},
      {"n >= 10, n = 2 mod 4", "wtC3:0", 10, false, U("wtC3:0", true, 3)},
      {"n >= 10, n = 2 mod 4", "C:k=5", 10, false, U("C:k=5", true, 1)},
      {"n >= 12, n = 0 mod 4", "E:k=3", 12, false, U("E:k=3", true, 1)},
      {"n >= 13, n = 1 mod 4", "product:(S1,E:k=3)", 13, false,
       U("product:(S1,E:k=3)", true, 0)},
      {"n >= 35, n = 3 mod 4", "F:k=0,l=0", 35, true, U("F:k=0,l=0", true, 0)},
  };
}

std::vector<TableRow> pair_table_rows() {
  auto PR = [](const std::string& a, const std::string& b) {
    return [a, b](int samples, std::uint64_t seed) { return pair_row(a, b, samples, seed); };
  };
  return {
      {"n >= 10, n = 2 mod 4", "wtC3:0 | C:k=5", 10, false, PR("wtC3:0", "C:k=5")},
      {"n = 13", "mt:k=2,l=0 | product:(S1,E:k=3)", 13, false,
       PR("mt:k=2,l=0", "product:(S1,E:k=3)")},
      {"n = 16 (non-orientable)", "product:(C:k=3,wtC3:0) | C:k=8", 16, false,
       PR("product:(C:k=3,wtC3:0)", "C:k=8")},
      {"n = 19", "mt:k=3,l=0 | product:(mt:k=1,l=0,E:k=3)", 19, false,
       PR("mt:k=3,l=0", "product:(mt:k=1,l=0,E:k=3)")},
      {"n >= 20, n = 0 mod 4", "product:(C:k=5,wtC3:0) | C:k=10", 20, false,
       PR("product:(C:k=5,wtC3:0)", "C:k=10")},
      {"n >= 21, n = 1 mod 4", "mt:k=2,l=1 | product:(S1,E:k=5)", 21, false,
       PR("mt:k=2,l=1", "product:(S1,E:k=5)")},
      {"n >= 27, n = 3 mod 4", "mt:k=3,l=1 | product:(mt:k=1,l=0,E:k=5)", 27, true,
       PR("mt:k=3,l=1", "product:(mt:k=1,l=0,E:k=5)")},
  };
}

const std::string& table_footer() {
  static const std::string footer =
      "Coverage: each row is checked only at its minimal desk-scale instance with "
      "finite random sampling; the general-dimension claims behind the rows (all "
      "larger n of each congruence class, and arbitrarily many pairwise-disjoint "
      "single-class families) are outside desk scale and are not re-established here.";
  return footer;
}

}  // namespace holoform
