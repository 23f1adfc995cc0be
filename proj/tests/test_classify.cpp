#include <doctest.h>

#include <nlohmann/json.hpp>

#include "holoform/classify.hpp"
#include "holoform/constructions.hpp"

using namespace holoform;

TEST_CASE("invariant form space dimensions") {
  // diag(-1,-1,1), diag(1,-1,-1): invariant symmetric matrices are diagonal
  HolonomyData hw = verify_flat_manifold(hantzsche_wendt());
  InvariantFormSpace s = invariant_form_space(hw);
  CHECK(s.dim == 3);
  CHECK(s.basis.size() == 3);
  for (const RatMat& b : s.basis) {
    for (const IMat& A : hw.generators) {
      RatMat Ar = A.cast<Rat>();
      CHECK(Ar.transpose() * b * Ar == b);
    }
  }
  CHECK(signature(QuadForm(s.averaged)) == std::pair<int, int>{3, 0});
  // a torus imposes no constraints: full symmetric space
  InvariantFormSpace t = invariant_form_space(verify_flat_manifold(torus(3)));
  CHECK(t.basis.size() == 6);
  InvariantFormSpace w = invariant_form_space(verify_flat_manifold(build_wtC3(0)));
  CHECK(w.basis.size() == 7);
}

TEST_CASE("sampling is exact, invariant and deterministic") {
  HolonomyData hw = verify_flat_manifold(hantzsche_wendt());
  InvariantFormSpace s = invariant_form_space(hw);
  auto forms = sample_holonomy_forms(s, 40, 5);
  REQUIRE(forms.size() == 40);
  for (const QuadForm& f : forms) {
    CHECK(signature(f) == std::pair<int, int>{3, 0});
    for (const IMat& A : hw.generators) {
      RatMat Ar = A.cast<Rat>();
      CHECK(Ar.transpose() * f.gram() * Ar == f.gram());
    }
  }
  auto again = sample_holonomy_forms(s, 40, 5);
  for (int i = 0; i < 40; ++i) CHECK(forms[i].gram() == again[i].gram());
  auto other = sample_holonomy_forms(s, 40, 6);
  bool all_same = true;
  for (int i = 0; i < 40; ++i) all_same = all_same && forms[i].gram() == other[i].gram();
  CHECK(!all_same);
}

TEST_CASE("class enumeration: tori are not candidates") {
  ClassReport r = enumerate_classes(torus(2), 60, 1);
  CHECK(r.dim == 2);
  CHECK(r.classes.size() >= 2);  // e.g. disc 1 and disc 2 both occur
  CHECK(!r.ucc_candidate);
  CHECK(r.skipped == 0);
}

TEST_CASE("class enumeration: wtC3 has a single class of disc 3") {
  ClassReport r = enumerate_classes(build_wtC3(0), 100, 1);
  REQUIRE(r.classes.size() == 1);
  CHECK(r.ucc_candidate);
  CHECK(r.seed_stable);
  CHECK(r.classes[0].fp.disc == 3);
  CHECK(r.classes[0].fp.eps_at(7) == 1);
  CHECK(r.classes[0].fp.eps_at(13) == 1);
  CHECK(r.classes[0].sample_count == 100);

  // the canonical disc-3 representative lies in the same projective class
  std::vector<Rat> canon(10, Rat(1));
  canon[0] = Rat(3);
  CHECK(projectively_equivalent(fingerprint(QuadForm::diagonal(canon)), r.classes[0].fp));

  std::vector<Rat> q(12, Rat(1));
  q[0] = Rat(3);
  q[11] = Rat(-1);
  CHECK(ucc_verdict(r, QuadForm::diagonal(q), "3x1^2+x2^2+...+x11^2-x12^2"));
  REQUIRE(r.realization_matches.size() == 1);
  CHECK(r.realization_matches[0].second);
}

TEST_CASE("hw classifies into several classes") {
  ClassReport r = enumerate_classes(hantzsche_wendt(), 80, 1);
  CHECK(r.classes.size() >= 2);
  CHECK(!r.ucc_candidate);
  std::vector<Rat> q{Rat(1), Rat(1), Rat(1), Rat(1), Rat(-1)};
  CHECK(!ucc_verdict(r, QuadForm::diagonal(q), "euclidean"));
}

TEST_CASE("pair verdicts") {
  ClassReport w = enumerate_classes(build_wtC3(0), 60, 1);
  ClassReport c = enumerate_classes(build_C(5), 60, 1);
  PairReport p = pair_verdict(w, c);
  CHECK(p.verdict == "disjoint");
  CHECK(p.separating_invariant.find("disc") != std::string::npos);

  ClassReport h1 = enumerate_classes(hantzsche_wendt(), 60, 1);
  ClassReport h2 = enumerate_classes(hantzsche_wendt(), 60, 2);
  PairReport q = pair_verdict(h1, h2);
  CHECK(q.verdict == "overlapping");
}

TEST_CASE("mapping torus fingerprint") {
  // dims 7, 9, 13: values (-1)^((n^2-1)/8)
  CHECK(mapping_torus_fingerprint(1, 0, 30) == 1);
  CHECK(mapping_torus_fingerprint(0, 1, 30) == 1);
  CHECK(mapping_torus_fingerprint(2, 0, 30) == -1);
}

TEST_CASE("report json") {
  ClassReport r = enumerate_classes(hantzsche_wendt(), 30, 1);
  nlohmann::json j = class_report_to_json(r);
  CHECK(j.at("schema_version") == 1);
  CHECK(j.at("family") == r.label);
  CHECK(j.at("dim") == 3);
  CHECK(j.at("samples") == 30);
  CHECK(j.at("skipped") == 0);
  CHECK(j.at("classes").size() == r.classes.size());
  ClassReport w = enumerate_classes(build_wtC3(0), 20, 1);
  ClassReport c = enumerate_classes(build_C(5), 20, 1);
  nlohmann::json pj = pair_report_to_json(pair_verdict(w, c));
  CHECK(pj.at("schema_version") == 1);
  CHECK(pj.at("verdict") == "disjoint");
}
