#include <doctest.h>

#include "holoform/constructions.hpp"

using namespace holoform;

TEST_CASE("hantzsche-wendt and its tau symmetry") {
  FlatManifoldPresentation hw = hantzsche_wendt();
  AffineTorusIsometry tau = hw_tau();
  CHECK(compose(compose(tau, tau), tau).is_identity());
  // tau normalizes the group: it cycles gamma -> delta -> gamma*delta
  TorusGroup G = generate_group(3, hw.generators);
  for (const auto& g : hw.generators) {
    AffineTorusIsometry c = compose(compose(tau, g), inverse(tau));
    bool found = false;
    G.for_each([&](const AffineTorusIsometry& e) { found = found || e == c; });
    CHECK(found);
  }
}

TEST_CASE("hw extensions") {
  // orientable iff the multiplicities share one parity; b1 = 0 always
  struct Row {
    int a1, a2, a3;
    bool orientable;
  };
  for (Row r : {Row{1, 1, 1, true}, Row{2, 2, 1, false}, Row{2, 2, 2, true},
                Row{3, 1, 1, true}, Row{2, 1, 1, false}}) {
    HolonomyData h = verify_flat_manifold(hw_extension(r.a1, r.a2, r.a3));
    CHECK(h.dim == r.a1 + r.a2 + r.a3);
    CHECK(h.order == 4);
    CHECK(h.b1 == 0);
    CHECK(h.orientable == r.orientable);
  }
  CHECK_THROWS_AS(hw_extension(0, 1, 1), ConstructionError);
}

TEST_CASE("C manifolds") {
  HolonomyData c3 = verify_flat_manifold(build_C(3));
  CHECK(c3.dim == 6);
  CHECK(c3.order == 16);
  CHECK(c3.b1 == 0);
  CHECK(!c3.orientable);
  HolonomyData c5 = verify_flat_manifold(build_C(5));
  CHECK(c5.dim == 10);
  CHECK(c5.order == 16);
  CHECK(c5.b1 == 0);
  CHECK(c5.orientable);
}

TEST_CASE("E manifolds") {
  EData e = build_E(3);
  HolonomyData he = verify_flat_manifold(e.E);
  CHECK(he.dim == 12);
  CHECK(he.order == 128);
  CHECK(he.b1 == 0);
  CHECK(he.orientable);
  HolonomyData ht = verify_flat_manifold(e.Etilde.cover);
  CHECK(ht.dim == 12);
  CHECK(ht.order == 64);
  CHECK(ht.b1 == 0);
  CHECK(ht.orientable);
  // the deck transformation extends the cover back to E's group
  std::vector<AffineTorusIsometry> gens = e.Etilde.cover.generators;
  gens.push_back(e.Etilde.deck);
  CHECK(generate_group(12, gens).size() == 2 * ht.size());
}

TEST_CASE("Z3 manifolds") {
  HolonomyData w = verify_flat_manifold(build_wtC3(0));
  CHECK(w.dim == 10);
  CHECK(w.order == 9);
  CHECK(w.b1 == 0);
  CHECK(w.orientable);
  HolonomyData w2 = verify_flat_manifold(build_wtC3(2));
  CHECK(w2.dim == 12);
  CHECK(w2.order == 9);
  CoverData full = build_C3_full(0);
  HolonomyData f = verify_flat_manifold(full.base);
  CHECK(f.dim == 10);
  CHECK(f.order == 27);
  CHECK(f.b1 == 0);
  CHECK(f.orientable);
  CHECK(compose(compose(full.deck, full.deck), full.deck).is_identity());
}

TEST_CASE("mapping tori") {
  // companion matrices of the 7th and 15th cyclotomic polynomials have
  // multiplicative orders 7 and 15
  IMat a = companion_phi7();
  IMat p = IMat::Identity(6, 6);
  int ord = 0;
  do {
    p = (a * p).eval();
    ++ord;
  } while (p != IMat::Identity(6, 6) && ord < 100);
  CHECK(ord == 7);
  IMat b = companion_phi15();
  p = IMat::Identity(8, 8);
  ord = 0;
  do {
    p = (b * p).eval();
    ++ord;
  } while (p != IMat::Identity(8, 8) && ord < 100);
  CHECK(ord == 15);

  struct Row {
    int k, l, dim;
    std::size_t order;
  };
  for (Row r : {Row{1, 0, 7, 7}, Row{0, 1, 9, 15}, Row{1, 1, 15, 105}, Row{2, 0, 13, 7}}) {
    HolonomyData h = verify_flat_manifold(mapping_torus(r.k, r.l));
    CHECK(h.dim == r.dim);
    CHECK(h.order == r.order);
    CHECK(h.b1 == 1);
    CHECK(h.orientable);
  }
  CHECK_THROWS_AS(mapping_torus(0, 0), ConstructionError);
}

TEST_CASE("tori and products") {
  HolonomyData t = verify_flat_manifold(torus(4));
  CHECK(t.dim == 4);
  CHECK(t.order == 1);
  CHECK(t.b1 == 4);
  CHECK(verify_flat_manifold(circle()).dim == 1);
  HolonomyData pr = verify_flat_manifold(product(circle(), hantzsche_wendt()));
  CHECK(pr.dim == 4);
  CHECK(pr.order == 4);
  CHECK(pr.b1 == 1);
}

TEST_CASE("family grammar") {
  struct Row {
    const char* spec;
    int dim;
  };
  for (Row r : {Row{"hw", 3}, Row{"hw_ext:2,1,1", 4}, Row{"C:k=4", 8}, Row{"E:k=3", 12},
                Row{"Etilde:k=3", 12}, Row{"wtC3:2", 12}, Row{"C3:0", 10}, Row{"F:k=0,l=0", 35},
                Row{"Ep:k=0", 32}, Row{"mt:k=2,l=1", 21}, Row{"torus:5", 5}, Row{"S1", 1},
                Row{"product:(S1,E:k=3)", 13}, Row{"product:(hw,torus:2)", 5}}) {
    CHECK(family_dim(r.spec) == r.dim);
  }
  // family_dim agrees with the built presentation on the cheap families
  for (const char* s : {"hw", "C:k=3", "wtC3:0", "mt:k=1,l=0", "product:(S1,hw)"})
    CHECK(family_dim(s) == build_family(s).dim);
  CHECK_THROWS_AS(build_family("nosuch"), ConstructionError);
  CHECK_THROWS_AS(build_family("C:k=2"), ConstructionError);
  CHECK_THROWS_AS(build_family("mt:k=-1,l=0"), ConstructionError);
  CHECK_THROWS_AS(family_dim("product:(S1"), ConstructionError);
}
