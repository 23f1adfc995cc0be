#include <doctest.h>

#include <nlohmann/json.hpp>
#include <random>

#include "holoform/qform.hpp"

using namespace holoform;

namespace {

QuadForm random_form(std::mt19937_64& rng, int n, bool definite) {
  while (true) {
    RatMat G(n, n);
    if (definite) {
      // A^T A + small diagonal: positive definite with modest entries
      RatMat A(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A(i, j) = Rat(static_cast<std::int64_t>(rng() % 7) - 3);
      G = A.transpose() * A;
      for (int i = 0; i < n; ++i) G(i, i) += Rat(1 + static_cast<std::int64_t>(rng() % 3));
    } else {
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
          G(i, j) = G(j, i) = Rat(static_cast<std::int64_t>(rng() % 11) - 5,
                                  1 + static_cast<std::int64_t>(rng() % 3));
    }
    try {
      return QuadForm(G);
    } catch (const QFormError&) {
      // degenerate draw; retry
    }
  }
}

}  // namespace

TEST_CASE("diagonalization preserves invariants") {
  std::mt19937_64 rng(5);
  for (int it = 0; it < 60; ++it) {
    int n = 2 + static_cast<int>(rng() % 4);
    QuadForm f = random_form(rng, n, it % 2 == 0);
    auto diag = diagonalize(f);
    REQUIRE(static_cast<int>(diag.size()) == n);
    QuadForm d = QuadForm::diagonal(diag);
    CHECK(discriminant(f) == discriminant(d));
    CHECK(signature(f) == signature(d));
    for (Int p : {2, 3, 5, 7, 11}) CHECK(hasse_witt(f, p) == hasse_witt(d, p));
  }
}

TEST_CASE("fingerprint agrees with the elimination route") {
  std::mt19937_64 rng(9);
  for (int it = 0; it < 80; ++it) {
    int n = 2 + static_cast<int>(rng() % 5);
    QuadForm f = random_form(rng, n, it % 3 == 0);
    FormFingerprint a = fingerprint(f);
    FormFingerprint b = fingerprint_of_diagonal(diagonalize(f));
    CHECK(a.dim == b.dim);
    CHECK(a.sig == b.sig);
    CHECK(a.disc == b.disc);
    PrimeSet s = a.primes;
    s.merge(b.primes);
    for (const Int& p : s.primes()) CHECK(a.eps_at(p) == b.eps_at(p));
  }
}

TEST_CASE("fingerprint worked examples") {
  // <1,1,1> : disc 1, all eps +1
  FormFingerprint fp = fingerprint(QuadForm::diagonal({Rat(1), Rat(1), Rat(1)}));
  CHECK(fp.disc == 1);
  CHECK(fp.sig == std::pair<int, int>{3, 0});
  CHECK(fp.eps.empty());
  // <3,3> : disc 1 mod squares... actually 9 -> 1; eps_2 = (3,3)_2 = -1
  fp = fingerprint(QuadForm::diagonal({Rat(3), Rat(3)}));
  CHECK(fp.disc == 1);
  CHECK(fp.eps_at(2) == -1);
  CHECK(fp.eps_at(3) == hilbert_symbol(Rat(3), Rat(3), Place::at(3)));
}

TEST_CASE("scaling identity for fingerprints") {
  std::mt19937_64 rng(13);
  for (int it = 0; it < 50; ++it) {
    int n = 2 + static_cast<int>(rng() % 4);
    QuadForm f = random_form(rng, n, false);
    Int m(1 + static_cast<std::int64_t>(rng() % 15));
    m = squarefree_part_int(m);
    FormFingerprint direct = fingerprint(scale(f, Rat(m)));
    FormFingerprint derived = scale_fingerprint(fingerprint(f), m);
    CHECK(direct.disc == derived.disc);
    CHECK(direct.sig == derived.sig);
    PrimeSet s = direct.primes;
    s.merge(derived.primes);
    for (const Int& p : s.primes()) CHECK(direct.eps_at(p) == derived.eps_at(p));
  }
}

TEST_CASE("hyperbolic plane equivalences") {
  QuadForm h = QuadForm::diagonal({Rat(1), Rat(-1)});
  for (int m : {2, 3, 5, 6, 7, 30})
    CHECK(rationally_equivalent(QuadForm::diagonal({Rat(m), Rat(-m)}), h));
  CHECK(!rationally_equivalent(QuadForm::diagonal({Rat(1), Rat(1)}), h));
}

TEST_CASE("projective equivalence deciders") {
  QuadForm f = QuadForm::diagonal({Rat(1), Rat(1), Rat(1)});
  QuadForm g = QuadForm::diagonal({Rat(2), Rat(2), Rat(2)});
  // <1,1,7> scales only to candidates with disc 7 mod squares; at m = 7 the
  // eps_2 values differ ((7,7)_2 = -1), so it is not in the class of <1,1,1>.
  QuadForm h = QuadForm::diagonal({Rat(1), Rat(1), Rat(7)});
  CHECK(projectively_equivalent(fingerprint(f), fingerprint(g)));
  CHECK(!projectively_equivalent(fingerprint(f), fingerprint(h)));
  // indefinite: scaling by -1 is not allowed (positive scalings only)
  QuadForm a = QuadForm::diagonal({Rat(1), Rat(1), Rat(-1)});
  QuadForm b = QuadForm::diagonal({Rat(-1), Rat(-1), Rat(1)});
  CHECK(!projectively_equivalent(fingerprint(a), fingerprint(b)));

  std::mt19937_64 rng(21);
  for (int it = 0; it < 200; ++it) {
    int n = 2 + static_cast<int>(rng() % 7);
    std::vector<Rat> fd(n), gd(n);
    for (auto& e : fd) e = Rat(1 + static_cast<std::int64_t>(rng() % 20));
    if (it % 2 == 0) {
      Int m(1 + static_cast<std::int64_t>(rng() % 20));
      for (int i = 0; i < n; ++i) gd[i] = fd[i] * m;
    } else {
      for (auto& e : gd) e = Rat(1 + static_cast<std::int64_t>(rng() % 20));
    }
    FormFingerprint a2 = fingerprint_of_diagonal(fd), b2 = fingerprint_of_diagonal(gd);
    CHECK(projectively_equivalent_search(a2, b2) == projectively_equivalent_invariants(a2, b2));
    if (it % 2 == 0) CHECK(projectively_equivalent(a2, b2));
  }
}

TEST_CASE("realization test") {
  // <1,..,1> in rank n realizes <1,...,1,-1> of signature (n+1,1)
  for (int n : {3, 4, 5}) {
    std::vector<Rat> ones(n, Rat(1)), q(n + 2, Rat(1));
    q[n + 1] = Rat(-1);
    CHECK(realization_test(QuadForm::diagonal(ones), QuadForm::diagonal(q)));
  }
  // disc obstruction: <3,1,..,1> (even rank) is not in the <1,...,1,-1> class
  std::vector<Rat> f(10, Rat(1)), q(12, Rat(1));
  f[0] = Rat(3);
  q[11] = Rat(-1);
  CHECK(!realization_test(QuadForm::diagonal(f), QuadForm::diagonal(q)));
  std::vector<Rat> q3 = q;
  q3[0] = Rat(3);
  CHECK(realization_test(QuadForm::diagonal(f), QuadForm::diagonal(q3)));
}

TEST_CASE("direct sum multiplicativity") {
  std::mt19937_64 rng(31);
  for (int it = 0; it < 50; ++it) {
    QuadForm f = random_form(rng, 2 + static_cast<int>(rng() % 3), false);
    QuadForm g = random_form(rng, 2 + static_cast<int>(rng() % 3), false);
    QuadForm fg = direct_sum(f, g);
    Rat df = 1, dg = 1;
    for (const Rat& a : diagonalize(f)) df *= a;
    for (const Rat& a : diagonalize(g)) dg *= a;
    for (Int p : {2, 3, 5, 7}) {
      CHECK(hasse_witt(fg, p) ==
            hasse_witt(f, p) * hasse_witt(g, p) * hilbert_symbol(df, dg, Place::at(p)));
    }
    CHECK(discriminant(fg) == squarefree_part(df * dg));
  }
}

TEST_CASE("json round trip") {
  QuadForm f = QuadForm::diagonal({Rat(3), Rat(1, 2), Rat(-5)});
  QuadForm g = quadform_from_json(quadform_to_json(f));
  CHECK(g.gram() == f.gram());
}
