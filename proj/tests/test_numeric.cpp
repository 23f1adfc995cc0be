#include <doctest.h>

#include <random>

#include "holoform/lattice.hpp"
#include "holoform/numeric.hpp"
#include "oracles.hpp"

using namespace holoform;

TEST_CASE("squarefree part") {
  CHECK(squarefree_part(Rat(18)) == 2);
  CHECK(squarefree_part(Rat(-12, 5)) == -15);
  CHECK(squarefree_part(Rat(1)) == 1);
  CHECK(squarefree_part(Rat(49, 4)) == 1);
  std::mt19937_64 rng(7);
  for (int i = 0; i < 300; ++i) {
    std::int64_t v = static_cast<std::int64_t>(rng() % 20001) - 10000;
    if (v == 0) continue;
    CHECK(squarefree_part_int(Int(v)) == oracles::brute_squarefree(Int(v)));
  }
}

TEST_CASE("factorize") {
  auto f = factorize(Int(3600));
  REQUIRE(f.size() == 3);
  CHECK(f[0] == std::pair<Int, unsigned>{2, 4});
  CHECK(f[1] == std::pair<Int, unsigned>{3, 2});
  CHECK(f[2] == std::pair<Int, unsigned>{5, 2});
  // large prime pair beyond trial division
  Int p("1000003"), q("1000033");
  auto g = factorize(p * q);
  REQUIRE(g.size() == 2);
  CHECK(g[0].first == p);
  CHECK(g[1].first == q);
  // perfect power of a large prime
  auto h = factorize(p * p * p);
  REQUIRE(h.size() == 1);
  CHECK(h[0] == std::pair<Int, unsigned>{p, 3});
}

TEST_CASE("try_factorize gives up on hard semiprimes") {
  Int p("618970019642690137449562111");   // 2^89 - 1
  Int q("162259276829213363391578010288127");  // 2^107 - 1
  CHECK(!try_factorize(p * q, 100000).has_value());
  CHECK(try_factorize(Int(1234567890), 100000).has_value());
}

TEST_CASE("legendre and p-adic squares") {
  CHECK(legendre_symbol(Int(2), Int(7)) == 1);
  CHECK(legendre_symbol(Int(3), Int(7)) == -1);
  CHECK(padic_is_square(Rat(-7), Place::at(2)));  // -7 = 1 mod 8
  CHECK(!padic_is_square(Rat(-1), Place::at(2)));
  CHECK(padic_is_square(Rat(4), Place::at(3)));
  CHECK(!padic_is_square(Rat(3), Place::at(5)));
  CHECK(padic_is_square(Rat(-1), Place::at(5)));
  CHECK(!padic_is_square(Rat(-2), Place::real()));
}

TEST_CASE("hilbert symbol worked examples") {
  CHECK(hilbert_symbol(Rat(2), Rat(5), Place::at(5)) == -1);
  CHECK(hilbert_symbol(Rat(3), Rat(3), Place::at(2)) == -1);
  CHECK(hilbert_symbol(Rat(-1), Rat(-1), Place::at(2)) == -1);
  CHECK(hilbert_symbol(Rat(-1), Rat(-1), Place::real()) == -1);
  CHECK(hilbert_symbol(Rat(2), Rat(3), Place::real()) == 1);
}

TEST_CASE("hilbert symbol against brute solvability oracle") {
  for (std::int64_t p : {2, 3, 5, 7}) {
    oracles::BruteHilbert oracle(p);
    for (std::int64_t a = -30; a <= 30; ++a)
      for (std::int64_t b = -30; b <= 30; ++b) {
        if (a == 0 || b == 0) continue;
        CAPTURE(p);
        CAPTURE(a);
        CAPTURE(b);
        CHECK(hilbert_symbol(Rat(a), Rat(b), Place::at(p)) == oracle.symbol(a, b));
      }
  }
}

TEST_CASE("hilbert product formula") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    std::int64_t a = static_cast<std::int64_t>(rng() % 199) - 99;
    std::int64_t b = static_cast<std::int64_t>(rng() % 199) - 99;
    if (a == 0 || b == 0) continue;
    PrimeSet s;
    s.add_support(Rat(a));
    s.add_support(Rat(b));
    int prod = hilbert_symbol(Rat(a), Rat(b), Place::real());
    for (const Int& p : s.primes()) prod *= hilbert_symbol(Rat(a), Rat(b), Place::at(p));
    CHECK(prod == 1);
  }
}

TEST_CASE("smith normal form") {
  ZMat M(2, 2);
  M << 2, 0, 0, 3;
  auto s = smith_normal_form(M);
  CHECK(s.D(0, 0) == 1);
  CHECK(s.D(1, 1) == 6);
  CHECK(s.U * M * s.V == s.D);
  std::mt19937_64 rng(3);
  for (int it = 0; it < 50; ++it) {
    ZMat A(3, 4);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 4; ++j) A(i, j) = static_cast<std::int64_t>(rng() % 11) - 5;
    auto r = smith_normal_form(A);
    CHECK(r.U * A * r.V == r.D);
    for (int i = 0; i + 1 < 3; ++i)
      if (r.D(i + 1, i + 1) != 0) CHECK(r.D(i + 1, i + 1) % (r.D(i, i) == 0 ? Int(1) : r.D(i, i)) == 0);
  }
}

TEST_CASE("lattice solve") {
  ZMat M(2, 2);
  M << 2, 0, 0, 3;
  RatVec b(2);
  b << Rat(4), Rat(9);
  auto x = lattice_solve(M, b);
  REQUIRE(x.has_value());
  CHECK((*x)(0) == 2);
  CHECK((*x)(1) == 3);
  b << Rat(1), Rat(1);
  CHECK(!lattice_solve(M, b).has_value());
  b << Rat(1, 2), Rat(1);
  CHECK(!lattice_solve(M, b).has_value());
}

TEST_CASE("rational parsing") {
  CHECK(parse_rational("3/4") == Rat(3, 4));
  CHECK(parse_rational("-7") == Rat(-7));
  CHECK(format_rational(Rat(-3, 9)) == "-1/3");
  CHECK_THROWS_AS(parse_rational("x"), NumericError);
  CHECK_THROWS_AS(parse_rational("1/0"), NumericError);
}
