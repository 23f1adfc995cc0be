#include "holoform/selftest.hpp"

#include <random>

namespace holoform {

namespace {

// deliberately wrong 2-adic symbol (omega terms dropped); the product-formula
// suite must catch it
int broken_hilbert_2(const Rat& a, const Rat& b) {
  long alpha = valuation(a, 2), beta = valuation(b, 2);
  (void)alpha;
  (void)beta;
  Int ua = numerator(a), ub = numerator(b);
  while (ua % 2 == 0) ua /= 2;
  while (ub % 2 == 0) ub /= 2;
  int e = static_cast<int>(((abs(ua) - 1) / 2) % 2) * static_cast<int>(((abs(ub) - 1) / 2) % 2);
  return e % 2 == 0 ? 1 : -1;
}

Int nonzero_int(std::mt19937_64& rng, int bound) {
  Int v = static_cast<std::int64_t>(rng() % (2 * bound + 1)) - bound;
  return v == 0 ? Int(1) : v;
}

int product_over_places(const Rat& a, const Rat& b, bool mutate_2) {
  PrimeSet s;
  s.add_support(a);
  s.add_support(b);
  int prod = hilbert_symbol(a, b, Place::real());
  for (const Int& p : s.primes())
    prod *= (mutate_2 && p == 2) ? broken_hilbert_2(a, b)
                                 : hilbert_symbol(a, b, Place::at(p));
  return prod;
}

SuiteResult suite_product_formula(std::mt19937_64& rng) {
  SuiteResult r{"hilbert-product-formula", 0, 0};
  bool mutant_caught = false;
  for (int i = 0; i < 1000; ++i) {
    Rat a(nonzero_int(rng, 50)), b(nonzero_int(rng, 50));
    ++r.checks;
    if (product_over_places(a, b, false) != 1) ++r.failures;
    if (product_over_places(a, b, true) != 1) mutant_caught = true;
  }
  ++r.checks;  // the mutation check itself
  if (!mutant_caught) ++r.failures;
  return r;
}

std::vector<Rat> random_diagonal(std::mt19937_64& rng, int dim, int bound, bool positive) {
  std::vector<Rat> d(dim);
  for (auto& e : d) {
    Int v = nonzero_int(rng, bound);
    e = Rat(positive ? abs(v) : v);
  }
  return d;
}

SuiteResult suite_sum_of_forms(std::mt19937_64& rng) {
  SuiteResult r{"sum-of-forms", 0, 0};
  for (int i = 0; i < 500; ++i) {
    int nf = 2 + static_cast<int>(rng() % 3), ng = 2 + static_cast<int>(rng() % 3);
    std::vector<Rat> f = random_diagonal(rng, nf, 9, false);
    std::vector<Rat> g = random_diagonal(rng, ng, 9, false);
    std::vector<Rat> fg = f;
    fg.insert(fg.end(), g.begin(), g.end());
    Rat df = 1, dg = 1;
    for (const Rat& e : f) df *= e;
    for (const Rat& e : g) dg *= e;
    PrimeSet s;
    for (const Rat& e : fg) s.add_support(e);
    ++r.checks;
    for (const Int& p : s.primes()) {
      int lhs = hasse_witt_diagonal(fg, p);
      int rhs = hasse_witt_diagonal(f, p) * hasse_witt_diagonal(g, p) *
                hilbert_symbol(df, dg, Place::at(p));
      if (lhs != rhs) {
        ++r.failures;
        break;
      }
    }
  }
  return r;
}

SuiteResult suite_footnote_equivalence() {
  SuiteResult r{"hyperbolic-plane-equivalence", 0, 0};
  QuadForm h = QuadForm::diagonal({Rat(1), Rat(-1)});
  for (int m : {2, 3, 5, 6, 7, 30}) {
    ++r.checks;
    if (!rationally_equivalent(QuadForm::diagonal({Rat(m), Rat(-m)}), h)) ++r.failures;
  }
  return r;
}

SuiteResult suite_decider_agreement(std::mt19937_64& rng) {
  SuiteResult r{"decider-agreement", 0, 0};
  for (int i = 0; i < 200; ++i) {
    int n = 2 + static_cast<int>(rng() % 7);
    std::vector<Rat> fd = random_diagonal(rng, n, 20, true);
    std::vector<Rat> gd;
    switch (rng() % 3) {
      case 0:  // independent draw
        gd = random_diagonal(rng, n, 20, true);
        break;
      case 1: {  // scaled copy: projectively equivalent by construction
        Int m = abs(nonzero_int(rng, 20));
        gd = fd;
        for (Rat& e : gd) e *= m;
        break;
      }
      default:  // scaled copy with one entry replaced
        gd = fd;
        gd[rng() % n] = Rat(abs(nonzero_int(rng, 20)));
        break;
    }
    FormFingerprint f = fingerprint_of_diagonal(fd), g = fingerprint_of_diagonal(gd);
    ++r.checks;
    if (projectively_equivalent_search(f, g) != projectively_equivalent_invariants(f, g))
      ++r.failures;
  }
  return r;
}

}  // namespace

std::vector<SuiteResult> run_selftests(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<SuiteResult> out;
  out.push_back(suite_product_formula(rng));
  out.push_back(suite_sum_of_forms(rng));
  out.push_back(suite_footnote_equivalence());
  out.push_back(suite_decider_agreement(rng));
  return out;
}

bool all_passed(const std::vector<SuiteResult>& results) {
  for (const auto& r : results)
    if (r.failures != 0) return false;
  return true;
}

}  // namespace holoform
