#include "holoform/numeric.hpp"

#include <algorithm>
#include <numeric>

#include <gmp.h>

namespace holoform {

bool is_prime(const Int& n) {
  if (n < 2) return false;
  return mpz_probab_prime_p(n.backend().data(), 40) != 0;
}

namespace {

// Brent's cycle-finding variant of Pollard rho. n composite, odd, > 1.
// Returns 0 once `budget` squarings are spent without finding a factor
// (budget 0 = unlimited).
Int pollard_brent(const Int& n, std::uint64_t budget) {
  if (n % 2 == 0) return 2;
  gmp_randstate_t st;
  gmp_randinit_mt(st);
  gmp_randseed_ui(st, 0x9e3779b97f4a7c15ull);
  Int y, c, m = 128, g = 1, r = 1, q = 1, x, ys;
  std::uint64_t spent = 0;
  auto rnd = [&](Int& out) {
    mpz_urandomm(out.backend().data(), st, n.backend().data());
    if (out == 0) out = 1;
  };
  while (budget == 0 || spent < budget) {
    rnd(y);
    rnd(c);
    g = 1;
    r = 1;
    q = 1;
    while (g == 1) {
      x = y;
      for (Int i = 0; i < r; ++i) y = (y * y + c) % n;
      Int k = 0;
      while (k < r && g == 1) {
        ys = y;
        Int lim = std::min<Int>(m, r - k);
        for (Int i = 0; i < lim; ++i) {
          y = (y * y + c) % n;
          q = q * abs(x - y) % n;
        }
        g = gcd(q, n);
        k += m;
      }
      spent += r.convert_to<std::uint64_t>();
      r *= 2;
      if (g == 1 && budget != 0 && spent >= budget) break;
    }
    if (g == 1) continue;  // budget ran out mid-round
    if (g == n) {
      g = 1;
      while (g == 1) {
        ys = (ys * ys + c) % n;
        g = gcd(abs(x - ys), n);
      }
    }
    if (g != n) {
      gmp_randclear(st);
      return g;
    }
    // bad parameters, retry with fresh y, c
  }
  gmp_randclear(st);
  return 0;
}

bool factor_rec(const Int& n, std::map<Int, unsigned>& out, unsigned mult,
                std::uint64_t budget) {
  if (n == 1) return true;
  if (is_prime(n)) {
    out[n] += mult;
    return true;
  }
  if (mpz_perfect_power_p(n.backend().data())) {
    // smallest root: try exponents ascending
    for (unsigned k = 2;; ++k) {
      Int root;
      if (mpz_root(root.backend().data(), n.backend().data(), k))
        return factor_rec(root, out, mult * k, budget);
      if (root < 2) break;
    }
  }
  Int d = pollard_brent(n, budget);
  if (d == 0) return false;
  return factor_rec(d, out, mult, budget) && factor_rec(n / d, out, mult, budget);
}

std::optional<std::vector<std::pair<Int, unsigned>>> factorize_impl(
    const Int& n, std::uint64_t trial_bound, std::uint64_t rho_budget) {
  if (n == 0) throw NumericError("factorize: zero input");
  Int m = abs(n);
  std::map<Int, unsigned> fac;
  for (std::uint64_t p = 2; p * p <= m && p <= trial_bound; p += (p == 2 ? 1 : 2)) {
    while (m % p == 0) {
      fac[Int(p)]++;
      m /= p;
    }
  }
  if (m > 1 && !factor_rec(m, fac, 1, rho_budget)) return std::nullopt;
  return std::vector<std::pair<Int, unsigned>>{fac.begin(), fac.end()};
}

}  // namespace

std::vector<std::pair<Int, unsigned>> factorize(const Int& n, std::uint64_t trial_bound) {
  return *factorize_impl(n, trial_bound, 0);
}

std::optional<std::vector<std::pair<Int, unsigned>>> try_factorize(
    const Int& n, std::uint64_t rho_budget, std::uint64_t trial_bound) {
  return factorize_impl(n, trial_bound, rho_budget);
}

Int squarefree_part_int(const Int& x) {
  if (x == 0) throw NumericError("squarefree_part: zero input");
  Int s = x < 0 ? -1 : 1;
  for (const auto& [p, e] : factorize(x)) {
    if (e % 2 == 1) s *= p;
  }
  return s;
}

Int squarefree_part(const Rat& x) {
  if (x == 0) throw NumericError("squarefree_part: zero input");
  // n/d and n*d differ by the square d^2
  return squarefree_part_int(Int(numerator(x)) * Int(denominator(x)));
}

int legendre_symbol(const Int& a, const Int& p) {
  if (p <= 2 || !is_prime(p)) throw NumericError("legendre_symbol: p must be an odd prime");
  return mpz_legendre(a.backend().data(), p.backend().data());
}

long valuation(const Int& x, const Int& p) {
  if (x == 0) throw NumericError("valuation: zero input");
  Int m = x;
  long v = 0;
  while (m % p == 0) {
    m /= p;
    ++v;
  }
  return v;
}

long valuation(const Rat& x, const Int& p) {
  if (x == 0) throw NumericError("valuation: zero input");
  return valuation(Int(numerator(x)), p) - valuation(Int(denominator(x)), p);
}

namespace {

// Unit part of x at p, reduced mod p^k as an integer in [0, p^k).
Int unit_mod(const Rat& x, const Int& p, const Int& pk) {
  Int num = numerator(x), den = denominator(x);
  while (num % p == 0) num /= p;
  while (den % p == 0) den /= p;
  Int inv;
  if (mpz_invert(inv.backend().data(), den.backend().data(), pk.backend().data()) == 0)
    throw NumericError("unit_mod: non-invertible denominator");
  Int r = num * inv % pk;
  if (r < 0) r += pk;
  return r;
}

int eps2(const Int& u) { return static_cast<int>(((u - 1) / 2) % 2); }        // u odd
int omega2(const Int& u) { return static_cast<int>(((u * u - 1) / 8) % 2); }  // u odd

}  // namespace

bool padic_is_square(const Rat& a, const Place& v) {
  if (a == 0) throw NumericError("padic_is_square: zero input");
  if (v.is_real()) return a > 0;
  const Int& p = v.prime;
  long val = valuation(a, p);
  if (val % 2 != 0) return false;
  if (p == 2) {
    Int u = unit_mod(a, 2, Int(8));
    return u == 1;
  }
  Int u = unit_mod(a, p, p);
  return legendre_symbol(u, p) == 1;
}

int hilbert_symbol(const Rat& a, const Rat& b, const Place& v) {
  if (a == 0 || b == 0) throw NumericError("hilbert_symbol: zero input");
  if (v.is_real()) return (a < 0 && b < 0) ? -1 : 1;
  const Int& p = v.prime;
  long alpha = valuation(a, p), beta = valuation(b, p);
  if (p == 2) {
    Int u = unit_mod(a, 2, Int(8));
    Int w = unit_mod(b, 2, Int(8));
    int e = eps2(u) * eps2(w) + static_cast<int>(alpha % 2 == 0 ? 0 : omega2(w)) +
            static_cast<int>(beta % 2 == 0 ? 0 : omega2(u));
    return e % 2 == 0 ? 1 : -1;
  }
  Int u = unit_mod(a, p, p);
  Int w = unit_mod(b, p, p);
  int sign = 1;
  if (alpha % 2 != 0 && beta % 2 != 0 && ((p - 1) / 2) % 2 != 0) sign = -sign;
  if (beta % 2 != 0 && legendre_symbol(u, p) == -1) sign = -sign;
  if (alpha % 2 != 0 && legendre_symbol(w, p) == -1) sign = -sign;
  return sign;
}

PrimeSet::PrimeSet() : primes_{Int(2)} {}

PrimeSet::PrimeSet(std::vector<Int> primes) : primes_(std::move(primes)) {
  add(Int(2));
}

void PrimeSet::add(const Int& p) {
  auto it = std::lower_bound(primes_.begin(), primes_.end(), p);
  if (it == primes_.end() || *it != p) primes_.insert(it, p);
}

void PrimeSet::add_support(const Rat& x) {
  for (const auto& p : prime_support(x)) add(p);
}

void PrimeSet::merge(const PrimeSet& other) {
  for (const auto& p : other.primes_) add(p);
}

bool PrimeSet::contains(const Int& p) const {
  return std::binary_search(primes_.begin(), primes_.end(), p);
}

std::vector<Int> prime_support(const Rat& x) {
  if (x == 0) throw NumericError("prime_support: zero input");
  std::vector<Int> out;
  Int n = Int(numerator(x)) * Int(denominator(x));
  for (const auto& [p, e] : factorize(n)) out.push_back(p);
  return out;
}

Rat parse_rational(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rat(Int(s));
    Int num(s.substr(0, slash));
    Int den(s.substr(slash + 1));
    if (den == 0) throw NumericError("parse_rational: zero denominator");
    return Rat(num) / Rat(den);
  } catch (const std::exception& e) {
    throw NumericError("parse_rational: bad input '" + s + "'");
  }
}

std::string format_rational(const Rat& x) {
  std::string out = Int(numerator(x)).str();
  if (denominator(x) != 1) out += "/" + Int(denominator(x)).str();
  return out;
}

}  // namespace holoform
