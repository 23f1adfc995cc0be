#pragma once

// Exact scalar layer: arbitrary-precision rationals, prime/valuation
// utilities, Legendre and Hilbert symbols, p-adic square tests.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>

namespace holoform {

using Int = boost::multiprecision::mpz_int;
using Rat = boost::multiprecision::mpq_rational;

using RatMat = Eigen::Matrix<Rat, Eigen::Dynamic, Eigen::Dynamic>;
using RatVec = Eigen::Matrix<Rat, Eigen::Dynamic, 1>;
using ZMat = Eigen::Matrix<Int, Eigen::Dynamic, Eigen::Dynamic>;
using ZVec = Eigen::Matrix<Int, Eigen::Dynamic, 1>;
using IMat = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using IVec = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A place of Q: a finite prime or the real place.
struct Place {
  Int prime;  // 0 encodes the real place

  bool is_real() const { return prime == 0; }
  static Place real() { return Place{0}; }
  static Place at(Int p) { return Place{std::move(p)}; }

  bool operator==(const Place& o) const { return prime == o.prime; }
};

/// Deterministic primality test (Miller-Rabin backed, suitable for desk-scale
/// operands).
bool is_prime(const Int& n);

/// Full factorization of |n|, n != 0. Trial division up to `trial_bound`,
/// then perfect-power extraction and Brent's rho for whatever is left.
std::vector<std::pair<Int, unsigned>> factorize(const Int& n,
                                                std::uint64_t trial_bound = 1000000);

/// Like factorize, but gives up (returns nothing) once rho has spent
/// `rho_budget` squarings without splitting the remaining cofactor. Keeps
/// callers responsive when a cofactor is a product of two large primes.
std::optional<std::vector<std::pair<Int, unsigned>>> try_factorize(
    const Int& n, std::uint64_t rho_budget = 8000000,
    std::uint64_t trial_bound = 1000000);

/// The unique squarefree integer s with x = s * r^2, r rational. Sign carried.
Int squarefree_part(const Rat& x);
Int squarefree_part_int(const Int& x);

/// Legendre symbol (a/p), p an odd prime.
int legendre_symbol(const Int& a, const Int& p);

/// p-adic valuation. x != 0.
long valuation(const Int& x, const Int& p);
long valuation(const Rat& x, const Int& p);

/// True iff a is a square in the completion at v. a != 0.
bool padic_is_square(const Rat& a, const Place& v);

/// Hilbert symbol (a,b)_v in {-1,+1}. a,b != 0.
int hilbert_symbol(const Rat& a, const Rat& b, const Place& v);

/// Ascending prime list, always containing 2. Outside it, Hilbert symbols
/// among the generating scalars are trivial.
class PrimeSet {
 public:
  PrimeSet();  // {2}
  explicit PrimeSet(std::vector<Int> primes);

  void add(const Int& p);
  void add_support(const Rat& x);
  void merge(const PrimeSet& other);
  bool contains(const Int& p) const;

  const std::vector<Int>& primes() const { return primes_; }

 private:
  std::vector<Int> primes_;  // sorted, unique, contains 2
};

/// Prime support of a nonzero rational (primes dividing numerator or
/// denominator).
std::vector<Int> prime_support(const Rat& x);

/// "p/q" (or plain "p") parsing and formatting, used by all JSON surfaces.
Rat parse_rational(const std::string& s);
std::string format_rational(const Rat& x);

}  // namespace holoform
