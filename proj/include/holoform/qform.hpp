#pragma once

// Rational quadratic forms, their local invariants, and the
// equivalence / projective-equivalence / realization decisions.

#include <map>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "holoform/lattice.hpp"
#include "holoform/numeric.hpp"

namespace holoform {

struct QFormError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown when the two projective-equivalence deciders disagree; signals a
/// candidate-scaling support set that is too small.
struct DeciderMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Nondegenerate quadratic form over Q, as a symmetric Gram matrix.
class QuadForm {
 public:
  explicit QuadForm(RatMat gram);
  static QuadForm diagonal(const std::vector<Rat>& entries);

  int dim() const { return static_cast<int>(gram_.rows()); }
  const RatMat& gram() const { return gram_; }

 private:
  RatMat gram_;
};

/// Diagonal entries of an equivalent diagonal form (symmetric elimination).
std::vector<Rat> diagonalize(const QuadForm& f);

Int discriminant(const QuadForm& f);

/// (positives, negatives).
std::pair<int, int> signature(const QuadForm& f);

int hasse_witt(const QuadForm& f, const Int& p);
int hasse_witt_diagonal(const std::vector<Rat>& entries, const Int& p);

QuadForm direct_sum(const QuadForm& f, const QuadForm& g);
QuadForm scale(const QuadForm& f, const Rat& m);

/// Complete rational-equivalence invariant: dim, signature, discriminant,
/// and the Hasse-Witt invariants over the support prime set.
struct FormFingerprint {
  int dim = 0;
  std::pair<int, int> sig;
  Int disc;                 // signed squarefree
  std::map<Int, int> eps;   // +1 implicitly outside
  PrimeSet primes;

  int eps_at(const Int& p) const;
  /// (disc,-1)_p * eps_p, the projective invariant in dim 3 mod 4.
  int twisted_at(const Int& p) const;
};

FormFingerprint fingerprint(const QuadForm& f);
FormFingerprint fingerprint_of_diagonal(const std::vector<Rat>& entries);

/// Fingerprint under a factoring budget; nothing when some leading minor of
/// the Gram matrix resists factorization within the budget (e.g. a product
/// of two large primes). Samplers skip such forms and report the skip.
std::optional<FormFingerprint> try_fingerprint(const QuadForm& f,
                                               std::uint64_t rho_budget = 8000000);

/// Diagonal of an equivalent form computed fraction-free, without any
/// factorization: <D_1, D_1 D_2, ..., D_{n-1} D_n> from the leading
/// principal minors of the integerized Gram (the form scaled by `scale_out`).
/// Falls back to `diagonalize` (with scale_out = 1) when a minor vanishes.
/// Enough for local invariants at a fixed prime.
std::vector<Rat> raw_diagonal(const QuadForm& f, Int& scale_out);

/// Fingerprint of m*f from the fingerprint of f, via symbol bilinearity.
FormFingerprint scale_fingerprint(const FormFingerprint& fp, const Int& m);

bool rationally_equivalent(const FormFingerprint& f, const FormFingerprint& g);
bool rationally_equivalent(const QuadForm& f, const QuadForm& g);

/// Decider (A): finds a positive squarefree scaling m with m*f rationally
/// equivalent to g, searching the union prime set plus at most one auxiliary
/// prime (candidates from a GF(2) solve in the prime indicators, each verified
/// directly). `brute_force` enumerates subsets of the union support literally.
bool projectively_equivalent_search(const FormFingerprint& f, const FormFingerprint& g,
                                    bool brute_force = false);

/// Decider (B): the case split on dim mod 4, positive definite forms only.
bool projectively_equivalent_invariants(const FormFingerprint& f, const FormFingerprint& g);

/// Runs both deciders on positive definite forms (and throws DeciderMismatch
/// if they disagree); indefinite forms use the search decider only.
bool projectively_equivalent(const FormFingerprint& f, const FormFingerprint& g);
bool projectively_equivalent(const QuadForm& f, const QuadForm& g);

/// Whether the rank-n positive definite f, as a holonomy form, matches the
/// commensurability class of the signature-(n+1,1) form q: projective
/// equivalence of f + <1,-1> with q.
bool realization_test(const QuadForm& f, const QuadForm& q);

nlohmann::json quadform_to_json(const QuadForm& f);
QuadForm quadform_from_json(const nlohmann::json& j);
nlohmann::json fingerprint_to_json(const FormFingerprint& fp);

}  // namespace holoform
