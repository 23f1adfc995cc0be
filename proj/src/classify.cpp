#include "holoform/classify.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "holoform/constructions.hpp"

namespace holoform {

namespace {

// Symmetric coordinates: variables x_(i,j) for i <= j.
int sym_index(int i, int j, int n) {
  if (i > j) std::swap(i, j);
  return i * n - i * (i - 1) / 2 + (j - i);
}

// Sparse row: variable index -> coefficient.
using SparseRow = std::map<int, Rat>;

// Incremental exact RREF over sparse rows; pivots keyed by variable.
struct SparseSolver {
  std::map<int, SparseRow> pivots;  // pivot var -> normalized row (coeff 1 at pivot)

  void add_equation(SparseRow eq) {
    while (true) {
      int hit = -1;
      for (const auto& [var, coeff] : eq)
        if (pivots.count(var)) {
          hit = var;
          break;
        }
      if (hit < 0) break;
      Rat f = eq[hit];
      for (const auto& [var, coeff] : pivots[hit]) {
        Rat& e = eq[var];
        e -= f * coeff;
        if (e == 0) eq.erase(var);
      }
    }
    if (eq.empty()) return;
    int pv = eq.begin()->first;
    Rat inv = Rat(1) / eq.begin()->second;
    for (auto& [var, coeff] : eq) coeff *= inv;
    // keep the existing rows reduced against the new pivot
    for (auto& [opv, row] : pivots) {
      auto it = row.find(pv);
      if (it == row.end()) continue;
      Rat f = it->second;
      for (const auto& [var, coeff] : eq) {
        Rat& e = row[var];
        e -= f * coeff;
        if (e == 0) row.erase(var);
      }
    }
    pivots.emplace(pv, std::move(eq));
  }
};

RatMat unflatten(const std::vector<Rat>& x, int n) {
  RatMat F(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) F(i, j) = F(j, i) = x[sym_index(i, j, n)];
  return F;
}

std::string imat_key(const IMat& M) {
  std::string k;
  k.reserve(M.size() * sizeof(std::int64_t));
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      std::int64_t v = M(i, j);
      k.append(reinterpret_cast<const char*>(&v), sizeof(v));
    }
  return k;
}

// Exact positive-definiteness: all leading pivots of symmetric elimination
// positive (equivalent to positive leading principal minors).
bool is_positive_definite(RatMat F) {
  const int n = static_cast<int>(F.rows());
  for (int k = 0; k < n; ++k) {
    if (F(k, k) <= 0) return false;
    for (int i = k + 1; i < n; ++i) {
      if (F(i, k) == 0) continue;
      Rat f = F(i, k) / F(k, k);
      for (int j = k; j < n; ++j) F(i, j) -= f * F(k, j);
    }
    for (int j = k + 1; j < n; ++j) F(k, j) = 0;
  }
  return true;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

InvariantFormSpace invariant_form_space(const HolonomyData& H) {
  const int n = H.dim;
  const int nvars = n * (n + 1) / 2;
  SparseSolver solver;
  for (const IMat& A : H.generators) {
    // (A^T F A)_{ij} = sum_{k,l} A_{ki} F_{kl} A_{lj}; exploit sparsity of A.
    std::vector<std::vector<std::pair<int, std::int64_t>>> col(n);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        if (A(k, i) != 0) col[i].push_back({k, A(k, i)});
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        SparseRow eq;
        for (const auto& [k, aki] : col[i])
          for (const auto& [l, alj] : col[j]) {
            Rat& e = eq[sym_index(k, l, n)];
            e += Rat(aki) * Rat(alj);
          }
        Rat& d = eq[sym_index(i, j, n)];
        d -= 1;
        for (auto it = eq.begin(); it != eq.end();)
          it = (it->second == 0) ? eq.erase(it) : std::next(it);
        if (!eq.empty()) solver.add_equation(std::move(eq));
      }
  }

  InvariantFormSpace S;
  S.dim = n;
  std::vector<bool> is_pivot(nvars, false);
  for (const auto& [pv, row] : solver.pivots) is_pivot[pv] = true;
  for (int fv = 0; fv < nvars; ++fv) {
    if (is_pivot[fv]) continue;
    std::vector<Rat> x(nvars, Rat(0));
    x[fv] = 1;
    for (const auto& [pv, row] : solver.pivots) {
      auto it = row.find(fv);
      if (it != row.end()) x[pv] = -it->second;
    }
    S.basis.push_back(unflatten(x, n));
  }

  // averaged = sum over the holonomy group of rho(h)^T rho(h), computed from
  // the orbit of the identity under F -> A^T F A (each orbit member occurs
  // |H| / orbit_size times), then made primitive.
  std::vector<IMat> orbit{IMat::Identity(n, n)};
  std::set<std::string> seen{imat_key(orbit[0])};
  for (std::size_t q = 0; q < orbit.size(); ++q) {
    IMat cur = orbit[q];
    for (const IMat& A : H.generators) {
      IMat nxt = A.transpose() * cur * A;
      if (seen.insert(imat_key(nxt)).second) orbit.push_back(std::move(nxt));
    }
  }
  if (H.order % orbit.size() != 0)
    throw ClassifyError("orbit size does not divide the group order");
  IMat sum = IMat::Zero(n, n);
  for (const IMat& M : orbit) sum += M;
  ZMat zsum = to_z(sum) * Int(H.order / orbit.size());
  Int g = 0;
  for (Eigen::Index i = 0; i < zsum.rows(); ++i)
    for (Eigen::Index j = 0; j < zsum.cols(); ++j) g = gcd(g, zsum(i, j));
  S.averaged.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) S.averaged(i, j) = Rat(zsum(i, j) / g);
  return S;
}

std::vector<QuadForm> sample_holonomy_forms(const InvariantFormSpace& S, int count,
                                            std::uint64_t seed, int L, int D) {
  if (count < 1) throw ClassifyError("sample count must be positive");
  const int n = S.dim;
  std::vector<QuadForm> out;
  out.reserve(count);
  for (int idx = 0; idx < count; ++idx) {
    std::mt19937_64 rng(splitmix64(seed * 0x100000001B3ull + idx));
    RatMat F = RatMat::Zero(n, n);
    for (const RatMat& B : S.basis) {
      std::int64_t num = static_cast<std::int64_t>(rng() % (2 * L + 1)) - L;
      std::int64_t den = static_cast<std::int64_t>(rng() % D) + 1;
      if (num != 0) F += Rat(num, den) * B;
    }
    Rat shift = 1;
    while (!is_positive_definite(F)) {
      F += shift * S.averaged;
      shift *= 2;
    }
    out.emplace_back(F);
  }
  return out;
}

namespace {

std::vector<ClassEntry> bucket_samples(const std::vector<QuadForm>& samples,
                                       int& skipped) {
  std::vector<ClassEntry> classes;
  for (const QuadForm& f : samples) {
    std::optional<FormFingerprint> ofp = try_fingerprint(f);
    if (!ofp) {
      ++skipped;  // minor resisted factorization; drop the sample
      continue;
    }
    FormFingerprint fp = std::move(*ofp);
    bool placed = false;
    for (ClassEntry& c : classes)
      if (projectively_equivalent(c.fp, fp)) {
        ++c.sample_count;
        placed = true;
        break;
      }
    if (!placed) classes.push_back({f, std::move(fp), 1});
  }
  return classes;
}

}  // namespace

ClassReport enumerate_classes(const HolonomyData& H, const std::string& label,
                              int count, std::uint64_t seed) {
  InvariantFormSpace S = invariant_form_space(H);
  std::vector<QuadForm> samples = sample_holonomy_forms(S, count, seed);
  // invariance spot check on the samples
  for (const QuadForm& f : samples)
    for (const IMat& A : H.generators) {
      RatMat At = to_rat(A);
      if (At.transpose() * f.gram() * At != f.gram())
        throw ClassifyError("sampled form is not invariant");
    }
  ClassReport r;
  r.label = label;
  r.dim = H.dim;
  r.samples = count;
  r.seed = seed;
  r.classes = bucket_samples(samples, r.skipped);
  r.ucc_candidate = r.classes.size() == 1;

  // stability: seed+1 must reproduce exactly the same class set
  std::vector<QuadForm> again = sample_holonomy_forms(S, count, seed + 1);
  int skipped2 = 0;
  std::vector<ClassEntry> classes2 = bucket_samples(again, skipped2);
  r.seed_stable = classes2.size() == r.classes.size();
  if (r.seed_stable)
    for (const ClassEntry& c2 : classes2) {
      bool found = false;
      for (const ClassEntry& c : r.classes)
        if (projectively_equivalent(c.fp, c2.fp)) {
          found = true;
          break;
        }
      if (!found) r.seed_stable = false;
    }
  return r;
}

ClassReport enumerate_classes(const FlatManifoldPresentation& P, int count,
                              std::uint64_t seed, std::size_t size_bound) {
  HolonomyData H = verify_flat_manifold(P, size_bound);
  return enumerate_classes(H, P.label, count, seed);
}

bool ucc_verdict(ClassReport& report, const QuadForm& ambient_form,
                 const std::string& form_label) {
  bool match = false;
  if (report.classes.size() == 1)
    match = realization_test(report.classes[0].representative, ambient_form);
  report.realization_matches.emplace_back(form_label, match);
  return match;
}

namespace {

std::string int_str(const Int& v) { return v.str(); }

// All classes on one side share the value of `get`; returns true and the
// common value through `out`.
template <typename Get, typename Val>
bool constant_over(const std::vector<ClassEntry>& cs, Get get, Val& out) {
  if (cs.empty()) return false;
  out = get(cs[0].fp);
  for (const auto& c : cs)
    if (get(c.fp) != out) return false;
  return true;
}

}  // namespace

PairReport pair_verdict(const ClassReport& r1, const ClassReport& r2) {
  if (r1.dim != r2.dim) throw ClassifyError("pair_verdict needs equal dimensions");
  PairReport out;
  out.label1 = r1.label;
  out.label2 = r2.label;
  for (const auto& c : r1.classes) out.witnesses1.push_back(c.fp);
  for (const auto& c : r2.classes) out.witnesses2.push_back(c.fp);

  for (const auto& c1 : r1.classes)
    for (const auto& c2 : r2.classes)
      if (projectively_equivalent(c1.fp, c2.fp)) {
        out.verdict = "overlapping";
        return out;
      }

  const int n = r1.dim;
  PrimeSet primes;
  for (const auto& c : r1.classes) primes.merge(c.fp.primes);
  for (const auto& c : r2.classes) primes.merge(c.fp.primes);

  if (n % 2 == 0) {
    Int d1, d2;
    if (constant_over(r1.classes, [](const FormFingerprint& f) { return f.disc; }, d1) &&
        constant_over(r2.classes, [](const FormFingerprint& f) { return f.disc; }, d2) &&
        d1 != d2) {
      out.verdict = "disjoint";
      out.separating_invariant = "disc " + int_str(d1) + " vs " + int_str(d2);
      return out;
    }
  } else if (n % 4 == 1) {
    for (const Int& p : primes.primes()) {
      int e1, e2;
      auto get = [&p](const FormFingerprint& f) { return f.eps_at(p); };
      if (constant_over(r1.classes, get, e1) && constant_over(r2.classes, get, e2) &&
          e1 != e2) {
        out.verdict = "disjoint";
        out.separating_invariant = "eps_" + int_str(p) + " " + std::to_string(e1) +
                                   " vs " + std::to_string(e2);
        return out;
      }
    }
  } else {
    for (const Int& p : primes.primes()) {
      int e1, e2;
      auto get = [&p](const FormFingerprint& f) { return f.twisted_at(p); };
      if (constant_over(r1.classes, get, e1) && constant_over(r2.classes, get, e2) &&
          e1 != e2) {
        out.verdict = "disjoint";
        out.separating_invariant = "twisted_eps_" + int_str(p) + " " +
                                   std::to_string(e1) + " vs " + std::to_string(e2);
        return out;
      }
    }
  }
  out.verdict = "inconclusive";
  return out;
}

int mapping_torus_fingerprint(int k, int l, int samples, std::uint64_t seed) {
  FlatManifoldPresentation P = mapping_torus(k, l);
  HolonomyData H = verify_flat_manifold(P);
  InvariantFormSpace S = invariant_form_space(H);
  const int n = P.dim;
  Rat sign_term = (((n - 1) / 2) % 2 == 0) ? 1 : -1;
  int value = 0;
  for (const QuadForm& f : sample_holonomy_forms(S, samples, seed)) {
    // 2-adic data only, so no factorization: a diagonal of f is the raw
    // Bareiss diagonal of scale*f divided through by the scale.
    Int sc;
    std::vector<Rat> diag = raw_diagonal(f, sc);
    Rat d = 1;
    for (Rat& e : diag) {
      e /= sc;
      d *= e;
    }
    int v = hilbert_symbol(d, sign_term, Place::at(2)) * hasse_witt_diagonal(diag, 2);
    if (value == 0)
      value = v;
    else if (value != v)
      throw ClassifyError("mapping torus twisted value not constant across samples");
  }
  return value;
}

nlohmann::json class_report_to_json(const ClassReport& r) {
  nlohmann::json classes = nlohmann::json::array();
  for (const auto& c : r.classes) {
    nlohmann::json diag = nlohmann::json::array();
    for (const Rat& d : diagonalize(c.representative)) diag.push_back(format_rational(d));
    classes.push_back({{"representative_diagonal", std::move(diag)},
                       {"fingerprint", fingerprint_to_json(c.fp)},
                       {"sample_count", c.sample_count}});
  }
  nlohmann::json matches = nlohmann::json::array();
  for (const auto& [label, ok] : r.realization_matches)
    matches.push_back({{"form", label}, {"match", ok}});
  return {{"schema_version", 1},
          {"family", r.label},
          {"dim", r.dim},
          {"samples", r.samples},
          {"skipped", r.skipped},
          {"seed", r.seed},
          {"classes", std::move(classes)},
          {"ucc_candidate", r.ucc_candidate},
          {"seed_stable", r.seed_stable},
          {"realization_matches", std::move(matches)}};
}

nlohmann::json pair_report_to_json(const PairReport& r) {
  nlohmann::json w1 = nlohmann::json::array(), w2 = nlohmann::json::array();
  for (const auto& fp : r.witnesses1) w1.push_back(fingerprint_to_json(fp));
  for (const auto& fp : r.witnesses2) w2.push_back(fingerprint_to_json(fp));
  return {{"schema_version", 1},
          {"families", {r.label1, r.label2}},
          {"verdict", r.verdict},
          {"separating_invariant", r.separating_invariant},
          {"witnesses", {{"first", std::move(w1)}, {"second", std::move(w2)}}}};
}

}  // namespace holoform
