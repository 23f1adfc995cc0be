#pragma once

// Flat manifolds presented as fixed-point-free finite group actions on tori:
// group closure, exact freeness tests, holonomy data.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "holoform/lattice.hpp"
#include "holoform/numeric.hpp"

namespace holoform {

struct BieberbachError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when a presented quotient has torsion (an orbifold, not a manifold).
struct NotFreeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// x |-> Ax + t on T^n, A in GL_n(Z), t reduced into [0,1)^n.
struct AffineTorusIsometry {
  IMat linear;
  RatVec translation;

  int dim() const { return static_cast<int>(linear.rows()); }
  bool is_identity() const;
  bool operator==(const AffineTorusIsometry& o) const;
};

AffineTorusIsometry make_isometry(IMat linear, RatVec translation);
AffineTorusIsometry identity_isometry(int n);
/// a after b: (A1,t1)(A2,t2) = (A1 A2, A1 t2 + t1 mod Z^n).
AffineTorusIsometry compose(const AffineTorusIsometry& a, const AffineTorusIsometry& b);
AffineTorusIsometry inverse(const AffineTorusIsometry& a);
RatVec reduce_mod1(const RatVec& t);

struct FlatManifoldPresentation {
  int dim = 0;
  std::vector<AffineTorusIsometry> generators;
  std::string label;
};

/// Finite group of torus isometries, elements stored packed (int16 entries,
/// translations as numerators over a common denominator).
class TorusGroup {
 public:
  TorusGroup(int dim, std::int64_t denom) : dim_(dim), denom_(denom) {}

  std::size_t size() const { return elems_.size(); }
  int dim() const { return dim_; }
  std::int64_t denom() const { return denom_; }
  AffineTorusIsometry element(std::size_t i) const;

  void for_each(const std::function<void(const AffineTorusIsometry&)>& fn) const;

  std::vector<std::vector<std::int16_t>> elems_;  // BFS order; [0] = identity

 private:
  int dim_;
  std::int64_t denom_;
};

/// Closure of the generated finite group; deterministic BFS order. Throws
/// BieberbachError past `size_bound` (non-crystallographic input guard).
TorusGroup generate_group(int dim, const std::vector<AffineTorusIsometry>& gens,
                          std::size_t size_bound = 200000);

/// Exact test for a fixed point of x |-> Ax + t on the torus:
/// some x in R^n and k in Z^n with (A - I)x = k - t.
bool has_fixed_point(const AffineTorusIsometry& iso);

struct HolonomyData {
  int dim = 0;
  std::size_t order = 0;
  int b1 = 0;
  bool orientable = true;
  std::vector<IMat> generators;  // linear parts of the presentation generators

  std::size_t size() const { return elements_.size(); }
  IMat element(std::size_t i) const;  // distinct linear parts, closed as a group

  std::vector<std::vector<std::int16_t>> elements_;
};

/// Checks torsion-freeness of every group element (throws NotFreeError with
/// the offending element otherwise) and derives holonomy order, b1,
/// orientability.
HolonomyData verify_flat_manifold(const FlatManifoldPresentation& P,
                                  std::size_t size_bound = 200000);

FlatManifoldPresentation product(const FlatManifoldPresentation& P,
                                 const FlatManifoldPresentation& Q);

/// Extends each generator (A_i, t_i) to (A_i + sigma_i, (t_i, 0)).
/// sigma must respect the relations of the holonomy quotient; this is checked
/// by comparing group orders before and after.
FlatManifoldPresentation toral_extension(const FlatManifoldPresentation& P,
                                         const std::vector<IMat>& sigma);

struct CoverData {
  FlatManifoldPresentation base;
  FlatManifoldPresentation cover;
  AffineTorusIsometry deck;
};

/// The three index-2 subgroup covers of a presentation with holonomy (Z2)^2.
std::vector<CoverData> index2_covers(const FlatManifoldPresentation& P);

/// First index-2 cover with the requested orientability.
CoverData double_cover(const FlatManifoldPresentation& P, bool want_orientable_cover);

bool cover_orientable(const CoverData& c);

nlohmann::json presentation_to_json(const FlatManifoldPresentation& P);
FlatManifoldPresentation presentation_from_json(const nlohmann::json& j);

}  // namespace holoform
