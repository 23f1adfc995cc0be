#include "holoform/bieberbach.hpp"

#include <deque>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace holoform {

namespace {

Rat rat_floor(const Rat& x) {
  Int q;
  mpz_fdiv_q(q.backend().data(), Int(numerator(x)).backend().data(),
             Int(denominator(x)).backend().data());
  return Rat(q);
}

std::string iso_to_string(const AffineTorusIsometry& a) {
  std::ostringstream os;
  os << "linear=[";
  for (Eigen::Index i = 0; i < a.linear.rows(); ++i) {
    os << (i ? ";" : "") << "[";
    for (Eigen::Index j = 0; j < a.linear.cols(); ++j)
      os << (j ? "," : "") << a.linear(i, j);
    os << "]";
  }
  os << "] translation=[";
  for (Eigen::Index i = 0; i < a.translation.size(); ++i)
    os << (i ? "," : "") << format_rational(a.translation(i));
  os << "]";
  return os.str();
}

// Packed layout: n*n linear entries (row major), then n translation
// numerators in [0, L) over the common denominator L.
using Packed = std::vector<std::int16_t>;

struct PackedHash {
  std::size_t operator()(const Packed& p) const {
    std::size_t h = 1469598103934665603ull;
    for (std::int16_t v : p) {
      h ^= static_cast<std::size_t>(static_cast<std::uint16_t>(v));
      h *= 1099511628211ull;
    }
    return h;
  }
};

Packed pack(int n, std::int64_t L, const AffineTorusIsometry& a) {
  Packed p(static_cast<std::size_t>(n) * n + n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::int64_t v = a.linear(i, j);
      if (v < -32768 || v > 32767) throw BieberbachError("group element entry overflow");
      p[static_cast<std::size_t>(i) * n + j] = static_cast<std::int16_t>(v);
    }
  for (int i = 0; i < n; ++i) {
    Rat t = a.translation(i) * L;
    if (denominator(t) != 1) throw BieberbachError("translation outside 1/L lattice");
    Int num = numerator(t);
    if (num < 0 || num >= L) throw BieberbachError("translation not reduced");
    p[static_cast<std::size_t>(n) * n + i] = static_cast<std::int16_t>(num.convert_to<std::int64_t>());
  }
  return p;
}

AffineTorusIsometry unpack(int n, std::int64_t L, const Packed& p) {
  AffineTorusIsometry a;
  a.linear.resize(n, n);
  a.translation.resize(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a.linear(i, j) = p[static_cast<std::size_t>(i) * n + j];
  for (int i = 0; i < n; ++i)
    a.translation(i) = Rat(Int(p[static_cast<std::size_t>(n) * n + i]), Int(L));
  return a;
}

// out = a after b, entirely in int64.
void compose_packed(int n, std::int64_t L, const Packed& a, const Packed& b, Packed& out) {
  const std::size_t nn = static_cast<std::size_t>(n) * n;
  out.resize(nn + n);
  for (int i = 0; i < n; ++i) {
    const std::int16_t* arow = a.data() + static_cast<std::size_t>(i) * n;
    for (int j = 0; j < n; ++j) {
      std::int64_t s = 0;
      for (int k = 0; k < n; ++k)
        s += static_cast<std::int64_t>(arow[k]) * b[static_cast<std::size_t>(k) * n + j];
      if (s < -32768 || s > 32767) throw BieberbachError("group element entry overflow");
      out[static_cast<std::size_t>(i) * n + j] = static_cast<std::int16_t>(s);
    }
  }
  const std::int16_t* bt = b.data() + nn;
  const std::int16_t* at = a.data() + nn;
  for (int i = 0; i < n; ++i) {
    const std::int16_t* arow = a.data() + static_cast<std::size_t>(i) * n;
    std::int64_t s = at[i];
    for (int k = 0; k < n; ++k) s += static_cast<std::int64_t>(arow[k]) * bt[k];
    s %= L;
    if (s < 0) s += L;
    out[nn + i] = static_cast<std::int16_t>(s);
  }
}

Packed packed_identity(int n) {
  Packed p(static_cast<std::size_t>(n) * n + n, 0);
  for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i) * n + i] = 1;
  return p;
}

bool packed_linear_is_identity(int n, const Packed& p) {
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (p[static_cast<std::size_t>(i) * n + j] != (i == j ? 1 : 0)) return false;
  return true;
}

}  // namespace

RatVec reduce_mod1(const RatVec& t) {
  RatVec r = t;
  for (Eigen::Index i = 0; i < r.size(); ++i) r(i) -= rat_floor(r(i));
  return r;
}

bool AffineTorusIsometry::is_identity() const {
  if (!linear.isIdentity()) return false;
  for (Eigen::Index i = 0; i < translation.size(); ++i)
    if (translation(i) != 0) return false;
  return true;
}

bool AffineTorusIsometry::operator==(const AffineTorusIsometry& o) const {
  if (linear.rows() != o.linear.rows()) return false;
  if (linear != o.linear) return false;
  for (Eigen::Index i = 0; i < translation.size(); ++i)
    if (translation(i) != o.translation(i)) return false;
  return true;
}

AffineTorusIsometry make_isometry(IMat linear, RatVec translation) {
  if (linear.rows() != linear.cols()) throw BieberbachError("linear part not square");
  if (translation.size() != linear.rows())
    throw BieberbachError("translation length mismatch");
  Rat d = rational_det(to_rat(linear));
  if (d != 1 && d != -1) throw BieberbachError("linear part not in GL_n(Z)");
  return AffineTorusIsometry{std::move(linear), reduce_mod1(translation)};
}

AffineTorusIsometry identity_isometry(int n) {
  return AffineTorusIsometry{IMat::Identity(n, n), RatVec::Zero(n)};
}

AffineTorusIsometry compose(const AffineTorusIsometry& a, const AffineTorusIsometry& b) {
  if (a.dim() != b.dim()) throw BieberbachError("compose: dimension mismatch");
  AffineTorusIsometry c;
  c.linear = a.linear * b.linear;
  RatVec t(a.dim());
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    Rat s = a.translation(i);
    for (Eigen::Index k = 0; k < t.size(); ++k) s += Rat(a.linear(i, k)) * b.translation(k);
    t(i) = s;
  }
  c.translation = reduce_mod1(t);
  return c;
}

AffineTorusIsometry inverse(const AffineTorusIsometry& a) {
  // Finite order in our use; A^-1 by exact rational inversion is still exact.
  const int n = a.dim();
  RatMat Ainv = RatMat::Identity(n, n);
  RatMat R = to_rat(a.linear);
  // Gauss-Jordan with exact pivots.
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int i = col; i < n; ++i)
      if (R(i, col) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) throw BieberbachError("inverse: singular linear part");
    if (piv != col) {
      R.row(piv).swap(R.row(col));
      Ainv.row(piv).swap(Ainv.row(col));
    }
    Rat inv = Rat(1) / R(col, col);
    R.row(col) *= inv;
    Ainv.row(col) *= inv;
    for (int i = 0; i < n; ++i) {
      if (i == col || R(i, col) == 0) continue;
      Rat f = R(i, col);
      R.row(i) -= f * R.row(col);
      Ainv.row(i) -= f * Ainv.row(col);
    }
  }
  AffineTorusIsometry b;
  b.linear.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (denominator(Ainv(i, j)) != 1)
        throw BieberbachError("inverse: linear part not unimodular");
      b.linear(i, j) = Int(numerator(Ainv(i, j))).convert_to<std::int64_t>();
    }
  RatVec t(n);
  for (int i = 0; i < n; ++i) {
    Rat s = 0;
    for (int k = 0; k < n; ++k) s -= Ainv(i, k) * a.translation(k);
    t(i) = s;
  }
  b.translation = reduce_mod1(t);
  return b;
}

AffineTorusIsometry TorusGroup::element(std::size_t i) const {
  return unpack(dim_, denom_, elems_.at(i));
}

void TorusGroup::for_each(const std::function<void(const AffineTorusIsometry&)>& fn) const {
  for (const auto& p : elems_) fn(unpack(dim_, denom_, p));
}

TorusGroup generate_group(int dim, const std::vector<AffineTorusIsometry>& gens,
                          std::size_t size_bound) {
  std::int64_t L = 1;
  for (const auto& g : gens) {
    if (g.dim() != dim) throw BieberbachError("generator dimension mismatch");
    for (Eigen::Index i = 0; i < g.translation.size(); ++i)
      L = std::lcm(L, Int(denominator(g.translation(i))).convert_to<std::int64_t>());
  }
  TorusGroup G(dim, L);
  std::vector<Packed> packed_gens;
  packed_gens.reserve(gens.size());
  for (const auto& g : gens) packed_gens.push_back(pack(dim, L, g));

  std::unordered_set<Packed, PackedHash> seen;
  G.elems_.push_back(packed_identity(dim));
  seen.insert(G.elems_[0]);
  std::deque<std::size_t> queue{0};
  Packed next;
  while (!queue.empty()) {
    std::size_t idx = queue.front();
    queue.pop_front();
    Packed cur = G.elems_[idx];  // copy: elems_ may reallocate
    for (const auto& g : packed_gens) {
      compose_packed(dim, L, g, cur, next);
      if (seen.insert(next).second) {
        if (G.elems_.size() >= size_bound)
          throw BieberbachError("group closure exceeds size bound " +
                                std::to_string(size_bound));
        G.elems_.push_back(next);
        queue.push_back(G.elems_.size() - 1);
      }
    }
  }
  return G;
}

bool has_fixed_point(const AffineTorusIsometry& iso) {
  const int n = iso.dim();
  RatMat B = to_rat(iso.linear);
  for (int i = 0; i < n; ++i) B(i, i) -= 1;
  RatMat W = left_kernel(B);
  if (W.rows() == 0) return true;  // A - I invertible: unique fixed point
  ZMat M = integerize_rows(W);
  RatVec rhs(M.rows());
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    Rat s = 0;
    for (int j = 0; j < n; ++j) s += Rat(M(i, j)) * iso.translation(j);
    rhs(i) = s;
  }
  return lattice_solve(M, rhs).has_value();
}

IMat HolonomyData::element(std::size_t i) const {
  const auto& p = elements_.at(i);
  IMat A(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) A(r, c) = p[static_cast<std::size_t>(r) * dim + c];
  return A;
}

HolonomyData verify_flat_manifold(const FlatManifoldPresentation& P,
                                  std::size_t size_bound) {
  const int n = P.dim;
  for (const auto& g : P.generators) {
    if (g.dim() != n) throw BieberbachError("generator dimension mismatch");
    Rat d = rational_det(to_rat(g.linear));
    if (d != 1 && d != -1) throw BieberbachError("generator not in GL_n(Z)");
  }
  TorusGroup G = generate_group(n, P.generators, size_bound);
  const std::int64_t L = G.denom();

  std::unordered_map<Packed, std::size_t, PackedHash> index;
  index.reserve(G.size() * 2);
  for (std::size_t i = 0; i < G.size(); ++i) index.emplace(G.elems_[i], i);

  std::vector<Packed> pgens, pgen_invs;
  for (const auto& g : P.generators) {
    pgens.push_back(pack(n, L, g));
    pgen_invs.push_back(pack(n, L, inverse(g)));
  }

  // Conjugate elements share fixed-point behaviour, as do inverses; test one
  // representative per {conjugacy class, inverses} orbit.
  auto packed_inverse_index = [&](std::size_t i) {
    // walk powers: a, a^2, ... until identity; previous one is a^-1
    Packed cur = G.elems_[i], nxt;
    std::size_t prev = i;
    while (!(cur == G.elems_[0])) {
      compose_packed(n, L, G.elems_[i], cur, nxt);
      prev = index.at(cur);
      cur = nxt;
    }
    return prev;
  };

  std::vector<bool> visited(G.size(), false);
  visited[0] = true;
  Packed tmp1, tmp2;
  for (std::size_t i = 1; i < G.size(); ++i) {
    if (visited[i]) continue;
    // orbit of i under conjugation and inversion
    std::deque<std::size_t> orb{i};
    visited[i] = true;
    while (!orb.empty()) {
      std::size_t j = orb.front();
      orb.pop_front();
      std::size_t jinv = packed_inverse_index(j);
      if (!visited[jinv]) {
        visited[jinv] = true;
        orb.push_back(jinv);
      }
      for (std::size_t gi = 0; gi < pgens.size(); ++gi) {
        compose_packed(n, L, pgens[gi], G.elems_[j], tmp1);
        compose_packed(n, L, tmp1, pgen_invs[gi], tmp2);
        std::size_t c = index.at(tmp2);
        if (!visited[c]) {
          visited[c] = true;
          orb.push_back(c);
        }
      }
    }
    AffineTorusIsometry rep = G.element(i);
    if (rep.linear.isIdentity())
      throw BieberbachError("pure translation in group (lattice not saturated): " +
                            iso_to_string(rep));
    if (has_fixed_point(rep))
      throw NotFreeError("element has a fixed point: " + iso_to_string(rep));
  }

  HolonomyData H;
  H.dim = n;
  H.order = G.size();  // linear parts are distinct across the group
  for (const auto& g : P.generators) H.generators.push_back(g.linear);
  H.orientable = true;
  for (const auto& g : P.generators)
    if (rational_det(to_rat(g.linear)) != 1) H.orientable = false;
  {
    std::unordered_set<Packed, PackedHash> lin_seen;
    for (const auto& p : G.elems_) {
      Packed lin(p.begin(), p.begin() + static_cast<std::size_t>(n) * n);
      if (lin_seen.insert(lin).second) H.elements_.push_back(std::move(lin));
    }
    if (H.elements_.size() != G.size())
      throw BieberbachError("repeated linear part: translations not a lattice quotient");
  }
  // b1 = rank of the joint fixed space of the generators.
  if (P.generators.empty()) {
    H.b1 = n;
  } else {
    RatMat S(static_cast<Eigen::Index>(P.generators.size()) * n, n);
    for (std::size_t gi = 0; gi < P.generators.size(); ++gi) {
      RatMat B = to_rat(P.generators[gi].linear);
      for (int d = 0; d < n; ++d) B(d, d) -= 1;
      S.block(static_cast<Eigen::Index>(gi) * n, 0, n, n) = B;
    }
    H.b1 = static_cast<int>(rational_kernel(S).cols());
  }
  return H;
}

FlatManifoldPresentation product(const FlatManifoldPresentation& P,
                                 const FlatManifoldPresentation& Q) {
  FlatManifoldPresentation R;
  R.dim = P.dim + Q.dim;
  R.label = P.label + "x" + Q.label;
  for (const auto& g : P.generators) {
    AffineTorusIsometry e;
    e.linear = IMat::Identity(R.dim, R.dim);
    e.linear.topLeftCorner(P.dim, P.dim) = g.linear;
    e.translation = RatVec::Zero(R.dim);
    e.translation.head(P.dim) = g.translation;
    R.generators.push_back(std::move(e));
  }
  for (const auto& g : Q.generators) {
    AffineTorusIsometry e;
    e.linear = IMat::Identity(R.dim, R.dim);
    e.linear.bottomRightCorner(Q.dim, Q.dim) = g.linear;
    e.translation = RatVec::Zero(R.dim);
    e.translation.tail(Q.dim) = g.translation;
    R.generators.push_back(std::move(e));
  }
  return R;
}

FlatManifoldPresentation toral_extension(const FlatManifoldPresentation& P,
                                         const std::vector<IMat>& sigma) {
  if (sigma.size() != P.generators.size())
    throw BieberbachError("toral_extension: one block per generator required");
  int d = sigma.empty() ? 0 : static_cast<int>(sigma[0].rows());
  for (const auto& s : sigma)
    if (s.rows() != d || s.cols() != d)
      throw BieberbachError("toral_extension: block size mismatch");
  FlatManifoldPresentation R;
  R.dim = P.dim + d;
  R.label = P.label + "^";
  for (std::size_t i = 0; i < P.generators.size(); ++i) {
    AffineTorusIsometry e;
    e.linear = IMat::Zero(R.dim, R.dim);
    e.linear.topLeftCorner(P.dim, P.dim) = P.generators[i].linear;
    e.linear.bottomRightCorner(d, d) = sigma[i];
    e.translation = RatVec::Zero(R.dim);
    e.translation.head(P.dim) = P.generators[i].translation;
    R.generators.push_back(make_isometry(e.linear, e.translation));
  }
  std::size_t base_order = generate_group(P.dim, P.generators).size();
  std::size_t ext_order = generate_group(R.dim, R.generators).size();
  if (base_order != ext_order)
    throw BieberbachError("toral_extension: blocks violate the holonomy relations");
  return R;
}

std::vector<CoverData> index2_covers(const FlatManifoldPresentation& P) {
  TorusGroup G = generate_group(P.dim, P.generators);
  if (G.size() != 4) throw BieberbachError("index2_covers: holonomy is not (Z2)^2");
  for (std::size_t i = 1; i < 4; ++i) {
    AffineTorusIsometry e = G.element(i);
    if (!compose(e, e).linear.isIdentity())
      throw BieberbachError("index2_covers: holonomy is not (Z2)^2");
  }
  std::vector<CoverData> covers;
  for (std::size_t i = 1; i < 4; ++i) {
    CoverData c;
    c.base = P;
    c.cover.dim = P.dim;
    c.cover.label = P.label + "~" + std::to_string(i);
    c.cover.generators.push_back(G.element(i));
    for (std::size_t j = 1; j < 4; ++j)
      if (j != i) {
        c.deck = G.element(j);
        break;
      }
    covers.push_back(std::move(c));
  }
  return covers;
}

bool cover_orientable(const CoverData& c) {
  for (const auto& g : c.cover.generators)
    if (rational_det(to_rat(g.linear)) != 1) return false;
  return true;
}

CoverData double_cover(const FlatManifoldPresentation& P, bool want_orientable_cover) {
  for (auto& c : index2_covers(P))
    if (cover_orientable(c) == want_orientable_cover) return c;
  throw BieberbachError("double_cover: no index-2 cover with requested orientability");
}

nlohmann::json presentation_to_json(const FlatManifoldPresentation& P) {
  nlohmann::json gens = nlohmann::json::array();
  for (const auto& g : P.generators) {
    nlohmann::json lin = nlohmann::json::array();
    for (Eigen::Index i = 0; i < g.linear.rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index j = 0; j < g.linear.cols(); ++j) row.push_back(g.linear(i, j));
      lin.push_back(std::move(row));
    }
    nlohmann::json tr = nlohmann::json::array();
    for (Eigen::Index i = 0; i < g.translation.size(); ++i)
      tr.push_back(format_rational(g.translation(i)));
    gens.push_back({{"linear", std::move(lin)}, {"translation", std::move(tr)}});
  }
  return {{"dim", P.dim}, {"label", P.label}, {"generators", std::move(gens)}};
}

FlatManifoldPresentation presentation_from_json(const nlohmann::json& j) {
  FlatManifoldPresentation P;
  P.dim = j.at("dim").get<int>();
  P.label = j.value("label", "");
  for (const auto& gj : j.at("generators")) {
    AffineTorusIsometry g;
    const auto& lin = gj.at("linear");
    g.linear.resize(P.dim, P.dim);
    for (int i = 0; i < P.dim; ++i)
      for (int k = 0; k < P.dim; ++k) g.linear(i, k) = lin.at(i).at(k).get<std::int64_t>();
    const auto& tr = gj.at("translation");
    g.translation.resize(P.dim);
    for (int i = 0; i < P.dim; ++i) g.translation(i) = parse_rational(tr.at(i).get<std::string>());
    P.generators.push_back(make_isometry(g.linear, g.translation));
  }
  return P;
}

}  // namespace holoform
