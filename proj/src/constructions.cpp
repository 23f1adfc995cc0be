#include "holoform/constructions.hpp"

#include <numeric>
#include <sstream>

namespace holoform {

namespace {

const Rat kHalf(1, 2);

AffineTorusIsometry embed(const AffineTorusIsometry& g, int offset, int N) {
  AffineTorusIsometry e;
  e.linear = IMat::Identity(N, N);
  e.linear.block(offset, offset, g.dim(), g.dim()) = g.linear;
  e.translation = RatVec::Zero(N);
  e.translation.segment(offset, g.dim()) = g.translation;
  return e;
}

IMat wtC3_A() {
  IMat A(2, 2);
  A << 0, -1, 1, -1;
  return A;
}

RatVec wtC3_mu() {
  RatVec mu(2);
  mu << Rat(2, 3), Rat(1, 3);
  return mu;
}

// Generators of the dimension-10 (Z3)^3 action: alpha, beta, gamma.
std::vector<AffineTorusIsometry> C3_generators() {
  IMat A = wtC3_A();
  IMat A2 = A * A;
  IMat I2 = IMat::Identity(2, 2);
  RatVec mu = wtC3_mu();
  auto assemble = [&](const std::vector<IMat>& blocks, const std::vector<int>& mu_at) {
    AffineTorusIsometry g;
    g.linear = IMat::Zero(10, 10);
    g.translation = RatVec::Zero(10);
    for (int b = 0; b < 5; ++b) g.linear.block(2 * b, 2 * b, 2, 2) = blocks[b];
    for (int b : mu_at) g.translation.segment(2 * b, 2) = mu;
    return g;
  };
  AffineTorusIsometry alpha = assemble({I2, A, A, A, A}, {0, 1});
  AffineTorusIsometry beta = assemble({A, A, I2, A2, A}, {2, 3});
  AffineTorusIsometry gamma = assemble({I2, A, I2, I2, I2}, {4});
  return {alpha, beta, gamma};
}

std::vector<std::array<int, 3>> triples_summing_to(int k) {
  std::vector<std::array<int, 3>> out;
  for (int a1 = 1; a1 <= k - 2; ++a1)
    for (int a2 = 1; a2 <= k - 1 - a1; ++a2) out.push_back({a1, a2, k - a1 - a2});
  return out;
}

int det_sign(const IMat& A) {
  Rat d = rational_det(to_rat(A));
  return d > 0 ? 1 : -1;
}

// First hw_extension base of dimension k admitting an orientable index-2
// cover; optionally require the deck determinant sign.
CoverData find_base_cover(int k, int want_deck_det) {
  for (const auto& t : triples_summing_to(k)) {
    FlatManifoldPresentation B = hw_extension(t[0], t[1], t[2]);
    for (auto& c : index2_covers(B)) {
      if (!cover_orientable(c)) continue;
      if (want_deck_det != 0 && det_sign(c.deck.linear) != want_deck_det) continue;
      return c;
    }
  }
  throw ConstructionError("no admissible hw_extension base in dimension " +
                          std::to_string(k));
}

IMat block_repeat(const IMat& A, int copies) {
  int d = static_cast<int>(A.rows());
  IMat R = IMat::Zero(d * copies, d * copies);
  for (int i = 0; i < copies; ++i) R.block(d * i, d * i, d, d) = A;
  return R;
}

}  // namespace

FlatManifoldPresentation hantzsche_wendt() { return hw_extension(1, 1, 1); }

AffineTorusIsometry hw_tau() {
  IMat P(3, 3);
  P << 0, 0, 1, 1, 0, 0, 0, 1, 0;
  return make_isometry(P, RatVec::Zero(3));
}

FlatManifoldPresentation hw_extension(int a1, int a2, int a3) {
  if (a1 < 1 || a2 < 1 || a3 < 1)
    throw ConstructionError("hw_extension needs positive multiplicities");
  const int n = a1 + a2 + a3;
  // Characters on (gamma, delta): block 1 = (-1,+1), block 2 = (-1,-1),
  // block 3 = (+1,-1); half translations in the leading coordinate of each
  // fixed block keep the three involutions fixed-point free.
  AffineTorusIsometry gamma, delta;
  gamma.linear = IMat::Identity(n, n);
  delta.linear = IMat::Identity(n, n);
  gamma.translation = RatVec::Zero(n);
  delta.translation = RatVec::Zero(n);
  for (int i = 0; i < a1 + a2; ++i) gamma.linear(i, i) = -1;
  for (int i = a1; i < n; ++i) delta.linear(i, i) = -1;
  gamma.translation(a1) = kHalf;
  gamma.translation(a1 + a2) = kHalf;
  delta.translation(0) = kHalf;
  delta.translation(a1 + a2) = kHalf;
  FlatManifoldPresentation P;
  P.dim = n;
  P.generators = {gamma, delta};
  std::ostringstream lab;
  lab << "hw_ext:" << a1 << "," << a2 << "," << a3;
  P.label = (n == 3 && a1 == 1 && a2 == 1) ? "hw" : lab.str();
  return P;
}

CoverData hw_extension_cover(int a1, int a2, int a3, bool want_orientable_cover) {
  return double_cover(hw_extension(a1, a2, a3), want_orientable_cover);
}

FlatManifoldPresentation build_C_from_cover(const CoverData& c) {
  const int k = c.cover.dim;
  const int N = 2 * k;
  FlatManifoldPresentation P;
  P.dim = N;
  P.label = "C[" + c.cover.label + "]";
  for (const auto& h : c.cover.generators) {
    P.generators.push_back(embed(h, 0, N));
    P.generators.push_back(embed(h, k, N));
  }
  AffineTorusIsometry beta;  // (x,y) -> (deck(y), x)
  beta.linear = IMat::Zero(N, N);
  beta.linear.block(0, k, k, k) = c.deck.linear;
  beta.linear.block(k, 0, k, k) = IMat::Identity(k, k);
  beta.translation = RatVec::Zero(N);
  beta.translation.head(k) = c.deck.translation;
  P.generators.push_back(beta);
  return P;
}

FlatManifoldPresentation build_C(int k) {
  if (k < 3) throw ConstructionError("build_C needs k >= 3");
  const bool target_orientable = 2 * k >= 10;
  // C is orientable iff the swap generator preserves orientation:
  // det = (-1)^k det(deck).
  int want_det = (k % 2 == 0) == target_orientable ? 1 : -1;
  CoverData base = find_base_cover(k, want_det);
  FlatManifoldPresentation P = build_C_from_cover(base);
  P.label = "C:k=" + std::to_string(k);
  return P;
}

EData build_E_from_cover(const CoverData& c) {
  const int k = c.cover.dim;
  const int N = 4 * k;
  const IMat& A = c.deck.linear;
  const RatVec& t = c.deck.translation;
  IMat Ik = IMat::Identity(k, k);

  AffineTorusIsometry i_gen, j_gen;
  // i(x,y,z,w) = (y, a(x), w, a(z))
  i_gen.linear = IMat::Zero(N, N);
  i_gen.linear.block(0, k, k, k) = Ik;
  i_gen.linear.block(k, 0, k, k) = A;
  i_gen.linear.block(2 * k, 3 * k, k, k) = Ik;
  i_gen.linear.block(3 * k, 2 * k, k, k) = A;
  i_gen.translation = RatVec::Zero(N);
  i_gen.translation.segment(k, k) = t;
  i_gen.translation.segment(3 * k, k) = t;
  // j(x,y,z,w) = (z, a(w), a(x), y)
  j_gen.linear = IMat::Zero(N, N);
  j_gen.linear.block(0, 2 * k, k, k) = Ik;
  j_gen.linear.block(k, 3 * k, k, k) = A;
  j_gen.linear.block(2 * k, 0, k, k) = A;
  j_gen.linear.block(3 * k, k, k, k) = Ik;
  j_gen.translation = RatVec::Zero(N);
  j_gen.translation.segment(k, k) = t;
  j_gen.translation.segment(2 * k, k) = t;

  EData out;
  out.E.dim = N;
  out.E.label = "E[" + c.cover.label + "]";
  for (const auto& h : c.cover.generators)
    for (int s = 0; s < 4; ++s) out.E.generators.push_back(embed(h, s * k, N));
  out.Etilde.cover = out.E;  // shared block generators
  out.E.generators.push_back(i_gen);
  out.E.generators.push_back(j_gen);

  out.Etilde.cover.label = "Etilde[" + c.cover.label + "]";
  out.Etilde.cover.generators.push_back(i_gen);
  out.Etilde.deck = make_isometry(j_gen.linear, j_gen.translation);
  out.Etilde.base = out.E;
  return out;
}

EData build_E(int k) {
  if (k < 3) throw ConstructionError("build_E needs k >= 3");
  EData d = build_E_from_cover(find_base_cover(k, 0));
  d.E.label = "E:k=" + std::to_string(k);
  d.Etilde.base.label = d.E.label;
  d.Etilde.cover.label = "Etilde:k=" + std::to_string(k);
  return d;
}

FlatManifoldPresentation build_wtC3(int extension_dims) {
  if (extension_dims < 0 || extension_dims % 2 != 0)
    throw ConstructionError("build_wtC3 extension dimension must be even and >= 0");
  auto gens = C3_generators();
  FlatManifoldPresentation P;
  P.dim = 10;
  P.generators = {gens[0], gens[1]};
  P.label = "wtC3:" + std::to_string(extension_dims);
  if (extension_dims > 0) {
    int m = extension_dims / 2;
    IMat S = block_repeat(wtC3_A(), m);
    std::string label = P.label;
    P = toral_extension(P, {S, S});
    P.label = label;
  }
  return P;
}

CoverData build_C3_full(int extension_dims) {
  if (extension_dims < 0 || extension_dims % 2 != 0)
    throw ConstructionError("build_C3_full extension dimension must be even and >= 0");
  auto gens = C3_generators();
  FlatManifoldPresentation full;
  full.dim = 10;
  full.generators = gens;
  full.label = "C3:" + std::to_string(extension_dims);
  if (extension_dims > 0) {
    int m = extension_dims / 2;
    IMat S = block_repeat(wtC3_A(), m);
    IMat I = IMat::Identity(extension_dims, extension_dims);
    std::string label = full.label;
    full = toral_extension(full, {S, S, I});
    full.label = label;
  }
  CoverData c;
  c.base = full;
  c.cover = build_wtC3(extension_dims);
  c.deck = full.generators[2];
  return c;
}

FlatManifoldPresentation build_F(int k, int l) {
  if (k < 0 || l < 0) throw ConstructionError("build_F needs k,l >= 0");
  CoverData c3 = build_C3_full(2 * k);
  const FlatManifoldPresentation& Ct = c3.cover;
  const AffineTorusIsometry& gam = c3.deck;
  EData ed = build_E(3 + l);
  const FlatManifoldPresentation& Et = ed.Etilde.cover;
  const AffineTorusIsometry& j = ed.Etilde.deck;
  FlatManifoldPresentation hw = hantzsche_wendt();
  AffineTorusIsometry tau = hw_tau();

  const int c = Ct.dim, e = Et.dim;
  const int N = 2 * c + e + 3;
  FlatManifoldPresentation P;
  P.dim = N;
  P.label = "F:k=" + std::to_string(k) + ",l=" + std::to_string(l);
  for (const auto& g : Ct.generators) {
    P.generators.push_back(embed(g, 0, N));
    P.generators.push_back(embed(g, c, N));
  }
  for (const auto& g : Et.generators) P.generators.push_back(embed(g, 2 * c, N));
  for (const auto& g : hw.generators) P.generators.push_back(embed(g, 2 * c + e, N));

  // g(x,y,z,w) = (gamma(y), gamma(x), j(z), tau(w))
  AffineTorusIsometry g;
  g.linear = IMat::Zero(N, N);
  g.linear.block(0, c, c, c) = gam.linear;
  g.linear.block(c, 0, c, c) = gam.linear;
  g.linear.block(2 * c, 2 * c, e, e) = j.linear;
  g.linear.block(2 * c + e, 2 * c + e, 3, 3) = tau.linear;
  g.translation = RatVec::Zero(N);
  g.translation.head(c) = gam.translation;
  g.translation.segment(c, c) = gam.translation;
  g.translation.segment(2 * c, e) = j.translation;
  P.generators.push_back(g);
  return P;
}

FlatManifoldPresentation build_Ep(int k) {
  if (k < 0) throw ConstructionError("build_Ep needs k >= 0");
  EData ed = build_E(3 + k);
  const FlatManifoldPresentation& Et = ed.Etilde.cover;
  const AffineTorusIsometry& j = ed.Etilde.deck;
  FlatManifoldPresentation B3 = build_wtC3(0);

  const int e = Et.dim, b = B3.dim;
  const int N = e + 2 * b;
  FlatManifoldPresentation P;
  P.dim = N;
  P.label = "Ep:k=" + std::to_string(k);
  for (const auto& g : Et.generators) P.generators.push_back(embed(g, 0, N));
  for (const auto& g : B3.generators) {
    P.generators.push_back(embed(g, e, N));
    P.generators.push_back(embed(g, e + b, N));
  }
  // (x,y,z) -> (j(x), z, y)
  AffineTorusIsometry s;
  s.linear = IMat::Zero(N, N);
  s.linear.block(0, 0, e, e) = j.linear;
  s.linear.block(e, e + b, b, b) = IMat::Identity(b, b);
  s.linear.block(e + b, e, b, b) = IMat::Identity(b, b);
  s.translation = RatVec::Zero(N);
  s.translation.head(e) = j.translation;
  P.generators.push_back(s);
  return P;
}

IMat companion_phi7() {
  // x^6 + x^5 + x^4 + x^3 + x^2 + x + 1
  IMat C = IMat::Zero(6, 6);
  for (int i = 1; i < 6; ++i) C(i, i - 1) = 1;
  for (int i = 0; i < 6; ++i) C(i, 5) = -1;
  return C;
}

IMat companion_phi15() {
  // x^8 - x^7 + x^5 - x^4 + x^3 - x + 1
  IMat C = IMat::Zero(8, 8);
  for (int i = 1; i < 8; ++i) C(i, i - 1) = 1;
  std::int64_t coeffs[8] = {1, -1, 0, 1, -1, 1, 0, -1};  // a_0 .. a_7
  for (int i = 0; i < 8; ++i) C(i, 7) = -coeffs[i];
  return C;
}

FlatManifoldPresentation mapping_torus(int k, int l) {
  if (k < 0 || l < 0 || (k == 0 && l == 0))
    throw ConstructionError("mapping_torus needs k,l >= 0, not both zero");
  const int N = 6 * k + 8 * l + 1;
  std::int64_t d = std::lcm<std::int64_t>(k > 0 ? 7 : 1, l > 0 ? 15 : 1);
  AffineTorusIsometry g;
  g.linear = IMat::Identity(N, N);
  IMat C7 = companion_phi7(), C15 = companion_phi15();
  for (int i = 0; i < k; ++i) g.linear.block(6 * i, 6 * i, 6, 6) = C7;
  for (int i = 0; i < l; ++i) g.linear.block(6 * k + 8 * i, 6 * k + 8 * i, 8, 8) = C15;
  g.translation = RatVec::Zero(N);
  g.translation(N - 1) = Rat(1, d);
  FlatManifoldPresentation P;
  P.dim = N;
  P.generators = {g};
  P.label = "mt:k=" + std::to_string(k) + ",l=" + std::to_string(l);
  return P;
}

FlatManifoldPresentation torus(int n) {
  if (n < 1) throw ConstructionError("torus dimension must be positive");
  FlatManifoldPresentation P;
  P.dim = n;
  P.label = "torus:" + std::to_string(n);
  return P;
}

FlatManifoldPresentation circle() {
  FlatManifoldPresentation P = torus(1);
  P.label = "S1";
  return P;
}

namespace {

struct ParsedSpec {
  std::string family;
  std::string args;  // after the colon
};

ParsedSpec split_spec(const std::string& spec) {
  auto colon = spec.find(':');
  if (colon == std::string::npos) return {spec, ""};
  return {spec.substr(0, colon), spec.substr(colon + 1)};
}

int parse_int(const std::string& s, const std::string& ctx) {
  try {
    std::size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConstructionError("bad integer '" + s + "' in " + ctx);
  }
}

// "k=2,l=0" -> {{"k",2},{"l",0}}; also accepts bare "2,1,1" as positional.
std::vector<std::pair<std::string, int>> parse_args(const std::string& args,
                                                    const std::string& ctx) {
  std::vector<std::pair<std::string, int>> out;
  if (args.empty()) return out;
  std::stringstream ss(args);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos)
      out.emplace_back("", parse_int(item, ctx));
    else
      out.emplace_back(item.substr(0, eq), parse_int(item.substr(eq + 1), ctx));
  }
  return out;
}

int named_arg(const std::vector<std::pair<std::string, int>>& args,
              const std::string& name, int deflt) {
  for (const auto& [k, v] : args)
    if (k == name) return v;
  return deflt;
}

std::pair<std::string, std::string> split_product(const std::string& args,
                                                  const std::string& spec) {
  if (args.size() < 2 || args.front() != '(' || args.back() != ')')
    throw ConstructionError("product spec needs parentheses: " + spec);
  std::string inner = args.substr(1, args.size() - 2);
  int depth = 0;
  // factor specs may themselves contain commas (mt:k=1,l=0), so try every
  // top-level comma and keep the split where both factors parse
  for (std::size_t i = 0; i < inner.size(); ++i) {
    if (inner[i] == '(') ++depth;
    if (inner[i] == ')') --depth;
    if (inner[i] == ',' && depth == 0) {
      std::string a = inner.substr(0, i), b = inner.substr(i + 1);
      try {
        family_dim(a);
        family_dim(b);
        return {a, b};
      } catch (const ConstructionError&) {
      }
    }
  }
  throw ConstructionError("product spec needs two comma-separated factors: " + spec);
}

std::string strip(const std::string& s) {
  auto a = s.find_first_not_of(" \t");
  auto b = s.find_last_not_of(" \t");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

}  // namespace

FlatManifoldPresentation build_family(const std::string& spec_raw) {
  std::string spec = strip(spec_raw);
  auto [family, args] = split_spec(spec);
  if (family == "product") {
    auto [s1, s2] = split_product(args, spec);
    FlatManifoldPresentation P = product(build_family(s1), build_family(s2));
    P.label = spec;
    return P;
  }
  auto pa = parse_args(args, spec);
  if (family == "hw") return hantzsche_wendt();
  if (family == "hw_ext") {
    if (pa.size() != 3) throw ConstructionError("hw_ext needs three multiplicities");
    return hw_extension(pa[0].second, pa[1].second, pa[2].second);
  }
  if (family == "C") return build_C(named_arg(pa, "k", -1));
  if (family == "E") return build_E(named_arg(pa, "k", -1)).E;
  if (family == "Etilde" || family == "E_tilde")
    return build_E(named_arg(pa, "k", -1)).Etilde.cover;
  if (family == "wtC3") {
    if (pa.size() != 1) throw ConstructionError("wtC3 needs one extension dimension");
    return build_wtC3(pa[0].second);
  }
  if (family == "C3") {
    if (pa.size() != 1) throw ConstructionError("C3 needs one extension dimension");
    return build_C3_full(pa[0].second).base;
  }
  if (family == "F") return build_F(named_arg(pa, "k", 0), named_arg(pa, "l", 0));
  if (family == "Ep") return build_Ep(named_arg(pa, "k", 0));
  if (family == "mt")
    return mapping_torus(named_arg(pa, "k", 0), named_arg(pa, "l", 0));
  if (family == "torus") {
    if (pa.size() != 1) throw ConstructionError("torus needs a dimension");
    return torus(pa[0].second);
  }
  if (family == "S1") return circle();
  throw ConstructionError("unknown family: " + spec);
}

int family_dim(const std::string& spec_raw) {
  std::string spec = strip(spec_raw);
  auto [family, args] = split_spec(spec);
  if (family == "product") {
    auto [s1, s2] = split_product(args, spec);
    return family_dim(s1) + family_dim(s2);
  }
  auto pa = parse_args(args, spec);
  if (family == "hw") return 3;
  if (family == "hw_ext") {
    if (pa.size() != 3) throw ConstructionError("hw_ext needs three multiplicities");
    return pa[0].second + pa[1].second + pa[2].second;
  }
  if (family == "C") return 2 * named_arg(pa, "k", -1);
  if (family == "E" || family == "Etilde" || family == "E_tilde")
    return 4 * named_arg(pa, "k", -1);
  if (family == "wtC3" || family == "C3") {
    if (pa.size() != 1) throw ConstructionError(family + " needs one extension dimension");
    return 10 + pa[0].second;
  }
  if (family == "F") return 35 + 4 * (named_arg(pa, "k", 0) + named_arg(pa, "l", 0));
  if (family == "Ep") return 32 + 4 * named_arg(pa, "k", 0);
  if (family == "mt") return 6 * named_arg(pa, "k", 0) + 8 * named_arg(pa, "l", 0) + 1;
  if (family == "torus") {
    if (pa.size() != 1) throw ConstructionError("torus needs a dimension");
    return pa[0].second;
  }
  if (family == "S1") return 1;
  throw ConstructionError("unknown family: " + spec);
}

}  // namespace holoform
