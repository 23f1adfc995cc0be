#pragma once

// Explicit flat-manifold families: Hantzsche-Wendt and its toral extensions,
// the C / E / E~ quotients, the (Z3)^2 and (Z3)^3 manifolds, F, E_p (p=3),
// mapping tori, tori and products.

#include <string>
#include <vector>

#include "holoform/bieberbach.hpp"

namespace holoform {

struct ConstructionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The 3-dimensional Hantzsche-Wendt manifold, gamma = (diag(-1,-1,1),
/// (0,1/2,1/2)) and delta = (diag(1,-1,-1), (1/2,0,1/2)).
FlatManifoldPresentation hantzsche_wendt();

/// The order-3 isometry of hantzsche_wendt() cycling the coordinates,
/// v -> (v3, v1, v2).
AffineTorusIsometry hw_tau();

/// Dim a1+a2+a3 manifold with holonomy (Z2)^2, b1 = 0, holonomy
/// representation rho1^a1 + rho2^a2 + rho3^a3. Orientable iff the a_i share
/// one parity. hw_extension(1,1,1) is hantzsche_wendt() itself.
FlatManifoldPresentation hw_extension(int a1, int a2, int a3);

/// hw_extension base together with a chosen index-2 cover of the requested
/// orientability and its deck transformation.
CoverData hw_extension_cover(int a1, int a2, int a3, bool want_orientable_cover);

/// The dim-2k quotient of cover x cover by (x,y) -> (deck(y), x).
FlatManifoldPresentation build_C_from_cover(const CoverData& c);

/// build_C_from_cover over a base chosen so that the result is orientable
/// exactly when 2k >= 10.
FlatManifoldPresentation build_C(int k);

struct EData {
  FlatManifoldPresentation E;
  CoverData Etilde;  // base = E, cover = the Z4 quotient, deck = the j action
};

/// The dim-4k quaternion quotient of cover^4 under
/// i(x,y,z,w) = (y,a(x),w,a(z)), j(x,y,z,w) = (z,a(w),a(x),y), a = deck.
EData build_E_from_cover(const CoverData& c);
EData build_E(int k);

/// The dim-(10+2m) manifold with holonomy (Z3)^2 and b1 = 0 generated by the
/// explicit alpha, beta (the cover C~); extension_dims = 2m even.
FlatManifoldPresentation build_wtC3(int extension_dims);

/// Full (Z3)^3 quotient: base = the manifold C, cover = build_wtC3, deck =
/// the gamma generator.
CoverData build_C3_full(int extension_dims);

/// Dim 35+4(k+l): quotient of C~ x C~ x E~ x B_HW by the order-6
/// g(x,y,z,w) = (gamma(y), gamma(x), j(z), tau(w)).
FlatManifoldPresentation build_F(int k, int l);

/// Dim 32+4k (p = 3): quotient of E~ x B3 x B3 by (x,y,z) -> (j(x), z, y)
/// with B3 = build_wtC3(0).
FlatManifoldPresentation build_Ep(int k);

/// Dim 6k+8l+1 mapping torus of companion(Phi_7)^k + companion(Phi_15)^l.
FlatManifoldPresentation mapping_torus(int k, int l);

FlatManifoldPresentation torus(int n);
FlatManifoldPresentation circle();  // torus(1), labelled S1

IMat companion_phi7();
IMat companion_phi15();

/// CLI family grammar: "hw", "hw_ext:2,1,1", "C:k=5", "E:k=3", "Etilde:k=3",
/// "wtC3:0", "C3:0", "F:k=0,l=0", "Ep:k=0", "mt:k=2,l=0", "torus:5", "S1",
/// "product:(S1,E:k=3)".
FlatManifoldPresentation build_family(const std::string& spec);

/// Dimension of build_family(spec) without constructing the group.
int family_dim(const std::string& spec);

}  // namespace holoform
