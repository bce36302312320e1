#pragma once

// SU(3)-structure algebra on R^6: stability and recovery of the metric and
// almost complex structure from a stable pair (omega, rho), irreducible type
// projectors, the linearized Hitchin dual maps, torsion extraction from
// first-jet data, scalar curvature, and the volume-vs-Einstein-Hilbert
// density comparison.

#include <array>
#include <optional>
#include <utility>

#include "stableforms/forms.hpp"

namespace stableforms::su3 {

/// Intrinsic torsion of an SU(3)-structure, as the irreducible components of
/// the jet (d omega, d rho, d rhohat):
///   d omega  = 3 tau0 rho + 3 tau0hat rhohat + tau1 ^ omega + tau3
///   d rho    = 2 tau0hat omega^2 + tau1hat ^ rho + tau2 ^ omega
///   d rhohat = -2 tau0 omega^2 - (J tau1hat) ^ rhohat + tau2hat ^ omega
struct Torsion {
  double tau0 = 0.0;
  double tau0hat = 0.0;
  Form tau1{6, 1};
  Form tau1hat{6, 1};
  Form tau2{6, 2};     // type Lambda^2_8
  Form tau2hat{6, 2};  // type Lambda^2_8
  Form tau3{6, 3};     // type Lambda^3_12
};

class SU3Structure {
 public:
  /// The flat model: omega = e12+e34+e56, rho = e135-e146-e236-e245.
  /// Construction self-validates every invariant; the sign of rhohat is
  /// corrected automatically if the volume normalization demands it.
  static SU3Structure model();

  /// Recover the full structure from a stable compatible pair. The almost
  /// complex structure comes from the Hitchin endomorphism
  /// K(v) = A((v -| rho) ^ rho), normalized by sqrt(-tr K^2 / 6); its sign is
  /// fixed by positivity of g = omega(., J.).
  static SU3Structure recover(const Form& omega, const Form& rho,
                              double compat_tol = 1e-8);

  const Form& omega() const { return omega_; }
  const Form& rho() const { return rho_; }
  const Form& rhohat() const { return rhohat_; }
  const Form& sigma() const { return sigma_; }
  const Metric& metric() const { return *metric_; }
  const Endomorphism& complex_structure() const { return J_; }
  double vol() const { return vol_; }
  int orientation() const { return orientation_; }

  /// Hodge star of the structure metric and orientation.
  Form star(const Form& a) const { return hodge(*metric_, orientation_, a); }
  CForm star(const CForm& a) const { return hodge(*metric_, orientation_, a); }
  double inner(const Form& a, const Form& b) const {
    return form_inner(*metric_, a, b);
  }

  /// Type decomposition (components sum to the input):
  /// degree 2 -> (Lambda^2_1, Lambda^2_6, Lambda^2_8)
  /// degree 3 -> (Lambda^3_{1+1}, Lambda^3_6, Lambda^3_12)
  /// degree 4 -> star-duals of degree 2.
  std::array<Form, 3> project2(const Form& a) const;
  std::array<Form, 3> project3(const Form& a) const;
  std::array<Form, 3> project4(const Form& a) const;

  /// Projector matrix acting on coefficient vectors; degree in {2,3,4},
  /// component in {0,1,2} ordered as in the project* results.
  const Mat& projector(int degree, int component) const;

  /// Orthonormal basis (in the structure inner product) of a type component,
  /// as columns of coefficient vectors.
  const Mat& type_basis(int degree, int component) const;

  /// I(S+) = (S+)_* omega in Lambda^2_8 and Upsilon(S-) = (S-)_* rho in
  /// Lambda^3_12, for the J-commuting / J-anticommuting parts of a
  /// g-symmetric traceless endomorphism.
  std::pair<Form, Form> iso_sym(const Endomorphism& S) const;
  Endomorphism iso_sym_inv_2(const Form& beta8) const;
  Endomorphism iso_sym_inv_3(const Form& gamma12) const;

  /// Linearized Hitchin duals:
  ///   kmap(chi)  = 1/2 * star chi_1 + star chi_6 - star chi_8   (4-forms)
  ///   imap(gamma) = star gamma_{1+1} + star gamma_6 - star gamma_12.
  Form kmap(const Form& chi) const;
  Form imap(const Form& gamma) const;

  /// Decompose first-jet data into torsion components. The jets share tau0,
  /// tau0hat and tau1hat across equations; a mismatch beyond `tol` raises
  /// JetInconsistencyError.
  Torsion torsion_from_jet(const Form& d_omega, const Form& d_rho,
                           const Form& d_rhohat, double tol = 1e-8) const;

  /// Rebuild (d omega, d rho, d rhohat) from torsion components.
  std::array<Form, 3> reconstruct_jet(const Torsion& t) const;

  /// s = 30(tau0^2 + tau0hat^2) + 2 dstar_tau1_sum - |tau1|^2
  ///     + 4<tau1, tau1hat> - 1/2(|tau2|^2 + |tau2hat|^2 + |tau3|^2).
  /// The divergence term d*(tau1 + tau1hat) is second-jet data and is
  /// supplied by the caller.
  double scalar_curvature(const Torsion& t, double dstar_tau1_sum) const;

  /// Densities (6 tau0^2 - 4, 6 tau0^2 - 4 - |tau2hat|^2 / 10) for torsion
  /// supported in {tau0, tau1hat, tau2hat}; other classes raise DomainError.
  std::pair<double, double> q_vs_eh_density(const Torsion& t,
                                            double tol = 1e-10) const;

  /// Residual of the first-order identity
  ///   d(X -| rho) - d*(X ^ rho) = J curl(X) ^ omega - (d*X) rho
  ///                               - (d*JX) rhohat  (+ zeroth order)
  /// at plane-wave level in direction xi. Must be ~0.
  double useful6_symbol_residual(const Vec& xi, const Vec& X) const;

  /// J acting on covectors through the metric: alpha -> g J g^{-1} alpha.
  Vec j_covector(const Vec& alpha) const;

  /// Real amplitude C of the curl symbol: curl(X)e^{i<xi,x>} has symbol
  /// -i C with C = star(xi ^ X ^ rhohat) as a 1-form.
  Vec curl_symbol(const Vec& xi, const Vec& X) const;

  /// Metric variation under d sigma = chi0 in Lambda^4_8 with rho fixed:
  /// the symmetric matrix d/dt [ K(chi0)-variation of omega ](., J.).
  Mat metric_variation_8(const Form& chi0) const;

 private:
  SU3Structure() = default;
  void finalize(double compat_tol, bool fix_rhohat_sign);
  void build_projectors();

  Form omega_{6, 2}, rho_{6, 3}, rhohat_{6, 3}, sigma_{6, 4};
  std::optional<Metric> metric_;
  Endomorphism J_;
  double vol_ = 0.0;
  double hitchin_lambda_ = 0.0;  // tr K^2 / 6 of rho
  int orientation_ = 1;

  std::array<Mat, 3> p2_, p3_, p4_;
  std::array<Mat, 3> b2_, b3_, b4_;
  Mat star2_, star3_, star4_;        // star as matrices per degree
  Mat sym_plus_, sym_minus_;         // bases of Sym^2_+/- (vectorized endos)
  Mat iso2_, iso3_, iso2_pinv_, iso3_pinv_;
  Mat wedge_omega_1_pinv_;           // X -> X ^ omega   (1-form recovery)
  Mat wedge_rho_1_pinv_;             // X -> X ^ rho
  Mat wedge_rhohat_1_pinv_;          // X -> X ^ rhohat
  Mat wedge_omega_8_pinv_;           // Lambda^2_8 -> ^ omega
};

}  // namespace stableforms::su3
