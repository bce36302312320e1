#pragma once

// Dense exterior algebra on R^n for small n (6 and 7 in practice).
// A degree-k form stores one coefficient per lexicographically ordered
// k-subset of {1..n}; all operations are exact multilinear algebra plus a
// plane-wave (principal symbol) calculus with complex amplitudes.

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "stableforms/errors.hpp"

namespace stableforms {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Endomorphisms of R^n are plain matrices.
using Endomorphism = Eigen::MatrixXd;

namespace detail {

/// Lexicographically ordered k-subsets of {0..n-1}, each encoded as a
/// bitmask. Tables are built once per (n, k) and shared.
const std::vector<std::uint32_t>& subset_masks(int n, int k);

/// Index of `mask` in the lex order of its (n, popcount) class.
int subset_index(int n, std::uint32_t mask);

/// Sign of sorting the concatenation e^A ^ e^B into lex order.
/// Returns 0 when the index sets overlap.
int merge_sign(std::uint32_t a, std::uint32_t b);

long long binomial(int n, int k);

}  // namespace detail

template <class Scalar>
class FormT {
 public:
  FormT() : dim_(0), degree_(0) {}

  FormT(int dim, int degree)
      : dim_(dim), degree_(degree),
        coeffs_(static_cast<std::size_t>(detail::binomial(dim, degree)),
                Scalar(0)) {
    if (dim < 1 || dim > 10 || degree < 0 || degree > dim)
      throw StructuralError("form degree/dimension out of range");
  }

  FormT(int dim, int degree, std::vector<Scalar> coeffs)
      : FormT(dim, degree) {
    if (coeffs.size() != coeffs_.size())
      throw StructuralError("coefficient count does not match C(dim, degree)");
    coeffs_ = std::move(coeffs);
  }

  /// Basis k-form e^{i1...ik} from 1-based indices; repeated indices give
  /// zero, odd permutations flip the sign.
  static FormT basis(int dim, std::initializer_list<int> indices,
                     Scalar coeff = Scalar(1)) {
    FormT f(dim, static_cast<int>(indices.size()));
    std::uint32_t mask = 0;
    int sign = 1;
    std::vector<int> seen;
    for (int i : indices) {
      if (i < 1 || i > dim) throw StructuralError("basis index out of range");
      std::uint32_t bit = 1u << (i - 1);
      if (mask & bit) return f;  // repeated index
      for (int s : seen)
        if (s > i) sign = -sign;
      seen.push_back(i);
      mask |= bit;
    }
    f[mask] = Scalar(sign) * coeff;
    return f;
  }

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  int size() const { return static_cast<int>(coeffs_.size()); }

  const std::vector<Scalar>& coeffs() const { return coeffs_; }
  std::vector<Scalar>& coeffs() { return coeffs_; }

  Scalar& operator[](std::uint32_t mask) {
    return coeffs_[static_cast<std::size_t>(detail::subset_index(dim_, mask))];
  }
  const Scalar& operator[](std::uint32_t mask) const {
    return coeffs_[static_cast<std::size_t>(detail::subset_index(dim_, mask))];
  }

  Scalar& at(int flat) { return coeffs_[static_cast<std::size_t>(flat)]; }
  const Scalar& at(int flat) const {
    return coeffs_[static_cast<std::size_t>(flat)];
  }

  /// Evaluate on a tuple of basis vectors (1-based, any order).
  Scalar eval_basis(const std::vector<int>& indices) const {
    if (static_cast<int>(indices.size()) != degree_)
      throw StructuralError("evaluation arity mismatch");
    std::uint32_t mask = 0;
    int sign = 1;
    for (std::size_t a = 0; a < indices.size(); ++a) {
      int i = indices[a];
      std::uint32_t bit = 1u << (i - 1);
      if (mask & bit) return Scalar(0);
      for (std::size_t b = 0; b < a; ++b)
        if (indices[b] > i) sign = -sign;
      mask |= bit;
    }
    return Scalar(sign) * (*this)[mask];
  }

  FormT& operator+=(const FormT& o) {
    check_same(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  FormT& operator-=(const FormT& o) {
    check_same(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  FormT& operator*=(Scalar c) {
    for (auto& v : coeffs_) v *= c;
    return *this;
  }

  friend FormT operator+(FormT a, const FormT& b) { return a += b; }
  friend FormT operator-(FormT a, const FormT& b) { return a -= b; }
  friend FormT operator*(Scalar c, FormT a) { return a *= c; }
  friend FormT operator*(FormT a, Scalar c) { return a *= c; }
  friend FormT operator-(FormT a) { return a *= Scalar(-1); }

  double norm() const {  // Euclidean coefficient norm
    double s = 0;
    for (const auto& v : coeffs_) s += std::norm(Complex(v));
    return std::sqrt(s);
  }

 private:
  void check_same(const FormT& o) const {
    if (dim_ != o.dim_ || degree_ != o.degree_)
      throw StructuralError("form dimension/degree mismatch");
  }

  int dim_;
  int degree_;
  std::vector<Scalar> coeffs_;
};

using Form = FormT<double>;
using CForm = FormT<Complex>;

/// Riemannian metric on R^n. Construction checks symmetry (tol 1e-12);
/// positive definiteness is recorded and required by Hodge-star users.
class Metric {
 public:
  explicit Metric(Mat g, double symmetry_tol = 1e-12);
  static Metric euclidean(int n);

  int dim() const { return static_cast<int>(g_.rows()); }
  const Mat& matrix() const { return g_; }
  const Mat& inverse() const;
  double sqrt_det() const;
  bool positive_definite() const { return positive_definite_; }

  /// Gram matrix G with G_IJ = <e^I, e^J> of the induced inner product on
  /// degree-k forms (determinants of inverse-metric minors).
  Mat form_gram(int k) const;

 private:
  Mat g_;
  Mat ginv_;
  double sqrt_det_ = 0.0;
  bool positive_definite_ = false;
};

// --- core operations ------------------------------------------------------

template <class S>
FormT<S> wedge(const FormT<S>& a, const FormT<S>& b);

/// Interior product x -| a of a vector (components in the standard basis)
/// with a form of degree >= 1.
template <class S>
FormT<S> interior(const Vec& x, const FormT<S>& a);

/// Hodge star for a positive definite metric and orientation +-1.
template <class S>
FormT<S> hodge(const Metric& g, int orientation, const FormT<S>& a);

/// Bilinear form inner product <a, b>_g (no complex conjugation).
template <class S>
S form_inner(const Metric& g, const FormT<S>& a, const FormT<S>& b);

double form_inner(const FormT<double>& a, const FormT<double>& b);  // Euclidean

/// Action of an endomorphism as a derivation:
/// S_*(a)(X1..Xk) = -sum_i a(X1,..,S Xi,..,Xk).
template <class S>
FormT<S> endo_action(const Endomorphism& m, const FormT<S>& a);

/// Pullback along a linear map A: (A^* a)(X1..Xk) = a(A X1, .., A Xk).
Form pullback(const Mat& a_map, const Form& a);

/// Degree-1 form with the given coefficients.
template <class S>
FormT<S> covector_form(const Eigen::Matrix<S, Eigen::Dynamic, 1>& v);

Form covector_form(const Vec& v);
CForm complexify(const Form& f);
Form real_part(const CForm& f);
Form imag_part(const CForm& f);

Vec form_to_vec(const Form& f);
Form vec_to_form(int dim, int degree, const Vec& v);

// --- plane-wave (principal symbol) calculus -------------------------------

/// Plane wave a * e^{i<xi, x>}: a frequency covector plus a complex
/// amplitude form.
struct PlaneWave {
  Vec xi;
  CForm amplitude;
};

/// Symbol of d: amplitude -> i xi ^ amplitude.
PlaneWave symbol_d(const PlaneWave& pw);

/// Symbol of d^*: amplitude -> -i (xi^sharp -| amplitude). The sign is the
/// one that makes the symbol of the Hodge Laplacian equal |xi|^2 * id.
PlaneWave symbol_dstar(const Metric& g, const PlaneWave& pw);

// --- template implementations ---------------------------------------------

template <class S>
FormT<S> wedge(const FormT<S>& a, const FormT<S>& b) {
  if (a.dim() != b.dim()) throw StructuralError("wedge: dimension mismatch");
  if (a.degree() + b.degree() > a.dim())
    throw StructuralError("wedge: degree sum exceeds dimension");
  FormT<S> out(a.dim(), a.degree() + b.degree());
  const auto& ma = detail::subset_masks(a.dim(), a.degree());
  const auto& mb = detail::subset_masks(b.dim(), b.degree());
  for (int i = 0; i < a.size(); ++i) {
    const S& ca = a.at(i);
    if (ca == S(0)) continue;
    for (int j = 0; j < b.size(); ++j) {
      const S& cb = b.at(j);
      if (cb == S(0)) continue;
      int sgn = detail::merge_sign(ma[static_cast<std::size_t>(i)],
                                   mb[static_cast<std::size_t>(j)]);
      if (sgn == 0) continue;
      out[ma[static_cast<std::size_t>(i)] | mb[static_cast<std::size_t>(j)]] +=
          S(sgn) * ca * cb;
    }
  }
  return out;
}

template <class S>
FormT<S> interior(const Vec& x, const FormT<S>& a) {
  if (x.size() != a.dim()) throw StructuralError("interior: dimension mismatch");
  if (a.degree() < 1) throw StructuralError("interior: degree-0 input");
  FormT<S> out(a.dim(), a.degree() - 1);
  const auto& masks = detail::subset_masks(a.dim(), a.degree());
  for (int idx = 0; idx < a.size(); ++idx) {
    const S& c = a.at(idx);
    if (c == S(0)) continue;
    std::uint32_t mask = masks[static_cast<std::size_t>(idx)];
    int pos = 0;
    for (int i = 0; i < a.dim(); ++i) {
      std::uint32_t bit = 1u << i;
      if (!(mask & bit)) continue;
      double xi = x[i];
      if (xi != 0.0)
        out[mask & ~bit] += S((pos % 2 == 0) ? 1 : -1) * S(xi) * c;
      ++pos;
    }
  }
  return out;
}

template <class S>
FormT<S> hodge(const Metric& g, int orientation, const FormT<S>& a) {
  if (g.dim() != a.dim()) throw StructuralError("hodge: dimension mismatch");
  if (!g.positive_definite())
    throw MetricError("hodge: metric is not positive definite");
  if (orientation != 1 && orientation != -1)
    throw StructuralError("hodge: orientation must be +-1");
  const int n = a.dim();
  const int k = a.degree();
  Mat gram = g.form_gram(k);
  // raised = G a (coefficients of a with all indices raised)
  std::vector<S> raised(static_cast<std::size_t>(a.size()), S(0));
  for (int i = 0; i < a.size(); ++i) {
    S acc(0);
    for (int j = 0; j < a.size(); ++j) acc += S(gram(i, j)) * a.at(j);
    raised[static_cast<std::size_t>(i)] = acc;
  }
  const double volc = orientation * g.sqrt_det();
  const std::uint32_t full = (n >= 32) ? 0 : ((1u << n) - 1u);
  const auto& masks = detail::subset_masks(n, k);
  FormT<S> out(n, n - k);
  for (int i = 0; i < a.size(); ++i) {
    std::uint32_t m = masks[static_cast<std::size_t>(i)];
    std::uint32_t comp = full & ~m;
    int sgn = detail::merge_sign(m, comp);
    out[comp] = S(sgn * volc) * raised[static_cast<std::size_t>(i)];
  }
  return out;
}

template <class S>
S form_inner(const Metric& g, const FormT<S>& a, const FormT<S>& b) {
  if (g.dim() != a.dim() || a.dim() != b.dim() || a.degree() != b.degree())
    throw StructuralError("form_inner: dimension/degree mismatch");
  Mat gram = g.form_gram(a.degree());
  S acc(0);
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < b.size(); ++j) acc += a.at(i) * S(gram(i, j)) * b.at(j);
  return acc;
}

template <class S>
FormT<S> endo_action(const Endomorphism& m, const FormT<S>& a) {
  if (m.rows() != a.dim() || m.cols() != a.dim())
    throw StructuralError("endo_action: dimension mismatch");
  const int n = a.dim();
  const int k = a.degree();
  FormT<S> out(n, k);
  if (k == 0) return out;
  const auto& masks = detail::subset_masks(n, k);
  for (int idx = 0; idx < a.size(); ++idx) {
    std::uint32_t mask = masks[static_cast<std::size_t>(idx)];
    std::vector<int> I;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) I.push_back(i + 1);
    S acc(0);
    // slot m: replace e_{I[m]} by S e_{I[m]} = sum_j m(j, I[m]) e_j
    for (int slot = 0; slot < k; ++slot) {
      std::vector<int> J = I;
      for (int j = 1; j <= n; ++j) {
        double mj = m(j - 1, I[static_cast<std::size_t>(slot)] - 1);
        if (mj == 0.0) continue;
        J[static_cast<std::size_t>(slot)] = j;
        acc += S(mj) * a.eval_basis(J);
      }
      J[static_cast<std::size_t>(slot)] = I[static_cast<std::size_t>(slot)];
    }
    out[mask] = -acc;
  }
  return out;
}

template <class S>
FormT<S> covector_form(const Eigen::Matrix<S, Eigen::Dynamic, 1>& v) {
  FormT<S> f(static_cast<int>(v.size()), 1);
  for (int i = 0; i < v.size(); ++i) f.at(i) = v[i];
  return f;
}

}  // namespace stableforms
