#include "stableforms/forms.hpp"

#include <array>
#include <bit>
#include <mutex>
#include <unordered_map>

namespace stableforms {
namespace detail {

namespace {

constexpr int kMaxDim = 10;

struct Tables {
  // masks[n][k] = lex-ordered k-subset masks; index[n][mask] = flat index
  std::array<std::array<std::vector<std::uint32_t>, kMaxDim + 1>, kMaxDim + 1>
      masks;
  std::array<std::vector<int>, kMaxDim + 1> index;
};

const Tables& tables() {
  static const Tables t = [] {
    Tables t;
    for (int n = 1; n <= kMaxDim; ++n) {
      t.index[static_cast<std::size_t>(n)].assign(std::size_t(1) << n, -1);
      for (int k = 0; k <= n; ++k) {
        auto& out = t.masks[static_cast<std::size_t>(n)]
                           [static_cast<std::size_t>(k)];
        // enumerate k-subsets of {0..n-1} in lex order of the sorted tuples
        std::vector<int> idx(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
        while (true) {
          std::uint32_t m = 0;
          for (int i : idx) m |= 1u << i;
          t.index[static_cast<std::size_t>(n)][m] =
              static_cast<int>(out.size());
          out.push_back(m);
          if (k == 0) break;
          int p = k - 1;
          while (p >= 0 && idx[static_cast<std::size_t>(p)] == n - k + p) --p;
          if (p < 0) break;
          ++idx[static_cast<std::size_t>(p)];
          for (int q = p + 1; q < k; ++q)
            idx[static_cast<std::size_t>(q)] =
                idx[static_cast<std::size_t>(q - 1)] + 1;
        }
      }
    }
    return t;
  }();
  return t;
}

}  // namespace

const std::vector<std::uint32_t>& subset_masks(int n, int k) {
  return tables().masks[static_cast<std::size_t>(n)]
                       [static_cast<std::size_t>(k)];
}

int subset_index(int n, std::uint32_t mask) {
  int i = tables().index[static_cast<std::size_t>(n)][mask];
  if (i < 0) throw StructuralError("invalid basis mask");
  return i;
}

int merge_sign(std::uint32_t a, std::uint32_t b) {
  if (a & b) return 0;
  int crossings = 0;
  std::uint32_t bb = b;
  while (bb) {
    int j = std::countr_zero(bb);
    crossings += std::popcount(a >> (j + 1));
    bb &= bb - 1;
  }
  return (crossings % 2 == 0) ? 1 : -1;
}

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace detail

Metric::Metric(Mat g, double symmetry_tol) : g_(std::move(g)) {
  if (g_.rows() != g_.cols() || g_.rows() < 1)
    throw StructuralError("metric must be square");
  double scale = std::max(1.0, g_.cwiseAbs().maxCoeff());
  if ((g_ - g_.transpose()).cwiseAbs().maxCoeff() > symmetry_tol * scale)
    throw StructuralError("metric is not symmetric");
  g_ = 0.5 * (g_ + g_.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(g_);
  positive_definite_ = es.eigenvalues().minCoeff() > 0.0;
  if (positive_definite_) {
    ginv_ = g_.inverse();
    sqrt_det_ = std::sqrt(g_.determinant());
  }
}

Metric Metric::euclidean(int n) { return Metric(Mat::Identity(n, n)); }

const Mat& Metric::inverse() const {
  if (!positive_definite_)
    throw MetricError("metric inverse requires a positive definite metric");
  return ginv_;
}

double Metric::sqrt_det() const {
  if (!positive_definite_)
    throw MetricError("volume requires a positive definite metric");
  return sqrt_det_;
}

Mat Metric::form_gram(int k) const {
  if (!positive_definite_)
    throw MetricError("form inner product requires a positive definite metric");
  const int n = dim();
  const auto& masks = detail::subset_masks(n, k);
  const int sz = static_cast<int>(masks.size());
  Mat gram(sz, sz);
  std::vector<std::vector<int>> idx(static_cast<std::size_t>(sz));
  for (int i = 0; i < sz; ++i)
    for (int b = 0; b < n; ++b)
      if (masks[static_cast<std::size_t>(i)] & (1u << b))
        idx[static_cast<std::size_t>(i)].push_back(b);
  Mat sub(k, k);
  for (int i = 0; i < sz; ++i) {
    for (int j = i; j < sz; ++j) {
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
          sub(a, b) = ginv_(idx[static_cast<std::size_t>(i)]
                                [static_cast<std::size_t>(a)],
                            idx[static_cast<std::size_t>(j)]
                                [static_cast<std::size_t>(b)]);
      double d = (k == 0) ? 1.0 : sub.determinant();
      gram(i, j) = d;
      gram(j, i) = d;
    }
  }
  return gram;
}

double form_inner(const FormT<double>& a, const FormT<double>& b) {
  if (a.dim() != b.dim() || a.degree() != b.degree())
    throw StructuralError("form_inner: dimension/degree mismatch");
  double acc = 0;
  for (int i = 0; i < a.size(); ++i) acc += a.at(i) * b.at(i);
  return acc;
}

Form pullback(const Mat& a_map, const Form& a) {
  const int n = a.dim();
  if (a_map.rows() != n || a_map.cols() != n)
    throw StructuralError("pullback: dimension mismatch");
  const int k = a.degree();
  Form out(n, k);
  const auto& masks = detail::subset_masks(n, k);
  std::vector<std::vector<int>> cols(masks.size());
  for (std::size_t i = 0; i < masks.size(); ++i)
    for (int b = 0; b < n; ++b)
      if (masks[i] & (1u << b)) cols[i].push_back(b);
  Mat sub(k, k);
  for (std::size_t ti = 0; ti < masks.size(); ++ti) {    // target subset I
    double acc = 0;
    for (std::size_t sj = 0; sj < masks.size(); ++sj) {  // source subset J
      double c = a.at(static_cast<int>(sj));
      if (c == 0.0) continue;
      for (int r = 0; r < k; ++r)
        for (int cidx = 0; cidx < k; ++cidx)
          sub(r, cidx) = a_map(cols[sj][static_cast<std::size_t>(r)],
                               cols[ti][static_cast<std::size_t>(cidx)]);
      acc += c * ((k == 0) ? 1.0 : sub.determinant());
    }
    out.at(static_cast<int>(ti)) = acc;
  }
  return out;
}

Form covector_form(const Vec& v) {
  Form f(static_cast<int>(v.size()), 1);
  for (int i = 0; i < v.size(); ++i) f.at(i) = v[i];
  return f;
}

Vec form_to_vec(const Form& f) {
  Vec v(f.size());
  for (int i = 0; i < f.size(); ++i) v[i] = f.at(i);
  return v;
}

Form vec_to_form(int dim, int degree, const Vec& v) {
  Form f(dim, degree);
  if (v.size() != f.size())
    throw StructuralError("vec_to_form: wrong coefficient count");
  for (int i = 0; i < f.size(); ++i) f.at(i) = v[i];
  return f;
}

CForm complexify(const Form& f) {
  CForm out(f.dim(), f.degree());
  for (int i = 0; i < f.size(); ++i) out.at(i) = Complex(f.at(i), 0.0);
  return out;
}

Form real_part(const CForm& f) {
  Form out(f.dim(), f.degree());
  for (int i = 0; i < f.size(); ++i) out.at(i) = f.at(i).real();
  return out;
}

Form imag_part(const CForm& f) {
  Form out(f.dim(), f.degree());
  for (int i = 0; i < f.size(); ++i) out.at(i) = f.at(i).imag();
  return out;
}

PlaneWave symbol_d(const PlaneWave& pw) {
  CForm xi = complexify(covector_form(pw.xi));
  CForm amp = wedge(xi, pw.amplitude);
  amp *= Complex(0.0, 1.0);
  return {pw.xi, std::move(amp)};
}

PlaneWave symbol_dstar(const Metric& g, const PlaneWave& pw) {
  Vec xi_sharp = g.inverse() * pw.xi;
  CForm amp = interior(xi_sharp, pw.amplitude);
  amp *= Complex(0.0, -1.0);
  return {pw.xi, std::move(amp)};
}

}  // namespace stableforms
