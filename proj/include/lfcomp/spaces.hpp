#ifndef LFCOMP_SPACES_HPP
#define LFCOMP_SPACES_HPP

// Hilbert spaces of analytic functions on B_N with orthogonal monomials:
// the Hardy space H^2, the weighted Bergman spaces A^2_alpha and the
// weighted Hardy spaces H^2(beta) with ||f||^2 = sum_s ||f_s||_{H^2}^2 beta(s)^2.
// Monomial norms, reproducing kernels, the weight equivalences between the
// last two families, and the extension/restriction maps between B_K and B_N.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "lfcomp/types.hpp"

namespace lfcomp {

using MultiIndex = std::vector<int>;

inline int order(const MultiIndex& a) { return std::accumulate(a.begin(), a.end(), 0); }

/// The multi-index of z_{j+1}.
inline MultiIndex unit_index(int n, int j) {
  MultiIndex a(static_cast<std::size_t>(n), 0);
  a[static_cast<std::size_t>(j)] = 1;
  return a;
}

/// Graded lexicographic order: lower total degree first; within a degree,
/// larger leading exponents first, so z_1 precedes z_2.
struct GradedLex {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const {
    const int da = order(a), db = order(b);
    if (da != db) return da < db;
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
  }
};

/// All multi-indices of length n and order s, in graded-lex order.
inline std::vector<MultiIndex> multi_indices(int n, int s) {
  std::vector<MultiIndex> out;
  MultiIndex cur(static_cast<std::size_t>(n), 0);
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == n - 1) {
      cur[static_cast<std::size_t>(pos)] = left;
      out.push_back(cur);
      return;
    }
    for (int v = left; v >= 0; --v) {
      cur[static_cast<std::size_t>(pos)] = v;
      rec(pos + 1, left - v);
    }
  };
  if (n >= 1 && s >= 0) rec(0, s);
  return out;
}

/// All multi-indices of length n and order <= d, in graded-lex order.
inline std::vector<MultiIndex> multi_indices_up_to(int n, int d) {
  std::vector<MultiIndex> out;
  for (int s = 0; s <= d; ++s) {
    auto level = multi_indices(n, s);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

inline Complex monomial_value(const MultiIndex& a, const CVector& z) {
  Complex v(1.0, 0.0);
  for (std::size_t j = 0; j < a.size(); ++j) {
    for (int p = 0; p < a[j]; ++p) v *= z(static_cast<Eigen::Index>(j));
  }
  return v;
}

inline double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

inline double log_multi_factorial(const MultiIndex& a) {
  double s = 0.0;
  for (int v : a) s += log_factorial(v);
  return s;
}

// ---------------------------------------------------------------------------
// Weights.

/// s -> beta(s)^2, held as log beta(s)^2. When the induced weighted Hardy
/// space coincides (with equivalent norms) with a weighted Bergman space on
/// the same ball, `equivalent_bergman_gamma` records its parameter; -1 means
/// the Hardy space itself.
class WeightSequence {
 public:
  WeightSequence(std::function<double(int)> log_beta_sq, std::string label,
                 std::optional<double> equivalent_bergman_gamma = std::nullopt)
      : log_beta_sq_(std::move(log_beta_sq)),
        label_(std::move(label)),
        equivalent_gamma_(equivalent_bergman_gamma) {}

  /// beta(s)^2 = (s+1)^{-(gamma+1)}.
  static WeightSequence power_law(double gamma) {
    if (!(gamma >= -1.0)) throw DomainError("WeightSequence::power_law: gamma must be >= -1");
    std::ostringstream os;
    os << "(s+1)^-(" << gamma << "+1)";
    return WeightSequence([gamma](int s) { return -(gamma + 1.0) * std::log(s + 1.0); }, os.str(), gamma);
  }

  static WeightSequence constant_one() { return power_law(-1.0); }

  double log_beta_sq(int s) const {
    if (s < 0) throw DomainError("WeightSequence: negative degree");
    return log_beta_sq_(s);
  }
  double beta_sq(int s) const { return std::exp(log_beta_sq(s)); }
  const std::string& label() const { return label_; }
  std::optional<double> equivalent_bergman_gamma() const { return equivalent_gamma_; }

 private:
  std::function<double(int)> log_beta_sq_;
  std::string label_;
  std::optional<double> equivalent_gamma_;
};

// ---------------------------------------------------------------------------
// Spaces.

struct SpaceSpec {
  enum class Kind { kHardy, kBergman, kWeightedHardy };

  Kind kind = Kind::kHardy;
  int dim = 1;
  double alpha = 0.0;                          // Bergman parameter
  std::shared_ptr<const WeightSequence> beta;  // weighted Hardy weight

  static SpaceSpec hardy(int n) {
    check_dim(n);
    return SpaceSpec{Kind::kHardy, n, 0.0, nullptr};
  }
  static SpaceSpec bergman(int n, double alpha) {
    check_dim(n);
    if (!(alpha > -1.0)) throw DomainError("SpaceSpec::bergman: alpha must be > -1");
    return SpaceSpec{Kind::kBergman, n, alpha, nullptr};
  }
  static SpaceSpec weighted_hardy(int n, WeightSequence w) {
    check_dim(n);
    return SpaceSpec{Kind::kWeightedHardy, n, 0.0, std::make_shared<const WeightSequence>(std::move(w))};
  }

  /// Exponent c with K_w(z) = (1 - <z,w>)^{-c}, when the kernel has that form.
  std::optional<double> kernel_exponent() const {
    switch (kind) {
      case Kind::kHardy: return static_cast<double>(dim);
      case Kind::kBergman: return dim + 1.0 + alpha;
      case Kind::kWeightedHardy: return std::nullopt;
    }
    return std::nullopt;
  }

  std::string label() const {
    std::ostringstream os;
    switch (kind) {
      case Kind::kHardy: os << "H^2(B_" << dim << ")"; break;
      case Kind::kBergman: os << "A^2_" << alpha << "(B_" << dim << ")"; break;
      case Kind::kWeightedHardy: os << "H^2(beta, B_" << dim << "), beta(s)^2 = " << beta->label(); break;
    }
    return os.str();
  }

 private:
  static void check_dim(int n) {
    if (n < 1) throw DomainError("SpaceSpec: dimension must be >= 1");
  }
};

inline double log_monomial_norm_sq(const MultiIndex& a, const SpaceSpec& space) {
  if (static_cast<int>(a.size()) != space.dim) throw DomainError("monomial_norm_sq: multi-index length mismatch");
  for (int v : a) {
    if (v < 0) throw DomainError("monomial_norm_sq: negative exponent");
  }
  const int n = space.dim;
  const int s = order(a);
  const double lf = log_multi_factorial(a);
  const double hardy = std::lgamma(static_cast<double>(n)) + lf - std::lgamma(static_cast<double>(n + s));
  switch (space.kind) {
    case SpaceSpec::Kind::kHardy: return hardy;
    case SpaceSpec::Kind::kBergman:
      return lf + std::lgamma(n + space.alpha + 1.0) - std::lgamma(n + s + space.alpha + 1.0);
    case SpaceSpec::Kind::kWeightedHardy: return hardy + space.beta->log_beta_sq(s);
  }
  return hardy;
}

/// ||z^alpha||^2 in the given space.
inline double monomial_norm_sq(const MultiIndex& a, const SpaceSpec& space) {
  return std::exp(log_monomial_norm_sq(a, space));
}

/// Space on B_K for which extension by zero from B_K to B_N is an isometry
/// into `space`. Hardy and Bergman spaces restrict to Bergman spaces exactly
/// (A^2_{alpha} on B_N gives A^2_{alpha+N-K} on B_K, H^2 gives A^2_{N-K-1}).
inline SpaceSpec restricted_space(const SpaceSpec& space, int k) {
  const int n = space.dim;
  if (k < 1 || k > n) throw DomainError("restricted_space: slice dimension out of range");
  if (k == n) return space;
  switch (space.kind) {
    case SpaceSpec::Kind::kHardy: return SpaceSpec::bergman(k, n - k - 1.0);
    case SpaceSpec::Kind::kBergman: return SpaceSpec::bergman(k, space.alpha + n - k);
    case SpaceSpec::Kind::kWeightedHardy: {
      auto base = space.beta;
      const double shift = std::lgamma(static_cast<double>(n)) - std::lgamma(static_cast<double>(k));
      auto rule = [base, n, k, shift](int s) {
        return shift + std::lgamma(static_cast<double>(k + s)) - std::lgamma(static_cast<double>(n + s)) +
               base->log_beta_sq(s);
      };
      std::optional<double> eq;
      if (base->equivalent_bergman_gamma()) eq = *base->equivalent_bergman_gamma() + (n - k);
      std::ostringstream os;
      os << "restriction to B_" << k << " of [" << base->label() << "]";
      return SpaceSpec::weighted_hardy(k, WeightSequence(rule, os.str(), eq));
    }
  }
  return space;
}

/// Hardy or Bergman space whose norm is equivalent to the given one (the
/// space itself when it already has a closed-form kernel).
inline std::optional<SpaceSpec> kernel_equivalent_space(const SpaceSpec& space) {
  if (space.kind != SpaceSpec::Kind::kWeightedHardy) return space;
  const auto g = space.beta->equivalent_bergman_gamma();
  if (!g) return std::nullopt;
  if (std::abs(*g + 1.0) < 1e-15) return SpaceSpec::hardy(space.dim);
  return SpaceSpec::bergman(space.dim, *g);
}

// ---------------------------------------------------------------------------
// Weight equivalences.

struct EquivalentWeight {
  WeightSequence beta;    // the weight on B_K
  SpaceSpec comparison;   // the Bergman (or Hardy) space on B_K it is equivalent to
  // Analytic bounds lower <= r(s) <= upper for the degree-s norm ratio
  // r(s) = ||z^a||^2_{H^2(beta)} / ||z^a||^2_{comparison}, |a| = s.
  double ratio_lower;
  double ratio_upper;
};

/// Ratio ||z^a||^2_{H^2(beta, B_K)} / ||z^a||^2_{comparison} at degree s.
inline double equivalence_ratio(const EquivalentWeight& ew, int s) {
  MultiIndex a(static_cast<std::size_t>(ew.comparison.dim), 0);
  a[0] = s;
  const SpaceSpec wh = SpaceSpec::weighted_hardy(ew.comparison.dim, ew.beta);
  return std::exp(log_monomial_norm_sq(a, wh) - log_monomial_norm_sq(a, ew.comparison));
}

/// The weight beta(s)^2 = (s+1)^{-(gamma+1)} (K = N), or its restriction
///   (N-1)!(K-1+s)! / [(K-1)!(N-1+s)!] (s+1)^{-(gamma+1)}   (K < N),
/// with the equivalent Bergman space on B_K and explicit norm-ratio bounds.
///
/// Both cases give the same ratio r(s) = c0 G(x+a)/G(x) (s+1)^{-a} with
/// a = gamma+1, x = N+s, c0 = (N-1)!/G(N+a). Integrating psi over [x, x+a]
/// with log t - 1/t <= psi(t) <= log t gives x^a e^{-a/x} <= G(x+a)/G(x) <= (x+a)^a,
/// and 1 <= (N+s)/(s+1) <= N, hence
///   c0 e^{-a/N} <= r(s) <= c0 N^a (1 + a/N)^a.
inline EquivalentWeight equivalent_weight(double gamma, int n, int k) {
  if (n < 1 || k < 1 || k > n) throw DomainError("equivalent_weight: need 1 <= K <= N");
  if (!(gamma >= -1.0)) throw DomainError("equivalent_weight: gamma must be >= -1");
  const double a = gamma + 1.0;
  const double c0 = std::exp(std::lgamma(static_cast<double>(n)) - std::lgamma(n + a));
  const double lower = c0 * std::exp(-a / n);
  const double upper = c0 * std::pow(static_cast<double>(n), a) * std::pow(1.0 + a / n, a);
  const WeightSequence base = WeightSequence::power_law(gamma);
  if (k == n) {
    const SpaceSpec cmp = std::abs(a) < 1e-15 ? SpaceSpec::hardy(n) : SpaceSpec::bergman(n, gamma);
    return {base, cmp, lower, upper};
  }
  const SpaceSpec restricted = restricted_space(SpaceSpec::weighted_hardy(n, base), k);
  return {*restricted.beta, SpaceSpec::bergman(k, gamma + n - k), lower, upper};
}

/// (N-1)!(K-1+s)! / [(K-1)!(N-1+s)!], the factor relating beta and its restriction.
inline double restriction_factor(int n, int k, int s) {
  return std::exp(std::lgamma(static_cast<double>(n)) + std::lgamma(static_cast<double>(k + s)) -
                  std::lgamma(static_cast<double>(k)) - std::lgamma(static_cast<double>(n + s)));
}

// ---------------------------------------------------------------------------
// Kernels.

/// K_w(z). Closed form (1 - <z,w>)^{-c} (principal branch) for Hardy and
/// Bergman spaces, the series sum_s binom(N-1+s, s) <z,w>^s / beta(s)^2
/// for weighted Hardy spaces.
inline Complex kernel_eval(const SpaceSpec& space, const CVector& w, const CVector& z) {
  require_dim(w, space.dim, "kernel_eval");
  require_dim(z, space.dim, "kernel_eval");
  if (!(w.norm() < 1.0) || !(z.norm() < 1.0)) throw DomainError("kernel_eval: points must lie in the open ball");
  const Complex x = inner(z, w);
  if (auto c = space.kernel_exponent()) return std::pow(1.0 - x, -*c);
  const int n = space.dim;
  const double ax = std::abs(x);
  if (ax == 0.0) return 1.0 / space.beta->beta_sq(0);
  const double lax = std::log(ax);
  const Complex phase = x / ax;
  Complex sum(0.0, 0.0);
  Complex ph(1.0, 0.0);
  double prev = std::numeric_limits<double>::infinity();
  for (int s = 0; s < 50'000'000; ++s) {
    const double lt = std::lgamma(static_cast<double>(n + s)) - std::lgamma(static_cast<double>(n)) -
                      log_factorial(s) - space.beta->log_beta_sq(s) + s * lax;
    const double t = std::exp(lt);
    sum += t * ph;
    ph *= phase;
    if (s > 8 && t < prev && t < 1e-17 * std::abs(sum)) return sum;
    prev = t;
  }
  throw NumericalFailure("kernel_eval: weighted Hardy kernel series did not converge");
}

inline double kernel_norm_sq(const SpaceSpec& space, const CVector& w) { return kernel_eval(space, w, w).real(); }

// ---------------------------------------------------------------------------
// Coefficient vectors.

/// f = sum c_a z^a over multi-indices of order <= degree.
struct CoefficientVector {
  int dim = 1;
  int degree = 0;
  std::map<MultiIndex, Complex, GradedLex> coeffs;

  CoefficientVector() = default;
  CoefficientVector(int n, int d) : dim(n), degree(d) {
    if (n < 1 || d < 0) throw DomainError("CoefficientVector: need N >= 1 and D >= 0");
  }

  void set(const MultiIndex& a, Complex c) {
    if (static_cast<int>(a.size()) != dim) throw DomainError("CoefficientVector: multi-index length mismatch");
    if (order(a) > degree) throw DomainError("CoefficientVector: multi-index above the degree cap");
    coeffs[a] = c;
  }

  Complex get(const MultiIndex& a) const {
    const auto it = coeffs.find(a);
    return it == coeffs.end() ? Complex(0.0, 0.0) : it->second;
  }

  Complex evaluate(const CVector& z) const {
    require_dim(z, dim, "CoefficientVector::evaluate");
    Complex v(0.0, 0.0);
    for (const auto& [a, c] : coeffs) v += c * monomial_value(a, z);
    return v;
  }
};

inline Complex inner_product(const CoefficientVector& f, const CoefficientVector& g, const SpaceSpec& space) {
  if (f.dim != space.dim || g.dim != space.dim) throw DomainError("inner_product: dimension mismatch");
  Complex s(0.0, 0.0);
  for (const auto& [a, c] : f.coeffs) {
    const Complex gc = g.get(a);
    if (gc != 0.0) s += c * std::conj(gc) * monomial_norm_sq(a, space);
  }
  return s;
}

inline double norm_sq(const CoefficientVector& f, const SpaceSpec& space) {
  return inner_product(f, f, space).real();
}

/// Coefficients conj(w^a)/||z^a||^2 of K_w up to degree d.
inline CoefficientVector kernel_coefficients(const SpaceSpec& space, const CVector& w, int d) {
  CoefficientVector k(space.dim, d);
  for (const auto& a : multi_indices_up_to(space.dim, d)) {
    k.coeffs[a] = std::conj(monomial_value(a, w)) / monomial_norm_sq(a, space);
  }
  return k;
}

/// E f(z', z'') = f(z'): the same coefficients, multi-indices padded with zeros.
inline CoefficientVector extend(const CoefficientVector& f, int n) {
  if (n <= f.dim) throw DomainError("extend: target dimension must exceed the source dimension");
  CoefficientVector out(n, f.degree);
  for (const auto& [a, c] : f.coeffs) {
    MultiIndex b = a;
    b.resize(static_cast<std::size_t>(n), 0);
    out.coeffs[b] = c;
  }
  return out;
}

/// R F(z') = F(z', 0''): keeps the multi-indices supported in the first K slots.
inline CoefficientVector restrict_to(const CoefficientVector& f, int k) {
  if (k < 1 || k >= f.dim) throw DomainError("restrict: slice dimension must satisfy 1 <= K < N");
  CoefficientVector out(k, f.degree);
  for (const auto& [a, c] : f.coeffs) {
    if (std::all_of(a.begin() + k, a.end(), [](int v) { return v == 0; })) {
      out.coeffs[MultiIndex(a.begin(), a.begin() + k)] = c;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sampling for integration oracles.

/// Uniform point of the sphere S^{2N-1} (normalized complex Gaussian).
template <class Rng>
CVector sample_sphere(int n, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CVector v(n);
  double nn = 0.0;
  do {
    for (int j = 0; j < n; ++j) v(j) = Complex(g(rng), g(rng));
    nn = v.norm();
  } while (nn == 0.0);
  return v / nn;
}

/// Point of B_N drawn from the normalized measure (1-|z|^2)^alpha dV:
/// |z|^2 ~ Beta(N, alpha+1) independent of a uniform direction.
template <class Rng>
CVector sample_ball_weighted(int n, double alpha, Rng& rng) {
  if (!(alpha > -1.0)) throw DomainError("sample_ball_weighted: alpha must be > -1");
  std::gamma_distribution<double> ga(static_cast<double>(n), 1.0);
  std::gamma_distribution<double> gb(alpha + 1.0, 1.0);
  const double x = ga(rng);
  const double y = gb(rng);
  const double u = x / (x + y);
  return std::sqrt(u) * sample_sphere(n, rng);
}

}  // namespace lfcomp

#endif  // LFCOMP_SPACES_HPP
