#ifndef LFCOMP_LINFRAC_HPP
#define LFCOMP_LINFRAC_HPP

// Linear-fractional maps of B_N,
//   phi(z) = (A z + B) / (<z, C> + d),
// stored through the projective (N+1)x(N+1) matrix [[A, B], [C^*, d]] acting
// on (z, 1). Composition is a matrix product, the Krein adjoint is
// J m^* J with J = diag(I, -1), and fixed points are eigenvectors.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "lfcomp/ball_geometry.hpp"
#include "lfcomp/types.hpp"

namespace lfcomp {

inline constexpr double kMapEqualityTolerance = 1e-10;

class LinFracMap {
 public:
  LinFracMap(const CMatrix& A, const CVector& B, const CVector& C, Complex d) {
    const Eigen::Index n = A.rows();
    if (n < 1 || A.cols() != n || B.size() != n || C.size() != n) {
      throw DomainError("LinFracMap: inconsistent block dimensions");
    }
    CMatrix m(n + 1, n + 1);
    m.topLeftCorner(n, n) = A;
    m.topRightCorner(n, 1) = B;
    m.bottomLeftCorner(1, n) = C.adjoint();
    m(n, n) = d;
    m_ = canonical(std::move(m));
  }

  static LinFracMap from_projective(CMatrix m) {
    if (m.rows() < 2 || m.rows() != m.cols()) {
      throw DomainError("LinFracMap: projective matrix must be square of size >= 2");
    }
    LinFracMap out;
    out.m_ = canonical(std::move(m));
    return out;
  }

  static LinFracMap identity(int n) { return from_projective(CMatrix::Identity(n + 1, n + 1)); }

  static LinFracMap linear(const CMatrix& A) {
    return affine(A, CVector::Zero(A.rows()));
  }

  static LinFracMap affine(const CMatrix& A, const CVector& B) {
    return LinFracMap(A, B, CVector::Zero(A.rows()), 1.0);
  }

  int dim() const { return static_cast<int>(m_.rows()) - 1; }
  CMatrix A() const { return m_.topLeftCorner(dim(), dim()); }
  CVector B() const { return m_.topRightCorner(dim(), 1); }
  CVector C() const { return m_.bottomLeftCorner(1, dim()).adjoint(); }
  Complex d() const { return m_(dim(), dim()); }
  const CMatrix& projective() const { return m_; }

  /// <z, C> + d.
  Complex denominator(const CVector& z) const {
    require_dim(z, dim(), "LinFracMap");
    return (m_.bottomLeftCorner(1, dim()) * z)(0) + d();
  }

  CVector operator()(const CVector& z) const {
    const Complex den = denominator(z);
    const double scale = m_.bottomRows(1).cwiseAbs().sum() * std::max(1.0, z.norm());
    if (std::abs(den) <= 1e-14 * scale) throw PoleError("LinFracMap: vanishing denominator");
    return (A() * z + B()) / den;
  }

 private:
  LinFracMap() = default;

  // Projective representative with d = 1 when d is not negligible, else
  // scaled so the largest entry is 1.
  static CMatrix canonical(CMatrix m) {
    const Eigen::Index n = m.rows() - 1;
    const double big = m.cwiseAbs().maxCoeff();
    if (big == 0.0) throw DomainError("LinFracMap: zero projective matrix");
    if (std::abs(m(n, n)) > 1e-13 * big) return m / m(n, n);
    Eigen::Index r = 0, c = 0;
    m.cwiseAbs().maxCoeff(&r, &c);
    return m / m(r, c);
  }

  CMatrix m_;
};

inline CVector apply(const LinFracMap& phi, const CVector& z) { return phi(z); }

/// phi o psi.
inline LinFracMap compose(const LinFracMap& phi, const LinFracMap& psi) {
  if (phi.dim() != psi.dim()) throw DomainError("compose: dimension mismatch");
  return LinFracMap::from_projective(phi.projective() * psi.projective());
}

/// Entrywise comparison of canonical representatives.
inline bool maps_equal(const LinFracMap& a, const LinFracMap& b, double tol = kMapEqualityTolerance) {
  if (a.dim() != b.dim()) return false;
  const double scale = std::max(1.0, a.projective().cwiseAbs().maxCoeff());
  return (a.projective() - b.projective()).cwiseAbs().maxCoeff() <= tol * scale;
}

/// Krein adjoint sigma(z) = (A^* z - C) / (<z, -B> + conj(d)).
inline LinFracMap krein_adjoint(const LinFracMap& phi) {
  const int n = phi.dim();
  CMatrix m(n + 1, n + 1);
  m.topLeftCorner(n, n) = phi.A().adjoint();
  m.topRightCorner(n, 1) = -phi.C();
  m.bottomLeftCorner(1, n) = -phi.B().adjoint();
  m(n, n) = std::conj(phi.d());
  return LinFracMap::from_projective(std::move(m));
}

inline LinFracMap unitary_map(const CMatrix& U) { return LinFracMap::linear(U); }

/// A unitary U with U e_1 = zeta: a Householder reflection preceded by a phase.
inline CMatrix unitary_taking_e1_to(const CVector& zeta) {
  const Eigen::Index n = zeta.size();
  const double r = zeta.norm();
  if (std::abs(r - 1.0) > 1e-8) throw DomainError("unitary_taking_e1_to: target is not a unit vector");
  const CVector z = zeta / r;
  const double a = std::abs(z(0));
  const Complex phase = a > 0.0 ? z(0) / a : Complex(1.0, 0.0);
  const CVector zr = z / phase;  // first entry real, non-negative
  CVector v = unit_vector(static_cast<int>(n)) - zr;
  CMatrix H = CMatrix::Identity(n, n);
  const double vn = v.squaredNorm();
  if (vn > 1e-30) H -= (2.0 / vn) * v * v.adjoint();
  return phase * H;
}

/// The involutive automorphism exchanging p and 0:
///   phi_p(z) = (p - P z - s Q z) / (1 - <z, p>),  s = sqrt(1 - |p|^2),
/// P the orthogonal projection onto [p] and Q = I - P.
inline LinFracMap automorphism_point_swap(const CVector& p) {
  const Eigen::Index n = p.size();
  const double p2 = p.squaredNorm();
  if (!(p2 < 1.0)) throw DomainError("automorphism_point_swap: point outside the open ball");
  CMatrix P = CMatrix::Zero(n, n);
  if (p2 > 0.0) P = p * p.adjoint() / p2;
  const CMatrix Q = CMatrix::Identity(n, n) - P;
  const double s = std::sqrt(1.0 - p2);
  return LinFracMap(-(P + s * Q), p, -p, 1.0);
}

inline LinFracMap automorphism_point_swap(const BallPoint& p) { return automorphism_point_swap(p.vec()); }

/// Automorphism Lambda with Lambda(e_1) = e_1 and Lambda(0) = p.
inline LinFracMap automorphism_fixing_e1_with_origin_at(const CVector& p) {
  const LinFracMap swap = automorphism_point_swap(p);
  const CVector target = swap(unit_vector(static_cast<int>(p.size())));
  return compose(swap, unitary_map(unitary_taking_e1_to(target)));
}

/// Jacobian phi'(z) = (A v - u C^*) / v^2 with u = Az + B, v = <z,C> + d.
inline CMatrix jacobian(const LinFracMap& phi, const CVector& z) {
  const Complex v = phi.denominator(z);
  if (v == 0.0) throw PoleError("jacobian: vanishing denominator");
  const CVector u = phi.A() * z + phi.B();
  return (phi.A() * v - u * phi.C().adjoint()) / (v * v);
}

/// D_eta phi_zeta(z) = <phi'(z) eta, zeta>.
inline Complex directional_derivative(const LinFracMap& phi, const CVector& z, const CVector& eta,
                                      const CVector& zeta) {
  require_dim(eta, phi.dim(), "directional_derivative");
  require_dim(zeta, phi.dim(), "directional_derivative");
  return inner(jacobian(phi, z) * eta, zeta);
}

/// D_1 phi_1(e_1).
inline Complex d1_at_e1(const LinFracMap& phi) {
  const CVector e1 = unit_vector(phi.dim());
  return directional_derivative(phi, e1, e1, e1);
}

// ---------------------------------------------------------------------------
// Boundary sup norm.

struct SupNormResult {
  double value;        // max over the sphere of |phi|, snapped to 1 within 1e-9
  double raw_value;    // the refined maximum before snapping
  CVector maximizer;   // a point of the sphere attaining raw_value
};

namespace detail {

// Deterministic low-discrepancy points on the sphere S^{2N-1} of C^N: a
// Kronecker sequence in [0,1)^{2N-1} pushed forward by the measure-preserving
// map (simplex spacings -> |z_j|^2, uniform phases).
inline std::vector<CVector> sphere_lattice(int n, int count) {
  std::vector<CVector> pts;
  pts.reserve(static_cast<std::size_t>(count));
  const double two_pi = 2.0 * std::acos(-1.0);
  if (n == 1) {
    for (int i = 0; i < count; ++i) {
      CVector v(1);
      v(0) = std::polar(1.0, two_pi * i / count);
      pts.push_back(v);
    }
    return pts;
  }
  const int d = 2 * n - 1;
  double g = 2.0;  // root of x^(d+1) = x + 1
  for (int it = 0; it < 64; ++it) g = std::pow(1.0 + g, 1.0 / (d + 1));
  std::vector<double> alpha(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) alpha[static_cast<std::size_t>(j)] = std::fmod(std::pow(1.0 / g, j + 1), 1.0);
  std::vector<double> u(static_cast<std::size_t>(d));
  std::vector<double> cuts(static_cast<std::size_t>(n + 1));
  for (int i = 0; i < count; ++i) {
    for (int j = 0; j < d; ++j) {
      u[static_cast<std::size_t>(j)] = std::fmod(0.5 + alpha[static_cast<std::size_t>(j)] * (i + 1), 1.0);
    }
    cuts[0] = 0.0;
    for (int j = 0; j < n - 1; ++j) cuts[static_cast<std::size_t>(j + 1)] = u[static_cast<std::size_t>(j)];
    cuts[static_cast<std::size_t>(n)] = 1.0;
    std::sort(cuts.begin() + 1, cuts.end() - 1);
    CVector v(n);
    for (int j = 0; j < n; ++j) {
      const double mod2 = cuts[static_cast<std::size_t>(j + 1)] - cuts[static_cast<std::size_t>(j)];
      v(j) = std::polar(std::sqrt(std::max(mod2, 0.0)), two_pi * u[static_cast<std::size_t>(n - 1 + j)]);
    }
    pts.push_back(v / v.norm());
  }
  return pts;
}

inline double modulus_sq(const LinFracMap& phi, const CVector& z) {
  const Complex v = phi.denominator(z);
  if (v == 0.0) return std::numeric_limits<double>::infinity();
  return (phi.A() * z + phi.B()).squaredNorm() / std::norm(v);
}

// Euclidean (real) gradient of |phi|^2 in C^N coordinates, projected to the
// tangent space of the sphere at z.
inline CVector tangent_gradient(const LinFracMap& phi, const CVector& z) {
  const CVector u = phi.A() * z + phi.B();
  const Complex v = phi.denominator(z);
  const double v2 = std::norm(v);
  const CVector g = 2.0 * (phi.A().adjoint() * u * v2 - u.squaredNorm() * v * phi.C()) / (v2 * v2);
  return g - inner(g, z).real() * z;
}

inline std::pair<CVector, double> polish_maximum(const LinFracMap& phi, CVector z) {
  double f = modulus_sq(phi, z);
  double step = 1.0;
  for (int it = 0; it < 4000; ++it) {
    const CVector g = tangent_gradient(phi, z);
    const double gn = g.squaredNorm();
    if (gn < 1e-30) break;
    bool moved = false;
    for (int bt = 0; bt < 60; ++bt) {
      CVector cand = z + step * g;
      cand /= cand.norm();
      const double fc = modulus_sq(phi, cand);
      if (fc >= f + 1e-4 * step * gn) {
        z = cand;
        f = fc;
        moved = true;
        step *= 2.0;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  // Function values are flat at rounding level near the maximum; finish on
  // the gradient norm alone, which still carries first-order information.
  step = std::max(step, 1e-3);
  for (int it = 0; it < 400; ++it) {
    const CVector g = tangent_gradient(phi, z);
    const double gn = g.norm();
    if (gn < 1e-15) break;
    bool moved = false;
    for (int bt = 0; bt < 40; ++bt) {
      CVector cand = z + step * g;
      cand /= cand.norm();
      if (tangent_gradient(phi, cand).norm() < gn && modulus_sq(phi, cand) >= f - 1e-15) {
        z = cand;
        f = std::max(f, modulus_sq(phi, cand));
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  return {z, modulus_sq(phi, z)};
}

}  // namespace detail

/// max_{|zeta|=1} |phi(zeta)| with a maximizing zeta.
inline SupNormResult sup_norm(const LinFracMap& phi) {
  const int n = phi.dim();
  if (phi.C().norm() >= std::abs(phi.d())) {
    throw NotSelfMapError("sup_norm: |d| <= |C|, map has a pole on the closed ball");
  }
  const auto samples = detail::sphere_lattice(n, 2000 * n);
  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) scored.emplace_back(detail::modulus_sq(phi, samples[i]), i);
  const std::size_t starts = std::min<std::size_t>(8, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(starts), scored.end(),
                    [](const auto& a, const auto& b) { return a.first > b.first; });
  double best = -1.0;
  CVector arg;
  for (std::size_t s = 0; s < starts; ++s) {
    auto [z, f] = detail::polish_maximum(phi, samples[scored[s].second]);
    if (f > best) {
      best = f;
      arg = z;
    }
  }
  SupNormResult r{};
  r.raw_value = std::sqrt(best);
  r.maximizer = arg;
  if (r.raw_value > 1.0 + 1e-9) {
    throw NotSelfMapError("sup_norm: |phi| reaches " + std::to_string(r.raw_value) + " on the sphere");
  }
  r.value = r.raw_value > 1.0 - 1e-9 ? 1.0 : r.raw_value;
  return r;
}

struct SelfMapCheck {
  bool is_self_map;
  double pole_margin;  // |d| - |C|
  double sup_norm;     // raw sup of |phi| on the sphere, +inf when undefined
};

inline SelfMapCheck check_self_map(const LinFracMap& phi) {
  SelfMapCheck c{};
  c.pole_margin = std::abs(phi.d()) - phi.C().norm();
  c.sup_norm = std::numeric_limits<double>::infinity();
  if (c.pole_margin <= 0.0) return c;
  try {
    c.sup_norm = sup_norm(phi).raw_value;
  } catch (const NotSelfMapError&) {
    // sup_norm refuses values above 1 + 1e-9; recompute crudely for the report
    double worst = 0.0;
    for (const auto& z : detail::sphere_lattice(phi.dim(), 2000 * phi.dim())) {
      worst = std::max(worst, std::sqrt(detail::modulus_sq(phi, z)));
    }
    c.sup_norm = worst;
    return c;
  }
  c.is_self_map = c.sup_norm <= 1.0 + 1e-9;
  return c;
}

inline bool is_self_map(const LinFracMap& phi) { return check_self_map(phi).is_self_map; }

// ---------------------------------------------------------------------------
// Fixed points.

/// A connected piece of the finite fixed-point set: the affine subspace
/// { center + directions * t } (directions orthonormal, orthogonal to center).
struct AffineFixedSet {
  CVector center;
  CMatrix directions;

  int affine_dim() const { return static_cast<int>(directions.cols()); }
  double center_norm() const { return center.norm(); }
};

struct BoundaryFixedPoints {
  std::vector<CVector> points;            // isolated fixed points on the sphere
  std::vector<AffineFixedSet> continua;   // components meeting the sphere in a sphere
  bool whole_sphere = false;              // every boundary point is fixed

  bool degenerate() const { return !continua.empty(); }
};

namespace detail {

inline std::optional<AffineFixedSet> affine_from_eigenspace(const CMatrix& V) {
  const Eigen::Index n = V.rows() - 1;
  const Eigen::Index g = V.cols();
  const Eigen::RowVectorXcd last = V.row(n);
  const double ln = last.norm();
  if (ln < 1e-10) return std::nullopt;  // fixed points at infinity only
  const CVector x0 = V * last.adjoint() / (ln * ln);
  CMatrix dirs(n, 0);
  if (g > 1) {
    // kernel of the row vector `last` inside C^g
    Eigen::JacobiSVD<CMatrix> svd(CMatrix(last), Eigen::ComputeFullV);
    const CMatrix ker = svd.matrixV().rightCols(g - 1);
    const CMatrix raw = (V * ker).topRows(n);
    Eigen::JacobiSVD<CMatrix> orth(raw, Eigen::ComputeThinU);
    int rank = 0;
    for (Eigen::Index i = 0; i < orth.singularValues().size(); ++i) {
      if (orth.singularValues()(i) > 1e-10) ++rank;
    }
    dirs = orth.matrixU().leftCols(rank);
  }
  CVector p = x0.head(n);
  if (dirs.cols() > 0) p -= dirs * (dirs.adjoint() * p);
  return AffineFixedSet{p, dirs};
}

inline CVector polish_fixed_point(const LinFracMap& phi, CVector z) {
  const int n = phi.dim();
  for (int it = 0; it < 8; ++it) {
    CVector r;
    try {
      r = phi(z) - z;
    } catch (const PoleError&) {
      break;
    }
    if (r.norm() < 1e-15) break;
    const CMatrix J = jacobian(phi, z) - CMatrix::Identity(n, n);
    const CVector step = J.completeOrthogonalDecomposition().solve(-r);
    const CVector cand = z + step;
    try {
      if ((phi(cand) - cand).norm() >= r.norm()) break;
    } catch (const PoleError&) {
      break;
    }
    z = cand;
  }
  return z;
}

}  // namespace detail

/// All finite fixed points of phi, as affine components, from the
/// eigenstructure of the projective matrix.
inline std::vector<AffineFixedSet> fixed_point_components(const LinFracMap& phi) {
  const int n = phi.dim();
  const CMatrix m = phi.projective() / phi.projective().norm();
  Eigen::ComplexEigenSolver<CMatrix> es(m, false);
  std::vector<Complex> ev(es.eigenvalues().data(), es.eigenvalues().data() + n + 1);

  // Defective eigenvalues come back split by O(eps^{1/k}); cluster them and
  // use the cluster mean, which is accurate to rounding.
  std::vector<std::vector<Complex>> clusters;
  for (const Complex& lam : ev) {
    bool placed = false;
    for (auto& c : clusters) {
      for (const Complex& mu : c) {
        if (std::abs(lam - mu) < 1e-4) {
          c.push_back(lam);
          placed = true;
          break;
        }
      }
      if (placed) break;
    }
    if (!placed) clusters.push_back({lam});
  }

  const auto null_space = [&](Complex lam, double thr) {
    const CMatrix shifted = m - lam * CMatrix::Identity(n + 1, n + 1);
    Eigen::JacobiSVD<CMatrix> svd(shifted, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    Eigen::Index g = 0;
    for (Eigen::Index i = sv.size() - 1; i >= 0 && sv(i) <= thr; --i) ++g;
    return CMatrix(svd.matrixV().rightCols(g));
  };

  std::vector<AffineFixedSet> out;
  for (const auto& c : clusters) {
    Complex mean(0.0, 0.0);
    for (const Complex& x : c) mean += x;
    mean /= static_cast<double>(c.size());
    CMatrix V = null_space(mean, 1e-8);
    std::vector<CMatrix> spaces;
    if (V.cols() > 0) {
      spaces.push_back(V);
    } else {
      for (const Complex& x : c) {
        CMatrix Vi = null_space(x, 1e-6);
        if (Vi.cols() > 0) spaces.push_back(Vi.rightCols(1));
      }
    }
    for (const auto& S : spaces) {
      auto comp = detail::affine_from_eigenspace(S);
      if (!comp) continue;
      if (comp->affine_dim() == 0) comp->center = detail::polish_fixed_point(phi, comp->center);
      out.push_back(std::move(*comp));
    }
  }
  return out;
}

/// Fixed points on the unit sphere. Isolated points are returned with
/// residual |phi(zeta) - zeta| < 1e-9; affine components that cut the sphere
/// in a positive-dimensional sphere are reported as continua.
inline BoundaryFixedPoints boundary_fixed_points(const LinFracMap& phi) {
  BoundaryFixedPoints out;
  const int n = phi.dim();
  for (const auto& comp : fixed_point_components(phi)) {
    const double r = comp.center_norm();
    if (comp.affine_dim() == 0 || std::abs(r - 1.0) <= kBoundaryTolerance) {
      if (std::abs(r - 1.0) > kBoundaryTolerance) continue;
      const CVector zeta = comp.center / r;
      try {
        if ((phi(zeta) - zeta).norm() < 1e-9) out.points.push_back(zeta);
      } catch (const PoleError&) {
      }
      continue;
    }
    if (r < 1.0 - kBoundaryTolerance) {
      if (comp.affine_dim() == n && r < kBoundaryTolerance) out.whole_sphere = true;
      out.continua.push_back(comp);
    }
  }
  return out;
}

/// A few sample points on the sphere belonging to a continuum component.
inline std::vector<CVector> sample_continuum(const AffineFixedSet& comp, int count = 8) {
  std::vector<CVector> pts;
  const double rad = std::sqrt(std::max(0.0, 1.0 - comp.center.squaredNorm()));
  const double two_pi = 2.0 * std::acos(-1.0);
  for (int i = 0; i < count; ++i) {
    const Eigen::Index col = i % std::max<Eigen::Index>(1, comp.directions.cols());
    pts.push_back(comp.center + rad * std::polar(1.0, two_pi * i / count) * comp.directions.col(col));
  }
  return pts;
}

/// Interior fixed point, if any.
inline std::optional<CVector> interior_fixed_point(const LinFracMap& phi) {
  for (const auto& comp : fixed_point_components(phi)) {
    if (comp.center_norm() < 1.0 - kBoundaryTolerance) return comp.center;
  }
  return std::nullopt;
}

enum class E1Class {
  kParabolic,              // phi(e1) = e1, D_1 phi_1(e1) = 1, no other fixed point in the closed ball
  kHasOtherFixedPoint,     // fixes e1 and some other point of the closed ball
  kDerivativeNotOne,       // fixes e1 alone, but D_1 phi_1(e1) != 1
  kNotFixingE1,
};

inline const char* to_string(E1Class c) {
  switch (c) {
    case E1Class::kParabolic: return "parabolic";
    case E1Class::kHasOtherFixedPoint: return "has-interior-or-other-fixed-point";
    case E1Class::kDerivativeNotOne: return "fixes-e1-derivative-not-one";
    case E1Class::kNotFixingE1: return "not-fixing-e1";
  }
  return "?";
}

inline bool fixes_point(const LinFracMap& phi, const CVector& zeta, double tol = 1e-9) {
  try {
    return (phi(zeta) - zeta).norm() < tol;
  } catch (const PoleError&) {
    return false;
  }
}

inline E1Class classify_fixing_e1(const LinFracMap& phi) {
  const int n = phi.dim();
  const CVector e1 = unit_vector(n);
  if (!fixes_point(phi, e1)) return E1Class::kNotFixingE1;
  for (const auto& comp : fixed_point_components(phi)) {
    const double r = comp.center_norm();
    if (r > 1.0 + kBoundaryTolerance) continue;
    if (comp.affine_dim() > 0 && r < 1.0 - kBoundaryTolerance) return E1Class::kHasOtherFixedPoint;
    if ((comp.center - e1).norm() > 1e-6) return E1Class::kHasOtherFixedPoint;
  }
  if (std::abs(d1_at_e1(phi) - 1.0) > 1e-8) return E1Class::kDerivativeNotOne;
  return E1Class::kParabolic;
}

// ---------------------------------------------------------------------------
// Siegel-domain normal form.

/// Phi(w_1, w') = (w_1 + 2i<w', delta> + b, A w' + gamma) on H_N.
struct SiegelParabolicForm {
  CVector delta;  // N-1
  Complex b;
  CMatrix amat;   // (N-1)x(N-1)
  CVector gamma;  // N-1

  int dim() const { return static_cast<int>(delta.size()) + 1; }

  static SiegelParabolicForm from_h_translation(const HTranslation& h) {
    const Eigen::Index m = h.bprime.size();
    return {h.bprime, h.b1, CMatrix::Identity(m, m), h.bprime};
  }

  CVector operator()(const CVector& w) const {
    require_dim(w, dim(), "SiegelParabolicForm");
    const Eigen::Index m = delta.size();
    CVector out(w.size());
    out(0) = w(0) + b;
    if (m > 0) {
      out(0) += 2.0 * kI * inner(w.tail(m), delta);
      out.tail(m) = amat * w.tail(m) + gamma;
    }
    return out;
  }
};

/// The Cayley transform C and its inverse as linear-fractional maps.
inline LinFracMap cayley_map(int n) {
  const CVector e1 = unit_vector(n);
  return LinFracMap(kI * CMatrix::Identity(n, n), kI * e1, -e1, 1.0);
}

inline LinFracMap cayley_inverse_map(int n) {
  CMatrix A = 2.0 * CMatrix::Identity(n, n);
  A(0, 0) = 1.0;
  const CVector e1 = unit_vector(n);
  return LinFracMap(A, -kI * e1, e1, kI);
}

/// C o phi o C^{-1}.
inline LinFracMap conjugate_to_siegel(const LinFracMap& phi) {
  return compose(cayley_map(phi.dim()), compose(phi, cayley_inverse_map(phi.dim())));
}

/// First coordinate of C^{-1} Phi C in closed form,
///   ((2i - b) z_1 - 2<z',delta> + b) / (-b z_1 - 2<z',delta> + 2i + b).
inline Complex parabolic_first_coordinate(const SiegelParabolicForm& f, const CVector& z) {
  require_dim(z, f.dim(), "parabolic_first_coordinate");
  const Eigen::Index m = f.delta.size();
  const Complex zd = m > 0 ? inner(z.tail(m), f.delta) : Complex(0.0, 0.0);
  const Complex num = (2.0 * kI - f.b) * z(0) - 2.0 * zd + f.b;
  const Complex den = -f.b * z(0) - 2.0 * zd + 2.0 * kI + f.b;
  if (den == 0.0) throw PoleError("parabolic_first_coordinate: vanishing denominator");
  return num / den;
}

/// C^{-1} Phi C as a map of the ball.
inline LinFracMap from_siegel_parabolic(const SiegelParabolicForm& f) {
  const int n = f.dim();
  const Eigen::Index m = n - 1;
  CMatrix A = CMatrix::Zero(n, n);
  A(0, 0) = 1.0;
  CVector B(n);
  B(0) = f.b;
  if (m > 0) {
    A.block(0, 1, 1, m) = 2.0 * kI * f.delta.adjoint();
    A.bottomRightCorner(m, m) = f.amat;
    B.tail(m) = f.gamma;
  }
  const LinFracMap big_phi(A, B, CVector::Zero(n), 1.0);
  return compose(cayley_inverse_map(n), compose(big_phi, cayley_map(n)));
}

/// Reads (delta, b, A, gamma) off C phi C^{-1} when that conjugate is an
/// affine map of the generalized-translation shape; no classification.
inline SiegelParabolicForm siegel_affine_form(const LinFracMap& phi, double tol = 1e-9) {
  const LinFracMap big = conjugate_to_siegel(phi);
  const int n = phi.dim();
  const Eigen::Index m = n - 1;
  const double scale = std::max(1.0, big.projective().cwiseAbs().maxCoeff());
  const CMatrix A = big.A();
  bool ok = std::abs(big.d() - 1.0) <= tol && big.C().norm() <= tol * scale &&
            std::abs(A(0, 0) - 1.0) <= tol * scale;
  if (ok && m > 0) ok = A.block(1, 0, m, 1).norm() <= tol * scale;
  if (!ok) throw ClassificationError("siegel_affine_form: conjugate is not a generalized H-translation");
  SiegelParabolicForm f;
  f.b = big.B()(0);
  f.delta = CVector(m);
  f.amat = CMatrix(m, m);
  f.gamma = CVector(m);
  if (m > 0) {
    f.delta = (A.block(0, 1, 1, m) / (2.0 * kI)).adjoint();
    f.amat = A.bottomRightCorner(m, m);
    f.gamma = big.B().tail(m);
  }
  return f;
}

/// Normal form of a parabolic map fixing e_1, validated by comparing the
/// closed-form first coordinate with phi_1 at interior test points.
inline SiegelParabolicForm to_siegel_parabolic(const LinFracMap& phi) {
  if (classify_fixing_e1(phi) != E1Class::kParabolic) {
    throw ClassificationError("to_siegel_parabolic: map is not parabolic fixing e1");
  }
  SiegelParabolicForm f = siegel_affine_form(phi);
  const int n = phi.dim();
  for (int i = 0; i < 16; ++i) {
    CVector z(n);
    for (int j = 0; j < n; ++j) z(j) = std::polar(0.6 / std::sqrt(n), 0.7 * i + 1.3 * j) * (0.3 + 0.05 * i);
    const double err = std::abs(parabolic_first_coordinate(f, z) - phi(z)(0));
    if (err > 1e-10 * std::max(1.0, std::abs(phi(z)(0)))) {
      throw NumericalFailure("to_siegel_parabolic: first-coordinate reconstruction failed");
    }
  }
  return f;
}

// ---------------------------------------------------------------------------
// Affine structure and the Krein reduction.

inline int numerical_rank(const CMatrix& M, double threshold = 1e-9) {
  Eigen::JacobiSVD<CMatrix> svd(M);
  int r = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()(i) > threshold) ++r;
  }
  return r;
}

/// Smallest dimension of an affine set containing phi(B_N): the rank of the
/// linear part of phi_{phi(0)} o phi, which fixes the origin.
inline int affine_range_dimension(const LinFracMap& phi) {
  const CVector p = phi(CVector::Zero(phi.dim()));
  const LinFracMap centered = compose(automorphism_point_swap(p), phi);
  return numerical_rank(centered.A());
}

struct KreinReduction {
  LinFracMap sigma;  // Krein adjoint of phi
  LinFracMap tau;    // phi o sigma
  LinFracMap xi;     // psi o sigma
};

inline KreinReduction krein_reduction(const LinFracMap& phi, const LinFracMap& psi) {
  if (phi.dim() != psi.dim()) throw DomainError("krein_reduction: dimension mismatch");
  const LinFracMap sigma = krein_adjoint(phi);
  KreinReduction r{sigma, compose(phi, sigma), compose(psi, sigma)};
  const CVector e1 = unit_vector(phi.dim());
  if (fixes_point(phi, e1)) {
    if (!fixes_point(r.tau, e1, 1e-8) || std::abs(d1_at_e1(r.tau) - 1.0) > 1e-7) {
      throw NumericalFailure("krein_reduction: tau(e1) = e1 with D_1 tau_1(e1) = 1 failed");
    }
  }
  return r;
}

/// mu(z') = pi o rho2 o phi o rho1 (z', 0'') as a map of B_K.
inline LinFracMap restriction_to_slice(const LinFracMap& phi, const LinFracMap& rho1, const LinFracMap& rho2,
                                       int k) {
  const int n = phi.dim();
  if (k < 1 || k > n) throw DomainError("restriction_to_slice: slice dimension out of range");
  const CMatrix g = compose(rho2, compose(phi, rho1)).projective();
  std::vector<Eigen::Index> keep;
  for (int i = 0; i < k; ++i) keep.push_back(i);
  keep.push_back(n);
  CMatrix mu(k + 1, k + 1);
  for (int i = 0; i <= k; ++i) {
    for (int j = 0; j <= k; ++j) mu(i, j) = g(keep[static_cast<std::size_t>(i)], keep[static_cast<std::size_t>(j)]);
  }
  double leak = 0.0;
  for (int i = k; i < n; ++i) {
    for (const Eigen::Index j : keep) leak = std::max(leak, std::abs(g(i, j)));
  }
  if (leak > 1e-9 * mu.cwiseAbs().maxCoeff()) {
    throw ReductionError("restriction_to_slice: the slice B_K is not mapped into itself");
  }
  return LinFracMap::from_projective(mu);
}

/// True when phi fixes every point of the circle [e_1] cap the sphere
/// (checked on 8 sample points).
inline bool is_identity_on_e1_circle(const LinFracMap& phi, double tol = 1e-10) {
  const int n = phi.dim();
  const double two_pi = 2.0 * std::acos(-1.0);
  for (int i = 0; i < 8; ++i) {
    const CVector zeta = std::polar(1.0, two_pi * i / 8.0) * unit_vector(n);
    if (!fixes_point(phi, zeta, tol)) return false;
  }
  return true;
}

/// If phi = (z_1, A' z') up to scalar, returns A'.
inline std::optional<CMatrix> block_normal_form(const LinFracMap& phi, double tol = 1e-10) {
  const int n = phi.dim();
  const CMatrix A = phi.A();
  if (phi.B().norm() > tol || phi.C().norm() > tol || std::abs(A(0, 0) - 1.0) > tol) return std::nullopt;
  if (n > 1 && (A.block(1, 0, n - 1, 1).norm() > tol || A.block(0, 1, 1, n - 1).norm() > tol)) {
    return std::nullopt;
  }
  return CMatrix(A.bottomRightCorner(n - 1, n - 1));
}

}  // namespace lfcomp

#endif  // LFCOMP_LINFRAC_HPP
