#ifndef LFCOMP_BALL_GEOMETRY_HPP
#define LFCOMP_BALL_GEOMETRY_HPP

// Geometry of the unit ball B_N and of the Siegel upper half space
//   H_N = { (w_1, w') : Im w_1 > |w'|^2 },
// the Cayley transform between them, H-translations, horizontal level sets
// Gamma_k = { Im w_1 - |w'|^2 = k } and their Cayley preimages, the
// internally tangent ellipsoids E(k, e_1).
//
// Near e_1 ball coordinates lose the information that matters (1 - |z|^2
// underflows into rounding noise), so this header also exposes the
// "defect" formulas that recover 1 - |z|^2 and 1 - <z,u> exactly from
// Siegel coordinates. The witness constructions are built on those.

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "lfcomp/types.hpp"

namespace lfcomp {

inline constexpr double kBallInteriorMargin = 1e-12;
inline constexpr double kBoundaryTolerance = 1e-9;

/// A point of the open ball; rejects |v| >= 1 - 1e-12.
class BallPoint {
 public:
  explicit BallPoint(CVector v) : v_(std::move(v)) {
    if (v_.size() < 1) throw DomainError("BallPoint: dimension must be >= 1");
    if (!all_finite(v_)) throw DomainError("BallPoint: non-finite entry");
    if (v_.norm() >= 1.0 - kBallInteriorMargin) {
      throw DomainError("BallPoint: |v| = " + std::to_string(v_.norm()) + " is not inside the ball");
    }
  }

  const CVector& vec() const { return v_; }
  int dim() const { return static_cast<int>(v_.size()); }

 private:
  CVector v_;
};

inline bool on_sphere(const CVector& v, double tol = kBoundaryTolerance) {
  return std::abs(v.norm() - 1.0) <= tol;
}

/// Im w_1 - |w'|^2. Positive exactly on H_N, equal to k on Gamma_k.
inline double siegel_height(const CVector& w) {
  if (w.size() < 1) throw DomainError("siegel_height: empty vector");
  return w(0).imag() - w.tail(w.size() - 1).squaredNorm();
}

/// A point of H_N.
class SiegelPoint {
 public:
  explicit SiegelPoint(CVector v) : v_(std::move(v)) {
    if (v_.size() < 1) throw DomainError("SiegelPoint: dimension must be >= 1");
    if (!all_finite(v_)) throw DomainError("SiegelPoint: non-finite entry");
    if (!(siegel_height(v_) > 0.0)) throw DomainError("SiegelPoint: Im w_1 <= |w'|^2");
  }

  const CVector& vec() const { return v_; }
  int dim() const { return static_cast<int>(v_.size()); }
  double height() const { return siegel_height(v_); }

 private:
  CVector v_;
};

/// h_b(w) = (w_1 + 2i<w',b'> + b_1, w' + b').
struct HTranslation {
  Complex b1;
  CVector bprime;  // dimension N-1

  int dim() const { return static_cast<int>(bprime.size()) + 1; }
  /// Change of height: h_b maps Gamma_k into Gamma_{k + gain}.
  double height_gain() const { return b1.imag() - bprime.squaredNorm(); }
  bool is_self_map(double tol = 0.0) const { return height_gain() >= -tol; }
  bool is_automorphism(double tol = 1e-12) const { return std::abs(height_gain()) <= tol; }
};

inline CVector h_translate(const HTranslation& h, const CVector& w) {
  require_dim(w, h.dim(), "h_translate");
  CVector out = w;
  const int m = h.dim() - 1;
  Complex shift = h.b1;
  if (m > 0) shift += 2.0 * kI * inner(w.tail(m), h.bprime);
  out(0) += shift;
  if (m > 0) out.tail(m) += h.bprime;
  return out;
}

/// Pseudohyperbolic distance on the closed ball,
///   1 - rho^2 = (1-|z|^2)(1-|w|^2) / |1 - <z,w>|^2.
/// Evaluated through the equivalent numerator
///   |z-w|^2 - sum_{i<j} |z_i w_j - z_j w_i|^2
/// so that rho(z,z) is exactly 0 and nearby points keep relative accuracy.
inline double pseudo_hyperbolic_distance(const CVector& z, const CVector& w) {
  if (z.size() != w.size()) throw DomainError("pseudo_hyperbolic_distance: dimension mismatch");
  if (z.norm() > 1.0 + kBoundaryTolerance || w.norm() > 1.0 + kBoundaryTolerance) {
    throw DomainError("pseudo_hyperbolic_distance: point outside the closed ball");
  }
  const double den = std::norm(1.0 - inner(z, w));
  if (den == 0.0 || (den < 1e-30 && on_sphere(z) && on_sphere(w))) {
    throw DomainError("pseudo_hyperbolic_distance: 1 - <z,w> = 0 for boundary points");
  }
  double wedge = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    for (Eigen::Index j = i + 1; j < z.size(); ++j) {
      wedge += std::norm(z(i) * w(j) - z(j) * w(i));
    }
  }
  const double rho_sq = ((z - w).squaredNorm() - wedge) / den;
  if (rho_sq < -1e-12) throw DomainError("pseudo_hyperbolic_distance: negative radicand");
  return std::clamp(std::sqrt(std::max(rho_sq, 0.0)), 0.0, 1.0);
}

/// Disk formula |z - w| / |1 - conj(z) w|.
inline double pseudo_hyperbolic_distance_disk(Complex z, Complex w) {
  const double den = std::abs(1.0 - std::conj(z) * w);
  if (den == 0.0) throw DomainError("pseudo_hyperbolic_distance_disk: degenerate denominator");
  return std::clamp(std::abs(z - w) / den, 0.0, 1.0);
}

/// rho from the three invariants 1-|z|^2, 1-|w|^2 and 1-<z,w>.
inline double rho_from_defects(double defect_z, double defect_w, Complex one_minus_inner) {
  const double den = std::norm(one_minus_inner);
  if (den == 0.0) throw DomainError("rho_from_defects: vanishing 1 - <z,w>");
  const double rho_sq = 1.0 - defect_z * defect_w / den;
  if (rho_sq < -1e-12) throw DomainError("rho_from_defects: negative radicand");
  return std::clamp(std::sqrt(std::max(rho_sq, 0.0)), 0.0, 1.0);
}

/// C(z) = i (e_1 + z) / (1 - z_1).
inline CVector cayley(const CVector& z) {
  if (z.size() < 1) throw DomainError("cayley: empty vector");
  const Complex den = 1.0 - z(0);
  if (den == 0.0) throw PoleError("cayley: z_1 = 1");
  CVector w = (kI / den) * z;
  w(0) = kI * (1.0 + z(0)) / den;
  return w;
}

/// C^{-1}(w) = ((w_1 - i)/(w_1 + i), 2 w' / (w_1 + i)).
inline CVector cayley_inverse(const CVector& w) {
  if (w.size() < 1) throw DomainError("cayley_inverse: empty vector");
  const Complex den = w(0) + kI;
  if (den == 0.0) throw PoleError("cayley_inverse: w_1 = -i");
  CVector z = (2.0 / den) * w;
  z(0) = (w(0) - kI) / den;
  return z;
}

/// 1 - |C^{-1} w|^2 = 4 (Im w_1 - |w'|^2) / |w_1 + i|^2, free of cancellation.
inline double ball_defect_from_siegel(const CVector& w) {
  return 4.0 * siegel_height(w) / std::norm(w(0) + kI);
}

/// 1 - <C^{-1} w, C^{-1} v> = (2i(conj v_1 - w_1) - 4<w',v'>) / ((w_1 + i)(conj v_1 - i)).
inline Complex ball_one_minus_inner_from_siegel(const CVector& w, const CVector& v) {
  if (w.size() != v.size()) throw DomainError("ball_one_minus_inner_from_siegel: dimension mismatch");
  const Eigen::Index m = w.size() - 1;
  Complex num = 2.0 * kI * (std::conj(v(0)) - w(0));
  if (m > 0) num -= 4.0 * inner(w.tail(m), v.tail(m));
  return num / ((w(0) + kI) * (std::conj(v(0)) - kI));
}

/// |C^{-1} w - e_1| = 2 sqrt(1 + |w'|^2) / |w_1 + i|.
inline double ball_distance_to_e1_from_siegel(const CVector& w) {
  const Eigen::Index m = w.size() - 1;
  const double tail = m > 0 ? w.tail(m).squaredNorm() : 0.0;
  return 2.0 * std::sqrt(1.0 + tail) / std::abs(w(0) + kI);
}

/// Pseudohyperbolic distance pulled back to H_N:
///   1 - rho^2 = 4 h(u) h(v) / |u_1 - conj v_1 - 2i<u',v'>|^2.
inline double pseudo_hyperbolic_distance_siegel(const CVector& u, const CVector& v) {
  if (u.size() != v.size()) throw DomainError("pseudo_hyperbolic_distance_siegel: dimension mismatch");
  const Eigen::Index m = u.size() - 1;
  Complex den = u(0) - std::conj(v(0));
  if (m > 0) den -= 2.0 * kI * inner(u.tail(m), v.tail(m));
  const double d2 = std::norm(den);
  if (d2 == 0.0) throw DomainError("pseudo_hyperbolic_distance_siegel: degenerate denominator");
  const double rho_sq = 1.0 - 4.0 * siegel_height(u) * siegel_height(v) / d2;
  if (rho_sq < -1e-12) throw DomainError("pseudo_hyperbolic_distance_siegel: negative radicand");
  return std::clamp(std::sqrt(std::max(rho_sq, 0.0)), 0.0, 1.0);
}

/// Upper half-plane formula |u - v| / |u - conj v|.
inline double pseudo_hyperbolic_distance_halfplane(Complex u, Complex v) {
  const double den = std::abs(u - std::conj(v));
  if (den == 0.0) throw DomainError("pseudo_hyperbolic_distance_halfplane: degenerate denominator");
  return std::clamp(std::abs(u - v) / den, 0.0, 1.0);
}

/// E(k, e_1) = C^{-1}(Gamma_k): center k/(1+k) e_1, semiaxis 1/(1+k) along
/// z_1 and 1/sqrt(1+k) along z'.
struct EllipsoidSpec {
  double k;

  explicit EllipsoidSpec(double k_) : k(k_) {
    if (!(k > 0.0) || !std::isfinite(k)) throw DomainError("EllipsoidSpec: k must be positive");
  }
  double center() const { return k / (1.0 + k); }
  double axis_z1() const { return 1.0 / (1.0 + k); }
  double axis_zprime() const { return 1.0 / std::sqrt(1.0 + k); }
};

struct EllipsoidResidual {
  double center_form;   // |z_1 - k/(1+k)|^2 + |z'|^2/(1+k) - 1/(1+k)^2
  double tangent_form;  // |1 - z_1|^2 - (1 - |z|^2)/k
};

inline EllipsoidResidual ellipsoid_membership(const EllipsoidSpec& spec, const CVector& z) {
  if (z.size() < 1) throw DomainError("ellipsoid_membership: empty vector");
  const double k = spec.k;
  const Eigen::Index m = z.size() - 1;
  const double zp = m > 0 ? z.tail(m).squaredNorm() : 0.0;
  EllipsoidResidual r{};
  r.center_form = std::norm(z(0) - spec.center()) + zp / (1.0 + k) - 1.0 / ((1.0 + k) * (1.0 + k));
  r.tangent_form = std::norm(1.0 - z(0)) - (1.0 - z.squaredNorm()) / k;
  return r;
}

/// The Siegel point (t + i(k + |w'|^2), w') of Gamma_k.
inline CVector gamma_k_point(double k, double t, const CVector& wprime) {
  CVector w(wprime.size() + 1);
  w(0) = Complex(t, k + wprime.squaredNorm());
  w.tail(wprime.size()) = wprime;
  return w;
}

/// Point of E(k, e_1) parametrized as the Cayley preimage of gamma_k_point.
inline CVector ellipsoid_point(const EllipsoidSpec& spec, double t, const CVector& wprime) {
  return cayley_inverse(gamma_k_point(spec.k, t, wprime));
}

}  // namespace lfcomp

#endif  // LFCOMP_BALL_GEOMETRY_HPP
