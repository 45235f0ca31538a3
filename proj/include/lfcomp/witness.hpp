#ifndef LFCOMP_WITNESS_HPP
#define LFCOMP_WITNESS_HPP

// Certificates of non-compactness for C_phi - C_psi.
//
// A certificate is a sequence z_n -> boundary along which
//   rho(phi z, psi z) * [ (1-|z|^2)/(1-|phi z|^2) + (1-|z|^2)/(1-|psi z|^2) ]
// (or, for boundary value/derivative mismatches, the normalized kernel
// quantity ||(C_phi - C_psi)^* K_z||^2 / ||K_z||^2) stays bounded below.
//
// All sequences are generated and evaluated in Siegel coordinates w = C(z):
// the defects 1-|z|^2 and 1-<z,u> are recovered from the Siegel formulas,
// so points within 1e-12 of the sphere keep full relative accuracy.
// Reductions (Krein adjoint, conjugation by automorphisms fixing e_1,
// restriction to slices) transport sequences back to the input pair by
// Siegel-frame maps, and the quantities are re-evaluated for the input pair.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "lfcomp/ball_geometry.hpp"
#include "lfcomp/linfrac.hpp"
#include "lfcomp/operators.hpp"
#include "lfcomp/spaces.hpp"

namespace lfcomp {

enum class WitnessKind { kBoundaryMismatch, kDerivativeMismatch, kParabolicEllipsoid, kSliceLimit, kNone };

inline const char* to_string(WitnessKind k) {
  switch (k) {
    case WitnessKind::kBoundaryMismatch: return "boundary-mismatch";
    case WitnessKind::kDerivativeMismatch: return "derivative-mismatch";
    case WitnessKind::kParabolicEllipsoid: return "parabolic-ellipsoid";
    case WitnessKind::kSliceLimit: return "slice-limit";
    case WitnessKind::kNone: return "none";
  }
  return "?";
}

struct WitnessConfig {
  double k = 1.0;                 // height of the horizontal level set for parabolic sequences
  std::optional<CVector> c;       // slice offset w' (dimension N-1); searched when absent or giving rho = 0
  double M = 0.0;                 // aperture for derivative mismatches; 0 selects it automatically
  std::vector<double> t_grid;     // real parts t_n; default 2^n, n = 4..24, capped near the sphere
};

struct WitnessRecord {
  int n = 0;
  CVector z;                 // the point in the input coordinates (ball)
  double z_norm = 0.0;
  double one_minus_norm = 0.0;
  double rho = 0.0;          // rho(phi z, psi z)
  double ratio1 = 0.0;       // (1-|z|^2)/(1-|phi z|^2)
  double ratio2 = 0.0;       // (1-|z|^2)/(1-|psi z|^2)
  double eq1 = 0.0;          // rho * (ratio1 + ratio2)
  double kernel_norm_sq = std::numeric_limits<double>::quiet_NaN();  // ||(C_phi-C_psi)^* K_z||^2/||K_z||^2
};

struct SliceLimitResult {
  int j = 0;
  CVector Z, W;
  double lambda = 0.0;
  double gammacol = 0.0;
  double limit_value = 1.0;
  double rho_limit = 0.0;
  double direct_limit = 1.0;   // Richardson limit of 1 - rho^2 along omega_t
  double direct_error = 0.0;   // |direct_limit - limit_value|
};

struct WitnessCertificate {
  WitnessKind kind = WitnessKind::kNone;
  std::vector<WitnessRecord> records;          // the input pair at the sequence points
  std::vector<WitnessRecord> reduced_records;  // the pair the sequence was built for
  std::vector<CVector> siegel_points;          // Siegel coordinates of the points, input frame
  std::string quantity = "eq1";                // "eq1" or "kernel_difference_norm"
  double claimed_inf = 0.0;
  std::vector<std::string> chain;              // reductions applied, outermost first

  CVector contact_point;
  Complex d1_phi{0.0, 0.0}, d1_psi{0.0, 0.0};  // D_1 phi_1(e_1), D_1 psi_1(e_1) after normalization
  double M = 0.0;
  double cross_term_tail = 0.0;                // |K_{phi z}(psi z)|/||K_z||^2 at the last point
  double k = 0.0, k_phi = 0.0, k_psi = 0.0;    // heights of the level sets (parabolic)
  CVector c;
  double rho_constant = 0.0;
  double rho_stddev = 0.0;
  double ratio_limit_expected = 0.0;           // k / k_phi
  double ratio_limit_observed = 0.0;
  double taylor_factor_last = 0.0;             // (1 - phi_1(z)) / (1 - z_1) at the last point
  std::optional<SliceLimitResult> slice;
};

// ---------------------------------------------------------------------------

struct Eq1Record {
  double rho, ratio1, ratio2, eq1;
};

/// rho(phi z, psi z), the two defect ratios and their combination, in ball coordinates.
inline Eq1Record eq1_quantity(const LinFracMap& phi, const LinFracMap& psi, const CVector& z) {
  if (!(z.norm() < 1.0)) throw DomainError("eq1_quantity: z must lie in the open ball");
  const CVector pz = phi(z), qz = psi(z);
  const double dz = 1.0 - z.squaredNorm();
  Eq1Record r{};
  r.rho = pseudo_hyperbolic_distance(pz, qz);
  r.ratio1 = dz / (1.0 - pz.squaredNorm());
  r.ratio2 = dz / (1.0 - qz.squaredNorm());
  r.eq1 = r.rho * (r.ratio1 + r.ratio2);
  return r;
}

/// Closed-form slice limit
///   (2 - lambda^2)(2 - gamma^2) / |2 - <Z,W>|^2
/// for tau = (z_1, A z'), xi = (z_1, M z') along omega_t = (t, 0', sqrt(1-t), 0''),
/// cross-checked against 1 - rho^2(tau omega_t, xi omega_t) extrapolated to t = 1.
inline SliceLimitResult slice_limit_test(const CMatrix& A, const CMatrix& M, int j) {
  const Eigen::Index m = A.rows();
  if (m < 1 || A.cols() != m || M.rows() != m || M.cols() != m) {
    throw DomainError("slice_limit_test: A and M must be square of the same size N-1 >= 1");
  }
  if (j < 0 || j >= m) throw DomainError("slice_limit_test: column index out of range");
  SliceLimitResult r;
  r.j = j;
  r.Z = A.col(j);
  r.W = M.col(j);
  r.lambda = r.Z.norm();
  r.gammacol = r.W.norm();
  if (r.lambda > 1.0 + 1e-12 || r.gammacol > 1.0 + 1e-12) throw DomainError("slice_limit_test: column norm exceeds 1");
  const double l2 = r.lambda * r.lambda, g2 = r.gammacol * r.gammacol;
  r.limit_value = (2.0 - l2) * (2.0 - g2) / std::norm(2.0 - inner(r.Z, r.W));
  r.rho_limit = std::sqrt(std::max(0.0, 1.0 - r.limit_value));

  const int n = static_cast<int>(m) + 1;
  CMatrix ta = CMatrix::Identity(n, n), tm = CMatrix::Identity(n, n);
  ta.bottomRightCorner(m, m) = A;
  tm.bottomRightCorner(m, m) = M;
  const LinFracMap tau = LinFracMap::linear(ta), xi = LinFracMap::linear(tm);
  constexpr int kLevels = 9;
  std::vector<std::vector<double>> T(kLevels);
  for (int i = 0; i < kLevels; ++i) {
    const double h = std::ldexp(1.0, -(8 + i));
    CVector w = CVector::Zero(n);
    w(0) = 1.0 - h;
    w(j + 1) = std::sqrt(h);
    const double rho = pseudo_hyperbolic_distance(tau(w), xi(w));
    T[static_cast<std::size_t>(i)].push_back(1.0 - rho * rho);
    for (int k = 1; k <= i; ++k) {
      const double f = std::ldexp(1.0, k) - 1.0;
      const double cur = T[static_cast<std::size_t>(i)][static_cast<std::size_t>(k - 1)];
      const double prev = T[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(k - 1)];
      T[static_cast<std::size_t>(i)].push_back(cur + (cur - prev) / f);
    }
  }
  r.direct_limit = T.back().back();
  r.direct_error = std::abs(r.direct_limit - r.limit_value);
  return r;
}

namespace detail {

inline std::optional<double> kernel_exponent_for(const SpaceSpec& space) {
  if (auto eq = kernel_equivalent_space(space)) return eq->kernel_exponent();
  return std::nullopt;
}

inline WitnessRecord finish_record(int n, double dz, double dphi, double dpsi, Complex omi, double rho,
                                   std::optional<double> c, const CVector& ball_point) {
  WitnessRecord r;
  r.n = n;
  r.z = ball_point;
  const double nz = std::sqrt(std::max(0.0, 1.0 - dz));
  r.z_norm = nz;
  r.one_minus_norm = dz / (1.0 + nz);
  r.rho = rho;
  r.ratio1 = dz / dphi;
  r.ratio2 = dz / dpsi;
  r.eq1 = rho * (r.ratio1 + r.ratio2);
  if (c) r.kernel_norm_sq = kernel_difference_norm_from_defects(*c, dz, dphi, dpsi, std::conj(omi));
  return r;
}

// A pair of ball maps seen in the Siegel frame.
struct PairFrame {
  LinFracMap Phi, Psi;
  std::optional<double> c;

  PairFrame(const LinFracMap& phi, const LinFracMap& psi, const SpaceSpec& space)
      : Phi(conjugate_to_siegel(phi)), Psi(conjugate_to_siegel(psi)), c(kernel_exponent_for(space)) {}

  WitnessRecord record(int n, const CVector& w) const {
    const CVector u = Phi(w), v = Psi(w);
    const double dz = ball_defect_from_siegel(w);
    const double dphi = ball_defect_from_siegel(u);
    const double dpsi = ball_defect_from_siegel(v);
    const Complex omi = ball_one_minus_inner_from_siegel(u, v);
    if (!(dz > 0.0) || !(dphi > 0.0) || !(dpsi > 0.0)) {
      throw NumericalFailure("witness: defect underflow at a sequence point");
    }
    const double rho = rho_from_defects(dphi, dpsi, omi);
    return finish_record(n, dz, dphi, dpsi, omi, rho, c, cayley_inverse(w));
  }
};

inline CVector siegel_pad(const CVector& w, int n) {
  CVector x = CVector::Zero(n);
  x.head(w.size()) = w;
  return x;
}

inline void apply_siegel_map(WitnessCertificate& cert, const LinFracMap& ball_map) {
  const LinFracMap S = conjugate_to_siegel(ball_map);
  for (auto& w : cert.siegel_points) w = S(w);
}

inline void recompute_records(WitnessCertificate& cert, const LinFracMap& phi, const LinFracMap& psi,
                              const SpaceSpec& space) {
  const PairFrame frame(phi, psi, space);
  std::vector<WitnessRecord> recs;
  recs.reserve(cert.siegel_points.size());
  for (std::size_t i = 0; i < cert.siegel_points.size(); ++i) {
    const int n = i < cert.records.size() ? cert.records[i].n : static_cast<int>(i);
    recs.push_back(frame.record(n, cert.siegel_points[i]));
  }
  cert.records = std::move(recs);
}

inline double min_of(const std::vector<WitnessRecord>& recs, bool kernel) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& r : recs) m = std::min(m, kernel ? r.kernel_norm_sq : r.eq1);
  return recs.empty() ? 0.0 : m;
}

inline std::string vec_str(const CVector& v) {
  std::ostringstream os;
  os.precision(6);
  os << "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    os << v(i).real();
    if (v(i).imag() != 0.0) os << (v(i).imag() < 0 ? "-" : "+") << std::abs(v(i).imag()) << "i";
  }
  os << ")";
  return os.str();
}

// --- sequences on a pair (a, b) with a(e1) = e1 -----------------------------

// z_n = (1 - 2^-n) e_1.
inline WitnessCertificate radial_sequence(const LinFracMap& a, const LinFracMap& b, const SpaceSpec& space) {
  const int n = a.dim();
  const PairFrame frame(a, b, space);
  WitnessCertificate cert;
  cert.kind = WitnessKind::kBoundaryMismatch;
  cert.quantity = "kernel_difference_norm";
  for (int p = 4; p <= 36; p += 2) {
    const double eps = std::ldexp(1.0, -p);
    CVector w = CVector::Zero(n);
    w(0) = Complex(0.0, (2.0 - eps) / eps);
    cert.siegel_points.push_back(w);
    cert.records.push_back(frame.record(p, w));
  }
  if (frame.c) {
    const CVector& w = cert.siegel_points.back();
    const CVector u = frame.Phi(w), v = frame.Psi(w);
    const double dz = ball_defect_from_siegel(w);
    cert.cross_term_tail =
        std::pow(dz, *frame.c) * std::abs(std::pow(std::conj(ball_one_minus_inner_from_siegel(u, v)), -*frame.c));
  }
  cert.reduced_records = cert.records;
  return cert;
}

// Points of the slice [e_1] on |1 - z_1| / (1 - |z_1|^2) = M, i.e. |w_1 + i| = 2 M Im w_1.
inline WitnessCertificate aperture_sequence(const LinFracMap& a, const LinFracMap& b, const SpaceSpec& space,
                                            double M) {
  const int n = a.dim();
  const PairFrame frame(a, b, space);
  WitnessCertificate cert;
  cert.kind = WitnessKind::kDerivativeMismatch;
  cert.quantity = "kernel_difference_norm";
  cert.M = M;
  for (int p = 2; p <= 40; ++p) {
    const double y = std::ldexp(1.0, p);
    const double x2 = 4.0 * M * M * y * y - (y + 1.0) * (y + 1.0);
    if (x2 <= 0.0) continue;
    // 1 - |z|^2 = 1 / (M^2 y); stay at least 1e-12 away from the sphere
    if (1.0 / (M * M * y) < 2e-12) break;
    CVector w = CVector::Zero(n);
    w(0) = Complex(std::sqrt(x2), y);
    cert.siegel_points.push_back(w);
    cert.records.push_back(frame.record(p, w));
  }
  if (cert.records.size() < 4) throw NumericalFailure("aperture_sequence: aperture too wide for the precision window");
  if (frame.c) {
    const CVector& w = cert.siegel_points.back();
    const CVector u = frame.Phi(w), v = frame.Psi(w);
    const double dz = ball_defect_from_siegel(w);
    cert.cross_term_tail =
        std::pow(dz, *frame.c) * std::abs(std::pow(std::conj(ball_one_minus_inner_from_siegel(u, v)), -*frame.c));
  }
  cert.reduced_records = cert.records;
  return cert;
}

inline double default_aperture(Complex da, Complex db) {
  const double gap = std::abs(db - da);
  double M = 1.0;
  while (!(gap * M > 4.0 * std::abs(da))) {
    M *= 2.0;
    if (M > 1e12) throw NumericalFailure("aperture: derivative gap too small");
  }
  return M;
}

inline std::vector<double> default_t_grid(double k, double csq) {
  std::vector<double> t;
  for (int p = 4; p <= 24; ++p) {
    const double tv = std::ldexp(1.0, p);
    // 1 - |z| ~ 2k / |w_1 + i|^2; keep |z| <= 1 - 1e-12
    const double defect = 4.0 * k / (tv * tv + (k + csq + 1.0) * (k + csq + 1.0));
    if (defect / 2.0 < 1e-12) break;
    t.push_back(tv);
  }
  return t;
}

inline std::vector<CVector> c_grid(int m) {
  std::vector<CVector> out;
  const std::vector<Complex> vals = {0.0, 0.3, -0.3, Complex(0.0, 0.3), Complex(0.0, -0.3)};
  std::vector<int> idx(static_cast<std::size_t>(m), 0);
  while (true) {
    CVector c(m);
    for (int i = 0; i < m; ++i) c(i) = vals[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
    out.push_back(c);
    int pos = 0;
    while (pos < m && ++idx[static_cast<std::size_t>(pos)] == static_cast<int>(vals.size())) {
      idx[static_cast<std::size_t>(pos)] = 0;
      ++pos;
    }
    if (pos == m) break;
  }
  return out;
}

struct FormImage {
  Complex shift;   // 2i<c, delta> + b
  CVector prime;   // A c + gamma
};

inline FormImage form_image(const SiegelParabolicForm& f, const CVector& c) {
  FormImage r;
  r.shift = f.b;
  if (c.size() > 0) r.shift += 2.0 * kI * inner(c, f.delta);
  r.prime = c.size() > 0 ? CVector(f.amat * c + f.gamma) : CVector(0);
  return r;
}

// 1 - rho^2 on the horizontal line through (i(k + |c|^2), c); independent of t.
inline double form_rho(const SiegelParabolicForm& f, const SiegelParabolicForm& g, double k, const CVector& c) {
  const double im_w1 = k + c.squaredNorm();
  const FormImage u = form_image(f, c), v = form_image(g, c);
  const double hu = im_w1 + u.shift.imag() - u.prime.squaredNorm();
  const double hv = im_w1 + v.shift.imag() - v.prime.squaredNorm();
  Complex den = Complex(0.0, 2.0 * im_w1) + u.shift - std::conj(v.shift);
  if (c.size() > 0) den -= 2.0 * kI * inner(u.prime, v.prime);
  const double one_minus = 4.0 * hu * hv / std::norm(den);
  return std::sqrt(std::max(0.0, 1.0 - one_minus));
}

// w_n = (t_n + i(k + |c|^2), c) for two generalized translations of H_N.
inline WitnessCertificate affine_form_sequence(const SiegelParabolicForm& f, const SiegelParabolicForm& g,
                                               const SpaceSpec& space, const WitnessConfig& cfg) {
  const int n = f.dim();
  const double k = cfg.k;
  if (!(k > 0.0)) throw PreconditionError("parabolic witness: k must be positive");
  std::vector<CVector> candidates;
  if (cfg.c) {
    require_dim(*cfg.c, n - 1, "parabolic witness offset c");
    candidates.push_back(*cfg.c);
  }
  for (auto& c : c_grid(n - 1)) candidates.push_back(c);
  std::optional<CVector> chosen;
  for (const auto& c : candidates) {
    if (form_rho(f, g, k, c) > 1e-6) {
      chosen = c;
      break;
    }
  }
  if (!chosen) throw PreconditionError("parabolic witness: rho vanishes for every offset c; reduction needed");
  const CVector c = *chosen;
  const double csq = c.squaredNorm();
  const double im_w1 = k + csq;
  const FormImage u = form_image(f, c), v = form_image(g, c);
  const double hu = im_w1 + u.shift.imag() - u.prime.squaredNorm();
  const double hv = im_w1 + v.shift.imag() - v.prime.squaredNorm();
  if (!(hu > 0.0) || !(hv > 0.0)) throw PreconditionError("parabolic witness: image leaves the Siegel domain");
  Complex den = Complex(0.0, 2.0 * im_w1) + u.shift - std::conj(v.shift);
  if (n > 1) den -= 2.0 * kI * inner(u.prime, v.prime);
  const double rho = std::sqrt(std::max(0.0, 1.0 - 4.0 * hu * hv / std::norm(den)));
  const std::optional<double> cexp = kernel_exponent_for(SpaceSpec(space));

  std::vector<double> grid = cfg.t_grid.empty() ? default_t_grid(k, csq) : cfg.t_grid;
  WitnessCertificate cert;
  cert.kind = WitnessKind::kParabolicEllipsoid;
  cert.quantity = "eq1";
  cert.k = k;
  cert.k_phi = hu;
  cert.k_psi = hv;
  cert.c = c;
  cert.ratio_limit_expected = k / hu;
  int idx = 0;
  for (double t : grid) {
    CVector w(n);
    w(0) = Complex(t, im_w1);
    if (n > 1) w.tail(n - 1) = c;
    const Complex u1 = w(0) + u.shift, v1 = w(0) + v.shift;
    const double dz = 4.0 * k / std::norm(w(0) + kI);
    const double dphi = 4.0 * hu / std::norm(u1 + kI);
    const double dpsi = 4.0 * hv / std::norm(v1 + kI);
    // 1 - <C^{-1}u, C^{-1}v> with conj(v_1) - u_1 formed without the common t
    Complex num = 2.0 * kI * (Complex(0.0, -2.0 * im_w1) + std::conj(v.shift) - u.shift);
    if (n > 1) num -= 4.0 * inner(u.prime, v.prime);
    const Complex omi = num / ((u1 + kI) * (std::conj(v1) - kI));
    if (dz / 2.0 < 1e-12) break;
    cert.siegel_points.push_back(w);
    cert.records.push_back(finish_record(idx + 1, dz, dphi, dpsi, omi, rho, cexp, cayley_inverse(w)));
    cert.taylor_factor_last = std::abs((w(0) + kI) / (u1 + kI));
    ++idx;
  }
  if (cert.records.size() < 2) throw PreconditionError("parabolic witness: t grid leaves fewer than two usable points");
  cert.rho_constant = rho;
  double mean = 0.0;
  for (const auto& r : cert.records) mean += r.rho;
  mean /= static_cast<double>(cert.records.size());
  double var = 0.0;
  for (const auto& r : cert.records) var += (r.rho - mean) * (r.rho - mean);
  cert.rho_stddev = std::sqrt(var / static_cast<double>(cert.records.size()));
  cert.ratio_limit_observed = cert.records.back().ratio1;
  cert.reduced_records = cert.records;
  return cert;
}

// omega_t = (t, 0', sqrt(1-t), 0'') with t = 1 - 2^-p, in Siegel form.
inline WitnessCertificate slice_sequence(const LinFracMap& tau, const LinFracMap& xi, const SliceLimitResult& s,
                                         const SpaceSpec& space) {
  const int n = tau.dim();
  const PairFrame frame(tau, xi, space);
  WitnessCertificate cert;
  cert.kind = WitnessKind::kSliceLimit;
  cert.quantity = "eq1";
  cert.slice = s;
  for (int p = 4; p <= 36; p += 2) {
    const double h = std::ldexp(1.0, -p);
    CVector w = CVector::Zero(n);
    w(0) = Complex(0.0, (2.0 - h) / h);
    w(s.j + 1) = Complex(0.0, 1.0 / std::sqrt(h));
    cert.siegel_points.push_back(w);
    cert.records.push_back(frame.record(p, w));
  }
  cert.reduced_records = cert.records;
  return cert;
}

inline LinFracMap rotate_pair_map(const LinFracMap& f, const CMatrix& U1, const CMatrix& U2) {
  return compose(unitary_map(U2.adjoint()), compose(f, unitary_map(U1)));
}

// Boundary witness for (a, b) at a contact point zeta of a (|a(zeta)| = 1):
// normalize by unitaries, then radial (value mismatch) or aperture
// (derivative mismatch) sequence. Points are returned in the input frame.
inline WitnessCertificate boundary_case(const LinFracMap& a, const LinFracMap& b, const CVector& zeta,
                                        const SpaceSpec& space, const WitnessConfig& cfg) {
  const int n = a.dim();
  require_dim(zeta, n, "boundary_witness");
  if (std::abs(zeta.norm() - 1.0) > kBoundaryTolerance) throw PreconditionError("boundary_witness: zeta is not on the sphere");
  const CVector eta = a(zeta);
  if (std::abs(eta.norm() - 1.0) > kBoundaryTolerance) {
    throw PreconditionError("boundary_witness: |phi(zeta)| != 1");
  }
  const CMatrix U1 = unitary_taking_e1_to(zeta / zeta.norm());
  const CMatrix U2 = unitary_taking_e1_to(eta / eta.norm());
  const LinFracMap an = rotate_pair_map(a, U1, U2), bn = rotate_pair_map(b, U1, U2);
  const CVector e1 = unit_vector(n);
  WitnessCertificate cert;
  const Complex da = d1_at_e1(an);
  if (!fixes_point(bn, e1)) {
    cert = radial_sequence(an, bn, space);
    cert.d1_phi = da;
  } else {
    const Complex db = d1_at_e1(bn);
    if (std::abs(da - db) <= 1e-8) {
      throw PreconditionError("boundary_witness: values and derivatives agree at zeta; use the Krein reduction");
    }
    const bool automatic = !(cfg.M > 0.0);
    if (!automatic && cfg.M < 1.0) throw PreconditionError("boundary_witness: aperture M must be >= 1");
    double M = automatic ? default_aperture(da, db) : cfg.M;
    for (int attempt = 0;; ++attempt) {
      cert = aperture_sequence(an, bn, space, M);
      const double inf_q = cert.records.front().kernel_norm_sq == cert.records.front().kernel_norm_sq
                               ? min_of(cert.records, true)
                               : min_of(cert.records, false);
      if (!automatic || inf_q >= 1e-3 || attempt >= 8) break;
      M *= 2.0;
    }
    cert.d1_phi = da;
    cert.d1_psi = db;
  }
  cert.contact_point = zeta;
  if (!cert.records.empty() && std::isnan(cert.records.front().kernel_norm_sq)) cert.quantity = "eq1";
  for (auto& r : cert.records) r.z = U1 * r.z;
  if ((U1 - CMatrix::Identity(n, n)).norm() > 1e-15) apply_siegel_map(cert, unitary_map(U1));
  return cert;
}

inline CVector contact_point(const LinFracMap& f) {
  const CVector e1 = unit_vector(f.dim());
  if (fixes_point(f, e1)) return e1;
  const auto bfp = boundary_fixed_points(f);
  if (!bfp.points.empty()) return bfp.points.front();
  if (!bfp.continua.empty()) {
    CVector p = sample_continuum(bfp.continua.front(), 1).front();
    return p / p.norm();
  }
  const auto s = sup_norm(f);
  if (s.value < 1.0) throw PreconditionError("contact point: sup norm is below 1");
  return s.maximizer / s.maximizer.norm();
}

// Orthonormal basis (columns) of C^n whose first column is q and whose
// first k columns span `space` (q must lie in it).
inline CMatrix adapted_unitary(const CVector& q, const CMatrix& space_basis) {
  const Eigen::Index n = q.size();
  CMatrix gen(n, space_basis.cols() + 1 + n);
  gen.col(0) = q;
  gen.block(0, 1, n, space_basis.cols()) = space_basis;
  gen.rightCols(n) = CMatrix::Identity(n, n);
  CMatrix out(n, n);
  Eigen::Index filled = 0;
  for (Eigen::Index c = 0; c < gen.cols() && filled < n; ++c) {
    CVector v = gen.col(c);
    for (Eigen::Index r = 0; r < filled; ++r) v -= out.col(r).dot(v) * out.col(r);
    for (Eigen::Index r = 0; r < filled; ++r) v -= out.col(r).dot(v) * out.col(r);
    if (v.norm() > 1e-8) out.col(filled++) = v / v.norm();
  }
  if (filled < n) throw NumericalFailure("adapted_unitary: could not complete the basis");
  return out;
}

// Orthonormal directions and the point closest to 0 of the affine hull of pts.
inline std::pair<CVector, CMatrix> affine_hull(const std::vector<CVector>& pts, double tol = 1e-9) {
  const Eigen::Index n = pts.front().size();
  CMatrix diffs(n, static_cast<Eigen::Index>(pts.size()) - 1);
  for (std::size_t i = 1; i < pts.size(); ++i) diffs.col(static_cast<Eigen::Index>(i) - 1) = pts[i] - pts.front();
  Eigen::JacobiSVD<CMatrix> svd(diffs, Eigen::ComputeThinU);
  const double top = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()(i) > tol * std::max(1.0, top)) ++rank;
  }
  const CMatrix Q = svd.matrixU().leftCols(rank);
  CVector center = pts.front() - Q * (Q.adjoint() * pts.front());
  return {center, Q};
}

// Linear span of phi_c(S) for an affine slice S = center + span(Q), via images of sample points.
inline CMatrix image_subspace(const LinFracMap& swap, const CVector& center, const CMatrix& Q) {
  std::vector<CVector> pts;
  pts.push_back(swap(center));
  const double r = std::sqrt(std::max(0.0, 1.0 - center.squaredNorm()));
  for (Eigen::Index j = 0; j < Q.cols(); ++j) {
    pts.push_back(swap(center + 0.25 * r * Q.col(j)));
    pts.push_back(swap(center + Complex(0.0, 0.25 * r) * Q.col(j)));
  }
  auto [c0, dirs] = affine_hull(pts);
  return dirs;
}

WitnessCertificate search_level(const LinFracMap& f0, const LinFracMap& g0, const SpaceSpec& space,
                                const WitnessConfig& cfg, int depth);

// The deep case phi o sigma = psi o sigma with phi != psi: restrict to a
// K-dimensional slice on which the maps differ and recurse on B_K.
inline WitnessCertificate deep_case(const LinFracMap& a, const LinFracMap& b, const SpaceSpec& space,
                                    const WitnessConfig& cfg, int depth) {
  const int n = a.dim();
  const int k = affine_range_dimension(a);
  if (k >= n) throw NumericalFailure("deep case: phi o sigma = psi o sigma with phi univalent but phi != psi");
  if (affine_range_dimension(b) != k) throw NumericalFailure("deep case: the ranges have different affine dimensions");
  if (depth > 16) throw NumericalFailure("deep case: recursion cap reached");
  // affine set A containing both ranges
  std::vector<CVector> samples;
  const double s = 0.3 / std::sqrt(static_cast<double>(n));
  samples.push_back(a(CVector::Zero(n)));
  for (int j = 0; j < n; ++j) {
    samples.push_back(a(s * unit_vector(n, j)));
    samples.push_back(a(Complex(0.0, s) * unit_vector(n, j)));
  }
  auto [cA, QA] = affine_hull(samples);
  if (QA.cols() != k) throw NumericalFailure("deep case: affine hull of the range has the wrong dimension");
  for (int j = 0; j < n; ++j) {
    const CVector y = b(0.5 * s * unit_vector(n, j) + Complex(0.0, 0.2 * s) * unit_vector(n, (j + 1) % n));
    const CVector off = (y - cA) - QA * (QA.adjoint() * (y - cA));
    if (off.norm() > 1e-8) throw NumericalFailure("deep case: the ranges do not share an affine set");
  }
  // rho2 = U o phi_{cA}: sends A onto the standard slice, fixes e1
  const LinFracMap swapA = automorphism_point_swap(cA);
  const CVector q1 = swapA(unit_vector(n));
  const CMatrix VA = image_subspace(swapA, cA, QA);
  const CMatrix UA = adapted_unitary(q1 / q1.norm(), VA);
  const LinFracMap rho2 = compose(unitary_map(UA.adjoint()), swapA);

  // a point where the maps differ, and a slice Lambda through it and e1
  CVector x;
  double best = -1.0;
  for (int i = 0; i < 24; ++i) {
    CVector cand(n);
    for (int j = 0; j < n; ++j) cand(j) = std::polar(0.55 / std::sqrt(static_cast<double>(n)), 0.9 * i + 2.1 * j + 0.3);
    const double d = (a(cand) - b(cand)).norm();
    if (d > best) {
      best = d;
      x = cand;
    }
  }
  if (best < 1e-6) throw NumericalFailure("deep case: maps agree at every probe point");
  const CVector e1 = unit_vector(n);
  CMatrix dirs(n, k);
  dirs.col(0) = (x - e1) / (x - e1).norm();
  {
    Eigen::Index filled = 1;
    for (int j = 1; j < n && filled < k; ++j) {
      CVector v = unit_vector(n, j);
      for (Eigen::Index r = 0; r < filled; ++r) v -= dirs.col(r).dot(v) * dirs.col(r);
      if (v.norm() > 1e-8) dirs.col(filled++) = v / v.norm();
    }
    if (filled < k) throw NumericalFailure("deep case: could not build the slice");
  }
  const CVector cL = e1 - dirs * (dirs.adjoint() * e1);
  const LinFracMap swapL = automorphism_point_swap(cL);
  const CVector q1L = swapL(e1);
  const CMatrix VL = image_subspace(swapL, cL, dirs);
  const CMatrix UL = adapted_unitary(q1L / q1L.norm(), VL);
  const LinFracMap rho1 = compose(swapL, unitary_map(UL));

  const LinFracMap mu = restriction_to_slice(a, rho1, rho2, k);
  const LinFracMap nu = restriction_to_slice(b, rho1, rho2, k);
  if (maps_equal(mu, nu)) throw NumericalFailure("deep case: restricted maps coincide");
  const SpaceSpec sub_space = restricted_space(space, k);
  WitnessCertificate cert = search_level(mu, nu, sub_space, cfg, depth + 1);
  for (auto& w : cert.siegel_points) w = siegel_pad(w, n);
  apply_siegel_map(cert, rho1);
  std::ostringstream os;
  os << "slice reduction: affine range dimension K = " << k << ", restricted pair on B_" << k << " in "
     << sub_space.label();
  cert.chain.insert(cert.chain.begin(), os.str());
  return cert;
}

// (tau, xi) both fixing e1 with D_1 = 1 and tau != xi.
inline WitnessCertificate fixed_pair_case(LinFracMap tau, LinFracMap xi, const SpaceSpec& space,
                                          const WitnessConfig& cfg, bool allow_conjugation) {
  const int n = tau.dim();
  if (classify_fixing_e1(tau) == E1Class::kParabolic && classify_fixing_e1(xi) == E1Class::kParabolic) {
    WitnessCertificate cert = affine_form_sequence(to_siegel_parabolic(tau), to_siegel_parabolic(xi), space, cfg);
    cert.chain.push_back("parabolic pair: horizontal level-set sequence");
    return cert;
  }
  if (!is_identity_on_e1_circle(tau) && is_identity_on_e1_circle(xi)) std::swap(tau, xi);
  if (is_identity_on_e1_circle(tau)) {
    const double two_pi = 2.0 * std::acos(-1.0);
    for (int i = 0; i < 8; ++i) {
      const CVector zeta = std::polar(1.0, two_pi * i / 8.0) * unit_vector(n);
      bool mismatch = !fixes_point(xi, zeta);
      if (!mismatch) {
        const Complex dx = directional_derivative(xi, zeta, zeta, zeta);
        mismatch = std::abs(dx - 1.0) > 1e-8;
      }
      if (mismatch) {
        WitnessCertificate cert = boundary_case(tau, xi, zeta, space, cfg);
        std::ostringstream os;
        os << "tau is the identity on the circle [e1]; xi differs at " << vec_str(zeta);
        cert.chain.push_back(os.str());
        return cert;
      }
    }
    const auto A = block_normal_form(tau, 1e-9);
    const auto M = block_normal_form(xi, 1e-9);
    if (A && M) {
      std::optional<SliceLimitResult> best;
      for (int j = 0; j < n - 1; ++j) {
        SliceLimitResult s = slice_limit_test(*A, *M, j);
        if (!best || s.rho_limit > best->rho_limit) best = s;
      }
      if (best && best->rho_limit > 1e-6) {
        WitnessCertificate cert = slice_sequence(tau, xi, *best, space);
        std::ostringstream os;
        os << "normal forms (z1, A z'), (z1, M z'); column j = " << best->j << ", rho limit " << best->rho_limit;
        cert.chain.push_back(os.str());
        return cert;
      }
    }
  }
  if (allow_conjugation) {
    std::optional<CVector> p = interior_fixed_point(tau);
    if (!p) {
      p = interior_fixed_point(xi);
      if (p) std::swap(tau, xi);
    }
    if (p) {
      const LinFracMap lam = automorphism_fixing_e1_with_origin_at(*p);
      const LinFracMap lam_inv = krein_adjoint(lam);
      const LinFracMap tt = compose(lam_inv, compose(tau, lam));
      const LinFracMap xx = compose(lam_inv, compose(xi, lam));
      try {
        WitnessCertificate cert = fixed_pair_case(tt, xx, space, cfg, false);
        apply_siegel_map(cert, lam);
        cert.chain.insert(cert.chain.begin(),
                          "conjugation by an automorphism fixing e1 moving 0 to the interior fixed point " + vec_str(*p));
        return cert;
      } catch (const DomainError&) {
      } catch (const NumericalFailure&) {
      }
    }
  }
  // generalized translations: every map fixing e1 with D_1 = 1 is affine in H_N
  WitnessCertificate cert = affine_form_sequence(siegel_affine_form(tau), siegel_affine_form(xi), space, cfg);
  cert.chain.push_back("generalized-translation forms in H_N: horizontal level-set sequence");
  return cert;
}

// (a, b) normalized so that a(e1) = e1; returns points in this frame.
inline WitnessCertificate level_cascade(const LinFracMap& a, const LinFracMap& b, const SpaceSpec& space,
                                        const WitnessConfig& cfg, int depth) {
  const int n = a.dim();
  const CVector e1 = unit_vector(n);
  const Complex da = d1_at_e1(a);
  if (!fixes_point(b, e1)) {
    WitnessCertificate cert = boundary_case(a, b, e1, space, cfg);
    cert.chain.push_back("value mismatch at the contact point");
    return cert;
  }
  const Complex db = d1_at_e1(b);
  if (std::abs(da - db) > 1e-8) {
    WitnessCertificate cert = boundary_case(a, b, e1, space, cfg);
    cert.chain.push_back("derivative mismatch at the contact point");
    return cert;
  }
  if (classify_fixing_e1(a) == E1Class::kParabolic && classify_fixing_e1(b) == E1Class::kParabolic) {
    WitnessCertificate cert = affine_form_sequence(to_siegel_parabolic(a), to_siegel_parabolic(b), space, cfg);
    cert.chain.push_back("parabolic pair: horizontal level-set sequence");
    cert.d1_phi = da;
    cert.d1_psi = db;
    return cert;
  }
  const KreinReduction kr = krein_reduction(a, b);
  if (maps_equal(kr.tau, kr.xi, 1e-9)) {
    WitnessCertificate cert = deep_case(a, b, space, cfg, depth);
    recompute_records(cert, a, b, space);
    cert.chain.insert(cert.chain.begin(), "Krein reduction gives tau = xi");
    return cert;
  }
  WitnessCertificate cert;
  const CVector tau_e1 = kr.tau(e1);
  if (!fixes_point(kr.xi, e1)) {
    cert = boundary_case(kr.tau, kr.xi, e1, space, cfg);
    cert.chain.insert(cert.chain.begin(), "value mismatch of xi at e1");
  } else if (std::abs(d1_at_e1(kr.xi) - 1.0) > 1e-8) {
    cert = boundary_case(kr.tau, kr.xi, e1, space, cfg);
    cert.chain.insert(cert.chain.begin(), "derivative mismatch of xi at e1");
  } else {
    cert = fixed_pair_case(kr.tau, kr.xi, space, cfg, true);
  }
  apply_siegel_map(cert, kr.sigma);
  recompute_records(cert, a, b, space);
  cert.chain.insert(cert.chain.begin(), "Krein reduction: tau = phi o sigma_phi, xi = psi o sigma_phi");
  cert.d1_phi = da;
  cert.d1_psi = db;
  return cert;
}

inline WitnessCertificate search_level(const LinFracMap& f0, const LinFracMap& g0, const SpaceSpec& space,
                                       const WitnessConfig& cfg, int depth) {
  const int n = f0.dim();
  LinFracMap f = f0, g = g0;
  bool swapped = false;
  if (sup_norm(f0).value < 1.0) {
    std::swap(f, g);
    swapped = true;
  }
  const CVector zeta = contact_point(f);
  const CVector eta = f(zeta);
  const CMatrix U1 = unitary_taking_e1_to(zeta);
  const CMatrix U2 = unitary_taking_e1_to(eta / eta.norm());
  const LinFracMap a = rotate_pair_map(f, U1, U2), b = rotate_pair_map(g, U1, U2);
  WitnessCertificate cert = level_cascade(a, b, space, cfg, depth);
  // records for (a, b) in this frame equal those of (f0, g0) at U1 z
  for (auto& r : cert.records) r.z = U1 * r.z;
  if ((U1 - CMatrix::Identity(n, n)).norm() > 1e-15) apply_siegel_map(cert, unitary_map(U1));
  std::ostringstream os;
  os << "contact point " << vec_str(zeta) << (swapped ? " of psi (roles exchanged)" : " of phi");
  cert.chain.insert(cert.chain.begin(), os.str());
  cert.contact_point = zeta;
  return cert;
}

inline void finalize_claim(WitnessCertificate& cert) {
  const bool kernel = cert.quantity == "kernel_difference_norm" && !cert.records.empty() &&
                      !std::isnan(cert.records.front().kernel_norm_sq);
  if (!kernel) cert.quantity = "eq1";
  cert.claimed_inf = min_of(cert.records, kernel);
}

}  // namespace detail

/// Horizontal level-set witness for two parabolic maps fixing e_1.
inline WitnessCertificate parabolic_witness(const LinFracMap& phi, const LinFracMap& psi, const WitnessConfig& cfg,
                                            const std::optional<SpaceSpec>& space = std::nullopt) {
  if (phi.dim() != psi.dim()) throw DomainError("parabolic_witness: dimension mismatch");
  if (maps_equal(phi, psi)) throw PreconditionError("parabolic_witness: phi = psi");
  if (classify_fixing_e1(phi) != E1Class::kParabolic || classify_fixing_e1(psi) != E1Class::kParabolic) {
    throw PreconditionError("parabolic_witness: both maps must be parabolic fixing e1");
  }
  const SpaceSpec sp = space ? *space : SpaceSpec::hardy(phi.dim());
  WitnessCertificate cert =
      detail::affine_form_sequence(to_siegel_parabolic(phi), to_siegel_parabolic(psi), sp, cfg);
  cert.contact_point = unit_vector(phi.dim());
  cert.d1_phi = d1_at_e1(phi);
  cert.d1_psi = d1_at_e1(psi);
  detail::finalize_claim(cert);
  return cert;
}

/// Kernel witness at a boundary point zeta with |phi(zeta)| = 1 where psi
/// differs from phi in value or in the derivative D_zeta.
inline WitnessCertificate boundary_witness(const LinFracMap& phi, const LinFracMap& psi, const CVector& zeta,
                                           const SpaceSpec& space, const WitnessConfig& cfg) {
  if (phi.dim() != psi.dim() || space.dim != phi.dim()) throw DomainError("boundary_witness: dimension mismatch");
  if (maps_equal(phi, psi)) throw PreconditionError("boundary_witness: phi = psi");
  WitnessCertificate cert = detail::boundary_case(phi, psi, zeta, space, cfg);
  detail::finalize_claim(cert);
  return cert;
}

struct Verdict {
  enum class Outcome { kEqual, kCompactBothSmall, kNotCompact, kInconclusive };
  Outcome outcome = Outcome::kInconclusive;
  double sup_phi = 0.0;
  double sup_psi = 0.0;
  std::optional<WitnessCertificate> certificate;
  std::string diagnostics;
};

inline const char* to_string(Verdict::Outcome o) {
  switch (o) {
    case Verdict::Outcome::kEqual: return "equal";
    case Verdict::Outcome::kCompactBothSmall: return "compact-both-small";
    case Verdict::Outcome::kNotCompact: return "not-compact";
    case Verdict::Outcome::kInconclusive: return "inconclusive";
  }
  return "?";
}

/// phi = psi, or both sup norms below 1 (compact), or a non-compactness certificate.
inline Verdict compactness_verdict(const LinFracMap& phi, const LinFracMap& psi, const SpaceSpec& space,
                                   const WitnessConfig& cfg = {}) {
  if (phi.dim() != psi.dim() || space.dim != phi.dim()) throw DomainError("compactness_verdict: dimension mismatch");
  Verdict v;
  if (maps_equal(phi, psi)) {
    v.outcome = Verdict::Outcome::kEqual;
    v.sup_phi = v.sup_psi = sup_norm(phi).value;
    return v;
  }
  v.sup_phi = sup_norm(phi).value;
  v.sup_psi = sup_norm(psi).value;
  if (v.sup_phi < 1.0 - 1e-6 && v.sup_psi < 1.0 - 1e-6) {
    v.outcome = Verdict::Outcome::kCompactBothSmall;
    return v;
  }
  try {
    WitnessCertificate cert = detail::search_level(phi, psi, space, cfg, 0);
    detail::finalize_claim(cert);
    if (!(cert.claimed_inf >= 1e-3)) {
      std::ostringstream os;
      os << "certificate too weak: inf of " << cert.quantity << " = " << cert.claimed_inf;
      throw NumericalFailure(os.str());
    }
    v.outcome = Verdict::Outcome::kNotCompact;
    v.certificate = std::move(cert);
  } catch (const NumericalFailure& e) {
    v.outcome = Verdict::Outcome::kInconclusive;
    v.diagnostics = std::string("numerical failure (the maps differ and one sup norm is 1, so a witness exists): ") + e.what();
  } catch (const PreconditionError& e) {
    v.outcome = Verdict::Outcome::kInconclusive;
    v.diagnostics = std::string("certificate search exhausted: ") + e.what();
  } catch (const ClassificationError& e) {
    v.outcome = Verdict::Outcome::kInconclusive;
    v.diagnostics = std::string("certificate search exhausted: ") + e.what();
  }
  return v;
}

}  // namespace lfcomp

#endif  // LFCOMP_WITNESS_HPP
