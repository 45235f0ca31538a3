#ifndef LFCOMP_OPERATORS_HPP
#define LFCOMP_OPERATORS_HPP

// Composition operators on truncated monomial bases: Taylor expansion of a
// linear-fractional map, pushforwards phi^a, the compressed matrix of C_phi
// on the orthonormal basis e_a = z^a / ||z^a||, and kernel identities.
//
// Hot spot: the truncated products in monomial_pushforward. Each costs
// #{(a, b) : |a| + |b| <= D}, i.e. binom(D + 2N, 2N) multiply-adds.

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/SVD>

#include "lfcomp/linfrac.hpp"
#include "lfcomp/parallel.hpp"
#include "lfcomp/polynomial.hpp"
#include "lfcomp/spaces.hpp"

namespace lfcomp {

/// Coefficients of phi_1, ..., phi_N to total degree D, from
///   1/(<z,C> + d) = (1/d) sum_m (-<z,C>/d)^m.
inline std::vector<TruncatedPolynomial> taylor_expand(const LinFracMap& phi, int degree) {
  const int n = phi.dim();
  if (phi.C().norm() >= std::abs(phi.d())) {
    throw DomainError("taylor_expand: |d| <= |C|, the geometric series diverges on the ball");
  }
  auto basis = MonomialBasis::get(n, degree);
  const Complex d = phi.d();
  const CVector C = phi.C();

  TruncatedPolynomial ell(basis);
  if (degree >= 1) {
    for (int j = 0; j < n; ++j) ell.coefficients()(basis->position(unit_index(n, j))) = -std::conj(C(j)) / d;
  }
  TruncatedPolynomial geo = TruncatedPolynomial::constant(basis, 1.0);
  TruncatedPolynomial term = geo;
  for (int m = 1; m <= degree; ++m) {
    term = multiply(term, ell);
    geo.coefficients() += term.coefficients();
  }
  geo.coefficients() /= d;

  const CMatrix A = phi.A();
  const CVector B = phi.B();
  std::vector<TruncatedPolynomial> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    TruncatedPolynomial num = TruncatedPolynomial::constant(basis, B(j));
    if (degree >= 1) {
      for (int k = 0; k < n; ++k) num.coefficients()(basis->position(unit_index(n, k))) = A(j, k);
    }
    out.push_back(multiply(num, geo));
  }
  return out;
}

/// Bound on |phi_j(z) - T_D phi_j(z)| over |z| <= r, maximized over j:
///   (|B_j| q^{D+1} + |A_j| r q^D) / (|d| (1 - q)),  q = |C| r / |d|.
inline double taylor_tail_bound(const LinFracMap& phi, int degree, double r) {
  const double ad = std::abs(phi.d());
  const double q = phi.C().norm() * r / ad;
  if (!(q < 1.0)) throw DomainError("taylor_tail_bound: radius outside the convergence disk");
  const CMatrix A = phi.A();
  const CVector B = phi.B();
  double worst = 0.0;
  for (int j = 0; j < phi.dim(); ++j) {
    const double t = (std::abs(B(j)) * std::pow(q, degree + 1) + A.row(j).norm() * r * std::pow(q, degree)) /
                     (ad * (1.0 - q));
    worst = std::max(worst, t);
  }
  return worst;
}

/// phi^a = prod_j phi_j^{a_j}, truncated at the degree of the expansion.
inline TruncatedPolynomial monomial_pushforward(const MultiIndex& a, const std::vector<TruncatedPolynomial>& coeffs) {
  if (coeffs.empty() || a.size() != coeffs.size()) throw DomainError("monomial_pushforward: dimension mismatch");
  TruncatedPolynomial out = TruncatedPolynomial::constant(coeffs.front().basis_ptr(), 1.0);
  for (std::size_t j = 0; j < a.size(); ++j) {
    for (int p = 0; p < a[j]; ++p) out = multiply(out, coeffs[j]);
  }
  return out;
}

struct TruncatedOperator {
  CMatrix matrix;  // (row beta, column a) on the graded-lex basis
  SpaceSpec space;
  int degree = 0;
  std::shared_ptr<const MonomialBasis> basis;
};

/// Orthonormal coordinates conj(w^a)/||z^a|| of the truncated kernel K_w.
inline CVector kernel_coordinates(const MonomialBasis& basis, const SpaceSpec& space, const CVector& w) {
  CVector v(basis.size());
  for (int i = 0; i < basis.size(); ++i) {
    const MultiIndex& a = basis.index(i);
    v(i) = std::conj(monomial_value(a, w)) * std::exp(-0.5 * log_monomial_norm_sq(a, space));
  }
  return v;
}

/// Matrix of P_D C_phi P_D on e_a = z^a/||z^a||:
///   entry (beta, a) = [z^beta] phi^a * ||z^beta|| / ||z^a||.
/// Columns of one degree are built concurrently from the previous degree.
inline TruncatedOperator composition_matrix(const LinFracMap& phi, const SpaceSpec& space, int degree) {
  const int n = phi.dim();
  if (space.dim != n) throw DomainError("composition_matrix: space and map dimensions differ");
  const auto coeffs = taylor_expand(phi, degree);
  auto basis = coeffs.front().basis_ptr();
  const int m = basis->size();

  std::vector<double> half_log_norm(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) half_log_norm[static_cast<std::size_t>(i)] = 0.5 * log_monomial_norm_sq(basis->index(i), space);

  std::vector<CVector> push(static_cast<std::size_t>(m));
  push[0] = TruncatedPolynomial::constant(basis, 1.0).coefficients();
  for (int s = 1; s <= degree; ++s) {
    const int lo = basis->offset(s), hi = basis->offset(s + 1);
    parallel_for(static_cast<std::size_t>(lo), static_cast<std::size_t>(hi), [&](std::size_t col) {
      MultiIndex a = basis->index(static_cast<int>(col));
      std::size_t j = 0;
      while (a[j] == 0) ++j;
      a[j] -= 1;
      TruncatedPolynomial prev(basis);
      prev.coefficients() = push[static_cast<std::size_t>(basis->position(a))];
      push[col] = multiply(prev, coeffs[j]).coefficients();
    });
  }

  TruncatedOperator op{CMatrix(m, m), space, degree, basis};
  parallel_for(0, static_cast<std::size_t>(m), [&](std::size_t col) {
    for (int row = 0; row < m; ++row) {
      op.matrix(row, static_cast<Eigen::Index>(col)) =
          push[col](row) * std::exp(half_log_norm[static_cast<std::size_t>(row)] - half_log_norm[col]);
    }
  });
  return op;
}

/// ||(C_phi - C_psi)^* K_z||^2 / ||K_z||^2 in closed form:
///   [K_{phi z}(phi z) + K_{psi z}(psi z) - 2 Re K_{phi z}(psi z)] / K_z(z).
inline double kernel_difference_norm(const LinFracMap& phi, const LinFracMap& psi, const CVector& z,
                                     const SpaceSpec& space) {
  if (!(z.norm() < 1.0)) throw DomainError("kernel_difference_norm: z must lie in the open ball");
  const CVector pz = phi(z), qz = psi(z);
  const double num = kernel_eval(space, pz, pz).real() + kernel_eval(space, qz, qz).real() -
                     2.0 * kernel_eval(space, pz, qz).real();
  return std::max(0.0, num / kernel_norm_sq(space, z));
}

/// Same quantity for kernels (1 - <z,w>)^{-c}, from the defects
/// 1-|z|^2, 1-|phi z|^2, 1-|psi z|^2 and 1 - <psi z, phi z>, which stay
/// accurate where ball coordinates have lost them.
inline double kernel_difference_norm_from_defects(double c, double defect_z, double defect_phi, double defect_psi,
                                                  Complex one_minus_inner_psi_phi) {
  const double a = std::pow(defect_z / defect_phi, c);
  const double b = std::pow(defect_z / defect_psi, c);
  const double cross = (std::pow(one_minus_inner_psi_phi, -c) * std::pow(defect_z, c)).real();
  return std::max(0.0, a + b - 2.0 * cross);
}

/// ||M^* k_z - P_D k_{phi(z)}|| with k_w = K_w/||K_z||, both in orthonormal
/// coordinates, M the truncated matrix of C_phi.
inline double adjoint_kernel_residual(const TruncatedOperator& op, const LinFracMap& phi, const CVector& z) {
  const double kz = std::sqrt(kernel_norm_sq(op.space, z));
  const CVector vz = kernel_coordinates(*op.basis, op.space, z) / kz;
  const CVector vp = kernel_coordinates(*op.basis, op.space, phi(z)) / kz;
  return (op.matrix.adjoint() * vz - vp).norm();
}

/// Singular values of a dense matrix, descending, with values below
/// 1e-12 * sigma_max set to zero.
inline std::vector<double> singular_values(const CMatrix& m) {
  Eigen::BDCSVD<CMatrix> svd(m);
  const Eigen::VectorXd& sv = svd.singularValues();
  std::vector<double> out(sv.data(), sv.data() + sv.size());
  const double top = out.empty() ? 0.0 : out.front();
  for (double& v : out) {
    if (v < 1e-12 * top) v = 0.0;
  }
  return out;
}

/// The m largest singular values of the truncated C_phi - C_psi, descending
/// (zero-padded when the truncation has fewer than m).
inline std::vector<double> difference_singular_values(const LinFracMap& phi, const LinFracMap& psi,
                                                      const SpaceSpec& space, int degree, int m) {
  const TruncatedOperator a = composition_matrix(phi, space, degree);
  const TruncatedOperator b = composition_matrix(psi, space, degree);
  std::vector<double> sv = singular_values(a.matrix - b.matrix);
  sv.resize(static_cast<std::size_t>(std::max(m, 0)), 0.0);
  return sv;
}

}  // namespace lfcomp

#endif  // LFCOMP_OPERATORS_HPP
