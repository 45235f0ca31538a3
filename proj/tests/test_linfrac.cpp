#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace lfcomp;
using namespace lfcomp::testing;

namespace {

// Unitary in the w' block composed with an H-translation; parabolic when gain > 0.
SiegelParabolicForm random_parabolic_form(int n, Rng& rng, double gain = 0.5) {
  SiegelParabolicForm f;
  const int m = n - 1;
  f.delta = 0.4 * gaussian_vector(m, rng);
  f.amat = m > 0 ? random_unitary(m, rng) : CMatrix(0, 0);
  f.gamma = m > 0 ? CVector(f.amat * f.delta) : CVector(0);
  f.b = Complex(uniform(rng, -1, 1), f.delta.squaredNorm() + gain);
  return f;
}

CMatrix numeric_jacobian(const LinFracMap& phi, const CVector& z, double h = 1e-5) {
  const int n = phi.dim();
  CMatrix J(n, n);
  for (int k = 0; k < n; ++k) {
    const CVector e = unit_vector(n, k);
    J.col(k) = (phi(z + h * e) - phi(z - h * e)) / (2.0 * h);
  }
  return J;
}

CMatrix block_unitary(int n, Rng& rng) {
  CMatrix U = CMatrix::Identity(n, n);
  if (n > 1) U.bottomRightCorner(n - 1, n - 1) = random_unitary(n - 1, rng);
  return U;
}

}  // namespace

TEST(Apply, IdentityAndDilation) {
  Rng rng(1);
  for (int n = 1; n <= 3; ++n) {
    const CVector z = random_ball_point(n, rng);
    EXPECT_LT(max_abs_diff(LinFracMap::identity(n)(z), z), 1e-15);
    EXPECT_LT(max_abs_diff(LinFracMap::linear(0.5 * CMatrix::Identity(n, n))(z), 0.5 * z), 1e-15);
  }
}

TEST(Apply, CayleyMapAgreesWithGeometry) {
  Rng rng(2);
  for (int n = 1; n <= 3; ++n) {
    const LinFracMap c = cayley_map(n), ci = cayley_inverse_map(n);
    for (int i = 0; i < 50; ++i) {
      const CVector z = random_ball_point(n, rng);
      EXPECT_LT(max_abs_diff(c(z), cayley(z)), 1e-12);
      const CVector w = cayley(z);
      EXPECT_LT(max_abs_diff(ci(w), cayley_inverse(w)), 1e-12);
    }
  }
}

TEST(Apply, PoleIsReported) {
  // z -> z / (1 - z) has a pole at 1
  const LinFracMap f(CMatrix::Identity(1, 1), CVector::Zero(1), -CVector::Ones(1), 1.0);
  EXPECT_THROW(f(CVector::Ones(1)), PoleError);
}

TEST(Construction, CanonicalScalingAndEquality) {
  Rng rng(3);
  const LinFracMap f = random_self_map(2, rng);
  const LinFracMap g = LinFracMap::from_projective(Complex(2.0, -3.0) * f.projective());
  EXPECT_TRUE(maps_equal(f, g));
  EXPECT_NEAR(std::abs(f.d() - 1.0), 0.0, 1e-15);
  EXPECT_THROW(LinFracMap(CMatrix::Identity(2, 2), CVector::Zero(3), CVector::Zero(2), 1.0), DomainError);
}

TEST(Compose, IdentityIsNeutral) {
  Rng rng(4);
  for (int n = 1; n <= 3; ++n) {
    const LinFracMap f = random_self_map(n, rng);
    EXPECT_TRUE(maps_equal(compose(f, LinFracMap::identity(n)), f));
    EXPECT_TRUE(maps_equal(compose(LinFracMap::identity(n), f), f));
  }
}

TEST(Compose, PointwiseAgreement) {
  Rng rng(5);
  for (int n = 1; n <= 3; ++n) {
    const LinFracMap f = random_self_map(n, rng), g = random_self_map(n, rng);
    const LinFracMap fg = compose(f, g);
    for (int i = 0; i < 100; ++i) {
      const CVector z = random_ball_point(n, rng);
      EXPECT_LT(max_abs_diff(fg(z), f(g(z))), 1e-11);
    }
  }
}

TEST(Krein, InvertsAutomorphisms) {
  Rng rng(6);
  for (int n = 1; n <= 3; ++n) {
    for (int i = 0; i < 10; ++i) {
      const LinFracMap lam = random_automorphism(n, rng);
      EXPECT_TRUE(maps_equal(compose(lam, krein_adjoint(lam)), LinFracMap::identity(n)));
      EXPECT_TRUE(maps_equal(compose(krein_adjoint(lam), lam), LinFracMap::identity(n)));
    }
  }
  EXPECT_TRUE(maps_equal(krein_adjoint(LinFracMap::identity(2)), LinFracMap::identity(2)));
}

TEST(Krein, AdjointOfSelfMapIsSelfMapWithSameBoundaryFixedPoints) {
  Rng rng(7);
  for (int i = 0; i < 10; ++i) {
    const LinFracMap f = from_siegel_parabolic(random_parabolic_form(2, rng));
    const LinFracMap s = krein_adjoint(f);
    EXPECT_TRUE(is_self_map(s));
    const auto pf = boundary_fixed_points(f), ps = boundary_fixed_points(s);
    ASSERT_EQ(pf.points.size(), ps.points.size());
    for (const auto& p : pf.points) EXPECT_LT((s(p) - p).norm(), 1e-9);
  }
  const LinFracMap g = random_self_map(3, rng);
  EXPECT_TRUE(is_self_map(krein_adjoint(g)));
}

TEST(SupNorm, Examples) {
  Rng rng(8);
  const auto half = sup_norm(LinFracMap::linear(0.5 * CMatrix::Identity(2, 2)));
  EXPECT_NEAR(half.value, 0.5, 1e-8);
  EXPECT_DOUBLE_EQ(sup_norm(random_automorphism(3, rng)).value, 1.0);
  CMatrix A(2, 2);
  A << 0.5, 0, 0, 0.5;
  CVector B(2);
  B << 0.5, 0;
  const auto s = sup_norm(LinFracMap::affine(A, B));
  EXPECT_DOUBLE_EQ(s.value, 1.0);
  EXPECT_LT((s.maximizer - unit_vector(2)).norm(), 1e-4);
}

TEST(SupNorm, AgreesWithDenseSampling) {
  Rng rng(9);
  for (int i = 0; i < 5; ++i) {
    const LinFracMap f = random_self_map(2, rng, 0.7);
    double sampled = 0.0;
    for (int j = 0; j < 20000; ++j) sampled = std::max(sampled, f(random_sphere_point(2, rng)).norm());
    const double s = sup_norm(f).value;
    EXPECT_GE(s, sampled - 1e-12);
    EXPECT_LT(s - sampled, 2e-2);
  }
}

TEST(SelfMap, Detection) {
  Rng rng(10);
  EXPECT_TRUE(is_self_map(LinFracMap::identity(2)));
  EXPECT_FALSE(is_self_map(LinFracMap::linear(2.0 * CMatrix::Identity(2, 2))));
  EXPECT_TRUE(is_self_map(random_automorphism(3, rng)));
  EXPECT_THROW(sup_norm(LinFracMap::linear(2.0 * CMatrix::Identity(2, 2))), NotSelfMapError);
  const LinFracMap pole(CMatrix::Identity(1, 1), CVector::Zero(1), -CVector::Ones(1), 1.0);
  EXPECT_FALSE(is_self_map(pole));
}

TEST(PointSwap, InvolutionExchangingPointAndOrigin) {
  Rng rng(11);
  for (int n = 1; n <= 3; ++n) {
    const CVector p = random_ball_point(n, rng);
    const LinFracMap s = automorphism_point_swap(p);
    EXPECT_TRUE(maps_equal(compose(s, s), LinFracMap::identity(n)));
    EXPECT_LT(s(p).norm(), 1e-12);
    EXPECT_LT(max_abs_diff(s(CVector::Zero(n)), p), 1e-12);
    for (int i = 0; i < 20; ++i) {
      const CVector z = random_ball_point(n, rng), w = random_ball_point(n, rng);
      EXPECT_NEAR(pseudo_hyperbolic_distance(s(z), s(w)), pseudo_hyperbolic_distance(z, w), 1e-10);
    }
  }
  const LinFracMap s0 = automorphism_point_swap(CVector::Zero(2));
  EXPECT_TRUE(maps_equal(s0, LinFracMap::identity(2)) ||
              maps_equal(s0, LinFracMap::linear(-CMatrix::Identity(2, 2))));
  EXPECT_THROW(automorphism_point_swap(unit_vector(2)), DomainError);
}

TEST(Derivative, IdentityAndFiniteDifferences) {
  Rng rng(12);
  const CVector eta = gaussian_vector(2, rng), zeta = gaussian_vector(2, rng), z = random_ball_point(2, rng);
  EXPECT_NEAR(std::abs(directional_derivative(LinFracMap::identity(2), z, eta, zeta) - inner(eta, zeta)), 0.0, 1e-14);
  for (int n = 1; n <= 3; ++n) {
    for (int i = 0; i < 20; ++i) {
      const LinFracMap f = random_self_map(n, rng);
      const CVector x = random_ball_point(n, rng, 0.8);
      const CMatrix Jn = numeric_jacobian(f, x);
      EXPECT_LT((jacobian(f, x) - Jn).cwiseAbs().maxCoeff(), 1e-7);
      const CVector a = gaussian_vector(n, rng), b = gaussian_vector(n, rng);
      EXPECT_NEAR(std::abs(directional_derivative(f, x, a, b) - inner(Jn * a, b)), 0.0, 1e-6 * (1 + a.norm() * b.norm()));
    }
  }
}

TEST(Derivative, ParabolicFamilyHasUnitAngularDerivative) {
  Rng rng(13);
  for (int n = 1; n <= 3; ++n) {
    for (int i = 0; i < 5; ++i) {
      const LinFracMap f = from_siegel_parabolic(random_parabolic_form(n, rng));
      EXPECT_NEAR(std::abs(d1_at_e1(f) - 1.0), 0.0, 1e-10);
    }
  }
}

TEST(Derivative, OffDiagonalDerivativesVanishAtE1ForMapsFixingIt) {
  Rng rng(14);
  for (int n = 2; n <= 3; ++n) {
    for (int i = 0; i < 10; ++i) {
      LinFracMap f = from_siegel_parabolic(random_parabolic_form(n, rng));
      if (i % 2 == 1) {
        // a map fixing e1 with D_1 phi_1(e1) = 1/2, conjugated by an automorphism fixing e1
        CMatrix A = 0.5 * CMatrix::Identity(n, n);
        CVector B = CVector::Zero(n);
        B(0) = 0.5;
        const LinFracMap lam = automorphism_fixing_e1_with_origin_at(random_ball_point(n, rng, 0.5));
        f = compose(lam, compose(LinFracMap::affine(A, B), krein_adjoint(lam)));
      }
      const CVector e1 = unit_vector(n);
      ASSERT_TRUE(fixes_point(f, e1));
      for (int k = 1; k < n; ++k) {
        EXPECT_LT(std::abs(directional_derivative(f, e1, unit_vector(n, k), e1)), 1e-9);
      }
    }
  }
}

TEST(BoundaryFixedPoints, Examples) {
  Rng rng(15);
  const auto half = boundary_fixed_points(LinFracMap::linear(0.5 * CMatrix::Identity(2, 2)));
  EXPECT_TRUE(half.points.empty());
  EXPECT_FALSE(half.degenerate());
  for (int n = 1; n <= 3; ++n) {
    const auto par = boundary_fixed_points(from_siegel_parabolic(random_parabolic_form(n, rng)));
    ASSERT_EQ(par.points.size(), 1u);
    EXPECT_LT((par.points.front() - unit_vector(n)).norm(), 1e-9);
    EXPECT_TRUE(par.continua.empty());
  }
  const auto id = boundary_fixed_points(LinFracMap::identity(3));
  EXPECT_TRUE(id.whole_sphere);
}

TEST(BoundaryFixedPoints, HyperbolicDiskAutomorphismHasTwo) {
  // (z - 1/2) / (1 - z/2) fixes +1 and -1
  CVector p(1);
  p << 0.5;
  const LinFracMap lam = compose(LinFracMap::linear(-CMatrix::Identity(1, 1)), automorphism_point_swap(p));
  const auto fp = boundary_fixed_points(lam);
  ASSERT_EQ(fp.points.size(), 2u);
  for (const auto& z : fp.points) {
    EXPECT_NEAR(std::abs(z(0)), 1.0, 1e-12);
    EXPECT_LT(std::abs(lam(z)(0) - z(0)), 1e-9);
  }
}

TEST(Classify, Examples) {
  SiegelParabolicForm t{CVector(0), Complex(1.0, 1.0), CMatrix(0, 0), CVector(0)};
  EXPECT_EQ(classify_fixing_e1(from_siegel_parabolic(t)), E1Class::kParabolic);
  EXPECT_EQ(classify_fixing_e1(diagonal_map({1.0, 0.5})), E1Class::kHasOtherFixedPoint);
  EXPECT_EQ(classify_fixing_e1(LinFracMap::linear(0.5 * CMatrix::Identity(2, 2))), E1Class::kNotFixingE1);
  CMatrix A = 0.5 * CMatrix::Identity(2, 2);
  CVector B(2);
  B << 0.5, 0.0;
  EXPECT_NE(classify_fixing_e1(LinFracMap::affine(A, B)), E1Class::kParabolic);
  // automorphic vertical translations are parabolic automorphisms
  SiegelParabolicForm v{CVector::Zero(1), Complex(2.0, 0.0), CMatrix::Identity(1, 1), CVector::Zero(1)};
  EXPECT_EQ(classify_fixing_e1(from_siegel_parabolic(v)), E1Class::kParabolic);
}

TEST(SiegelForm, TranslationRecoveredExactly) {
  SiegelParabolicForm t{CVector(0), Complex(1.0, 1.0), CMatrix(0, 0), CVector(0)};
  const auto f = to_siegel_parabolic(from_siegel_parabolic(t));
  EXPECT_NEAR(std::abs(f.b - Complex(1.0, 1.0)), 0.0, 1e-12);
  EXPECT_EQ(f.delta.size(), 0);
}

TEST(SiegelForm, RoundTripAndFirstCoordinate) {
  Rng rng(16);
  for (int n = 1; n <= 3; ++n) {
    for (int i = 0; i < 5; ++i) {
      const SiegelParabolicForm f = random_parabolic_form(n, rng);
      const LinFracMap phi = from_siegel_parabolic(f);
      const SiegelParabolicForm g = to_siegel_parabolic(phi);
      EXPECT_TRUE(maps_equal(from_siegel_parabolic(g), phi));
      EXPECT_NEAR(std::abs(g.b - f.b), 0.0, 1e-10);
      for (int j = 0; j < 20; ++j) {
        const CVector z = random_ball_point(n, rng);
        EXPECT_LT(std::abs(parabolic_first_coordinate(g, z) - phi(z)(0)), 1e-10);
        // and the Siegel conjugate acts as the form
        const CVector w = cayley(z);
        EXPECT_LT(max_abs_diff(cayley(phi(z)), f(w)), 1e-9 * (1.0 + w.norm()));
      }
    }
  }
}

TEST(SiegelForm, NonParabolicIsRejected) {
  EXPECT_THROW(to_siegel_parabolic(diagonal_map({1.0, 0.5})), ClassificationError);
  EXPECT_THROW(to_siegel_parabolic(LinFracMap::linear(0.5 * CMatrix::Identity(1, 1))), ClassificationError);
}

TEST(AffineRange, Examples) {
  Rng rng(17);
  EXPECT_EQ(affine_range_dimension(random_automorphism(3, rng)), 3);
  EXPECT_EQ(affine_range_dimension(diagonal_map({1.0, 0.0})), 1);
  for (int i = 0; i < 10; ++i) {
    // rank-deficient linear part sandwiched between automorphisms
    const int n = 3;
    CMatrix L = CMatrix::Zero(n, n);
    const int r = 1 + i % 2;
    for (int j = 0; j < r; ++j) L += gaussian_vector(n, rng) * gaussian_vector(n, rng).adjoint();
    L *= 0.8 / L.operatorNorm();
    const LinFracMap f = compose(random_automorphism(n, rng, 0.5), compose(LinFracMap::linear(L), random_automorphism(n, rng, 0.5)));
    // brute-force oracle: rank of differences of images
    CMatrix diffs(n, 12);
    const CVector f0 = f(CVector::Zero(n));
    for (int j = 0; j < 12; ++j) diffs.col(j) = f(random_ball_point(n, rng, 0.5)) - f0;
    EXPECT_EQ(affine_range_dimension(f), r);
    EXPECT_EQ(numerical_rank(diffs, 1e-9), r);
    const LinFracMap tau = compose(f, krein_adjoint(f));
    EXPECT_EQ(affine_range_dimension(tau), r);
  }
}

TEST(KreinReduction, Examples) {
  Rng rng(18);
  const LinFracMap lam = random_automorphism(2, rng);
  EXPECT_TRUE(maps_equal(krein_reduction(lam, lam).tau, LinFracMap::identity(2)));
  const LinFracMap f = random_self_map(2, rng);
  const auto same = krein_reduction(f, f);
  EXPECT_TRUE(maps_equal(same.tau, same.xi));
  const auto diag = krein_reduction(diagonal_map({1.0, 0.5}), LinFracMap::identity(2));
  EXPECT_TRUE(maps_equal(diag.tau, diagonal_map({1.0, 0.25})));
  EXPECT_TRUE(maps_equal(diag.xi, diagonal_map({1.0, 0.5})));
}

TEST(KreinReduction, TauFixesE1WithUnitDerivative) {
  Rng rng(19);
  for (int i = 0; i < 10; ++i) {
    CMatrix A = 0.5 * CMatrix::Identity(2, 2);
    CVector B(2);
    B << 0.5, 0.0;
    const LinFracMap lam = automorphism_fixing_e1_with_origin_at(random_ball_point(2, rng, 0.5));
    const LinFracMap f = compose(lam, compose(LinFracMap::affine(A, B), krein_adjoint(lam)));
    const auto r = krein_reduction(f, LinFracMap::identity(2));
    EXPECT_TRUE(fixes_point(r.tau, unit_vector(2)));
    EXPECT_NEAR(std::abs(d1_at_e1(r.tau) - 1.0), 0.0, 1e-8);
  }
}

TEST(Restriction, Examples) {
  const LinFracMap id = LinFracMap::identity(3);
  EXPECT_TRUE(maps_equal(restriction_to_slice(id, id, id, 2), LinFracMap::identity(2)));
  const LinFracMap id2 = LinFracMap::identity(2);
  EXPECT_TRUE(maps_equal(restriction_to_slice(diagonal_map({1.0, 0.0}), id2, id2, 1), LinFracMap::identity(1)));
  CMatrix mix = CMatrix::Identity(2, 2);
  mix(1, 0) = 0.3;
  mix *= 0.7;
  EXPECT_THROW(restriction_to_slice(LinFracMap::linear(mix), id2, id2, 1), ReductionError);
}

TEST(Restriction, RestrictedMapFixesE1OfTheSlice) {
  // phi(z) = (z1, z2/2, 0) with the slice through e1 and a point off the z3 = 0 plane
  Rng rng(20);
  CMatrix A = CMatrix::Zero(3, 3);
  A(0, 0) = 1.0;
  A(1, 1) = 0.5;
  const LinFracMap phi = LinFracMap::linear(A);
  for (int i = 0; i < 5; ++i) {
    const CMatrix U = block_unitary(3, rng);
    const LinFracMap rho1 = unitary_map(U);
    const LinFracMap mu = restriction_to_slice(phi, rho1, unitary_map(CMatrix::Identity(3, 3)), 2);
    EXPECT_LT((mu(unit_vector(2)) - unit_vector(2)).norm(), 1e-10);
  }
}

TEST(Normal, IdentityOnCircleForcesBlockForm) {
  Rng rng(21);
  for (int n = 2; n <= 3; ++n) {
    for (int i = 0; i < 10; ++i) {
      CMatrix Ap(n - 1, n - 1);
      for (int j = 0; j < n - 1; ++j) Ap.col(j) = gaussian_vector(n - 1, rng);
      Ap *= uniform(rng, 0.1, 1.0) / Ap.operatorNorm();
      CMatrix A = CMatrix::Identity(n, n);
      A.bottomRightCorner(n - 1, n - 1) = Ap;
      const CMatrix U = block_unitary(n, rng);
      const LinFracMap f = compose(unitary_map(U), compose(LinFracMap::linear(A), unitary_map(U.adjoint())));
      ASSERT_TRUE(is_identity_on_e1_circle(f));
      const auto nf = block_normal_form(f);
      ASSERT_TRUE(nf.has_value());
      EXPECT_LT((*nf - U.bottomRightCorner(n - 1, n - 1) * Ap * U.bottomRightCorner(n - 1, n - 1).adjoint()).norm(), 1e-12);
    }
  }
  // random self-maps are not the identity on the circle
  for (int i = 0; i < 10; ++i) EXPECT_FALSE(is_identity_on_e1_circle(random_self_map(2, rng)));
}
