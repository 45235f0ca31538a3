#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "test_support.hpp"

namespace lfcomp {
namespace {

using testing::Rng;

double factorial(int n) { return std::tgamma(n + 1.0); }

// (N-1)! a! / (N-1+|a|)!, written out without the library helpers.
double hardy_oracle(const MultiIndex& a) {
  const int n = static_cast<int>(a.size());
  double num = factorial(n - 1);
  int s = 0;
  for (int v : a) {
    num *= factorial(v);
    s += v;
  }
  return num / factorial(n - 1 + s);
}

// N B(N+s, alpha+1) / (N B(N, alpha+1)) by composite Simpson in u = r^2.
double bergman_radial_factor(int n, int s, double alpha) {
  auto integral = [alpha](int p) {
    const int m = 20000;
    const double h = 1.0 / m;
    double acc = 0.0;
    for (int i = 0; i <= m; ++i) {
      const double u = i * h;
      const double f = std::pow(u, p) * (i == m ? (alpha == 0.0 ? 1.0 : 0.0) : std::pow(1.0 - u, alpha));
      const double w = (i == 0 || i == m) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      acc += w * f;
    }
    return acc * h / 3.0;
  };
  return integral(n - 1 + s) / integral(n - 1);
}

TEST(Spaces, MonomialNormExamples) {
  EXPECT_NEAR(monomial_norm_sq({1, 0}, SpaceSpec::hardy(2)), 0.5, 1e-15);
  EXPECT_NEAR(monomial_norm_sq({2}, SpaceSpec::bergman(1, 0.0)), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(monomial_norm_sq({7}, SpaceSpec::hardy(1)), 1.0, 1e-15);
  EXPECT_NEAR(monomial_norm_sq({1, 1}, SpaceSpec::hardy(2)), 1.0 / 6.0, 1e-15);
}

TEST(Spaces, HardyNormsMatchFactorialFormula) {
  for (int n = 1; n <= 4; ++n) {
    for (const auto& a : multi_indices_up_to(n, 6)) {
      EXPECT_NEAR(monomial_norm_sq(a, SpaceSpec::hardy(n)) / hardy_oracle(a), 1.0, 1e-12);
    }
  }
}

TEST(Spaces, HardyNormsMatchSphereMonteCarlo) {
  Rng rng(11);
  const int n = 2;
  const std::vector<MultiIndex> idx = {{1, 0}, {1, 1}, {2, 1}, {0, 3}};
  const int samples = 200000;
  std::vector<double> sum(idx.size(), 0.0), sum2(idx.size(), 0.0);
  for (int t = 0; t < samples; ++t) {
    const CVector z = testing::random_sphere_point(n, rng);
    for (std::size_t i = 0; i < idx.size(); ++i) {
      const double v = std::norm(monomial_value(idx[i], z));
      sum[i] += v;
      sum2[i] += v * v;
    }
  }
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const double mean = sum[i] / samples;
    const double sd = std::sqrt((sum2[i] / samples - mean * mean) / samples);
    EXPECT_NEAR(mean, monomial_norm_sq(idx[i], SpaceSpec::hardy(n)), 5.0 * sd);
  }
}

TEST(Spaces, MonomialsAreOrthogonalOnTheSphere) {
  Rng rng(12);
  const MultiIndex a = {1, 1}, b = {2, 0};
  const int samples = 200000;
  Complex acc(0.0, 0.0);
  for (int t = 0; t < samples; ++t) {
    const CVector z = testing::random_sphere_point(2, rng);
    acc += monomial_value(a, z) * std::conj(monomial_value(b, z));
  }
  EXPECT_LT(std::abs(acc / static_cast<double>(samples)), 5e-3);

  CoefficientVector f(2, 2), g(2, 2);
  f.set(a, 1.0);
  g.set(b, 1.0);
  EXPECT_EQ(inner_product(f, g, SpaceSpec::hardy(2)), Complex(0.0, 0.0));
}

TEST(Spaces, BergmanNormsMatchRadialQuadrature) {
  for (double alpha : {0.0, 1.0, 2.5}) {
    for (int n = 1; n <= 3; ++n) {
      for (const auto& a : multi_indices_up_to(n, 5)) {
        const double expected = hardy_oracle(a) * bergman_radial_factor(n, order(a), alpha);
        EXPECT_NEAR(monomial_norm_sq(a, SpaceSpec::bergman(n, alpha)) / expected, 1.0, 1e-6)
            << "alpha=" << alpha << " n=" << n;
      }
    }
  }
}

TEST(Spaces, WeightedSamplerHasTheRightRadialMean) {
  Rng rng(13);
  for (double alpha : {-0.5, 0.0, 2.0}) {
    const int n = 3;
    const int samples = 100000;
    double acc = 0.0;
    for (int t = 0; t < samples; ++t) acc += sample_ball_weighted(n, alpha, rng).squaredNorm();
    EXPECT_NEAR(acc / samples, n / (n + alpha + 1.0), 5e-3);
  }
}

TEST(Spaces, ConstantWeightGivesTheHardySpace) {
  Rng rng(14);
  const SpaceSpec h = SpaceSpec::hardy(3);
  const SpaceSpec w = SpaceSpec::weighted_hardy(3, WeightSequence::constant_one());
  for (int t = 0; t < 20; ++t) {
    const CVector a = testing::random_ball_point(3, rng, 0.9);
    const CVector b = testing::random_ball_point(3, rng, 0.9);
    EXPECT_LT(std::abs(kernel_eval(w, a, b) - kernel_eval(h, a, b)), 1e-10 * std::abs(kernel_eval(h, a, b)));
  }
  for (const auto& a : multi_indices_up_to(3, 5)) {
    EXPECT_NEAR(monomial_norm_sq(a, w) / monomial_norm_sq(a, h), 1.0, 1e-13);
  }
}

// K_w(z) = sum_a z^a conj(w^a) / ||z^a||^2, summed directly over multi-indices.
Complex kernel_by_monomials(const SpaceSpec& space, const CVector& w, const CVector& z, int degree) {
  Complex acc(0.0, 0.0);
  for (const auto& a : multi_indices_up_to(space.dim, degree)) {
    acc += monomial_value(a, z) * std::conj(monomial_value(a, w)) / monomial_norm_sq(a, space);
  }
  return acc;
}

TEST(Spaces, KernelClosedFormsMatchMonomialExpansion) {
  Rng rng(15);
  const std::vector<SpaceSpec> spaces = {SpaceSpec::hardy(2), SpaceSpec::bergman(2, 0.0), SpaceSpec::bergman(1, 1.5),
                                         SpaceSpec::weighted_hardy(2, WeightSequence::power_law(0.5))};
  for (const auto& sp : spaces) {
    for (int t = 0; t < 5; ++t) {
      const CVector w = testing::random_ball_point(sp.dim, rng, 0.5);
      const CVector z = testing::random_ball_point(sp.dim, rng, 0.5);
      const Complex k = kernel_eval(sp, w, z);
      EXPECT_LT(std::abs(k - kernel_by_monomials(sp, w, z, 60)), 1e-10 * std::abs(k)) << sp.label();
    }
  }
}

TEST(Spaces, HardyKernelNorm) {
  Rng rng(16);
  for (int n = 1; n <= 4; ++n) {
    const CVector w = testing::random_ball_point(n, rng);
    EXPECT_NEAR(kernel_norm_sq(SpaceSpec::hardy(n), w) * std::pow(1.0 - w.squaredNorm(), n), 1.0, 1e-10);
  }
}

TEST(Spaces, ReproducingProperty) {
  Rng rng(17);
  const std::vector<SpaceSpec> spaces = {SpaceSpec::hardy(2), SpaceSpec::bergman(3, 0.5),
                                         SpaceSpec::weighted_hardy(2, WeightSequence::power_law(1.0))};
  for (const auto& sp : spaces) {
    const int d = 6;
    for (int t = 0; t < 10; ++t) {
      CoefficientVector f(sp.dim, d);
      for (const auto& a : multi_indices_up_to(sp.dim, d)) f.set(a, testing::gaussian_complex(rng));
      const CVector w = testing::random_ball_point(sp.dim, rng);
      const Complex lhs = f.evaluate(w);
      const Complex rhs = inner_product(f, kernel_coefficients(sp, w, d), sp);
      EXPECT_LT(std::abs(lhs - rhs), 1e-8 * std::max(1.0, std::abs(lhs))) << sp.label();
    }
  }
}

TEST(Spaces, TruncatedKernelNormsIncreaseToTheKernelNorm) {
  Rng rng(18);
  const SpaceSpec sp = SpaceSpec::hardy(2);
  const CVector w = testing::random_ball_point(2, rng, 0.7);
  const double r2 = w.squaredNorm();
  double prev = 0.0;
  for (int d = 0; d <= 80; d += 5) {
    const double partial = norm_sq(kernel_coefficients(sp, w, d), sp);
    double oracle = 0.0;
    for (int s = 0; s <= d; ++s) oracle += (s + 1.0) * std::pow(r2, s);  // binom(1+s, s) |w|^{2s}
    EXPECT_NEAR(partial / oracle, 1.0, 1e-12);
    EXPECT_GE(partial, prev);
    // The tail sum_{s>d} (s+1) r^s is at most (d+2) r^{d+1} / (1-r)^2.
    EXPECT_LE(kernel_norm_sq(sp, w) - partial, (d + 2.0) * std::pow(r2, d + 1) / std::pow(1.0 - r2, 2) + 1e-9);
    prev = partial;
  }
}

TEST(Spaces, RestrictedSpacesAreBergmanSpaces) {
  const SpaceSpec r1 = restricted_space(SpaceSpec::hardy(3), 1);
  EXPECT_EQ(r1.kind, SpaceSpec::Kind::kBergman);
  EXPECT_DOUBLE_EQ(r1.alpha, 1.0);
  const SpaceSpec r2 = restricted_space(SpaceSpec::bergman(4, 0.5), 2);
  EXPECT_EQ(r2.kind, SpaceSpec::Kind::kBergman);
  EXPECT_DOUBLE_EQ(r2.alpha, 2.5);
  EXPECT_EQ(restricted_space(SpaceSpec::hardy(2), 2).kind, SpaceSpec::Kind::kHardy);
}

TEST(Spaces, ExtensionIsIsometricAndRestrictionContracts) {
  Rng rng(19);
  const std::vector<SpaceSpec> spaces = {SpaceSpec::hardy(3), SpaceSpec::bergman(3, 0.0), SpaceSpec::bergman(4, 1.5),
                                         SpaceSpec::weighted_hardy(3, WeightSequence::power_law(0.5))};
  for (const auto& big : spaces) {
    for (int k = 1; k < big.dim; ++k) {
      const SpaceSpec small = restricted_space(big, k);
      for (int t = 0; t < 5; ++t) {
        CoefficientVector f(k, 5);
        for (const auto& a : multi_indices_up_to(k, 5)) f.set(a, testing::gaussian_complex(rng));
        const double nf = norm_sq(f, small);
        EXPECT_NEAR(norm_sq(extend(f, big.dim), big) / nf, 1.0, 1e-12) << big.label() << " K=" << k;

        CoefficientVector g(big.dim, 4);
        for (const auto& a : multi_indices_up_to(big.dim, 4)) g.set(a, testing::gaussian_complex(rng));
        EXPECT_LE(norm_sq(restrict_to(g, k), small), norm_sq(g, big) * (1.0 + 1e-12));
        // Restriction after extension is the identity.
        const CoefficientVector back = restrict_to(extend(f, big.dim), k);
        for (const auto& [a, c] : f.coeffs) EXPECT_EQ(back.get(a), c);
      }
    }
  }
}

TEST(Spaces, HardyRestrictionNormsMatchFactorials) {
  // ||z'^a||^2 in H^2(B_N) against the formula for A^2_{N-K-1}(B_K).
  for (int n = 2; n <= 5; ++n) {
    for (int k = 1; k < n; ++k) {
      const SpaceSpec small = restricted_space(SpaceSpec::hardy(n), k);
      for (const auto& a : multi_indices_up_to(k, 6)) {
        MultiIndex b = a;
        b.resize(static_cast<std::size_t>(n), 0);
        EXPECT_NEAR(monomial_norm_sq(a, small) / hardy_oracle(b), 1.0, 1e-12);
      }
    }
  }
}

TEST(Spaces, EquivalentWeightRatioStaysInsideItsBounds) {
  for (double gamma : {-1.0, -0.5, 0.0, 1.0, 2.5}) {
    for (int n = 1; n <= 4; ++n) {
      for (int k = 1; k <= n; ++k) {
        const EquivalentWeight ew = equivalent_weight(gamma, n, k);
        EXPECT_GT(ew.ratio_lower, 0.0);
        for (int s = 0; s <= 200; ++s) {
          const double r = equivalence_ratio(ew, s);
          EXPECT_GE(r, ew.ratio_lower * (1.0 - 1e-12)) << gamma << " " << n << " " << k << " s=" << s;
          EXPECT_LE(r, ew.ratio_upper * (1.0 + 1e-12)) << gamma << " " << n << " " << k << " s=" << s;
        }
      }
    }
  }
}

TEST(Spaces, RestrictedWeightSandwichesTheBergmanNorm) {
  // K < N: beta_K(s)^2 = restriction_factor * (s+1)^{-(gamma+1)}, and the
  // monomial norms of H^2(beta_K, B_K) stay within fixed multiples of A^2_{gamma+N-K}(B_K).
  const double gamma = 0.5;
  const int n = 4, k = 2;
  const EquivalentWeight ew = equivalent_weight(gamma, n, k);
  const SpaceSpec wh = SpaceSpec::weighted_hardy(k, ew.beta);
  for (int s = 0; s <= 200; s += 7) {
    EXPECT_NEAR(ew.beta.beta_sq(s), restriction_factor(n, k, s) * std::pow(s + 1.0, -(gamma + 1.0)),
                1e-12 * ew.beta.beta_sq(s));
    const MultiIndex a = {s, 0};
    const double ratio = monomial_norm_sq(a, wh) / monomial_norm_sq(a, SpaceSpec::bergman(k, gamma + n - k));
    EXPECT_GE(ratio, ew.ratio_lower * (1.0 - 1e-12));
    EXPECT_LE(ratio, ew.ratio_upper * (1.0 + 1e-12));
  }
}

TEST(Spaces, KernelEquivalentSpaces) {
  const auto h = kernel_equivalent_space(SpaceSpec::weighted_hardy(2, WeightSequence::constant_one()));
  ASSERT_TRUE(h.has_value());
  EXPECT_EQ(h->kind, SpaceSpec::Kind::kHardy);
  const auto b = kernel_equivalent_space(SpaceSpec::weighted_hardy(2, WeightSequence::power_law(1.0)));
  ASSERT_TRUE(b.has_value());
  EXPECT_EQ(b->kind, SpaceSpec::Kind::kBergman);
  EXPECT_DOUBLE_EQ(b->alpha, 1.0);
  const WeightSequence custom([](int s) { return -0.5 * s; }, "2^-s");
  EXPECT_FALSE(kernel_equivalent_space(SpaceSpec::weighted_hardy(2, custom)).has_value());
}

TEST(Spaces, RejectsBadInput) {
  EXPECT_THROW(SpaceSpec::hardy(0), DomainError);
  EXPECT_THROW(SpaceSpec::bergman(2, -1.0), DomainError);
  EXPECT_THROW(WeightSequence::power_law(-2.0), DomainError);
  EXPECT_THROW(restricted_space(SpaceSpec::hardy(2), 3), DomainError);
  EXPECT_THROW(kernel_eval(SpaceSpec::hardy(1), CVector::Constant(1, 1.0), CVector::Zero(1)), DomainError);
  CoefficientVector f(2, 2);
  EXPECT_THROW(f.set({3, 0}, 1.0), DomainError);
}

}  // namespace
}  // namespace lfcomp
