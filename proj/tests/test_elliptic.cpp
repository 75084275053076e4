#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "nlsband/elliptic.hpp"
#include "oracles.hpp"
#include "reference_values.hpp"

using namespace nlsband;
namespace ref = nlsband::reference;

namespace {

constexpr double kPi = std::numbers::pi;

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST(Modulus, RejectsOutsideUnitInterval) {
  EXPECT_THROW(Modulus(-0.1), DomainError);
  EXPECT_THROW(Modulus(1.0), DomainError);
  EXPECT_THROW(Modulus(std::nan("")), DomainError);
  EXPECT_NO_THROW((void)Modulus(kMaxModulus));
  EXPECT_DOUBLE_EQ(Modulus(0.6).complement(), 0.8);
}

TEST(CompleteK, ReferenceValues) {
  EXPECT_DOUBLE_EQ(complete_K(Modulus(0.0)), kPi / 2);
  EXPECT_NEAR(complete_K(Modulus(0.5)), ref::kK_0p5, 1e-15);
  EXPECT_NEAR(complete_K(Modulus(0.5)), oracle::K(0.5), 1e-12);
  const double k_edge = complete_K(Modulus(kMaxModulus));
  EXPECT_GT(k_edge, 14.0);
  EXPECT_NEAR(k_edge, ref::kK_near_one, 1e-10);
}

TEST(CompleteE, ReferenceValues) {
  EXPECT_DOUBLE_EQ(complete_E(Modulus(0.0)), kPi / 2);
  EXPECT_NEAR(complete_E(Modulus(0.7)), ref::kE_0p7, 1e-15);
  EXPECT_NEAR(complete_E(Modulus(0.7)), oracle::E(0.7), 1e-12);
  EXPECT_NEAR(complete_E(Modulus(kMaxModulus)), 1.0, 1e-10);
}

TEST(CompleteE, LegendreRelation) {
  for (double t : {0.1, 0.4, 0.8, 0.99}) {
    const Modulus m(t), mc(std::sqrt(1 - t * t));
    const double K = complete_K(m), E = complete_E(m), Kc = complete_K(mc), Ec = complete_E(mc);
    EXPECT_NEAR(E * Kc + Ec * K - K * Kc, kPi / 2, 1e-13) << t;
  }
}

TEST(IncompleteF, ReferenceAndLimits) {
  EXPECT_NEAR(incomplete_F(kPi / 4, Modulus(0.5)), ref::kF_pi4_0p5, 1e-15);
  EXPECT_NEAR(incomplete_F(kPi / 4, Modulus(0.5)), oracle::F(kPi / 4, 0.5), 1e-12);
  EXPECT_EQ(incomplete_F(0.0, Modulus(0.7)), 0.0);
  EXPECT_NEAR(incomplete_F(0.3, Modulus(0.0)), 0.3, 1e-16);
  EXPECT_EQ(incomplete_F(kPi / 2, Modulus(0.7)), complete_K(Modulus(0.7)));
  EXPECT_THROW(incomplete_F(2.0, Modulus(0.5)), DomainError);
  EXPECT_THROW(incomplete_F(-0.1, Modulus(0.5)), DomainError);
}

TEST(IncompleteE, ReferenceAndLimits) {
  EXPECT_NEAR(incomplete_E(1.0, Modulus(0.4)), ref::kEinc_1_0p4, 1e-15);
  EXPECT_NEAR(incomplete_E(1.0, Modulus(0.4)), oracle::E_inc(1.0, 0.4), 1e-12);
  EXPECT_EQ(incomplete_E(0.0, Modulus(0.4)), 0.0);
  EXPECT_NEAR(incomplete_E(kPi / 2 - 1e-12, Modulus(0.4)), complete_E(Modulus(0.4)), 1e-11);
}

TEST(Jacobi, ReferenceTriple) {
  const auto j = jacobi(0.37, Modulus(0.9));
  EXPECT_NEAR(j.sn, ref::kSn_0p37_0p9, 1e-15);
  EXPECT_NEAR(j.cn, ref::kCn_0p37_0p9, 1e-15);
  EXPECT_NEAR(j.dn, ref::kDn_0p37_0p9, 1e-15);
  EXPECT_NEAR(j.sn * j.sn + j.cn * j.cn, 1.0, 1e-12);
  EXPECT_NEAR(j.dn * j.dn + 0.81 * j.sn * j.sn, 1.0, 1e-12);
  EXPECT_NEAR(j.sn, oracle::sn_by_inversion(0.37, 0.9), 1e-12);
}

TEST(Jacobi, QuarterPeriodAndParity) {
  for (double t : {0.0, 0.3, 0.9, 0.999999}) {
    const Modulus m(t);
    const double K = complete_K(m);
    const auto q = jacobi(K, m);
    EXPECT_NEAR(q.sn, 1.0, 1e-12) << t;
    EXPECT_NEAR(q.cn, 0.0, 1e-7) << t;
    EXPECT_NEAR(q.dn, m.complement(), 1e-7) << t;
    const auto a = jacobi(0.7, m), b = jacobi(-0.7, m);
    EXPECT_DOUBLE_EQ(a.sn, -b.sn);
    EXPECT_DOUBLE_EQ(a.cn, b.cn);
    const auto p = jacobi(0.7 + 4 * K, m);
    EXPECT_NEAR(p.sn, a.sn, 1e-12) << t;
  }
}

TEST(Jacobi, IdentitiesAtRandomPoints) {
  std::mt19937_64 rng(20241015);
  std::uniform_real_distribution<double> ux(-20.0, 20.0), ut(0.0, 0.999999);
  for (int i = 0; i < 200; ++i) {
    const double x = ux(rng), t = ut(rng);
    const auto j = jacobi(x, Modulus(t));
    EXPECT_NEAR(j.sn * j.sn + j.cn * j.cn, 1.0, 1e-11);
    EXPECT_NEAR(j.dn * j.dn + t * t * j.sn * j.sn, 1.0, 1e-11);
  }
}

TEST(Jacobi, DerivativeChain) {
  // d sn / dx = cn dn, by central difference.
  const Modulus m(0.8);
  const double h = 1e-5;
  for (double x : {0.1, 0.9, 2.3}) {
    const double d = (jacobi(x + h, m).sn - jacobi(x - h, m).sn) / (2 * h);
    const auto j = jacobi(x, m);
    EXPECT_NEAR(d, j.cn * j.dn, 1e-9);
  }
}

TEST(HeumanLambda, ReferenceAndSpecialCases) {
  EXPECT_NEAR(heuman_lambda(0.4, Modulus(0.3)), ref::kHeuman_0p4_0p3, 1e-14);
  EXPECT_EQ(heuman_lambda(0.0, Modulus(0.3)), 0.0);
  EXPECT_DOUBLE_EQ(heuman_lambda(0.4, Modulus(0.0)), std::sin(0.4));
  EXPECT_DOUBLE_EQ(heuman_lambda(kPi / 2, Modulus(0.3)), 1.0);
  EXPECT_NEAR(heuman_lambda(kPi / 2 - 1e-9, Modulus(0.3)), 1.0, 1e-8);
}

TEST(HeumanLambda, ComposedFromOracleIntegrals) {
  const double phi = 0.4, t = 0.3, tc = std::sqrt(1 - t * t);
  const double expected = 2 / kPi *
                          (oracle::E(t) * oracle::F(phi, tc) + oracle::K(t) * oracle::E_inc(phi, tc) -
                           oracle::K(t) * oracle::F(phi, tc));
  EXPECT_NEAR(heuman_lambda(phi, Modulus(t)), expected, 1e-12);
}

TEST(CompletePi, ClosedFormsAndReference) {
  EXPECT_NEAR(complete_Pi(0.5, Modulus(0.0)), kPi / (2 * std::sqrt(0.5)), 1e-14);
  EXPECT_NEAR(complete_Pi(0.5, Modulus(0.0)), oracle::Pi(0.5, 0.0), 1e-11);
  EXPECT_EQ(complete_Pi(0.0, Modulus(0.6)), complete_K(Modulus(0.6)));
  EXPECT_NEAR(complete_Pi(0.999, Modulus(0.5)), ref::kPi_0p999_0p5, 1e-12);
  EXPECT_NEAR(complete_Pi(0.999, Modulus(0.5)), oracle::Pi(0.999, 0.5), 1e-8);
  EXPECT_NEAR(complete_Pi(0.99, Modulus(0.7)), ref::kPi_0p99_0p7, 1e-12);
  EXPECT_NEAR(complete_Pi(-5.0, Modulus(0.3)), ref::kPi_m5_0p3, 1e-14);
  EXPECT_THROW(complete_Pi(1.0, Modulus(0.5)), DomainError);
}

TEST(CompletePi, HeumanBranchIsContinuous) {
  // The two evaluation paths meet at nu = 0.95.
  const Modulus m(0.5);
  const double below = complete_Pi(std::nextafter(0.95, 0.0), m);
  const double above = complete_Pi(std::nextafter(0.95, 1.0), m);
  EXPECT_NEAR(below, above, 1e-12);
}

TEST(OracleEquivalence, StressGrid) {
  for (double t : {0.0, 0.3, 0.7, 0.95}) {
    const Modulus m(t);
    EXPECT_LT(rel(complete_K(m), oracle::K(t)), 1e-8) << t;
    EXPECT_LT(rel(complete_E(m), oracle::E(t)), 1e-8) << t;
    for (double phi : {0.2, 1.0, 1.5}) {
      EXPECT_LT(rel(incomplete_F(phi, m), oracle::F(phi, t)), 1e-8) << t << " " << phi;
      EXPECT_LT(rel(incomplete_E(phi, m), oracle::E_inc(phi, t)), 1e-8) << t << " " << phi;
    }
    for (double nu : {-5.0, 0.0, 0.9, 0.99, 0.999}) {
      EXPECT_LT(rel(complete_Pi(nu, m), oracle::Pi(nu, t)), 1e-8) << t << " " << nu;
    }
  }
}

TEST(IncompletePi, MatchesQuadrature) {
  const Modulus m(0.6);
  for (double nu : {-2.0, 0.5, 0.97}) {
    for (double phi : {0.3, 1.2}) {
      const auto j = jacobi(incomplete_F(phi, m), m);
      const double expected = quad_oracle(
          [&](double th) {
            const double s2 = std::sin(th) * std::sin(th);
            return 1.0 / ((1 - nu * s2) * std::sqrt(1 - 0.36 * s2));
          },
          0.0, phi, 1e-13);
      EXPECT_NEAR(incomplete_Pi(j, nu, 1 - nu), expected, 1e-11) << nu << " " << phi;
    }
  }
  EXPECT_THROW(incomplete_Pi({0.5, -0.8, 0.9}, 0.5, 0.5), DomainError);
}
