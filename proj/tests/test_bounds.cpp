#include <gtest/gtest.h>

#include <cmath>

#include "euni/bounds.hpp"
#include "euni/config.hpp"

using namespace euni;

namespace {

const PrimeTable& primes()
{
    static PrimeTable t = sieve(1000000);
    return t;
}

}  // namespace

TEST(Bounds, DeltaAlphaValues)
{
    // (1/4 - R - beta)/(1 - log(2R))
    double oracle = (0.25 - 0.06 - 0.039) / (1 - std::log(0.12));
    EXPECT_NEAR(delta_of(0.06, 0.039), oracle, 1e-15);
    EXPECT_NEAR(oracle, 0.04839, 1e-5);
    auto d = derive_delta_alpha(0.06, 0.039, 1e-4);
    EXPECT_NEAR(d.alpha, oracle * std::log(oracle / (std::exp(1.0) * 1e-4)) - 0.25, 1e-15);
    EXPECT_TRUE(d.alpha_positive);
    EXPECT_TRUE(d.r_below_boundary);
    EXPECT_THROW(derive_delta_alpha(0.3, 0.0, 1e-4), validation_error);
}

TEST(Bounds, DeltaInvariantOnRandomShapes)
{
    for (double R = 0.01; R < 0.24; R += 0.013)
        for (double beta = 0.001; beta + R < 0.25; beta += 0.017) {
            double d = delta_of(R, beta);
            EXPECT_GT(d, 0.0);
            EXPECT_NEAR(d * std::log(std::exp(1.0) / (2 * R)), 0.25 - R - beta, 1e-15);
        }
}

TEST(Bounds, MinimalRhoAgainstDirectPower)
{
    UniversalityParams p;
    double direct = std::exp(std::log(355991.0) / (1 - 4 * p.delta()));
    EXPECT_NEAR(p.rho_min(), direct, 1e-9 * direct);
    EXPECT_NEAR(p.rho_min() / 7.7e6, 1.0, 0.01);
}

TEST(Bounds, AOfRTerms)
{
    double d = delta_of(0.06, 0.039), r = 1e-4;
    double u = (1 - 4 * d) * (0.25 - r);
    auto a = a_of_r(r, d);
    EXPECT_NEAR(a.terms[0], std::pow(u, 4) / (47920 * std::exp(1.0) * d * d * d), 1e-12);
    EXPECT_EQ(a.terms[1], 3.0);
    EXPECT_NEAR(a.terms[3], 188 * std::sqrt(u / 2), 1e-12);
    EXPECT_NEAR(a.value, a.terms[0] + 3 + 4.5 * u + 188 * std::sqrt(u / 2) + 16 * (3 - 4 * r) / (1 - 4 * r) * std::sqrt(u / 2), 1e-12);
    EXPECT_FALSE(a.degenerate);
    EXPECT_TRUE(a_of_r(0.25, d).degenerate);
    EXPECT_NEAR(threshold_log_rho(r, d, 1.0), 2 / u * std::log(2 * a.value), 1e-12);
}

TEST(Bounds, ThresholdBudgetHolds)
{
    UniversalityParams p;
    for (double eps : {1.0, 0.5, 0.2, 0.1}) {
        p.eps = eps;
        auto b = threshold_budget(p);
        EXPECT_TRUE(b.holds) << eps;
        EXPECT_LE(b.six_sum, eps / 2);
    }
    double c = threshold_budget_crossover(p);
    EXPECT_GT(c, 0.0);
    EXPECT_LT(c, 0.1);
    p.eps = c * 0.99;
    EXPECT_FALSE(threshold_budget(p).holds);
}

TEST(Bounds, ErrorBudgetDecreasesInRho)
{
    UniversalityParams p;
    double prev = INFINITY;
    for (double L = 20; L < 690; L += 10) {
        p.rho = std::exp(L);
        p.V = std::sqrt(p.rho / L);
        double v = error_budget(p).non_epsilon();
        EXPECT_LT(v, prev) << L;
        prev = v;
    }
    EXPECT_LT(prev, 0.01);
}

TEST(Bounds, WeylTermWithSqrtRhoLogV)
{
    UniversalityParams p;
    p.rho = 1e40;
    double L = std::log(p.rho);
    p.V = std::sqrt(p.rho / L);
    EXPECT_NEAR(error_budget(p).weyl / (188 * std::exp((p.r - 0.25) * L) / std::sqrt(L)), 1.0, 1e-12);
}

TEST(Bounds, MeasureLowerBoundMainTerm)
{
    PiBracket pi{78498, 78498, true};
    auto m = measure_lower_bound(3, 1e-4, 1.0, 0.5, 50, pi, Magnitude::from_log(1e9));
    EXPECT_DOUBLE_EQ(m.log_main, std::log(0.5) - 2 * 78498 * std::log(50.0));
    EXPECT_TRUE(m.positive);
    EXPECT_NEAR(m.log_density, m.log_main - std::log(2.0), 1e-9);
    // a small Q makes the loss dominate
    auto n = measure_lower_bound(3, 1e-4, 1.0, 0.5, 50, pi, Magnitude::from_log(100.0));
    EXPECT_FALSE(n.positive);
}

TEST(Bounds, PiBracket)
{
    auto e = pi_bracket(1e6, primes());
    EXPECT_TRUE(e.exact);
    EXPECT_EQ(e.lo, 78498.0);
    auto b = pi_bracket(1e7, primes());
    EXPECT_FALSE(b.exact);
    EXPECT_LT(b.lo, 664579.0);
    EXPECT_GT(b.hi, 664579.0);
}

TEST(Bounds, QChoiceBranches)
{
    auto c = density_Q(3, 1e-4, 1.0, 0.4, 500);
    EXPECT_TRUE(c.branch2_dominates);  // 3^8 (1/4 - r) > 2000 + ...
    EXPECT_NEAR(c.log_Q, std::pow(3.0, 8), 1e-9);
    auto d = density_Q(3, 1e-4, 1.0, 0.4, 1e4);
    EXPECT_FALSE(d.branch2_dominates);
    EXPECT_GT(d.log_Q, 2e4 / 0.25);
    EXPECT_EQ(density_Q_crossover(1e-4, 1.0, 0.4, 1e4), 5u);
}

TEST(Bounds, ValidationReportsFailures)
{
    UniversalityParams p;
    p.rho = 1e6;  // below rho_min
    auto v = validate(p, primes());
    EXPECT_FALSE(v.all_hold());
    ASSERT_NE(v.first_failure(), nullptr);
    bool rho_flagged = false;
    for (const auto& c : v.constraints)
        if (c.name.rfind("rho > ", 0) == 0) rho_flagged = !c.holds;
    EXPECT_TRUE(rho_flagged);
    p.r = 0.1;
    auto w = validate(p, primes());
    EXPECT_FALSE(w.all_hold());
}

TEST(Bounds, MinimalLogRho)
{
    UniversalityParams p;
    double d = p.delta();
    double L = minimal_log_rho(p.beta, d, 6.0, 16.0);
    auto ceil_log = [&](double x) { return p.beta * x - std::log(5 * std::exp(1.0) * d * d * d) - 4 * std::log(x); };
    EXPECT_GE(ceil_log(L), std::log(6.0) - 1e-12);
    EXPECT_LT(ceil_log(L * (1 - 1e-9)), std::log(6.0));
    EXPECT_GT(L, 4 / p.beta);
}

TEST(Bounds, DensityClaim)
{
    UniversalityParams p;
    p.eps1 = 0.4;
    p.rho = 1e6;
    auto c = density_claim(p, primes());
    EXPECT_EQ(c.log_density, std::log(0.4) - 2 * 1e6);
    EXPECT_EQ(c.log_claim, std::log(0.8) - 2 * 1e6);
}

TEST(Bounds, HurwitzSetupWithZeroTarget)
{
    auto s = hurwitz_setup([](cplx) { return cplx(0.0, 0.0); }, 2, 5, 1e-4);
    EXPECT_EQ(s.C, 1.0);
    EXPECT_NEAR(s.target_max, 1.0, 1e-12);
    EXPECT_LT(s.reconstruction_error, 1e-15);
    double qr = std::pow(5.0, 1e-4);
    EXPECT_NEAR(s.eps1, 1e-4 / (4 * kPi * qr), 1e-18);
    EXPECT_NEAR(s.eps2, 1e-4 / (4 * qr), 1e-18);
    EXPECT_EQ(s.sign(0), 1.0);
    EXPECT_EQ(s.sign(1), 1.0);
    EXPECT_EQ(s.sign(2), -1.0);
    auto d = hurwitz_density(s, 1e300);
    EXPECT_NEAR(d.log_density, std::log(2.0) + std::log(s.eps1) - 1e300, 1e285);
}

TEST(Bounds, HurwitzSetupReconstructs)
{
    auto g = [](cplx s) { return 0.3 + s - 2.0 * s * s; };
    auto s = hurwitz_setup(g, 3, 7, 1e-3);
    EXPECT_NEAR(s.C, 1.1 * s.g_max * std::pow(7.0, 1e-4), 1e-12);
    EXPECT_LT(s.reconstruction_error, 1e-14);
    EXPECT_GT(s.target_min, 0.0);
    EXPECT_THROW(hurwitz_setup(g, 7, 7, 1e-3), validation_error);
    EXPECT_THROW(hurwitz_setup(g, 1, 2, 1e-3), validation_error);
}

TEST(Bounds, ConfigParsing)
{
    json j = {{"q", 5}, {"mode", "density"}, {"rho", "minimal"}, {"V", "sqrt-rho-log"}, {"target", {1, json::array({0, 2})}}};
    auto c = parse_config(j);
    EXPECT_EQ(c.params.q, 5u);
    EXPECT_TRUE(c.rho_minimal);
    EXPECT_TRUE(c.V_sqrt_rho_log);
    EXPECT_EQ(c.g(1.0), cplx(1.0, 2.0));
    EXPECT_THROW(parse_config({{"bogus", 1}}), config_error);
    EXPECT_THROW(parse_config({{"mode", "other"}}), config_error);
    EXPECT_THROW(parse_config({{"q", "three"}}), config_error);
}
