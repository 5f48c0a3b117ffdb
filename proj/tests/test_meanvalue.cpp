#include <gtest/gtest.h>

#include <cmath>

#include "euni/meanvalue.hpp"
#include "euni/rng.hpp"

using namespace euni;

namespace {

double simpson(const std::function<double(double)>& f, double a, double b, int n)
{
    double h = (b - a) / n, acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4 : 2);
    return acc * h / 3;
}

}  // namespace

TEST(MeanValue, ClosedFormMatchesQuadrature)
{
    Rng rng(21);
    for (int i = 0; i < 10; ++i) {
        std::vector<cplx> a(1 + i * 3);
        for (auto& c : a) c = cplx(rng.normal(), rng.normal());
        double T = rng.uniform(10, 200);
        auto f = [&](double t) {
            cplx s = 0;
            for (std::size_t n = 1; n <= a.size(); ++n) s += a[n - 1] * std::polar(1.0, t * std::log(static_cast<double>(n)));
            return std::norm(s);
        };
        double q = simpson(f, T / 2, T, 20000);
        EXPECT_NEAR(dirichlet_meansquare_integral(a, T), q, 1e-7 * std::max(1.0, std::fabs(q)));
    }
}

TEST(MeanValue, MeanSquareBoundHolds)
{
    Rng rng(22);
    for (int i = 0; i < 100; ++i) {
        std::vector<cplx> a(static_cast<std::size_t>(rng.integer(1, 60)));
        for (auto& c : a) c = std::polar(rng.uniform(), rng.uniform(0, kTwoPi));
        EXPECT_TRUE(dirichlet_meansquare(a, rng.uniform(1, 1e4)).passed);
    }
    EXPECT_THROW(dirichlet_meansquare({}, 1), validation_error);
}

TEST(MeanValue, DiscIntegralOfMonomial)
{
    // int_{|z|<=R} |z^n|^2 = pi R^{2n+2}/(n+1)
    for (int n = 0; n < 5; ++n) {
        auto f = [n](cplx z) { return std::pow(z, n); };
        double R = 0.7;
        EXPECT_NEAR(disc_square_integral(f, 0, R, 32, 128), kPi * std::pow(R, 2 * n + 2) / (n + 1), 1e-12);
    }
}

TEST(MeanValue, CircleMax)
{
    auto f = [](cplx z) { return std::pow(z, 5) + 1.0; };
    EXPECT_NEAR(circle_max(f, 0, 0.9), std::pow(0.9, 5) + 1, 1e-12);
    auto g = [](cplx z) { return std::exp(z); };
    EXPECT_NEAR(circle_max(g, cplx(0.2, 0), 0.3), std::exp(0.5), 1e-12);
}

TEST(MeanValue, AreaMeanBound)
{
    auto f = [](cplx z) { return std::exp(3.0 * z) - z * z; };
    auto c = area_mean_bound(f, cplx(0.1, -0.2), 0.5, 0.2);
    EXPECT_TRUE(c.converged);
    EXPECT_TRUE(c.passed);
    EXPECT_THROW(area_mean_bound(f, 0, 0.5, 0.5), validation_error);
}

TEST(MeanValue, SignedLogExp)
{
    SignedLog l;
    l.add(3.0).add(-1.0);
    EXPECT_NEAR(l.exp().to_double(), std::exp(2.0), 1e-12);
    SignedLog m;
    m.add(Magnitude::from_log(1e5)).sub(Magnitude::from_log(1e6));
    EXPECT_EQ(m.exp().to_double(), 0.0);
}

TEST(MeanValue, JBoundHypotheses)
{
    Magnitude Q = Magnitude::from_log(7000.0);  // above exp(3^8)
    auto b = j_bound(3, 1e-4, Q, Magnitude::from_log(1e4));
    EXPECT_TRUE(b.q_hypothesis);
    EXPECT_FALSE(b.t_hypothesis);
    Magnitude T = Magnitude::exp(Q * Magnitude::from_double(10.0));
    EXPECT_TRUE(j_bound(3, 1e-4, Q, T).hypotheses());
    EXPECT_FALSE(q_above_threshold(3, Magnitude::from_log(6000.0)));
}
