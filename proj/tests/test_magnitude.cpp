#include <gtest/gtest.h>

#include <cmath>

#include "euni/magnitude.hpp"
#include "euni/rng.hpp"

using euni::Magnitude;

namespace {

double rel(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }

double random_value(euni::Rng& rng) { return std::exp(rng.uniform(-680.0, 680.0)); }

}  // namespace

TEST(Magnitude, MatchesDoubleArithmetic)
{
    euni::Rng rng(11);
    for (int i = 0; i < 10000; ++i) {
        double a = std::exp(rng.uniform(-40, 40)), b = std::exp(rng.uniform(-40, 40));
        Magnitude A = Magnitude::from_double(a), B = Magnitude::from_double(b);
        EXPECT_LT(rel((A * B).to_double(), a * b), 1e-12);
        EXPECT_LT(rel((A + B).to_double(), a + b), 1e-12);
        EXPECT_LT(rel((A / B).to_double(), a / b), 1e-12);
        if (a > b) EXPECT_LT(std::fabs((A - B).to_double() - (a - b)), 1e-12 * a);
        EXPECT_EQ(A < B, a < b);
    }
}

TEST(Magnitude, LargeValuesAgreeWhenRepresentable)
{
    euni::Rng rng(12);
    for (int i = 0; i < 10000; ++i) {
        double a = random_value(rng), b = random_value(rng);
        Magnitude A = Magnitude::from_double(a), B = Magnitude::from_double(b);
        double p = a * b;
        if (std::isfinite(p) && p > 1e-300) EXPECT_LT(rel((A * B).to_double(), p), 1e-12);
        EXPECT_LT(rel(A.log_double(), std::log(a)), 1e-12);
        EXPECT_EQ(A < B, a < b);
    }
}

TEST(Magnitude, CanonicalFormAndOrdering)
{
    Magnitude x = Magnitude::from_log(6561.0);  // exp(3^8)
    EXPECT_EQ(x.level(), 2);
    EXPECT_NEAR(x.log_double(), 6561.0, 1e-9);
    Magnitude big = Magnitude::tower(3, 5.0);
    EXPECT_GE(big.level(), 1);
    EXPECT_GE(big.mantissa(), std::log(Magnitude::kCut) - 1e-12);
    EXPECT_LT(big.mantissa(), Magnitude::kCut);
    EXPECT_TRUE(Magnitude::from_log(6561.0) < Magnitude::from_log(6562.0));
    EXPECT_TRUE(Magnitude::from_double(1e300) < Magnitude::from_log(1e4));
    EXPECT_TRUE(Magnitude::from_log(1e6) < Magnitude::tower(3, 3.0));
}

TEST(Magnitude, LogExpRoundTrip)
{
    for (double v : {0.5, 3.0, 700.0, 1e5, 1e200}) {
        Magnitude e = Magnitude::exp(Magnitude::from_double(v));
        EXPECT_LT(rel(e.log().to_double(), v), 1e-12);
    }
    Magnitude t = Magnitude::tower(4, 2.0);
    EXPECT_TRUE(Magnitude::exp(t.log()) == t);
}

TEST(Magnitude, HugeAbsorbsSmall)
{
    Magnitude Q = Magnitude::from_log(1e7);
    EXPECT_TRUE((Q + Magnitude::from_double(5.0)) == Q);
    EXPECT_TRUE((Q - Magnitude::from_double(872.0)) == Q);
    EXPECT_THROW((Magnitude::from_double(1.0) - Q), std::domain_error);
}

TEST(Magnitude, PowInLogSpace)
{
    Magnitude Q = Magnitude::from_log(1e6);
    Magnitude s = Magnitude::pow(Q, 0.5);
    EXPECT_LT(rel(s.log_double(), 5e5), 1e-12);
}
