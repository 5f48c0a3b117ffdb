#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "euni/arith.hpp"
#include "euni/rng.hpp"

using namespace euni;

namespace {

unsigned tau_naive(std::uint64_t n)
{
    unsigned c = 0;
    for (std::uint64_t d = 1; d <= n; ++d) c += n % d == 0;
    return c;
}

bool coprime(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b) == 1; }

double frac(long double v) { return static_cast<double>(v - std::floor(v)); }

}  // namespace

TEST(Arith, HyperbolaMatchesNaive)
{
    std::int64_t acc = 0;
    for (std::uint64_t n = 1; n <= 3000; ++n) {
        acc += tau_naive(n);
        ASSERT_EQ(divisor_summatory_hyperbola(n), acc) << n;
    }
}

TEST(Arith, DivisorTableMatchesNaive)
{
    DivisorTable t(5000);
    for (std::uint64_t n = 1; n <= 5000; ++n) ASSERT_EQ(t.tau(n), tau_naive(n)) << n;
}

TEST(Arith, ModulusInfo)
{
    ModulusInfo m(360);
    EXPECT_EQ(m.phi, 96u);
    EXPECT_EQ(m.nu(), 3);
    EXPECT_EQ(m.squarefree.size(), 8u);
    int musum = 0;
    for (const auto& d : m.squarefree) musum += d.mu;
    EXPECT_EQ(musum, 0);
    EXPECT_EQ(ModulusInfo(1).c4(), 0.0);
    EXPECT_THROW(ModulusInfo(0), validation_error);
}

TEST(Arith, MobiusIdentities)
{
    for (std::uint64_t q = 1; q <= 2000; ++q) ASSERT_TRUE(mobius_identities_exact(q)) << q;
}

TEST(Arith, CoprimeDivisorCountMatchesDirect)
{
    for (std::uint64_t q : {1, 2, 6, 7, 30}) {
        ModulusInfo m(q);
        std::int64_t acc = 0;
        for (std::uint64_t n = 1; n <= 2000; ++n) {
            if (coprime(n, q)) acc += tau_naive(n);
            if (n % 37 == 0) ASSERT_EQ(coprime_divisor_count(static_cast<double>(n), m), acc) << q << " " << n;
        }
    }
}

TEST(Arith, FractionalSumFastIdentity)
{
    // direct sum_{d|q} mu(d) sum_{n<=x,(n,q)=1} {x/(dn)} against the scanner's closed form
    ArithScanner s(5000);
    for (std::uint64_t q : {1, 3, 10, 11}) {
        ModulusInfo m(q);
        for (double x : {3.0, 17.5, 100.0, 1234.0, 4999.9}) {
            long double direct = 0;
            for (const auto& d : m.squarefree)
                for (std::uint64_t n = 1; n <= floor_u64(x); ++n)
                    if (coprime(n, q)) direct += d.mu * frac(static_cast<long double>(x) / (d.d * n));
            EXPECT_NEAR(fractional_sum(x, q).exact, static_cast<double>(direct), 1e-9) << q << " " << x;
        }
    }
}

TEST(Arith, HarmonicBoundHolds)
{
    for (std::uint64_t q : {1, 2, 3, 6, 30, 97})
        for (double x = 1; x < 1e5; x = x * 1.7 + 1) EXPECT_TRUE(coprime_harmonic(x, q).passed) << q << " " << x;
}

TEST(Arith, DeltaBoundAboveThreshold)
{
    ArithScanner s(300000);
    auto st = scan_delta(s, 5560, 300000);
    EXPECT_EQ(st.failures, 0u);
    EXPECT_LT(st.worst_ratio, 1.0);
    EXPECT_FALSE(delta_error(100).checked);
}

TEST(Arith, DivisorSumAgreesWithScanner)
{
    ArithScanner s(20000);
    for (std::uint64_t q : {2, 5, 12}) {
        auto r = s.scan(q, 5560, 20000, {});
        EXPECT_EQ(r.divisor.failures, 0u) << q;
        EXPECT_EQ(r.harmonic.failures, 0u) << q;
        EXPECT_EQ(r.divisor_square.failures, 0u) << q;
        auto d = divisor_summatory(7777.5, q);
        EXPECT_TRUE(d.passed);
    }
}

// Known small-x counterexamples of the stated error terms.
TEST(Arith, FractionalBoundFailsForTrivialModulusAtSmallX)
{
    auto r = fractional_sum(12, 1);
    EXPECT_FALSE(r.passed);
    EXPECT_GT(r.ratio(), 1.0);
    EXPECT_NEAR(fractional_sum(120, 1).ratio(), 1.5834842007500716, 1e-9);
    EXPECT_TRUE(fractional_sum(6000, 1).passed);
}

TEST(Arith, DivisorBoundFailsForTrivialModulus)
{
    ArithScanner s(100000);
    auto r = s.scan(1, 3, 100000, {});
    EXPECT_GT(r.divisor.failures, 0u);
    EXPECT_GT(r.divisor.worst_ratio, 1.0);
}

TEST(Arith, DivisorSquareFailsOnlyAtFour)
{
    auto r = divisor_square_sum(4, 1);
    EXPECT_FALSE(r.passed);
    ArithScanner s(100000);
    auto sc = s.scan(1, 5, 100000, {});
    EXPECT_EQ(sc.divisor_square.failures, 0u);
}

TEST(Arith, DivisorSquareSumMatchesNaive)
{
    for (std::uint64_t q : {1, 6}) {
        std::int64_t acc = 0;
        for (std::uint64_t n = 1; n <= 500; ++n)
            if (coprime(n, q)) acc += static_cast<std::int64_t>(tau_naive(n)) * tau_naive(n);
        EXPECT_EQ(divisor_square_sum(500, q).exact, static_cast<double>(acc));
    }
    EXPECT_FALSE(d2_simplified_hypothesis(1e300, 3));
    EXPECT_TRUE(d2_simplified_hypothesis(1e6, 1));
}

TEST(Arith, LogGrid)
{
    auto g = log_grid(3, 1e6, 1000);
    ASSERT_EQ(g.size(), 1000u);
    EXPECT_DOUBLE_EQ(g.front(), 3.0);
    EXPECT_DOUBLE_EQ(g.back(), 1e6);
    for (std::size_t i = 1; i < g.size(); ++i) EXPECT_GT(g[i], g[i - 1]);
}

TEST(Arith, InputValidation)
{
    EXPECT_THROW(fractional_sum(2, 1), validation_error);
    EXPECT_THROW(coprime_harmonic(0.5, 1), validation_error);
    EXPECT_THROW(divisor_square_sum(0.5, 1), validation_error);
}
