#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>

#include "euni/primes.hpp"

using namespace euni;

namespace {

bool trial_division(std::uint64_t n)
{
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

}  // namespace

TEST(Primes, SieveMatchesTrialDivision)
{
    auto t = sieve(200000);
    std::size_t idx = 0;
    for (std::uint64_t n = 0; n <= 200000; ++n) {
        if (trial_division(n)) {
            ASSERT_LT(idx, t.size());
            EXPECT_EQ(t.primes()[idx], n);
            ++idx;
        }
    }
    EXPECT_EQ(idx, t.size());
}

TEST(Primes, SegmentBoundariesAndSmallLimits)
{
    EXPECT_THROW(sieve(1), validation_error);
    EXPECT_EQ(sieve(2).size(), 1u);
    EXPECT_EQ(sieve(3).size(), 2u);
    // crosses several 2^18 segments
    auto t = sieve(3000000);
    EXPECT_EQ(t.pi(262144), 23000u);
    EXPECT_EQ(t.pi(1000000), 78498u);
    EXPECT_EQ(t.pi(3000000), 216816u);
}

TEST(Primes, KnownCounts)
{
    auto t = sieve(10000000);
    EXPECT_EQ(t.pi(10), 4u);
    EXPECT_EQ(t.pi(100), 25u);
    EXPECT_EQ(t.pi(1e4), 1229u);
    EXPECT_EQ(t.pi(1e6), 78498u);
    EXPECT_EQ(t.pi(1e7), 664579u);
    std::uint64_t direct = 0;
    for (std::uint64_t n = 2; n <= 355991; ++n) direct += trial_division(n);
    EXPECT_EQ(t.pi(355991), direct);
}

TEST(Primes, ThetaIsPrefixSumOfLogs)
{
    auto t = sieve(100000);
    long double acc = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        acc += std::log(static_cast<long double>(t.primes()[i]));
        if (i % 997 == 0) EXPECT_NEAR(t.theta_at(i), static_cast<double>(acc), 1e-9);
    }
    EXPECT_NEAR(t.theta(100000), static_cast<double>(acc), 1e-9);
}

TEST(Primes, RangeAndIndex)
{
    auto t = sieve(1000);
    auto [a, b] = t.range(10, 30);  // 11 13 17 19 23 29
    EXPECT_EQ(b - a, 6u);
    EXPECT_EQ(t.primes()[a], 11u);
    EXPECT_EQ(t.index_of(11), 5u);
    EXPECT_THROW(t.pi(2000), validation_error);
}

TEST(Primes, CacheRoundTrip)
{
    auto dir = std::filesystem::temp_directory_path() / "euni_cache_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    auto t = sieve(500000);
    auto path = dir / "p.bin";
    cache::write(path, t);
    PrimeTable u;
    ASSERT_TRUE(cache::read(path, 500000, u));
    EXPECT_EQ(u.primes(), t.primes());
    PrimeTable w;
    EXPECT_FALSE(cache::read(path, 400000, w));  // limit mismatch
    ::setenv("EU_SIEVE_CACHE", dir.c_str(), 1);
    auto x = load_primes(300000);
    auto y = load_primes(300000);  // served from the cache file
    ::unsetenv("EU_SIEVE_CACHE");
    EXPECT_EQ(x.primes(), y.primes());
    EXPECT_TRUE(std::filesystem::exists(dir / "primes-300000.bin"));
    std::filesystem::remove_all(dir);
}

TEST(Primes, PiBoundHoldsAtThresholdAndJumps)
{
    auto t = sieve(2000000);
    auto c = check_pi_bound(355991, t);
    EXPECT_TRUE(c.passed);
    EXPECT_EQ(c.pi, t.pi(355991));
    EXPECT_THROW(check_pi_bound(355990, t), validation_error);
    auto r = verify_pi_bound(t, kPiThreshold, 2e6);
    EXPECT_TRUE(r.all_passed());
}

TEST(Primes, PiBoundBracketsCount)
{
    // x/log x < pi(x) for x >= 17 alongside the upper bound
    auto t = sieve(2000000);
    for (double x = 355991; x < 2e6; x *= 1.37) {
        auto c = check_pi_bound(x, t);
        EXPECT_GT(static_cast<double>(c.pi), x / std::log(x));
        EXPECT_LT(static_cast<double>(c.pi), c.bound_1094);
    }
}

TEST(Primes, ThetaBound)
{
    auto t = sieve(1000000);
    EXPECT_TRUE(verify_theta_bound(t, 1e6).all_passed());
    EXPECT_TRUE(check_theta_bound(2, t).passed);
}

TEST(Primes, PrimePowerSum)
{
    auto t = sieve(1000000);
    // direct oracle for a small M
    double direct = 0;
    for (std::uint64_t n = 2; n <= 1000; ++n)
        if (trial_division(n)) direct += std::pow(static_cast<double>(n), -0.5);
    EXPECT_NEAR(prime_power_sum(1000, -0.5, t).value, direct, 1e-10);
    for (double M : {400000.0, 700000.0, 1e6}) {
        auto s = prime_power_sum(M, 1e-4 - 0.75, t);
        EXPECT_TRUE(s.bound_checked);
        EXPECT_TRUE(s.passed) << M;
    }
    EXPECT_THROW(prime_power_sum(1000, 0.5, t), validation_error);
}
