#include <gtest/gtest.h>

#include <cmath>

#include "euni/equidist.hpp"
#include "euni/rng.hpp"

using namespace euni;

namespace {

double frac(double x) { return x - std::floor(x); }

// fine-grid count of t in (0,T) with every frac(t alpha_l - a_l) < w_l
double grid_measure(const KoksmaBox& box, double T, long n)
{
    long hits = 0;
    for (long i = 0; i < n; ++i) {
        double t = (i + 0.5) * T / n;
        bool in = true;
        for (std::size_t l = 0; l < box.L() && in; ++l) in = frac(t * box.alpha[l] - box.a[l]) <= box.width(l);
        hits += in;
    }
    return T * static_cast<double>(hits) / static_cast<double>(n);
}

}  // namespace

TEST(Equidist, OrbitMeasure1dMatchesGrid)
{
    Rng rng(41);
    for (int i = 0; i < 20; ++i) {
        KoksmaBox b;
        double a = rng.uniform(-2, 2), w = rng.uniform(0.01, 0.9);
        b.a = {a};
        b.b = {a + w};
        b.alpha = {rng.uniform(0.1, 3)};
        b.H = {10};
        double T = rng.uniform(5, 50);
        EXPECT_NEAR(orbit_measure_1d(b.alpha[0], a, a + w, T), grid_measure(b, T, 2000000), 2e-4 * T);
    }
    EXPECT_DOUBLE_EQ(orbit_measure_1d(1.0, 0.0, 1.0, 7.0), 7.0);
}

TEST(Equidist, OrbitMeasureMultiMatchesGrid)
{
    Rng rng(42);
    for (int i = 0; i < 10; ++i) {
        KoksmaBox b;
        for (int l = 0; l < 3; ++l) {
            double a = rng.uniform(0, 1), w = rng.uniform(0.2, 0.6);
            b.a.push_back(a);
            b.b.push_back(a + w);
            b.alpha.push_back(std::log(static_cast<double>(2 + 2 * l + 1)) / kTwoPi);
            b.H.push_back(10);
        }
        double T = 300;
        EXPECT_NEAR(orbit_measure(b, T), grid_measure(b, T, 3000000), 5e-4 * T);
    }
}

TEST(Equidist, IntervalHelpers)
{
    std::vector<Interval> x{{0, 2}, {3, 5}}, y{{1, 4}};
    auto z = intersect(x, y);
    ASSERT_EQ(z.size(), 2u);
    EXPECT_DOUBLE_EQ(total_length(z), 2.0);
    auto o = orbit_intervals(1.0, 0.25, 0.5, 0.0, 3.0);
    EXPECT_NEAR(total_length(o), 0.75, 1e-12);
}

TEST(Equidist, KoksmaBoundHoldsOnRandomBoxes)
{
    Rng rng(43);
    const double logs[] = {std::log(2.0), std::log(3.0), std::log(5.0)};
    for (int i = 0; i < 12; ++i) {
        KoksmaBox b;
        std::size_t L = 1 + i % 2;
        for (std::size_t l = 0; l < L; ++l) {
            double a = rng.uniform(0, 1), w = rng.uniform(0.05, 0.5);
            b.a.push_back(a);
            b.b.push_back(a + w);
            b.alpha.push_back(logs[l] / kTwoPi);
            b.H.push_back(100);
        }
        for (double T : {1e4, 1e5}) {
            auto kb = koksma_deviation_bound(b, T);
            double dev = std::fabs(orbit_measure(b, T) / T - kb.volume);
            EXPECT_LE(dev, kb.total());
        }
    }
}

TEST(Equidist, KoksmaGammaAndRange)
{
    KoksmaBox b{{0.0, 0.0}, {0.1, 0.2}, {0.1, 0.2}, {100, 1000}};
    EXPECT_DOUBLE_EQ(koksma_gamma(b, 0, 0), 0.1 + 0.75);
    EXPECT_DOUBLE_EQ(koksma_gamma(b, 1, 1000), 0.03);
    EXPECT_EQ(koksma_h_range(b, 0), static_cast<long>(std::floor(100 * (1 + std::log(2.0)))));
    KoksmaBox bad{{0.0}, {1.5}, {0.1}, {10}};
    EXPECT_THROW(bad.validate(), validation_error);
}

TEST(Equidist, KoksmaTruncatedModeStaysConservative)
{
    KoksmaBox b;
    for (int l = 0; l < 4; ++l) {
        b.a.push_back(0.1 * l);
        b.b.push_back(0.1 * l + 0.6);
        b.alpha.push_back(std::log(static_cast<double>(2 * l + 3)) / kTwoPi);
        b.H.push_back(20);
    }
    auto kb = koksma_deviation_bound(b, 1e5);
    EXPECT_TRUE(kb.truncated);
    EXPECT_GE(kb.remainder, 0.0);
    double dev = std::fabs(orbit_measure(b, 1e5) / 1e5 - kb.volume);
    EXPECT_LE(dev, kb.total());
}

TEST(Equidist, TargetBoxLayout)
{
    auto t = sieve(1000);
    TargetBoxInput in;
    in.q = 3;
    in.rho = 10;  // low primes 2, 5, 7
    in.Q = 30;    // mid primes 11..29
    in.V = 50;
    in.r = 0.1;
    in.eps1 = 0.5;
    in.char_phases.assign(2, std::vector<double>(3, 0.25));
    in.theta.assign(6, 0.5);
    auto tb = build_target_box(in, t);
    EXPECT_EQ(tb.group_char, 6u);
    EXPECT_EQ(tb.group_mid, 6u);
    EXPECT_EQ(tb.box.L(), 13u);
    EXPECT_EQ(tb.n_rho, 1);
    EXPECT_EQ(tb.J, static_cast<long>(std::floor(50 * std::pow(3.0, 0.35))));
    EXPECT_DOUBLE_EQ(tb.half_widths[0], 0.01);
    EXPECT_DOUBLE_EQ(tb.half_widths[6], 0.5 / tb.J);
    EXPECT_DOUBLE_EQ(tb.half_widths.back(), 0.25);
    EXPECT_EQ(tb.primes.back(), 3u);
    EXPECT_DOUBLE_EQ(tb.H, 217.0 * 2 * tb.J * 30);
    in.theta.pop_back();
    EXPECT_THROW(build_target_box(in, t), validation_error);
}

TEST(Equidist, EiValues)
{
    EXPECT_NEAR(log_ei(1.0), std::log(1.8951178163559368), 1e-13);
    EXPECT_NEAR(log_ei(10.0), std::log(2492.228976241877), 1e-13);
    for (double x : {20.0, 100.0, 700.0, 5000.0, 1e6}) {
        auto e = ei_upper(x);
        EXPECT_GE(e.log_value, log_ei(x));
        EXPECT_EQ(e.in_range, x >= std::exp(13.0));
    }
    EXPECT_THROW(ei_upper(0.5), validation_error);
}

TEST(Equidist, PerturbationZeroShift)
{
    auto t = sieve(400000);
    double M = 360000;
    std::vector<double> lam(t.pi(M), 0.3);
    auto c = phase_perturbation_bound(M, 1e-4, lam, lam, {0.0}, Character(3, 1), t);
    EXPECT_EQ(c.max_shift, 0.0);
    EXPECT_EQ(c.grid_max, 0.0);
    EXPECT_TRUE(c.passed);
    // integer shifts do not move the phases
    auto lam2 = lam;
    for (auto& v : lam2) v += 1;
    EXPECT_EQ(phase_perturbation_bound(M, 1e-4, lam, lam2, {0.0}, Character(3, 1), t).max_shift, 0.0);
    EXPECT_THROW(phase_perturbation_bound(1000, 1e-4, lam, lam, {0.0}, Character(3, 1), t), validation_error);
}

TEST(Equidist, TauScan)
{
    ScanTarget tg{{std::log(2.0) / kTwoPi, std::log(3.0) / kTwoPi}, {0.5, 0.5}, {0.1, 0.2}};
    auto r = tau_scan(tg, 0, 2000);
    KoksmaBox b{{0.4, 0.3}, {0.6, 0.7}, tg.alpha, {10, 10}};
    EXPECT_NEAR(r.measure, orbit_measure(b, 2000), 1e-8);
    for (std::size_t i = 1; i < r.hits.size(); ++i) EXPECT_GT(r.hits[i].lo, r.hits[i - 1].hi);
    EXPECT_DOUBLE_EQ(r.expected, 0.2 * 0.4);
    ScanTarget zero{{0.1}, {0.0}, {0.0}};
    EXPECT_TRUE(tau_scan(zero, 0, 10).hits.empty());
    EXPECT_THROW(tau_scan(tg, 0, 10, 1.0), validation_error);
}
