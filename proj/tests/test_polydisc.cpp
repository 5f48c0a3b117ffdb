#include <gtest/gtest.h>

#include <cmath>

#include "euni/polydisc.hpp"
#include "euni/rng.hpp"

using namespace euni;

namespace {

const PrimeTable& primes()
{
    static PrimeTable t = sieve(2000000);
    return t;
}

Eigen::MatrixXcd random_matrix(Rng& rng, int m, int L)
{
    Eigen::MatrixXcd A(m, L);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < L; ++j) A(i, j) = cplx(rng.normal(), rng.normal());
    return A;
}

}  // namespace

TEST(Polydisc, PhaseHelpers)
{
    for (double th : {0.0, 0.125, 0.5, 0.9}) EXPECT_NEAR(phase_of(unit_phase(th)), th, 1e-15);
    EXPECT_EQ(phase_of(0.0), 0.0);
    auto g = disc_grid(1e-4, 16);
    EXPECT_EQ(g.size(), 25u);
    for (auto s : g) EXPECT_LE(std::abs(s), 1e-4 * (1 + 1e-15));
}

TEST(Polydisc, TaylorCoefficientsOfExp)
{
    auto m = taylor_truncate([](cplx s) { return std::exp(s); }, 1.0, 0.25, 10);
    double fact = 1;
    for (int k = 0; k <= 10; ++k) {
        if (k) fact *= k;
        EXPECT_NEAR(std::abs(m.a[k] - 1.0 / fact), 0.0, 1e-14);
    }
    EXPECT_TRUE(m.coefficient_bound_ok);
    EXPECT_LE(m.empirical_defect, m.remainder_bound);
    EXPECT_THROW(taylor_truncate([](cplx s) { return s; }, 0.1, 0.2, 3), validation_error);
}

TEST(Polydisc, TaylorRemainderWithinBound)
{
    Rng rng(31);
    for (int i = 0; i < 50; ++i) {
        double R = rng.uniform(0.01, 0.24), r = R * rng.uniform(0.05, 0.9);
        cplx c(rng.normal(), rng.normal());
        auto f = [c](cplx s) { return c / (1.3 - s) + std::exp(3.0 * s); };
        int K = static_cast<int>(rng.integer(0, 12));
        auto m = taylor_truncate(f, R, r, K);
        EXPECT_LE(m.empirical_defect, m.remainder_bound + 1e-14 * m.M_f);
    }
}

TEST(Polydisc, SolverSatisfiesConstraints)
{
    Rng rng(32);
    for (int i = 0; i < 30; ++i) {
        int m = static_cast<int>(rng.integer(1, 4)), L = static_cast<int>(rng.integer(m + 6, 40));
        auto A = random_matrix(rng, m, L);
        // target from a point inside the polydisc so the system is feasible
        Eigen::VectorXcd z0(L);
        for (int l = 0; l < L; ++l) z0(l) = std::polar(rng.uniform(0, 0.95), rng.uniform(0, kTwoPi));
        Eigen::VectorXcd b = A * z0;
        auto s = solve_polydisc_system(A, b);
        ASSERT_TRUE(s.feasible) << s.status;
        EXPECT_LE(s.max_modulus(), 1 + 1e-12);
        EXPECT_LE(s.max_residual(), 1e-9);
    }
}

TEST(Polydisc, SolverReportsInfeasible)
{
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Ones(1, 3);
    Eigen::VectorXcd b(1);
    b(0) = 10.0;  // |sum z_l| <= 3
    PolydiscSolveOptions opt;
    opt.max_iterations = 2000;
    auto s = solve_polydisc_system(A, b, opt);
    EXPECT_FALSE(s.feasible);
    EXPECT_THROW(solve_polydisc_system(Eigen::MatrixXcd::Ones(4, 3), Eigen::VectorXcd::Ones(4)), validation_error);
}

TEST(Polydisc, BoundaryPushLeavesAtMostKInterior)
{
    Rng rng(33);
    for (int i = 0; i < 30; ++i) {
        int K = static_cast<int>(rng.integer(1, 5)), L = static_cast<int>(rng.integer(K, 12));
        auto A = random_matrix(rng, K, L);
        std::vector<cplx> z(L);
        for (auto& v : z) v = std::polar(rng.uniform(0, 0.9), rng.uniform(0, kTwoPi));
        Eigen::VectorXcd b = A * Eigen::Map<Eigen::VectorXcd>(z.data(), L);
        auto s = push_to_boundary(A, b, z);
        EXPECT_GE(s.unimodular_count + static_cast<std::size_t>(K), static_cast<std::size_t>(L));
        EXPECT_LE(s.max_residual(), 1e-9);
        EXPECT_LE(s.max_modulus(), 1 + 1e-12);
    }
}

TEST(Polydisc, AlternatingPhaseGivesSigns)
{
    for (std::uint64_t q : {3, 5, 7}) {
        for (long k = 0; k < static_cast<long>(q) - 1; ++k) {
            Character chi(q, k);
            for (std::uint64_t n = 1; n <= 30; ++n) {
                std::uint64_t p = primes().primes()[n - 1];
                if (p == q) continue;
                cplx v = chi(p) * unit_phase(alternating_phase(chi, p, n));
                EXPECT_LT(std::abs(v - cplx(n % 2 ? -1.0 : 1.0, 0.0)), 1e-14);
            }
        }
    }
    EXPECT_THROW(alternating_phase(Character(3, 1), 3, 2), validation_error);
}

TEST(Polydisc, AlternatingPhasesSmallBound)
{
    auto a = alternating_phases(1e6, Character(3, 1), primes());
    EXPECT_TRUE(a.passed);
    EXPECT_LE(a.max_abs_A, 2);
    EXPECT_LE(a.grid_max, a.bound);
}

TEST(Polydisc, MomentMatrixLayout)
{
    std::vector<std::uint64_t> ps{5, 7};
    Character chi(3, 1);
    auto A = moment_matrix(ps, chi, 0.75, 2, true);
    ASSERT_EQ(A.rows(), 3);
    double l5 = std::log(5.0);
    cplx base = chi(5) * std::pow(5.0, -0.75);
    EXPECT_LT(std::abs(A(0, 0) - base), 1e-15);
    EXPECT_LT(std::abs(A(2, 0) - base * l5 * l5 / 2.0), 1e-14);
}

TEST(Polydisc, PipelineLogSumsMatchDirectSum)
{
    UniversalityParams p;
    p.rho = 200000;
    auto g = [](cplx s) { return 0.5 * s; };
    auto res = approximation_pipeline(g, Character(3, 1), p, primes());
    EXPECT_FALSE(res.strict_hypotheses);
    EXPECT_FALSE(res.bound_asserted);
    ASSERT_EQ(res.primes.size(), res.phases.size());
    for (std::size_t j = 0; j < res.grid.size(); j += 5) {
        cplx direct = 0;
        for (std::size_t i = 0; i < res.primes.size(); ++i)
            direct -= std::log(1.0 - Character(3, 1)(res.primes[i]) * unit_phase(res.phases[i]) *
                                          std::pow(static_cast<double>(res.primes[i]), -(res.grid[j] + 0.75)));
        EXPECT_LT(std::abs(direct - res.log_sums[j]), 1e-10);
    }
}

TEST(Polydisc, StrictPipelineNamesViolatedConstraint)
{
    UniversalityParams p;
    p.rho = 200000;
    PipelineOptions opt;
    opt.strict = true;
    try {
        approximation_pipeline([](cplx) { return cplx(0.0, 0.0); }, Character(3, 1), p, primes(), opt);
        FAIL() << "expected refusal";
    } catch (const validation_error& e) {
        EXPECT_NE(std::string(e.what()).find("constraint"), std::string::npos);
    }
}

TEST(Polydisc, ApproximationBoundDecreasesInRho)
{
    UniversalityParams p;
    double prev = INFINITY;
    for (double rho = 1e8; rho < 1e300; rho *= 1e20) {
        double b = approximation_bound(8, p.r, p.R, p.delta(), p.alpha(), rho).total();
        EXPECT_LT(b, prev);
        prev = b;
    }
}
