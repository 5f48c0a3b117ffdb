#pragma once

// Verification suites shared by the command-line tool and the acceptance runner.
// Every suite returns a Report; randomness comes from one seeded Rng per suite.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "euni.hpp"

namespace euni {

struct SuiteOptions {
    std::uint64_t max = 0;  // 0 selects the suite default
    std::size_t trials = 0;
    std::uint64_t seed = 1;
    std::vector<std::uint64_t> qs;
};

inline std::uint64_t or_default(std::uint64_t v, std::uint64_t d) { return v ? v : d; }

/// Shared sieve, grown on demand (EU_SIEVE_CACHE is honoured by load_primes).
inline const PrimeTable& shared_primes(std::uint64_t limit)
{
    static PrimeTable table;
    if (table.limit() < limit) table = load_primes(limit);
    return table;
}

inline json cjson(cplx z) { return json::array({z.real(), z.imag()}); }

// ---- primes ---------------------------------------------------------------------------

inline Report suite_pi_bound(const SuiteOptions& o)
{
    const auto hi = or_default(o.max, 10000000);
    return verify_pi_bound(shared_primes(hi), kPiThreshold, static_cast<double>(hi));
}

inline Report suite_theta_bound(const SuiteOptions& o)
{
    const auto hi = or_default(o.max, 10000000);
    return verify_theta_bound(shared_primes(hi), static_cast<double>(hi));
}

// ---- arithmetic sums ------------------------------------------------------------------

inline const std::vector<std::uint64_t> kDefaultModuli = {1, 2, 3, 5, 7, 11};

enum class ArithSum { harmonic, fractional, divisor, divisor_square };

inline const char* arith_name(ArithSum s)
{
    switch (s) {
    case ArithSum::harmonic: return "coprime-harmonic";
    case ArithSum::fractional: return "fractional-sum";
    case ArithSum::divisor: return "divisor-summatory";
    default: return "divisor-square";
    }
}

/// Exhaustive integers in [3, max] plus a 1000-point log grid on [3, 10 max].
inline Report suite_arith(const SuiteOptions& o, const std::vector<ArithSum>& which, std::string name)
{
    Report rep(std::move(name));
    const auto hi = or_default(o.max, 100000);
    const auto grid_hi = 10 * hi;
    const auto qs = o.qs.empty() ? kDefaultModuli : o.qs;
    ArithScanner scanner(grid_hi);
    const auto grid = log_grid(3, static_cast<double>(grid_hi), 1000);
    for (auto q : qs) {
        auto res = scanner.scan(q, 3, hi, grid);
        for (auto s : which) {
            const ScanStat& st = s == ArithSum::harmonic ? res.harmonic
                                 : s == ArithSum::fractional ? res.fractional
                                 : s == ArithSum::divisor ? res.divisor
                                                           : res.divisor_square;
            json in = {{"q", q}, {"exhaustive", json::array({3, hi})}, {"grid", json::array({3, grid_hi})}};
            auto& c = rep.record(std::string(arith_name(s)) + " q=" + std::to_string(q), st.failures == 0, st.worst_ratio, 1.0, in);
            (void)c;
            rep.notes()[std::string(arith_name(s)) + " q=" + std::to_string(q)] = to_json(st);
        }
    }
    return rep;
}

inline Report suite_delta(const SuiteOptions& o)
{
    Report rep("delta-error");
    const auto hi = or_default(o.max, 1000000);
    ArithScanner scanner(hi);
    auto st = scan_delta(scanner, static_cast<std::uint64_t>(kDeltaThreshold), hi);
    rep.record("|Delta(x)|<=0.397sqrt(x)", st.failures == 0, st.worst_ratio, 1.0,
               {{"range", json::array({kDeltaThreshold, hi})}, {"argmax", st.worst_x}});
    rep.notes()["scan"] = to_json(st);
    return rep;
}

// ---- mean values ----------------------------------------------------------------------

inline Report suite_meansquare(const SuiteOptions& o)
{
    Report rep("meansquare");
    Rng rng(o.seed);
    const std::size_t trials = o.trials ? o.trials : 500;
    double worst = 0;
    std::size_t fails = 0;
    for (std::size_t i = 0; i < trials; ++i) {
        const auto N = static_cast<std::size_t>(rng.integer(1, 50));
        const double T = rng.uniform(1.0, 10000.0);
        const double scale = std::exp(rng.uniform(-3, 3));
        std::vector<cplx> a(N);
        for (auto& v : a) v = scale * cplx(rng.normal(), rng.normal());
        auto c = dirichlet_meansquare(a, T);
        worst = std::max(worst, c.deviation() / c.allowed_deviation);
        if (!c.passed) ++fails;
    }
    rep.record("deviation<=837*sum(n|a_n|^2)", fails == 0, worst, 1.0, {{"trials", trials}, {"seed", o.seed}});
    rep.notes()["failures"] = fails;
    return rep;
}

/// Random polynomial / exponential targets on random discs.
inline Report suite_area_mean(const SuiteOptions& o)
{
    Report rep("area-mean");
    Rng rng(o.seed);
    const std::size_t trials = o.trials ? o.trials : 50;
    double worst = 0;
    std::size_t fails = 0;
    for (std::size_t i = 0; i < trials; ++i) {
        const int deg = static_cast<int>(rng.integer(0, 6));
        std::vector<cplx> c(deg + 1);
        for (auto& v : c) v = cplx(rng.normal(), rng.normal());
        const bool use_exp = rng.uniform() < 0.3;
        const double R = rng.uniform(0.05, 2.0), Rp = R * rng.uniform(0.05, 0.95);
        const cplx z0(rng.uniform(-1, 1), rng.uniform(-1, 1));
        auto f = [&](cplx z) {
            cplx acc = 0;
            for (int k = deg; k >= 0; --k) acc = acc * (z - z0) + c[k];
            return use_exp ? std::exp(acc * 0.2) : acc;
        };
        auto chk = area_mean_bound(f, z0, R, Rp);
        worst = std::max(worst, chk.max_inner / chk.bound);
        if (!chk.passed) ++fails;
    }
    rep.record("max|f|<=sqrt(H/pi)/(R-R')", fails == 0, worst, 1.0, {{"trials", trials}, {"seed", o.seed}});
    return rep;
}

// ---- L-functions --------------------------------------------------------------------

inline Report suite_l_truncation(const SuiteOptions& o)
{
    Report rep("l-truncation");
    Rng rng(o.seed);
    const std::size_t trials = o.trials ? o.trials : 200;
    const std::vector<std::uint64_t> qs = o.qs.empty() ? std::vector<std::uint64_t>{1, 3, 5, 7} : o.qs;
    double worst = 0;
    std::size_t fails = 0;
    json worst_in;
    for (std::size_t i = 0; i < trials; ++i) {
        const auto q = qs[static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(qs.size()) - 1))];
        const auto k = q == 1 ? 0 : static_cast<std::uint64_t>(rng.integer(0, static_cast<std::int64_t>(q) - 2));
        const Character chi = q == 1 ? Character::trivial() : Character(q, k);
        const cplx s(rng.uniform(0.6, 1.2), rng.uniform(-30.0, 30.0));
        const double xmin = std::max(1.0, std::fabs(s.imag()) / kPi);
        const double x = rng.uniform(xmin, std::max(xmin + 1, 400.0 / static_cast<double>(q)));
        auto tr = l_truncated(s, chi, x);
        const double diff = std::abs(tr.value - l_reference(s, chi));
        const double ratio = diff / tr.error_bound;
        if (ratio > worst) {
            worst = ratio;
            worst_in = {{"q", q}, {"k", k}, {"s", cjson(s)}, {"x", x}};
        }
        if (!(diff <= tr.error_bound)) ++fails;
    }
    rep.record("|l_truncated-L|<=error_bound", fails == 0, worst, 1.0, {{"trials", trials}, {"seed", o.seed}, {"worst", worst_in}});
    return rep;
}

/// hurwitz_from_characters against direct Euler-Maclaurin on a 50-point grid per (p, q).
inline Report suite_hurwitz(const SuiteOptions& o)
{
    Report rep("hurwitz");
    const auto qmax = or_default(o.max, 13);
    std::vector<cplx> grid;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 10; ++j) grid.emplace_back(0.6 + 0.35 * i, -30.0 + 60.0 * j / 9.0 + 0.37);
    double worst = 0;
    std::size_t pairs = 0;
    for (std::uint64_t q = 2; q <= qmax; ++q) {
        if (!is_prime(q)) continue;
        for (std::uint64_t p = 1; p < q; ++p) {
            ++pairs;
            for (cplx s : grid) {
                cplx a = hurwitz_from_characters(s, p, q);
                cplx b = hurwitz_zeta(s, static_cast<double>(p) / static_cast<double>(q));
                worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(b)));
            }
        }
    }
    rep.check("hurwitz-decomposition", worst, 1e-10, {{"q_max", qmax}, {"pairs", pairs}, {"grid_points", grid.size()}});
    return rep;
}

inline Report suite_orthogonality(const SuiteOptions& o)
{
    Report rep("orthogonality");
    const auto qmax = or_default(o.max, 31);
    for (std::uint64_t q = 2; q <= qmax; ++q)
        if (is_prime(q)) rep.merge(verify_orthogonality(q));
    return rep;
}

// ---- polydisc ---------------------------------------------------------------------------

inline Report suite_boundary_push(const SuiteOptions& o)
{
    Report rep("boundary-push");
    Rng rng(o.seed);
    const std::size_t trials = o.trials ? o.trials : 100;
    std::size_t fails = 0;
    double worst_res = 0;
    long worst_deficit = -1000;
    for (std::size_t i = 0; i < trials; ++i) {
        const auto K = rng.integer(1, 5);
        const auto L = rng.integer(K + 1, 12);
        Eigen::MatrixXcd A(K, L);
        for (Eigen::Index a = 0; a < K; ++a)
            for (Eigen::Index b = 0; b < L; ++b) A(a, b) = cplx(rng.normal(), rng.normal());
        std::vector<cplx> z(L);
        Eigen::VectorXcd zv(L);
        for (Eigen::Index b = 0; b < L; ++b) {
            z[b] = std::polar(rng.uniform(0.0, 0.95), rng.uniform(0.0, kTwoPi));
            zv(b) = z[b];
        }
        Eigen::VectorXcd bvec = A * zv;
        auto sol = push_to_boundary(A, bvec, z);
        const double res = sol.max_residual();
        const long deficit = static_cast<long>(L - K) - static_cast<long>(sol.unimodular_count);
        worst_res = std::max(worst_res, res);
        worst_deficit = std::max(worst_deficit, deficit);
        if (deficit > 0 || !(res <= 1e-8) || sol.max_modulus() > 1 + 1e-12) ++fails;
    }
    rep.check("max relative residual", worst_res, 1e-8, {{"trials", trials}, {"seed", o.seed}});
    rep.record("unimodular>=L-K", worst_deficit <= 0, static_cast<double>(worst_deficit), 0.0, {{"trials", trials}});
    rep.notes()["failing_systems"] = fails;
    return rep;
}

inline Report suite_taylor(const SuiteOptions& o)
{
    Report rep("taylor");
    Rng rng(o.seed);
    const std::size_t trials = o.trials ? o.trials : 50;
    double worst = 0;
    bool coeff_ok = true;
    for (std::size_t i = 0; i < trials; ++i) {
        const double R = rng.uniform(0.02, 0.24), r = R * rng.uniform(0.001, 0.9);
        const int K = static_cast<int>(rng.integer(0, 8));
        const cplx c0(rng.normal(), rng.normal()), c1(rng.normal(), rng.normal());
        const double k = rng.uniform(0.5, 20.0);
        auto f = [&](cplx s) { return c0 * std::exp(k * s) + c1 / (1.0 - s); };
        auto m = taylor_truncate(f, R, r, K);
        // evaluating f and the polynomial in double leaves a floor of a few ulps of M_f
        worst = std::max(worst, m.empirical_defect / (m.remainder_bound + 1e-14 * m.M_f));
        coeff_ok = coeff_ok && m.coefficient_bound_ok;
    }
    rep.check("taylor remainder", worst, 1.0, {{"trials", trials}, {"seed", o.seed}});
    rep.record("|a_k|<=M_f/R^k", coeff_ok, 0, 0, {{"trials", trials}});
    return rep;
}

/// Remainder of the linearized log factors over (lambda, rho] on |s| <= r grids.
inline Report suite_linearize(const SuiteOptions& o)
{
    Report rep("linearize");
    Rng rng(o.seed);
    const std::size_t trials = o.trials ? o.trials : 20;
    const double hi = static_cast<double>(or_default(o.max, 400000));
    const auto& t = shared_primes(static_cast<std::uint64_t>(hi));
    const auto grid = disc_grid(1e-4, 16);
    double worst = 0;
    std::size_t fails = 0;
    for (std::size_t i = 0; i < trials; ++i) {
        const double lambda = rng.uniform(kPiThreshold, hi);
        const double rho = rng.uniform(lambda, hi);
        const std::uint64_t qs[] = {1, 3, 5, 7};
        const auto q = qs[rng.integer(0, 3)];
        const Character chi = q == 1 ? Character::trivial() : Character(q, static_cast<std::uint64_t>(rng.integer(0, static_cast<std::int64_t>(q) - 2)));
        auto [a, b] = t.range(lambda, rho);
        std::vector<double> ph(b - a);
        for (auto& v : ph) v = rng.uniform();
        for (cplx s : grid) {
            auto lin = linearize_log_factors(s + 0.75, chi, lambda, rho, ph, t);
            const double ratio = std::abs(lin.exact_remainder) / lin.remainder_bound;
            worst = std::max(worst, ratio);
            if (!(ratio <= 1)) ++fails;
        }
    }
    rep.record("linearization remainder", fails == 0, worst, 1.0, {{"trials", trials}, {"seed", o.seed}, {"grid_points", grid.size()}});
    return rep;
}

inline Report suite_phase_perturbation(const SuiteOptions& o)
{
    Report rep("phase-perturbation");
    Rng rng(o.seed);
    const std::size_t trials = o.trials ? o.trials : 10;
    const double hi = static_cast<double>(or_default(o.max, 400000));
    const auto& t = shared_primes(static_cast<std::uint64_t>(hi));
    const auto grid = disc_grid(1e-4, 16);
    double worst = 0;
    std::size_t fails = 0;
    for (std::size_t i = 0; i < trials; ++i) {
        const double M = rng.uniform(kPiThreshold + 1, hi);
        const std::size_t n = t.pi(M);
        const std::uint64_t qs[] = {1, 3, 5, 7};
        const auto q = qs[rng.integer(0, 3)];
        const Character chi = q == 1 ? Character::trivial() : Character(q, static_cast<std::uint64_t>(rng.integer(0, static_cast<std::int64_t>(q) - 2)));
        const double shift = std::pow(10.0, rng.uniform(-6, -0.31));
        std::vector<double> lam(n), lam2(n);
        for (std::size_t j = 0; j < n; ++j) {
            lam[j] = rng.uniform();
            lam2[j] = lam[j] + shift * rng.uniform(-1, 1);
        }
        auto c = phase_perturbation_bound(M, 1e-4, lam, lam2, grid, chi, t);
        if (c.bound > 0) worst = std::max(worst, c.grid_max / c.bound);
        if (!c.passed) ++fails;
    }
    rep.record("phase perturbation", fails == 0, worst, 1.0, {{"trials", trials}, {"seed", o.seed}, {"grid_points", grid.size()}});
    return rep;
}

// ---- equidistribution ---------------------------------------------------------------------

inline Report suite_koksma(const SuiteOptions& o)
{
    Report rep("koksma");
    Rng rng(o.seed);
    const std::size_t boxes = o.trials ? o.trials : 50;
    const double Ts[] = {1e4, 1e5, 1e6};
    double worst = 0;
    std::size_t fails = 0, checks = 0;
    json worst_in;
    for (std::size_t i = 0; i < boxes; ++i) {
        KoksmaBox box;
        const std::size_t L = i % 2 == 0 ? 1 : 2;
        for (std::size_t l = 0; l < L; ++l) {
            const double p = L == 2 ? (l == 0 ? 2.0 : 3.0) : (i % 4 == 0 ? 2.0 : 3.0);
            const double a = rng.uniform(), w = rng.uniform(0.01, 0.9);
            box.a.push_back(a);
            box.b.push_back(a + w);
            box.alpha.push_back(std::log(p) / kTwoPi);
            box.H.push_back(100);
        }
        for (double T : Ts) {
            const auto kb = koksma_deviation_bound(box, T);
            const double dev = std::fabs(orbit_measure(box, T) / T - kb.volume);
            const double ratio = dev / kb.total();
            ++checks;
            if (ratio > worst) {
                worst = ratio;
                worst_in = {{"box", i}, {"L", L}, {"T", T}, {"deviation", dev}, {"bound", kb.total()}};
            }
            if (!(dev <= kb.total()) || kb.truncated) ++fails;
        }
    }
    rep.record("|T_alpha(U)/T-vol|<=koksma bound", fails == 0, worst, 1.0,
               {{"boxes", boxes}, {"checks", checks}, {"seed", o.seed}, {"worst", worst_in}});
    return rep;
}

inline Report suite_ei(const SuiteOptions&)
{
    Report rep("ei");
    const double xs[] = {std::exp(13.0), 1e6, 1e8, 1e12};
    for (double x : xs) {
        auto e = ei_upper(x);
        rep.check("log Ei(x)<=log bound x=" + std::to_string(x), log_ei(x), e.log_value, {{"x", x}, {"in_range", e.in_range}});
    }
    // outside the stated range the inequality still holds numerically; reported for information
    for (double x : {50.0, 700.0}) rep.notes()["log_ei_minus_bound x=" + std::to_string(static_cast<int>(x))] = log_ei(x) - ei_upper(x).log_value;
    return rep;
}

// ---- bound calculators --------------------------------------------------------------------

inline json budget_json(const ErrorBudget& b)
{
    return {{"taylor", b.taylor}, {"alpha", b.alpha},     {"tail", b.tail},   {"square", b.square},
            {"epsilon", b.epsilon}, {"weyl", b.weyl}, {"block", b.block}, {"total", b.total()}};
}

/// Fixed-parameter checks of the calculators (R=0.06, beta=0.039, r=1e-4, eps=1).
inline Report suite_calculators()
{
    Report rep("calculators");
    UniversalityParams p;
    const auto& t = shared_primes(20000000);
    // independent recomputation: log(e/(2R)) = 1 - log(2R)
    const double delta_oracle = (0.25 - 0.06 - 0.039) / (1.0 - std::log(0.12));
    const auto da = derive_delta_alpha(0.06, 0.039, 1e-4);
    rep.check("delta(0.06,0.039) vs recomputation", std::fabs(da.delta - delta_oracle), 1e-5, {{"delta", da.delta}});
    rep.check("delta(0.06,0.039)~0.04839", std::fabs(da.delta - 0.04839), 1e-5, {{"delta", da.delta}});
    rep.record("alpha(delta,1e-4)>0", da.alpha > 0, da.alpha, 0.0, {{"r", 1e-4}});
    const double rho_min = p.rho_min();
    const double rho_oracle = std::exp(std::log(355991.0) / (1 - 4 * delta_oracle));
    rep.check("rho_min vs direct power", std::fabs(rho_min / rho_oracle - 1), 1e-12, {{"rho_min", rho_min}});
    rep.check("rho_min~7.7e6 (1%)", std::fabs(rho_min / 7.7e6 - 1), 0.01, {{"rho_min", rho_min}});
    p.rho = 1e7;
    auto cd = density_claim(p, t);
    const double expect = std::log(p.eps1) - static_cast<double>(p.q - 1) * p.rho;
    rep.record("log-density==log eps1-(q-1)rho", cd.log_density == expect, cd.log_density, expect,
               {{"q", p.q}, {"rho", p.rho}, {"eps1", p.eps1}});
    rep.notes()["measure_bound_log_density"] = cd.measure.log_density;
    rep.notes()["measure_bound_dominates_claim"] = cd.dominates;
    auto cb = threshold_budget(p);
    rep.check("threshold budget: six terms<=eps/2 (+1e-6)", cb.six_sum, cb.half_eps + 1e-6,
              {{"eps", p.eps}, {"log_rho_threshold", cb.log_rho}, {"terms", budget_json(cb.budget)}});
    rep.notes()["budget_eps_crossover"] = threshold_budget_crossover(p);
    return rep;
}

/// Itemized validation and log-space bounds for one parameter file.
inline Report suite_bound(RunConfig cfg)
{
    Report rep("bound");
    json& n = rep.notes();
    n["mode"] = cfg.mode;
    std::optional<HurwitzSetup> setup;
    if (cfg.mode == "hurwitz") {
        const auto& p0 = cfg.params;
        setup = hurwitz_setup([&cfg](cplx z) { return cfg.g(z); }, cfg.hurwitz_p, p0.q, p0.eps, p0.r, p0.R);
        resolve(cfg, setup->target_max_R);
    } else {
        resolve(cfg);
    }
    const auto& p = cfg.params;
    n["rho"] = p.rho;
    n["V"] = p.V;
    n["max_g"] = p.g_max;
    const auto lim = static_cast<std::uint64_t>(std::min<double>(std::max(p.rho, 400000.0), 20000000.0));
    const auto& t = shared_primes(lim);
    const double d = p.delta();

    if (setup) {
        const auto& s = *setup;
        auto dens = hurwitz_density(s, p.rho, p.R, p.beta);
        rep.check("targets reconstruct g(s) q^{-s}", s.reconstruction_error, 1e-12 * std::max(1.0, s.target_max));
        rep.record("targets non-vanishing on |s|<=r", s.target_min > 0, -s.target_min, 0.0);
        rep.check("eps/(4 q^r max|g(s,chi_k)|)<=1", s.eps2, 1.0);
        rep.record("log rho>=log threshold", dens.rho_ok, dens.log_rho_min, std::log(p.rho), {{"log_space", true}});
        rep.record("rho^beta/(5 e delta^3 log^4 rho)>=max|g(s,chi_k)|+6", dens.M_ok, s.target_max_R + 6, p.M_ceiling());
        n["hurwitz"] = {{"p", s.p}, {"q", s.q}, {"C", s.C}, {"eps1", s.eps1}, {"eps2", s.eps2}, {"target_max", s.target_max},
                        {"target_max_R", s.target_max_R}, {"target_min", s.target_min}, {"reconstruction_error", s.reconstruction_error},
                        {"log_rho_threshold", dens.log_rho_min}, {"log_Q", dens.Q.log_Q},
                        {"q8_branch_dominates", dens.Q.branch2_dominates}, {"log_T_min", dens.log_T_min.str()},
                        {"log_density", dens.log_density}};
        return rep;
    }

    auto v = validate(p, t);
    for (const auto& c : v.constraints) rep.record(c.name, c.holds, c.lhs, c.rhs, {{"log_space", c.log_space}});
    n["delta"] = v.da.delta;
    n["alpha"] = v.da.alpha;
    n["r_boundary"] = v.da.r_boundary;
    n["rho_min"] = v.rho_min;
    n["M"] = v.M;
    n["M_density"] = v.M_density;
    n["M_ceiling"] = v.M_ceiling;
    n["M_note"] = v.m_note;
    n["pi_rho"] = {{"lo", v.pi_rho.lo}, {"hi", v.pi_rho.hi}, {"exact", v.pi_rho.exact}};
    n["Q"] = {{"value", v.Q.str()}, {"derived", v.Q_derived}};
    n["log_T_min"] = v.log_T_min.str();
    const bool shape_ok = p.R > 0 && p.R < 0.25 && p.beta + p.R > 0 && p.beta + p.R < 0.25 && p.r > 0 && p.r < p.R && p.eps > 0 && p.eps1 > 0;
    if (!shape_ok || !(p.rho > 1)) return rep;
    n["error_budget"] = budget_json(error_budget(p));
    auto m = measure_lower_bound(p, t);
    n["measure_lower_bound"] = {{"log_main", m.log_main}, {"log_loss", finite_or_string(m.log_loss)}, {"positive", m.positive},
                                {"log_density", finite_or_string(m.log_density)}};
    if (cfg.mode == "density") {
        const double log_thr = threshold_log_rho(p.r, d, p.eps);
        rep.record("2.006 eps1<=1", 2.006 * p.eps1 <= 1, 2.006 * p.eps1, 1.0);
        rep.record("log rho>=log threshold", std::log(p.rho) >= log_thr, log_thr, std::log(p.rho), {{"log_space", true}});
        rep.record("rho^beta/(5 e delta^3 log^4 rho)>=max|g|+6", p.M_ceiling() >= p.M_density(), p.M_density(), p.M_ceiling());
        auto a = a_of_r(p.r, d);
        n["a_of_r"] = {{"terms", a.terms}, {"value", a.value}, {"degenerate", a.degenerate}};
        n["log_rho_threshold"] = log_thr;
        auto cb = threshold_budget(p);
        n["budget_at_threshold"] = {{"six_sum", cb.six_sum}, {"half_eps", cb.half_eps}, {"holds", cb.holds}, {"terms", budget_json(cb.budget)}};
        UniversalityParams at = p;
        at.V = std::sqrt(p.rho / std::log(p.rho));
        auto six = error_budget(at).non_epsilon();
        rep.check("six non-eps terms<=eps/2 at rho", six, p.eps / 2);
        auto cd = density_claim(p, t);
        n["density_claim"] = {{"log_density", cd.log_density}, {"log_Q", cd.Q.log_Q}, {"q8_branch_dominates", cd.Q.branch2_dominates},
                                  {"measure_bound_log_density", finite_or_string(cd.measure.log_density)}};
        rep.record("measure bound >= 2 eps1 e^{-(q-1) rho}", cd.dominates, cd.log_claim, cd.measure.log_density,
                   {{"log_space", true}});
    }
    return rep;
}

// ---- pipeline ---------------------------------------------------------------------------------

struct PipelineCheck {
    PipelineResult result;
    double max_sum_mismatch = 0;  // pipeline log sums vs direct -sum log(1 - w)
    double defect_mismatch = 0;   // pipeline defect vs independently measured sup
};

/// Runs the pipeline and re-evaluates -sum log(1 - chi(p) e^{-2 pi i theta_p} p^{-s-3/4}) with std::log.
inline PipelineCheck run_pipeline_check(const AnalyticFn& g, const Character& chi, const UniversalityParams& params,
                                        const PipelineOptions& opt = {})
{
    const auto& t = shared_primes(static_cast<std::uint64_t>(std::ceil(params.rho)));
    PipelineCheck pc;
    pc.result = approximation_pipeline(g, chi, params, t, opt);
    const auto& r = pc.result;
    double sup = 0;
    for (std::size_t j = 0; j < r.grid.size(); ++j) {
        const cplx s = r.grid[j];
        cplx direct = 0;
        for (std::size_t i = 0; i < r.primes.size(); ++i) {
            const double p = static_cast<double>(r.primes[i]);
            const cplx w = chi(r.primes[i]) * std::polar(1.0, -kTwoPi * r.phases[i]) * std::pow(p, -(s + 0.75));
            direct -= std::log(1.0 - w);
        }
        pc.max_sum_mismatch = std::max(pc.max_sum_mismatch, std::abs(direct - r.log_sums[j]));
        sup = std::max(sup, std::abs(g(s) - direct));
    }
    pc.defect_mismatch = std::fabs(sup - r.empirical_defect);
    return pc;
}

inline Report suite_pipeline(const AnalyticFn& g, const Character& chi, const UniversalityParams& params, const PipelineOptions& opt = {})
{
    Report rep("pipeline");
    auto pc = run_pipeline_check(g, chi, params, opt);
    const auto& r = pc.result;
    json in = {{"rho", r.rho}, {"lambda", r.lambda}, {"K", r.K}, {"q", chi.modulus()}, {"k", chi.index()}, {"primes", r.primes.size()}};
    rep.check("log-Euler sum vs direct evaluation", pc.max_sum_mismatch, 1e-10, in);
    rep.check("empirical defect vs independent sup", pc.defect_mismatch, 1e-10, in);
    if (r.bound_asserted) rep.check("empirical defect<=theoretical bound", r.empirical_defect, r.theoretical.total(), in);
    json& n = rep.notes();
    n["empirical_defect"] = r.empirical_defect;
    n["theoretical"] = {{"taylor", r.theoretical.taylor}, {"alpha", r.theoretical.alpha}, {"tail", r.theoretical.tail},
                        {"square", r.theoretical.square}, {"total", r.theoretical.total()}, {"asserted", r.bound_asserted}};
    n["alternating"] = {{"grid_max", r.small.grid_max}, {"bound", r.small.bound}, {"passed", r.small.passed}};
    n["moment_status"] = r.moment_status;
    n["dyadic"] = {{"defect", r.dyadic_defect}, {"bound", r.dyadic_bound}, {"blocks", r.blocks.size()}};
    json cons = json::array();
    for (const auto& c : r.constraints) cons.push_back({{"name", c.name}, {"holds", c.holds}, {"lhs", c.lhs}, {"rhs", c.rhs}});
    n["constraints"] = cons;
    return rep;
}

// ---- registry -------------------------------------------------------------------------------

using SuiteFn = std::function<Report(const SuiteOptions&)>;

inline const std::map<std::string, SuiteFn>& verify_suites()
{
    static const std::map<std::string, SuiteFn> m = {
        {"pi-bound", suite_pi_bound},
        {"theta-bound", suite_theta_bound},
        {"arith", [](const SuiteOptions& o) { return suite_arith(o, {ArithSum::harmonic}, "arith"); }},
        {"fractional", [](const SuiteOptions& o) { return suite_arith(o, {ArithSum::fractional}, "fractional"); }},
        {"divisor", [](const SuiteOptions& o) { return suite_arith(o, {ArithSum::divisor}, "divisor"); }},
        {"divisor-square", [](const SuiteOptions& o) { return suite_arith(o, {ArithSum::divisor_square}, "divisor-square"); }},
        {"delta-error", suite_delta},
        {"meansquare", suite_meansquare},
        {"area-mean", suite_area_mean},
        {"l-truncation", suite_l_truncation},
        {"hurwitz", suite_hurwitz},
        {"orthogonality", suite_orthogonality},
        {"linearize", suite_linearize},
        {"phase-perturbation", suite_phase_perturbation},
        {"taylor", suite_taylor},
        {"boundary-push", suite_boundary_push},
        {"koksma", suite_koksma},
        {"ei", suite_ei},
        {"calculators", [](const SuiteOptions&) { return suite_calculators(); }},
    };
    return m;
}

}  // namespace euni
