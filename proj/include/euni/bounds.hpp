#pragma once

// Parameter validation, error budget and log-space density bounds for the
// joint universality statement and its corollaries (including the Hurwitz case).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "arith.hpp"
#include "characters.hpp"
#include "magnitude.hpp"
#include "meanvalue.hpp"
#include "params.hpp"
#include "polydisc.hpp"
#include "primes.hpp"

namespace euni {

struct Constraint {
    std::string name;
    bool holds = false;
    double lhs = 0, rhs = 0;  // holds <=> lhs <= rhs (or < for strict ones); logs when log_space
    bool log_space = false;
    double slack() const { return rhs - lhs; }
};

/// pi(x) exactly from the table, else bracketed by x/log x < pi(x) <= Dusart-type bound.
struct PiBracket {
    double lo = 0, hi = 0;
    bool exact = false;
};

inline PiBracket pi_bracket(double x, const PrimeTable& t)
{
    PiBracket b;
    if (x <= static_cast<double>(t.limit())) {
        b.lo = b.hi = static_cast<double>(t.pi(x));
        b.exact = true;
        return b;
    }
    if (x < 355991) throw validation_error("pi_bracket: x beyond the table and below 355991");
    double L = std::log(x);
    b.lo = std::floor(x / L);
    b.hi = std::floor(x / L * (1 + 1 / L + 2.51 / (L * L)));
    return b;
}

struct ErrorBudget {
    double taylor = 0, alpha = 0, tail = 0, square = 0, epsilon = 0, weyl = 0, block = 0;
    double non_epsilon() const { return taylor + alpha + tail + square + weyl + block; }
    double total() const { return non_epsilon() + epsilon; }
};

/// Seven-term error bound; M defaults to max|g| + 1.5 + 3.42/(1-4R).
inline ErrorBudget error_budget(const UniversalityParams& p, double M = -1)
{
    if (M < 0) M = p.M();
    const double d = p.delta(), a = p.alpha(), L = std::log(p.rho), r = p.r;
    ErrorBudget b;
    b.taylor = M / ((p.R / r - 1) * std::exp(d * std::log(p.R / r) * L));
    b.alpha = 3 / (std::exp(a * L) * L);
    b.tail = 3 * L / std::exp((1 - 4 * d) * (0.75 - r) * L);
    b.square = 3 / (std::exp((1 - 4 * d) * (0.5 - 2 * r) * L) * L);
    b.epsilon = p.eps;
    b.weyl = 188 * std::exp((0.25 + r) * L) / (p.V * L);
    b.block = (3 - 4 * r) / (1 - 4 * r) * 16 / (std::exp((0.25 - r) * L) * std::sqrt(L));
    return b;
}

struct AofR {
    std::array<double, 5> terms{};
    double value = 0;
    bool degenerate = false;  // r at (or numerically at) 1/4
};

inline AofR a_of_r(double r, double delta)
{
    if (!(r > 0 && r <= 0.25)) throw validation_error("a_of_r: need 0 < r < 1/4");
    AofR a;
    const double u = (1 - 4 * delta) * (0.25 - r);
    const double root = std::sqrt(u / 2);
    a.terms[0] = u * u * u * u / (47920 * std::exp(1.0) * delta * delta * delta);
    a.terms[1] = 3;
    a.terms[2] = 4.5 * u;
    a.terms[3] = 188 * root;
    a.terms[4] = 16 * (3 - 4 * r) / (1 - 4 * r) * root;
    for (double t : a.terms) a.value += t;
    a.degenerate = 0.25 - r < 1e-12;
    return a;
}

/// log of (2 a(r)/eps)^{2/((1-4 delta)(1/4-r))}
inline double threshold_log_rho(double r, double delta, double eps)
{
    return 2 / ((1 - 4 * delta) * (0.25 - r)) * std::log(2 * a_of_r(r, delta).value / eps);
}

/// Six non-epsilon budget terms at the density threshold, with V = sqrt(rho/log rho)
/// and M = max|g| + 1.5 + 3.42/(1-4R).
struct ThresholdBudget {
    double log_rho = 0, rho = 0, M = 0, six_sum = 0, half_eps = 0;
    bool M_condition = false;  // rho^beta/(5 e delta^3 log^4 rho) >= max|g| + 6 at this rho
    ErrorBudget budget;
    bool holds = false;
    double slack() const { return half_eps - six_sum; }
};

inline ThresholdBudget threshold_budget(UniversalityParams p)
{
    ThresholdBudget c;
    c.log_rho = threshold_log_rho(p.r, p.delta(), p.eps);
    c.rho = std::exp(c.log_rho);
    p.rho = c.rho;
    p.V = std::sqrt(c.rho / c.log_rho);
    c.M = p.M();
    c.M_condition = p.M_ceiling() >= p.M_density();
    c.budget = error_budget(p, c.M);
    c.six_sum = c.budget.non_epsilon();
    c.half_eps = p.eps / 2;
    c.holds = c.six_sum <= c.half_eps;
    return c;
}

/// Smallest eps (on a bisection) for which the threshold budget inequality holds.
inline double threshold_budget_crossover(UniversalityParams p, double lo = 1e-6, double hi = 1.0)
{
    p.eps = hi;
    if (!threshold_budget(p).holds) return std::numeric_limits<double>::quiet_NaN();
    for (int i = 0; i < 200; ++i) {
        double mid = std::sqrt(lo * hi);
        p.eps = mid;
        (threshold_budget(p).holds ? hi : lo) = mid;
    }
    return hi;
}

/// log Q for Q^{1/4-r} = max{ c e^{2 rho}, exp((1/4-r) q^8) },
/// c = 1.02^2 (q-1)^2/((0.25-r)^{10} e^4 sqrt(2 e1)).
struct QChoice {
    double branch1 = 0, branch2 = 0;  // both are (1/4 - r) log Q candidates
    double log_Q = 0;
    bool branch2_dominates = false;
};

inline QChoice density_Q(std::uint64_t q, double r, double eps, double eps1, double rho)
{
    QChoice c;
    const double qm = static_cast<double>(q - 1), w = 0.25 - r;
    c.branch1 = 2 * rho + std::log(1.02 * 1.02 * qm * qm) - 10 * std::log(w) - 4 * std::log(eps) - 0.5 * std::log(2 * eps1);
    c.branch2 = w * std::pow(static_cast<double>(q), 8);
    c.branch2_dominates = c.branch2 > c.branch1;
    c.log_Q = std::max(c.branch1, c.branch2) / w;
    return c;
}

/// Smallest prime q whose q^8 branch overtakes the e^{2 rho} branch for fixed rho.
inline std::uint64_t density_Q_crossover(double r, double eps, double eps1, double rho)
{
    for (std::uint64_t q = 2; q < 100000; ++q)
        if (is_prime(q) && density_Q(q, r, eps, eps1, rho).branch2_dominates) return q;
    return 0;
}

/// The two lower thresholds for log T, as Magnitudes.
struct LogTThreshold {
    Magnitude branch1, branch2;
    Magnitude value() const { return branch1 < branch2 ? branch2 : branch1; }
};

inline LogTThreshold log_t_threshold(std::uint64_t q, double r, double eps1, double V, double rho, const Magnitude& Q)
{
    LogTThreshold t;
    const double qd = static_cast<double>(q);
    const double c1 = 1.02 * (0.75 + r) / (0.25 - r);
    Magnitude q872 = Q - Magnitude::from_double(872);
    t.branch1 = Magnitude::from_double(c1) * q872 + Magnitude::from_double(std::log(kPi));
    double tail = 434 * (1 / eps1 - (qd - 1)) * std::log(qd) + (q > 2 ? 217 * (qd - 2) * std::log(std::log(qd)) : 0.0);
    Magnitude inner = Magnitude::from_double(241 * (qd - 1)) * Q;
    if (tail >= 0) inner = inner + Magnitude::from_double(tail);
    else inner = inner - Magnitude::from_double(-tail);
    Magnitude ratio = Q / Magnitude::from_double(rho);
    t.branch2 = Magnitude::from_double(V * (qd - 1)) * Magnitude::pow(ratio, 0.5) * Q * inner;
    return t;
}

struct Validation {
    std::vector<Constraint> constraints;
    DeltaAlpha da;
    PiBracket pi_rho;
    double M = 0, M_density = 0, M_ceiling = 0, rho_min = 0;
    Magnitude Q, log_T_min;
    bool Q_derived = false, T_given = false;
    std::string m_note;

    bool all_hold() const
    {
        return std::all_of(constraints.begin(), constraints.end(), [](const Constraint& c) { return c.holds; });
    }
    const Constraint* first_failure() const
    {
        for (const auto& c : constraints)
            if (!c.holds) return &c;
        return nullptr;
    }
};

/// Evaluates every hypothesis of the joint universality statement.
/// When Q is not given it is taken from the density formula with V as given.
inline Validation validate(const UniversalityParams& p, const PrimeTable& t)
{
    Validation v;
    auto le = [&](std::string name, double lhs, double rhs, bool log_space = false) {
        v.constraints.push_back({std::move(name), lhs <= rhs, lhs, rhs, log_space});
    };
    auto lt = [&](std::string name, double lhs, double rhs, bool log_space = false) {
        v.constraints.push_back({std::move(name), lhs < rhs, lhs, rhs, log_space});
    };
    v.constraints.push_back({"q prime", is_prime(p.q), 0, 0, false});
    le("0 <= theta_q", 0, p.theta_q);
    lt("theta_q < 1", p.theta_q, 1);
    lt("0 < eps", 0, p.eps);
    le("eps <= 1", p.eps, 1);
    lt("0 < eps1", 0, p.eps1);
    le("1.003 eps1 <= 1", 1.003 * p.eps1, 1);
    lt("0 < r", 0, p.r);
    lt("r < R", p.r, p.R);
    lt("R < 1/4", p.R, 0.25);
    lt("0 < beta", 0, p.beta);
    lt("beta + R < 1/4", p.beta + p.R, 0.25);
    const bool shape_ok = p.R > 0 && p.R < 0.25 && p.beta + p.R > 0 && p.beta + p.R < 0.25 && p.r > 0;
    if (!shape_ok) return v;
    v.da = derive_delta_alpha(p.R, p.beta, p.r);
    lt("r < delta e^{-1-1/(4 delta)}", p.r, v.da.r_boundary);
    lt("0 < alpha", 0, v.da.alpha);
    v.rho_min = p.rho_min();
    lt("rho > 355991^{1/(1-4 delta)}", v.rho_min, p.rho);
    v.M = p.M();
    v.M_density = p.M_density();
    v.M_ceiling = p.rho > 1 ? p.M_ceiling() : 0;
    le("M <= rho^beta/(5 e delta^3 log^4 rho)", v.M, v.M_ceiling);
    v.m_note = "max|g| + 1.5 + 3.42/(1-4R) = " + std::to_string(v.M) + ", simplified form max|g| + 6 = " + std::to_string(v.M_density);
    le("50 <= V", 50, p.V);
    le("V <= rho", p.V, p.rho);
    if (p.Q) {
        v.Q = *p.Q;
    } else {
        v.Q = Magnitude::from_log(density_Q(p.q, p.r, p.eps, p.eps1, p.rho).log_Q);
        v.Q_derived = true;
    }
    const Magnitude logQ = v.Q.log();
    const double lq = logQ.fits_double() ? logQ.to_double() : std::numeric_limits<double>::infinity();
    lt("log rho < log Q", std::log(p.rho), lq, true);
    le("q^8 <= log Q", std::pow(static_cast<double>(p.q), 8), lq, true);
    if (p.rho <= static_cast<double>(t.limit()) || p.rho >= 355991) v.pi_rho = pi_bracket(p.rho, t);
    if (p.eps1 > 0 && p.V > 0 && p.rho > 0) {
        v.log_T_min = log_t_threshold(p.q, p.r, p.eps1, p.V, p.rho, v.Q).value();
        if (p.T) {
            v.T_given = true;
            Magnitude logT = p.T->log();
            bool ok = !(logT < v.log_T_min);
            // compare in log-log space so the numbers stay printable
            double a = v.log_T_min.log().fits_double() ? v.log_T_min.log().to_double() : INFINITY;
            double b = logT.is_positive() && logT.log().fits_double() ? logT.log().to_double() : (logT.is_positive() ? INFINITY : -INFINITY);
            v.constraints.push_back({"log T >= max{branch 1, branch 2} (log log scale)", ok, a, b, true});
        }
    }
    return v;
}

/// Lower bound for meas/T from
/// (T/2)(eps1 V^{-(q-1) pi(rho)} - 1.02 (q-1) phi^4/q^4 log^2 Q/(eps^2 (0.25-r)^5 Q^{0.25-r})).
struct MeasureLowerBound {
    double log_main = 0;  // log(eps1 V^{-(q-1) pi(rho)}), with the upper end of the pi bracket
    double log_loss = 0;  // log of the subtracted term (-inf if it underflows in log space)
    bool positive = false;
    double log_density = -std::numeric_limits<double>::infinity();  // log((main - loss)/2)
    PiBracket pi_rho;
};

inline MeasureLowerBound measure_lower_bound(std::uint64_t q, double r, double eps, double eps1, double V, const PiBracket& pi,
                                             const Magnitude& Q)
{
    MeasureLowerBound m;
    m.pi_rho = pi;
    const double qm = static_cast<double>(q - 1);
    m.log_main = std::log(eps1) - qm * pi.hi * std::log(V);
    const double phi = static_cast<double>(q - 1);  // q prime
    const Magnitude logQ = Q.log();
    if (logQ.fits_double()) {
        double lq = logQ.to_double();
        m.log_loss = (q > 1 ? std::log(1.02 * qm) + 4 * std::log(phi / static_cast<double>(q)) : -INFINITY)
                     + 2 * std::log(lq) - 2 * std::log(eps) - 5 * std::log(0.25 - r) - (0.25 - r) * lq;
    } else {
        m.log_loss = -std::numeric_limits<double>::infinity();
    }
    m.positive = m.log_loss < m.log_main;
    if (m.positive) m.log_density = m.log_main + std::log1p(-std::exp(m.log_loss - m.log_main)) - std::log(2.0);
    return m;
}

inline MeasureLowerBound measure_lower_bound(const UniversalityParams& p, const PrimeTable& t)
{
    Magnitude Q = p.Q ? *p.Q : Magnitude::from_log(density_Q(p.q, p.r, p.eps, p.eps1, p.rho).log_Q);
    return measure_lower_bound(p.q, p.r, p.eps, p.eps1, p.V, pi_bracket(p.rho, t), Q);
}

/// Density statement at rho: log eps1 - (q-1) rho, together with a
/// check that the measure bound (with V = sqrt(rho/log rho), eps1 doubled and Q from
/// the density formula) dominates 2 eps1 e^{-(q-1) rho} in log space.
struct DensityClaim {
    double log_density = 0;
    double log_claim = 0;     // log(2 eps1) - (q-1) rho
    MeasureLowerBound measure;
    QChoice Q;
    bool dominates = false;
};

inline DensityClaim density_claim(const UniversalityParams& p, const PrimeTable& t)
{
    DensityClaim c;
    const double qm = static_cast<double>(p.q - 1);
    c.log_density = std::log(p.eps1) - qm * p.rho;
    c.log_claim = std::log(2 * p.eps1) - qm * p.rho;
    c.Q = density_Q(p.q, p.r, p.eps, p.eps1, p.rho);
    const double V = std::sqrt(p.rho / std::log(p.rho));
    c.measure = measure_lower_bound(p.q, p.r, p.eps, 2 * p.eps1, V, pi_bracket(p.rho, t), Magnitude::from_log(c.Q.log_Q));
    // the measure bound counts [T, 2T]; the claim is measure >= 2 eps1 e^{-(q-1) rho} T
    c.dominates = c.measure.positive && c.measure.log_density >= c.log_claim;
    return c;
}

// ---- Hurwitz application ------------------------------------------------------------

struct HurwitzSetup {
    std::uint64_t p = 1, q = 3;
    double r = 1e-4, eps = 1;
    double g_max = 0;        // max_{|s|<=r} |g|
    double C = 0;
    double target_max = 0;   // max_k max_{|s|<=r} |g(s, chi_k)|
    double target_min = 0;   // min_k min over the disc grid
    double target_max_R = 0; // max_k max_{|s|<=0.06} |g(s, chi_k)|
    double eps1 = 0, eps2 = 0;
    double reconstruction_error = 0;  // max |(1/(q-1)) sum conj(chi_k(p)) g(s,chi_k) - g(s) q^{-s}|
    std::vector<Character> chars;
    std::function<cplx(cplx)> g;

    /// +C for the first (q-1)/2 characters, -C for the rest.
    double sign(std::size_t k) const { return k < (q - 1) / 2 ? 1.0 : -1.0; }
    cplx target(std::size_t k, cplx s) const
    {
        return chars[k](p) * (g(s) * std::exp(-s * std::log(static_cast<double>(q))) + sign(k) * C);
    }
};

inline HurwitzSetup hurwitz_setup(const std::function<cplx(cplx)>& g, std::uint64_t p, std::uint64_t q, double eps, double r = 1e-4,
                                        double R = 0.06)
{
    if (!is_prime(q) || q == 2) throw validation_error("hurwitz_setup: q must be an odd prime");
    if (p == 0 || std::gcd(p, q) != 1) throw validation_error("hurwitz_setup: need gcd(p, q) = 1");
    if (!(r > 0 && r <= R)) throw validation_error("hurwitz_setup: need 0 < r <= R");
    HurwitzSetup c;
    c.p = p;
    c.q = q;
    c.r = r;
    c.eps = eps;
    c.g = g;
    c.chars = enumerate_characters(q);
    const double qr = std::pow(static_cast<double>(q), r);
    c.g_max = circle_max(g, 0.0, r);
    c.C = c.g_max > 0 ? 1.1 * c.g_max * qr : 1.0;
    if (!(c.g_max < c.C / qr)) throw std::logic_error("hurwitz_setup: C does not dominate max|g|");
    c.target_min = std::numeric_limits<double>::infinity();
    const auto grid = disc_grid(r, 32);
    for (std::size_t k = 0; k < c.chars.size(); ++k) {
        auto f = [&c, k](cplx s) { return c.target(k, s); };
        c.target_max = std::max(c.target_max, circle_max(f, 0.0, r));
        c.target_max_R = std::max(c.target_max_R, circle_max(f, 0.0, R));
        for (cplx s : grid) c.target_min = std::min(c.target_min, std::abs(f(s)));
    }
    if (!(c.target_min > 0)) throw std::logic_error("hurwitz_setup: a target vanishes on the disc");
    for (cplx s : grid) {
        cplx acc = 0;
        for (std::size_t k = 0; k < c.chars.size(); ++k) acc += std::conj(c.chars[k](p)) * c.target(k, s);
        acc /= static_cast<double>(q - 1);
        c.reconstruction_error = std::max(c.reconstruction_error, std::abs(acc - g(s) * std::exp(-s * std::log(static_cast<double>(q)))));
    }
    const double denom = 4 * qr * c.target_max;
    if (eps / denom > 1) throw validation_error("hurwitz_setup: eps/(4 q^r max|g(s,chi_k)|) must be <= 1");
    c.eps1 = eps / (kPi * denom);
    c.eps2 = eps / denom;
    return c;
}

struct HurwitzDensity {
    double log_rho_min = 0;     // threshold on rho (uses eps)
    double rho = 0;
    bool rho_ok = false;
    bool M_ok = false;          // rho^beta/(5 e delta^3 log^4 rho) >= max|g(s,chi_k)| + 6 over |s| <= 0.06
    QChoice Q;
    Magnitude log_T_min;
    double log_density = 0;     // log 2 + log eps1 - rho
};

inline HurwitzDensity hurwitz_density(const HurwitzSetup& s, double rho, double R = 0.06, double beta = 0.039)
{
    HurwitzDensity d;
    UniversalityParams p;
    p.q = s.q;
    p.r = s.r;
    p.R = R;
    p.beta = beta;
    p.rho = rho;
    d.rho = rho;
    d.log_rho_min = threshold_log_rho(s.r, p.delta(), s.eps);
    d.rho_ok = std::log(rho) >= d.log_rho_min;
    d.M_ok = p.M_ceiling() >= s.target_max_R + 6;
    // the e^{2 rho} branch carries eps2 in place of eps
    d.Q = density_Q(s.q, s.r, s.eps2, s.eps1, rho);
    const double V = std::sqrt(rho / std::log(rho));
    d.log_T_min = log_t_threshold(s.q, s.r, s.eps1, V, rho, Magnitude::from_log(d.Q.log_Q)).value();
    d.log_density = std::log(2.0) + std::log(s.eps1) - rho;
    return d;
}

/// Smallest log rho >= lower with rho^beta/(5 e delta^3 log^4 rho) >= M_needed.
/// The ceiling decreases up to log rho = 4/beta and increases afterwards.
inline double minimal_log_rho(double beta, double delta, double M_needed, double lower)
{
    auto ok = [&](double L) { return beta * L - std::log(5 * std::exp(1.0) * delta * delta * delta) - 4 * std::log(L) >= std::log(M_needed); };
    double L = std::max(lower, 1.0);
    if (ok(L)) return L;
    double hi = std::max(L, 4 / beta);
    while (!ok(hi)) hi *= 2;
    double lo = std::max(L, 4 / beta);
    if (ok(lo)) return lo;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (ok(mid) ? hi : lo) = mid;
    }
    return hi;
}

}  // namespace euni
