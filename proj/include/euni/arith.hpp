#pragma once

// Coprime harmonic sums, fractional-part sums and divisor summatory functions
// with their explicit error terms (theta = 1/2, C = 0.397).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "characters.hpp"
#include "report.hpp"

namespace euni {

inline constexpr double kDivisorC = 0.397;
inline constexpr double kDivisorTheta = 0.5;
inline constexpr double kDeltaThreshold = 5560.0;

/// Arithmetic data of a modulus q >= 1.
struct ModulusInfo {
    std::uint64_t q = 1;
    std::uint64_t phi = 1;
    std::vector<std::uint64_t> primes;  // distinct prime divisors
    struct Divisor { std::uint64_t d; int mu; };
    std::vector<Divisor> squarefree;     // squarefree divisors with mu(d)

    explicit ModulusInfo(std::uint64_t q_) : q(q_)
    {
        if (q == 0) throw validation_error("modulus must be >= 1");
        primes = prime_factors(q);
        phi = q;
        for (auto p : primes) phi = phi / p * (p - 1);
        squarefree.push_back({1, 1});
        for (auto p : primes) {
            std::size_t n = squarefree.size();
            for (std::size_t i = 0; i < n; ++i) squarefree.push_back({squarefree[i].d * p, -squarefree[i].mu});
        }
    }

    int nu() const { return static_cast<int>(primes.size()); }
    double ratio() const { return static_cast<double>(phi) / static_cast<double>(q); }

    /// sum_{p|q} log p/(p-1)
    double log_sum() const
    {
        double s = 0;
        for (auto p : primes) s += std::log(static_cast<double>(p)) / static_cast<double>(p - 1);
        return s;
    }

    /// sum_{d|q} mu(d)^2 d^kappa
    double sigma_flat(double kappa) const
    {
        double s = 0;
        for (const auto& d : squarefree) s += std::pow(static_cast<double>(d.d), kappa);
        return s;
    }

    bool coprime(std::uint64_t n) const
    {
        for (auto p : primes)
            if (n % p == 0) return false;
        return true;
    }

    double c2() const { return 2 * kEulerGamma + 2 * log_sum() - 1; }
    double c3() const { double s = sigma_flat(-kDivisorTheta); return kDivisorC * s * s; }
    double c4() const { return q == 1 ? 0.0 : ratio() * std::ldexp(1.0, nu() + 1); }
};

struct DivisorSumResult {
    double x = 0;
    std::uint64_t q = 1;
    double exact = 0;
    double main_term = 0;
    double error_bound = 0;
    bool passed = false;

    double defect() const { return std::fabs(exact - main_term); }
    double ratio() const { return error_bound > 0 ? defect() / error_bound : (defect() == 0 ? 0.0 : INFINITY); }
};

inline std::uint64_t floor_u64(double x) { return x < 0 ? 0 : static_cast<std::uint64_t>(std::floor(x)); }

inline std::uint64_t isqrt(std::uint64_t n)
{
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

/// sum_{m<=n} tau(m) by the hyperbola method.
inline std::int64_t divisor_summatory_hyperbola(std::uint64_t n)
{
    std::uint64_t s = isqrt(n);
    std::int64_t acc = 0;
    for (std::uint64_t d = 1; d <= s; ++d) acc += static_cast<std::int64_t>(n / d);
    return 2 * acc - static_cast<std::int64_t>(s * s);
}

/// tau(n) for n <= limit by a linear sieve.
class DivisorTable {
public:
    explicit DivisorTable(std::uint64_t limit) : tau_(limit + 1, 0)
    {
        std::vector<std::uint8_t> expo(limit + 1, 0);
        std::vector<std::uint32_t> primes;
        if (limit >= 1) tau_[1] = 1;
        for (std::uint64_t i = 2; i <= limit; ++i) {
            if (tau_[i] == 0) { primes.push_back(static_cast<std::uint32_t>(i)); tau_[i] = 2; expo[i] = 1; }
            for (auto p : primes) {
                std::uint64_t m = i * p;
                if (m > limit) break;
                if (i % p == 0) {
                    expo[m] = expo[i] + 1;
                    tau_[m] = static_cast<std::uint16_t>(tau_[i] / (expo[i] + 1) * (expo[i] + 2));
                    break;
                }
                expo[m] = 1;
                tau_[m] = static_cast<std::uint16_t>(tau_[i] * 2);
            }
        }
    }

    std::uint64_t limit() const { return tau_.size() - 1; }
    unsigned tau(std::uint64_t n) const { return tau_[n]; }

private:
    std::vector<std::uint16_t> tau_;
};

// ---- coprime harmonic sum ---------------------------------------------------

inline double coprime_harmonic_main(double x, const ModulusInfo& m)
{
    return m.ratio() * (std::log(x) + kEulerGamma + m.log_sum());
}

inline double coprime_harmonic_bound(double x, const ModulusInfo& m) { return std::ldexp(1.0, m.nu()) / x; }

inline DivisorSumResult coprime_harmonic(double x, std::uint64_t q)
{
    if (x < 1) throw validation_error("coprime_harmonic: x must be >= 1");
    ModulusInfo m(q);
    long double acc = 0;
    std::uint64_t n = floor_u64(x);
    for (std::uint64_t k = n; k >= 1; --k)
        if (m.coprime(k)) acc += 1.0L / static_cast<long double>(k);
    DivisorSumResult r;
    r.x = x;
    r.q = q;
    r.exact = static_cast<double>(acc);
    r.main_term = coprime_harmonic_main(x, m);
    r.error_bound = coprime_harmonic_bound(x, m);
    r.passed = r.defect() <= r.error_bound;
    return r;
}

// ---- Delta(x) ---------------------------------------------------------------

struct DeltaError {
    double x = 0;
    std::int64_t D = 0;   // sum_{n<=x} tau(n)
    double delta = 0;     // D - x log x - (2 gamma - 1) x
    double bound = 0;     // 0.397 sqrt(x)
    bool checked = false; // x >= 5560
    bool passed = true;
};

inline double delta_value(double x, std::int64_t D)
{
    long double X = x;
    return static_cast<double>(static_cast<long double>(D) - X * std::log(X) - (2.0L * kEulerGamma - 1.0L) * X);
}

inline DeltaError delta_error(double x)
{
    if (x < 1) throw validation_error("delta_error: x must be >= 1");
    DeltaError e;
    e.x = x;
    e.D = divisor_summatory_hyperbola(floor_u64(x));
    e.delta = delta_value(x, e.D);
    e.bound = kDivisorC * std::sqrt(x);
    e.checked = x >= kDeltaThreshold;
    e.passed = !e.checked || std::fabs(e.delta) <= e.bound;
    return e;
}

// ---- fractional-part sum ----------------------------------------------------

inline double fractional_main(double x, const ModulusInfo& m)
{
    double r = m.ratio();
    return r * r * (1 - kEulerGamma - m.log_sum()) * x;
}

inline double fractional_bound(double x, const ModulusInfo& m)
{
    double s = m.sigma_flat(-kDivisorTheta);
    return kDivisorC * s * s * std::pow(x, kDivisorTheta) + m.ratio() * std::ldexp(1.0, m.nu());
}

/// S = sum_{d|q} mu(d) sum_{n<=x,(n,q)=1} {x/(dn)}, by the direct double sum.
inline DivisorSumResult fractional_sum(double x, std::uint64_t q)
{
    if (x < 3) throw validation_error("fractional_sum: x must be >= 3");
    ModulusInfo m(q);
    std::uint64_t n = floor_u64(x);
    long double acc = 0;
    for (const auto& d : m.squarefree) {
        long double inner = 0;
        for (std::uint64_t k = 1; k <= n; ++k) {
            if (!m.coprime(k)) continue;
            long double v = static_cast<long double>(x) / (static_cast<long double>(d.d) * k);
            inner += v - std::floor(v);
        }
        acc += d.mu * inner;
    }
    DivisorSumResult r;
    r.x = x;
    r.q = q;
    r.exact = static_cast<double>(acc);
    r.main_term = fractional_main(x, m);
    r.error_bound = fractional_bound(x, m);
    r.passed = r.defect() <= r.error_bound;
    return r;
}

// ---- D(x,q) -------------------------------------------------------------------

inline double divisor_main(double x, const ModulusInfo& m)
{
    double f = m.ratio() * m.ratio();
    return f * x * std::log(x) + f * m.c2() * x;
}

inline double divisor_bound(double x, const ModulusInfo& m) { return m.c3() * std::pow(x, kDivisorTheta) + m.c4(); }

/// D(x,q) = sum_{d,e|q} mu(d) mu(e) D(x/(de)), each D by the hyperbola method.
inline std::int64_t coprime_divisor_count(double x, const ModulusInfo& m)
{
    std::uint64_t n = floor_u64(x);
    std::int64_t acc = 0;
    for (const auto& d : m.squarefree)
        for (const auto& e : m.squarefree) acc += d.mu * e.mu * divisor_summatory_hyperbola(n / (d.d * e.d));
    return acc;
}

inline DivisorSumResult divisor_summatory(double x, std::uint64_t q)
{
    if (x < 1) throw validation_error("divisor_summatory: x must be >= 1");
    ModulusInfo m(q);
    std::uint64_t n = floor_u64(x);
    DivisorTable t(n);
    std::int64_t acc = 0;
    for (std::uint64_t k = 1; k <= n; ++k)
        if (m.coprime(k)) acc += t.tau(k);
    DivisorSumResult r;
    r.x = x;
    r.q = q;
    r.exact = static_cast<double>(acc);
    r.main_term = divisor_main(x, m);
    r.error_bound = divisor_bound(x, m);
    r.passed = r.defect() <= r.error_bound;
    return r;
}

// ---- D_2(x,q) -----------------------------------------------------------------

/// Right-hand side of the seven-term upper bound for D_2(x,q).
inline double divisor_square_bound(double x, const ModulusInfo& m)
{
    const double th = kDivisorTheta;
    double F = m.ratio() * m.ratio();
    double c2 = m.c2(), c3 = m.c3(), c4 = m.c4();
    double L = std::log(x), xt = std::pow(x, th);
    double t1 = F * F * x * L * L * L / 6;
    double t2 = 0.5 * F * F * (1 + 2 * c2) * x * L * L;
    double t3 = (2 * c2 * F + c2 * c2 * F + 2 / (1 - th) * c3 + 2 * c4) * F * x * L;
    double t4 = (c2 * c2 * F + 2 / (1 - th) * c2 * c3 + 2 * c2 * c4 - 2 * th / ((1 - th) * (1 - th)) * c3 * c3) * F * x;
    double t5 = th * c3 * c3 * xt * L;
    double t6 = ((2 * th - 1) / ((1 - th) * (1 - th)) * c3 * F - 2 * th / (1 - th) * c2 * c3 * F + c3 * c3 + 2 * c3 * c4) * xt;
    double t7 = c3 * F / ((1 - th) * (1 - th)) + c4 * c4;
    return t1 + t2 + t3 + t4 + t5 + t6 + t7;
}

/// Whether x > max(exp(q^8), 355991), evaluated without overflow.
inline bool d2_simplified_hypothesis(double x, std::uint64_t q)
{
    double q8 = std::pow(static_cast<double>(q), 8.0);
    return x > 355991.0 && std::log(x) > q8;
}

struct DivisorSquareResult : DivisorSumResult {
    bool simplified_hypothesis = false;  // x > max(exp(q^8), 355991)
    double simplified_bound = 0;         // 0.24 phi^4/q^4 x log^3 x
    bool simplified_passed = true;       // vacuous when the hypothesis fails
};

inline DivisorSquareResult divisor_square_sum(double x, std::uint64_t q)
{
    if (x < 1) throw validation_error("divisor_square_sum: x must be >= 1");
    ModulusInfo m(q);
    std::uint64_t n = floor_u64(x);
    DivisorTable t(n);
    std::int64_t acc = 0;
    for (std::uint64_t k = 1; k <= n; ++k)
        if (m.coprime(k)) acc += static_cast<std::int64_t>(t.tau(k)) * t.tau(k);
    DivisorSquareResult r;
    r.x = x;
    r.q = q;
    r.exact = static_cast<double>(acc);
    r.main_term = 0;  // one-sided bound
    r.error_bound = divisor_square_bound(x, m);
    r.passed = r.exact <= r.error_bound;
    r.simplified_hypothesis = d2_simplified_hypothesis(x, q);
    double F = m.ratio() * m.ratio();
    double L = std::log(x);
    r.simplified_bound = 0.24 * F * F * x * L * L * L;
    if (r.simplified_hypothesis) r.simplified_passed = r.exact <= r.simplified_bound;
    return r;
}

// ---- Moebius identities -------------------------------------------------------

/// Checks, in exact integer arithmetic,
///   sum_{d|q} mu(d)/d = phi(q)/q  and
///   sum_{d|q} mu(d) log d/d = -(phi(q)/q) sum_{p|q} log p/(p-1)
/// (the second compared coefficient-wise in the basis {log p}).
inline bool mobius_identities_exact(std::uint64_t q)
{
    ModulusInfo m(q);
    std::int64_t lhs = 0;
    for (const auto& d : m.squarefree) lhs += d.mu * static_cast<std::int64_t>(q / d.d);
    if (lhs != static_cast<std::int64_t>(m.phi)) return false;
    for (auto p : m.primes) {
        std::int64_t coef = 0;  // q * (coefficient of log p)
        for (const auto& d : m.squarefree)
            if (d.d % p == 0) coef += d.mu * static_cast<std::int64_t>(q / d.d);
        if (m.phi % (p - 1) != 0) return false;
        if (coef != -static_cast<std::int64_t>(m.phi / (p - 1))) return false;
    }
    return true;
}

// ---- scanner ------------------------------------------------------------------

/// Statistics for one inequality over a scan.
struct ScanStat {
    std::size_t points = 0;
    std::size_t failures = 0;
    double worst_ratio = 0;
    double worst_x = 0;
    std::vector<double> failing_x;    // first few
    std::size_t failures_above = 0;   // failures with x >= threshold
    double worst_ratio_above = 0;     // over x >= threshold

    void add(double x, double ratio, double threshold)
    {
        ++points;
        bool fail = !(ratio <= 1.0);
        if (ratio > worst_ratio || std::isnan(ratio)) { worst_ratio = ratio; worst_x = x; }
        if (x >= threshold) {
            worst_ratio_above = std::max(worst_ratio_above, ratio);
            if (fail) ++failures_above;
        }
        if (fail) {
            ++failures;
            if (failing_x.size() < 8) failing_x.push_back(x);
        }
    }
};

struct ArithScanResult {
    std::uint64_t q = 1;
    ScanStat harmonic, fractional, divisor, divisor_square;
};

inline json to_json(const ScanStat& s)
{
    return {{"points", s.points}, {"failures", s.failures}, {"worst_ratio", finite_or_string(s.worst_ratio)},
            {"worst_x", s.worst_x}, {"failing_x", s.failing_x}, {"failures_x_ge_5560", s.failures_above},
            {"worst_ratio_x_ge_5560", finite_or_string(s.worst_ratio_above)}};
}

/// Evaluates all four sums along every integer in [lo, exhaustive_hi] and at
/// the extra (real) points, in one pass over n.  Exact sides are integers or
/// long-double prefix sums; the fractional sum uses
///   S = (phi/q) x H_q(x) - sum_{d,e|q} mu(d) mu(e) D(floor(x)/(de)).
class ArithScanner {
public:
    explicit ArithScanner(std::uint64_t limit) : limit_(limit), tau_(limit), D_(limit + 1, 0)
    {
        for (std::uint64_t n = 1; n <= limit; ++n) D_[n] = D_[n - 1] + tau_.tau(n);
    }

    std::uint64_t limit() const { return limit_; }
    std::int64_t D(std::uint64_t n) const { return D_[n]; }
    const DivisorTable& tau() const { return tau_; }

    ArithScanResult scan(std::uint64_t q, std::uint64_t lo, std::uint64_t exhaustive_hi, std::vector<double> extra) const
    {
        ModulusInfo m(q);
        std::sort(extra.begin(), extra.end());
        std::size_t ei = 0;
        while (ei < extra.size() && extra[ei] < static_cast<double>(lo)) ++ei;
        std::uint64_t top = exhaustive_hi;
        if (!extra.empty()) top = std::max<std::uint64_t>(top, floor_u64(extra.back()));
        if (top > limit_) throw validation_error("ArithScanner: range exceeds table");

        ArithScanResult res;
        res.q = q;
        long double H = 0;
        std::int64_t Dq = 0, D2q = 0;
        double fm = m.ratio();
        auto eval = [&](double x) {
            std::uint64_t n = floor_u64(x);
            double h = static_cast<double>(H);
            res.harmonic.add(x, std::fabs(h - coprime_harmonic_main(x, m)) / coprime_harmonic_bound(x, m), kDeltaThreshold);
            std::int64_t fl = 0;
            for (const auto& d : m.squarefree)
                for (const auto& e : m.squarefree) fl += d.mu * e.mu * D_[n / (d.d * e.d)];
            long double S = static_cast<long double>(fm) * x * H - fl;
            res.fractional.add(x, std::fabs(static_cast<double>(S) - fractional_main(x, m)) / fractional_bound(x, m), kDeltaThreshold);
            res.divisor.add(x, std::fabs(static_cast<double>(Dq) - divisor_main(x, m)) / divisor_bound(x, m), kDeltaThreshold);
            res.divisor_square.add(x, static_cast<double>(D2q) / divisor_square_bound(x, m), kDeltaThreshold);
        };
        for (std::uint64_t n = 1; n <= top; ++n) {
            if (m.coprime(n)) {
                H += 1.0L / static_cast<long double>(n);
                Dq += tau_.tau(n);
                D2q += static_cast<std::int64_t>(tau_.tau(n)) * tau_.tau(n);
            }
            if (n >= lo && n <= exhaustive_hi) eval(static_cast<double>(n));
            while (ei < extra.size() && floor_u64(extra[ei]) == n) {
                if (!(n >= lo && n <= exhaustive_hi && extra[ei] == static_cast<double>(n))) eval(extra[ei]);
                ++ei;
            }
        }
        return res;
    }

private:
    std::uint64_t limit_;
    DivisorTable tau_;
    std::vector<std::int64_t> D_;
};

/// Geometric grid of `count` points in [lo, hi].
inline std::vector<double> log_grid(double lo, double hi, std::size_t count)
{
    std::vector<double> g;
    if (count == 0) return g;
    if (count == 1) return {lo};
    double a = std::log(lo), b = std::log(hi);
    for (std::size_t i = 0; i < count; ++i) g.push_back(std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1)));
    g.back() = hi;
    return g;
}

/// |Delta(n)| <= 0.397 sqrt(n) at every integer n in [lo, hi] (table-backed).
inline ScanStat scan_delta(const ArithScanner& s, std::uint64_t lo, std::uint64_t hi)
{
    ScanStat st;
    for (std::uint64_t n = lo; n <= hi; ++n) {
        double x = static_cast<double>(n);
        st.add(x, std::fabs(delta_value(x, s.D(n))) / (kDivisorC * std::sqrt(x)), kDeltaThreshold);
    }
    return st;
}

}  // namespace euni
