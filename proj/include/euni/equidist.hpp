#pragma once

// Koksma-type bounds for the orbit t*alpha mod 1, exact orbit measures,
// the target box of the joint approximation step, the Ei inequality,
// the phase-perturbation bound and a certified tau scanner.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "characters.hpp"
#include "lfunc.hpp"
#include "magnitude.hpp"
#include "polydisc.hpp"
#include "primes.hpp"
#include "report.hpp"

namespace euni {

struct KoksmaBox {
    std::vector<double> a, b, alpha, H;

    std::size_t L() const { return a.size(); }
    double width(std::size_t l) const { return b[l] - a[l]; }

    void validate() const
    {
        const std::size_t n = a.size();
        if (n == 0) throw validation_error("KoksmaBox: empty box");
        if (b.size() != n || alpha.size() != n || H.size() != n) throw validation_error("KoksmaBox: inconsistent dimensions");
        for (std::size_t l = 0; l < n; ++l) {
            if (!(a[l] < b[l] && b[l] <= a[l] + 1)) throw validation_error("KoksmaBox: need a_l < b_l <= a_l + 1");
            if (!(H[l] > 1)) throw validation_error("KoksmaBox: need H_l > 1");
        }
    }
};

/// gamma_{h,l}
inline double koksma_gamma(const KoksmaBox& box, std::size_t l, long h)
{
    double g0 = box.width(l) + 75.0 / box.H[l];
    if (h == 0) return g0;
    return std::min(g0, 30.0 / std::fabs(static_cast<double>(h)));
}

/// Largest |h_l| in the primed sum: floor(H_l (1 + min(log H_l, log L))).
inline long koksma_h_range(const KoksmaBox& box, std::size_t l)
{
    double L = static_cast<double>(box.L());
    return static_cast<long>(std::floor(box.H[l] * (1 + std::min(std::log(box.H[l]), std::log(L)))));
}

struct KoksmaOptions {
    std::size_t max_exact_dim = 3;
    long max_exact_range = 10000;
    long truncated_range = 50;  // per-coordinate cap in truncated mode
};

struct KoksmaBound {
    double volume = 0;      // prod (b_l - a_l)
    double smoothing = 0;   // volume (prod(1 + 75/(H_l w_l)) - 1)
    double primed_sum = 0;  // (1/T) sum' min(|pi alpha.h|^{-1}, T) prod gamma
    double remainder = 0;   // truncated mode: upper bound for the omitted terms
    bool truncated = false;
    std::size_t terms = 0;
    double total() const { return smoothing + primed_sum + remainder; }
};

/// sum_{|h| <= n} gamma_{h,l}
inline double gamma_line_sum(const KoksmaBox& box, std::size_t l, long n)
{
    double g0 = koksma_gamma(box, l, 0);
    long cross = static_cast<long>(std::floor(30.0 / g0));  // for |h| <= cross, gamma = g0
    long c = std::min(cross, n);
    double s = g0 * (1 + 2.0 * c);
    if (n > c) {
        // 2 * 30 * (H_n - H_c)
        double tail = 0;
        if (n - c <= 10000000) {
            for (long h = c + 1; h <= n; ++h) tail += 1.0 / h;
        } else {
            tail = std::log(static_cast<double>(n) / c) + 1.0 / (2.0 * c);
        }
        s += 60 * tail;
    }
    return s;
}

inline KoksmaBound koksma_deviation_bound(const KoksmaBox& box, double T, const KoksmaOptions& opt = {})
{
    box.validate();
    if (!(T > 0)) throw validation_error("koksma_deviation_bound: need T > 0");
    const std::size_t L = box.L();
    KoksmaBound kb;
    double prod1 = 1;
    kb.volume = 1;
    for (std::size_t l = 0; l < L; ++l) {
        kb.volume *= box.width(l);
        prod1 *= 1 + 75.0 / (box.H[l] * box.width(l));
    }
    kb.smoothing = kb.volume * (prod1 - 1);

    std::vector<long> range(L), cap(L);
    bool exact = L <= opt.max_exact_dim;
    for (std::size_t l = 0; l < L; ++l) {
        range[l] = koksma_h_range(box, l);
        if (range[l] > opt.max_exact_range) exact = false;
    }
    kb.truncated = !exact;
    for (std::size_t l = 0; l < L; ++l) cap[l] = exact ? range[l] : std::min(range[l], opt.truncated_range);

    // odometer over h in prod [-cap_l, cap_l]
    std::vector<long> h(L);
    for (std::size_t l = 0; l < L; ++l) h[l] = -cap[l];
    long double acc = 0;
    for (;;) {
        bool zero = true;
        double dot = 0, g = 1;
        for (std::size_t l = 0; l < L; ++l) {
            if (h[l] != 0) zero = false;
            dot += box.alpha[l] * static_cast<double>(h[l]);
            g *= koksma_gamma(box, l, h[l]);
        }
        if (!zero) {
            double d = std::fabs(kPi * dot);
            double m = d > 0 ? std::min(1.0 / d, T) : T;
            acc += m * g;
            ++kb.terms;
        }
        std::size_t l = 0;
        for (; l < L; ++l) {
            if (++h[l] <= cap[l]) break;
            h[l] = -cap[l];
        }
        if (l == L) break;
    }
    kb.primed_sum = static_cast<double>(acc / T);
    if (kb.truncated) {
        // every omitted term is at most prod gamma (the min(., T)/T factor is <= 1)
        double full = 1, part = 1;
        for (std::size_t l = 0; l < L; ++l) {
            full *= gamma_line_sum(box, l, range[l]);
            part *= gamma_line_sum(box, l, cap[l]);
        }
        kb.remainder = std::max(0.0, full - part);
    }
    return kb;
}

// ---- exact orbit measures ---------------------------------------------------------

/// Antiderivative of the indicator of {u : frac(u) in [0, w]}, zero at 0.
inline long double comb_measure(long double u, long double w)
{
    long double f = std::floor(u);
    return f * w + std::min(u - f, w);
}

/// Measure of {t in (0,T) : frac(t alpha) in [a, b] mod 1}, for alpha > 0, 0 < b - a <= 1.
inline double orbit_measure_1d(double alpha, double a, double b, double T)
{
    if (!(alpha > 0)) throw validation_error("orbit_measure_1d: alpha must be positive");
    long double w = static_cast<long double>(b) - a;
    if (w >= 1) return T;
    long double ap = a - std::floor(static_cast<long double>(a));
    long double Y = static_cast<long double>(T) * alpha;
    return static_cast<double>((comb_measure(Y - ap, w) - comb_measure(-ap, w)) / alpha);
}

struct Interval {
    double lo, hi;
};

/// {t in [t0, t1] : frac(t alpha) in [a, b] mod 1} as sorted disjoint intervals.
inline std::vector<Interval> orbit_intervals(double alpha, double a, double b, double t0, double t1)
{
    std::vector<Interval> out;
    double w = b - a;
    if (w >= 1) { out.push_back({t0, t1}); return out; }
    if (!(w > 0) || !(t1 > t0)) return out;
    double ap = a - std::floor(a);
    long k0 = static_cast<long>(std::floor(t0 * alpha - ap)) - 1;
    long k1 = static_cast<long>(std::ceil(t1 * alpha - ap)) + 1;
    for (long k = k0; k <= k1; ++k) {
        double lo = (k + ap) / alpha, hi = (k + ap + w) / alpha;
        lo = std::max(lo, t0);
        hi = std::min(hi, t1);
        if (hi > lo) out.push_back({lo, hi});
    }
    return out;
}

inline std::vector<Interval> intersect(const std::vector<Interval>& x, const std::vector<Interval>& y)
{
    std::vector<Interval> out;
    std::size_t i = 0, j = 0;
    while (i < x.size() && j < y.size()) {
        double lo = std::max(x[i].lo, y[j].lo), hi = std::min(x[i].hi, y[j].hi);
        if (hi > lo) out.push_back({lo, hi});
        if (x[i].hi < y[j].hi) ++i;
        else ++j;
    }
    return out;
}

inline double total_length(const std::vector<Interval>& v)
{
    long double s = 0;
    for (const auto& iv : v) s += static_cast<long double>(iv.hi) - iv.lo;
    return static_cast<double>(s);
}

/// T_alpha(U) for a box of dimension 1 or 2, by exact interval arithmetic.
inline double orbit_measure(const KoksmaBox& box, double T)
{
    box.validate();
    if (box.L() == 1) return orbit_measure_1d(box.alpha[0], box.a[0], box.b[0], T);
    std::vector<Interval> cur = orbit_intervals(box.alpha[0], box.a[0], box.b[0], 0.0, T);
    for (std::size_t l = 1; l < box.L(); ++l) cur = intersect(cur, orbit_intervals(box.alpha[l], box.a[l], box.b[l], 0.0, T));
    return total_length(cur);
}

// ---- target box ---------------------------------------------------------------------

struct TargetBoxInput {
    std::uint64_t q = 3;
    double rho = 10, Q = 30, V = 50, r = 0.1, eps1 = 0.5, theta_q = 0;
    /// per character k = 1..q-1: phases for primes p <= rho, p != q (ascending)
    std::vector<std::vector<double>> char_phases;
    /// phases for primes rho < p <= Q, p != q (ascending)
    std::vector<double> theta;
};

struct TargetBox {
    KoksmaBox box;
    std::vector<double> centers, half_widths;
    std::size_t group_char = 0, group_mid = 0;  // sizes of the two prime groups
    int n_rho = 0;
    long J = 0;
    double H = 0;
    std::vector<std::uint64_t> primes;  // prime behind each coordinate (q for the last)
};

inline TargetBox build_target_box(const TargetBoxInput& in, const PrimeTable& t)
{
    if (!is_prime(in.q)) throw validation_error("build_target_box: q must be prime");
    if (!(in.theta_q >= 0 && in.theta_q < 1)) throw validation_error("build_target_box: need 0 <= theta_q < 1");
    if (!(in.rho < in.Q)) throw validation_error("build_target_box: need rho < Q");
    if (!(static_cast<double>(in.q) < in.Q)) throw validation_error("build_target_box: need q < Q");
    t.require(in.Q);
    TargetBox tb;
    tb.n_rho = static_cast<double>(in.q) <= in.rho ? 1 : 0;
    tb.J = static_cast<long>(std::floor(in.V * std::pow(in.Q / in.rho, 0.25 + in.r)));
    if (tb.J < 1) throw validation_error("build_target_box: J = floor(V (Q/rho)^{1/4+r}) must be >= 1");
    std::vector<std::uint64_t> low, mid;
    for (std::size_t i = 0; i < t.pi(in.rho); ++i)
        if (t.primes()[i] != in.q) low.push_back(t.primes()[i]);
    for (std::size_t i = t.pi(in.rho); i < t.pi(in.Q); ++i)
        if (t.primes()[i] != in.q) mid.push_back(t.primes()[i]);
    if (in.char_phases.size() != in.q - 1) throw validation_error("build_target_box: need q-1 character phase tables");
    for (const auto& v : in.char_phases)
        if (v.size() != low.size()) throw validation_error("build_target_box: character phase table size differs from pi(rho) - n(rho)");
    if (in.theta.size() != mid.size()) throw validation_error("build_target_box: (rho,Q] phase table size differs from pi(Q) - pi(rho) - 1 + n(rho)");
    tb.group_char = (in.q - 1) * low.size();
    tb.group_mid = mid.size();
    const std::size_t L = tb.group_char + tb.group_mid + 1;
    const double logQ = std::log(in.Q);
    tb.H = 217.0 * static_cast<double>(in.q - 1) * static_cast<double>(tb.J) * in.Q;
    auto push = [&](double c, double hw, std::uint64_t p, double Hl) {
        tb.centers.push_back(c);
        tb.half_widths.push_back(hw);
        tb.box.a.push_back(c - hw);
        tb.box.b.push_back(c + hw);
        tb.box.alpha.push_back(std::log(static_cast<double>(p)) / kTwoPi);
        tb.box.H.push_back(Hl);
        tb.primes.push_back(p);
    };
    for (std::size_t k = 0; k + 1 < in.q; ++k)
        for (std::size_t m = 0; m < low.size(); ++m) push(in.char_phases[k][m], 0.5 / in.V, low[m], tb.H / logQ);
    for (std::size_t m = 0; m < mid.size(); ++m) push(in.theta[m], 0.5 / static_cast<double>(tb.J), mid[m], tb.H / logQ);
    push(in.theta_q, 0.5 * in.eps1, in.q, tb.H / (in.eps1 * static_cast<double>(tb.J) * logQ));
    if (tb.box.L() != L) throw std::logic_error("build_target_box: layout size mismatch");
    return tb;
}

// ---- Ei -------------------------------------------------------------------------------

struct EiBound {
    double x = 0;
    Magnitude value;        // e^x/x (1 + 1/x + 3/x^2)
    double log_value = 0;   // x - log x + log(1 + 1/x + 3/x^2)
    bool in_range = false;  // x >= e^13
};

inline EiBound ei_upper(double x)
{
    if (!(x >= 1)) throw validation_error("ei_upper: need x >= 1");
    EiBound e;
    e.x = x;
    e.log_value = x - std::log(x) + std::log1p(1 / x + 3 / (x * x));
    e.value = Magnitude::from_log(e.log_value);
    e.in_range = x >= std::exp(13.0);
    return e;
}

/// log Ei(x) for x > 0: convergent series up to 700, asymptotic series
/// (optimally truncated, plus the first omitted term) beyond.
inline double log_ei(double x)
{
    if (!(x > 0)) throw validation_error("log_ei: need x > 0");
    if (x <= 700) {
        long double term = 1, s = 0, X = x;
        for (int k = 1; k < 5000; ++k) {
            term *= X / k;  // x^k/k!
            long double add = term / k;
            s += add;
            if (add < s * 1e-21L) break;
        }
        long double ei = static_cast<long double>(kEulerGamma) + std::log(X) + s;
        return static_cast<double>(std::log(ei));
    }
    long double s = 0, term = 1;
    int n = static_cast<int>(std::floor(x));
    for (int k = 0; k < n; ++k) {
        s += term;
        long double nxt = term * (k + 1) / x;
        if (nxt < 1e-22L * s) { term = nxt; break; }
        term = nxt;
    }
    s += term;
    return x - std::log(x) + static_cast<double>(std::log(s));
}

// ---- phase perturbation ---------------------------------------------------------------

struct PerturbationCheck {
    double M = 0, r = 0;
    double max_shift = 0;   // max_p ||lambda_p - lambda'_p||
    double grid_max = 0;    // max over the s-grid of the difference of log sums
    double bound = 0;       // 184 M^{1/4+r}/log M * max_shift
    bool passed = false;
};

/// Distance to the nearest integer.
inline double dist_int(double x) { return std::fabs(x - std::nearbyint(x)); }

/// Compares sum_{p<=M} log(1 - chi(p) e^{2 pi i lambda_p} p^{-s-3/4}) for two phase tables.
inline PerturbationCheck phase_perturbation_bound(double M, double r, const std::vector<double>& lam,
                                                  const std::vector<double>& lam2, const std::vector<cplx>& grid,
                                                  const Character& chi, const PrimeTable& t)
{
    if (!(M > kPiThreshold)) throw validation_error("phase_perturbation_bound: need M > 355991");
    if (!(r >= 0 && r < 0.25)) throw validation_error("phase_perturbation_bound: need 0 <= r < 1/4");
    t.require(M);
    const std::size_t n = t.pi(M);
    if (lam.size() != n || lam2.size() != n) throw validation_error("phase_perturbation_bound: need one phase per prime p <= M");
    PerturbationCheck c;
    c.M = M;
    c.r = r;
    for (std::size_t i = 0; i < n; ++i) c.max_shift = std::max(c.max_shift, dist_int(lam[i] - lam2[i]));
    std::vector<cplx> u1(n), u2(n);
    std::vector<double> lp(n);
    for (std::size_t i = 0; i < n; ++i) {
        cplx ch = chi(t.primes()[i]);
        u1[i] = ch * std::polar(1.0, kTwoPi * lam[i]);
        u2[i] = ch * std::polar(1.0, kTwoPi * lam2[i]);
        lp[i] = std::log(static_cast<double>(t.primes()[i]));
    }
    for (cplx s : grid) {
        if (std::abs(s) > r * (1 + 1e-12)) throw validation_error("phase_perturbation_bound: grid point outside |s| <= r");
        cplx acc = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (u1[i] == u2[i]) continue;
            cplx ps = std::exp(-(s + 0.75) * lp[i]);
            acc += log_factor(u2[i] * ps) - log_factor(u1[i] * ps);
        }
        c.grid_max = std::max(c.grid_max, std::abs(acc));
    }
    c.bound = 184 * std::pow(M, 0.25 + r) / std::log(M) * c.max_shift;
    c.passed = c.grid_max <= c.bound;
    return c;
}

// ---- tau scan ---------------------------------------------------------------------------

struct ScanTarget {
    std::vector<double> alpha, center, half_width;
};

struct ScanResult {
    std::vector<Interval> hits;
    double measure = 0;
    double density = 0;   // measure / (t1 - t0)
    double expected = 0;  // prod (2 w_l)
    double step = 0;
    std::size_t cells = 0;
};

/// All maximal intervals in [t0, t1] with ||tau alpha_l - c_l|| <= w_l for every l.
/// The range is cut into cells of length `step`; the step must not exceed
/// min w_l / max alpha_l so that a hit cannot fall between cell samples.
/// Inside each cell the hit set of every coordinate is solved exactly.
inline ScanResult tau_scan(const ScanTarget& tg, double t0, double t1, double step = 0)
{
    const std::size_t L = tg.alpha.size();
    if (L == 0 || L > 12) throw validation_error("tau_scan: need 1 <= L <= 12");
    if (tg.center.size() != L || tg.half_width.size() != L) throw validation_error("tau_scan: inconsistent dimensions");
    if (!(t1 > t0)) throw validation_error("tau_scan: empty range");
    ScanResult res;
    res.expected = 1;
    double wmin = INFINITY, amax = 0;
    for (std::size_t l = 0; l < L; ++l) {
        if (!(tg.alpha[l] > 0)) throw validation_error("tau_scan: frequencies must be positive");
        double w = std::min(tg.half_width[l], 0.5);
        res.expected *= 2 * w;
        wmin = std::min(wmin, w);
        amax = std::max(amax, tg.alpha[l]);
    }
    if (wmin <= 0) return res;  // degenerate box: hit set has measure zero
    const double limit = wmin / amax;
    if (step <= 0) step = limit;
    if (step > limit * (1 + 1e-12)) throw validation_error("tau_scan: grid too coarse for the requested widths");
    res.step = step;
    const long cells = static_cast<long>(std::ceil((t1 - t0) / step));
    res.cells = static_cast<std::size_t>(cells);
    for (long c = 0; c < cells; ++c) {
        double lo = t0 + c * step, hi = std::min(t1, lo + step);
        std::vector<Interval> cur{{lo, hi}};
        for (std::size_t l = 0; l < L && !cur.empty(); ++l) {
            double w = std::min(tg.half_width[l], 0.5);
            cur = intersect(cur, orbit_intervals(tg.alpha[l], tg.center[l] - w, tg.center[l] + w, lo, hi));
        }
        for (const auto& iv : cur) {
            if (!res.hits.empty() && iv.lo <= res.hits.back().hi + 1e-12 * std::max(1.0, std::fabs(iv.lo)))
                res.hits.back().hi = std::max(res.hits.back().hi, iv.hi);
            else
                res.hits.push_back(iv);
        }
    }
    res.measure = total_length(res.hits);
    res.density = res.measure / (t1 - t0);
    return res;
}

}  // namespace euni
