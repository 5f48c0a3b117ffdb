#pragma once

// Mean squares of Dirichlet polynomials, the area-mean inequality for analytic
// functions, and log-space calculators for the J-integral and measure bounds.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "arith.hpp"
#include "characters.hpp"
#include "magnitude.hpp"

namespace euni {

struct MeanSquareCheck {
    double T = 0;
    std::vector<cplx> coefficients;
    double exact_integral = 0;
    double main_term = 0;          // T/2 sum |a_n|^2
    double allowed_deviation = 0;  // 837 sum n |a_n|^2
    bool passed = false;

    double deviation() const { return std::fabs(exact_integral - main_term); }
};

/// int_{T/2}^{T} |sum_n a_n n^{it}|^2 dt in closed form.
inline double dirichlet_meansquare_integral(const std::vector<cplx>& a, double T)
{
    const std::size_t N = a.size();
    std::vector<double> logs(N + 1);
    for (std::size_t n = 1; n <= N; ++n) logs[n] = std::log(static_cast<double>(n));
    double diag = 0, off = 0;
    for (std::size_t n = 1; n <= N; ++n) diag += std::norm(a[n - 1]);
    // pairs m > n contribute 2 Re(a_m conj(a_n) I(m,n))
    for (std::size_t m = 2; m <= N; ++m) {
        for (std::size_t n = 1; n < m; ++n) {
            cplx c = a[m - 1] * std::conj(a[n - 1]);
            if (c == cplx(0.0, 0.0)) continue;
            double l = logs[m] - logs[n];
            // (e^{iTl} - e^{iTl/2})/(il)
            cplx I = (std::polar(1.0, T * l) - std::polar(1.0, 0.5 * T * l)) / cplx(0.0, l);
            off += 2 * (c * I).real();
        }
    }
    return 0.5 * T * diag + off;
}

inline MeanSquareCheck dirichlet_meansquare(const std::vector<cplx>& coeffs, double T)
{
    if (coeffs.empty()) throw validation_error("dirichlet_meansquare: need N >= 1");
    if (!(T > 0)) throw validation_error("dirichlet_meansquare: T must be positive");
    MeanSquareCheck c;
    c.T = T;
    c.coefficients = coeffs;
    c.exact_integral = dirichlet_meansquare_integral(coeffs, T);
    double s0 = 0, s1 = 0;
    for (std::size_t n = 1; n <= coeffs.size(); ++n) {
        s0 += std::norm(coeffs[n - 1]);
        s1 += static_cast<double>(n) * std::norm(coeffs[n - 1]);
    }
    c.main_term = 0.5 * T * s0;
    c.allowed_deviation = 837 * s1;
    c.passed = c.deviation() <= c.allowed_deviation;
    return c;
}

// ---- area mean ----------------------------------------------------------------

/// Gauss-Legendre nodes/weights on [0,1].
inline void gauss_legendre01(int n, std::vector<double>& x, std::vector<double>& w)
{
    x.assign(n, 0);
    w.assign(n, 0);
    for (int i = 0; i < n; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (n + 0.5)), pp = 0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1, p2 = 0;
            for (int j = 1; j <= n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1) * z * p2 - (j - 1.0) * p3) / j;
            }
            pp = n * (z * p1 - p2) / (z * z - 1);
            double dz = p1 / pp;
            z -= dz;
            if (std::fabs(dz) < 1e-16) break;
        }
        x[i] = 0.5 * (1 - z);
        w[i] = 1.0 / ((1 - z * z) * pp * pp);
    }
}

/// int over |z - z0| <= R of |f|^2, Gauss-Legendre in the radius, trapezoid in angle.
inline double disc_square_integral(const std::function<cplx(cplx)>& f, cplx z0, double R, int radial, int angular)
{
    std::vector<double> x, w;
    gauss_legendre01(radial, x, w);
    double acc = 0;
    for (int i = 0; i < radial; ++i) {
        double r = R * x[i], ring = 0;
        for (int j = 0; j < angular; ++j) ring += std::norm(f(z0 + std::polar(r, kTwoPi * j / angular)));
        acc += w[i] * r * ring * (kTwoPi / angular);
    }
    return acc * R;
}

/// max of |f| on the circle |z - z0| = r: dense sampling then golden-section refinement.
inline double circle_max(const std::function<cplx(cplx)>& f, cplx z0, double r, int samples = 2048)
{
    if (r == 0) return std::abs(f(z0));
    auto g = [&](double a) { return std::abs(f(z0 + std::polar(r, a))); };
    double best = -1, arg = 0, h = kTwoPi / samples;
    for (int j = 0; j < samples; ++j) {
        double v = g(j * h);
        if (v > best) { best = v; arg = j * h; }
    }
    double lo = arg - h, hi = arg + h;
    const double gr = 0.6180339887498949;
    double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo), fc = g(c), fd = g(d);
    for (int it = 0; it < 80; ++it) {
        if (fc > fd) { hi = d; d = c; fd = fc; c = hi - gr * (hi - lo); fc = g(c); }
        else { lo = c; c = d; fc = fd; d = lo + gr * (hi - lo); fd = g(d); }
    }
    return std::max({best, fc, fd});
}

struct AreaMeanCheck {
    double H = 0;            // int int |f|^2 over the disc of radius R
    double max_inner = 0;    // max |f| on |z - z0| <= R'
    double bound = 0;        // sqrt(H/pi)/(R - R')
    bool converged = false;  // quadrature stable to rel_tol under refinement
    bool passed = false;
};

/// max_{|z-z0|<=R'} |f| <= sqrt(H/pi)/(R - R') with H = int_{|z-z0|<=R} |f|^2.
/// The maximum is taken on the boundary circle (maximum modulus principle).
inline AreaMeanCheck area_mean_bound(const std::function<cplx(cplx)>& f, cplx z0, double R, double Rp,
                                     double rel_tol = 1e-8)
{
    if (!(R > 0) || !(Rp >= 0) || !(Rp < R)) throw validation_error("area_mean_bound: need 0 <= R' < R");
    AreaMeanCheck c;
    int radial = 16, angular = 64;
    double prev = disc_square_integral(f, z0, R, radial, angular);
    for (int k = 0; k < 6; ++k) {
        radial *= 2;
        angular *= 2;
        double cur = disc_square_integral(f, z0, R, radial, angular);
        double diff = std::fabs(cur - prev);
        prev = cur;
        if (diff <= rel_tol * std::max(std::fabs(cur), 1e-300)) { c.converged = true; break; }
    }
    c.H = prev;
    c.max_inner = circle_max(f, z0, Rp);
    c.bound = std::sqrt(c.H / kPi) / (R - Rp);
    c.passed = c.converged && c.max_inner <= c.bound;
    return c;
}

// ---- log-space bound calculators ------------------------------------------------

/// A sum of signed terms kept as separate positive and negative Magnitudes,
/// for exponents that may themselves exceed double range.
struct SignedLog {
    Magnitude pos = Magnitude::from_double(0.0);
    Magnitude neg = Magnitude::from_double(0.0);

    SignedLog& add(double v)
    {
        if (v >= 0) pos = pos + Magnitude::from_double(v);
        else neg = neg + Magnitude::from_double(-v);
        return *this;
    }
    SignedLog& add(const Magnitude& v)
    {
        if (v.level() == 0 && v.mantissa() < 0) return add(v.mantissa());
        pos = pos + v;
        return *this;
    }
    SignedLog& sub(const Magnitude& v)
    {
        if (v.level() == 0) return add(-v.mantissa());
        neg = neg + v;
        return *this;
    }

    /// exp of the sum; 0 when the sum is negative beyond double range.
    Magnitude exp() const
    {
        if (pos >= neg) return Magnitude::exp(pos - neg);
        Magnitude d = neg - pos;
        if (!d.fits_double()) return Magnitude::from_double(0.0);
        return Magnitude::from_double(std::exp(-d.to_double()));
    }
};

struct JBound {
    Magnitude value;
    bool q_hypothesis = false;  // Q > max(exp(q^8), 355991)
    bool t_hypothesis = false;  // log T >= log pi + 0.51 (1 - 2 omega)(Q - 872)/omega
    bool hypotheses() const { return q_hypothesis && t_hypothesis; }
};

/// Q > max(exp(q^8), 355991) on Magnitudes.
inline bool q_above_threshold(std::uint64_t q, const Magnitude& Q)
{
    return Q > Magnitude::from_double(355991.0) && Q > Magnitude::from_log(std::pow(static_cast<double>(q), 8.0));
}

/// log pi + c (Q - 872) as a Magnitude (Q - 872 clipped at 0).
inline Magnitude t_threshold_log(double c, const Magnitude& Q)
{
    Magnitude excess = Q > Magnitude::from_double(872.0) ? Q - Magnitude::from_double(872.0) : Magnitude::from_double(0.0);
    return Magnitude::from_double(std::log(kPi)) + Magnitude::from_double(c) * excess;
}

/// 0.0062 T phi^4/q^4 log^2 Q/(omega^3 Q^{2 omega}), omega = 1/4 - d.
inline JBound j_bound(std::uint64_t q, double d, const Magnitude& Q, const Magnitude& T)
{
    if (!(d > 0 && d < 0.25)) throw validation_error("j_bound: need 0 < d < 1/4");
    if (!(Q > Magnitude::from_double(1.0)) || !T.is_positive()) throw validation_error("j_bound: need Q > 1, T > 0");
    ModulusInfo m(q);
    const double omega = 0.25 - d;
    Magnitude logQ = Q.log();
    Magnitude logT = T.log();
    // log value = log T + log 0.0062 + 4 log(phi/q) - 3 log omega + 2 log log Q - 2 omega log Q
    SignedLog l;
    l.add(logT).add(std::log(0.0062) + 4 * std::log(m.ratio()) - 3 * std::log(omega));
    l.add(2 * logQ.log_double()).sub(Magnitude::from_double(2 * omega) * logQ);
    JBound b;
    b.value = l.exp();
    b.q_hypothesis = q_above_threshold(q, Q);
    b.t_hypothesis = logT >= t_threshold_log(0.51 * (1 - 2 * omega) / omega, Q);
    return b;
}

struct MeasureBound {
    Magnitude T;
    double correction = 0;  // 0.51 K phi^4/q^4 log^2 Q/((1/4-r)^5 Q^{1/4-r} eps^2)
    Magnitude bound;        // T (1 - correction); zero when vacuous
    bool vacuous = false;   // correction >= 1
    bool q_hypothesis = false;
    bool t_hypothesis = false;  // log T >= log pi + 1.02 (3/4 + r)(Q - 872)/(1/4 - r)
};

inline MeasureBound good_set_measure_bound(int K, std::uint64_t qK, double r, double eps, const Magnitude& Q, const Magnitude& T)
{
    if (!(r > 0 && r < 0.25)) throw validation_error("good_set_measure_bound: need 0 < r < 1/4");
    if (!(eps > 0 && eps <= 1)) throw validation_error("good_set_measure_bound: need 0 < eps <= 1");
    if (K < 0) throw validation_error("good_set_measure_bound: K must be >= 0");
    if (!(Q > Magnitude::from_double(1.0))) throw validation_error("good_set_measure_bound: need Q > 1");
    ModulusInfo m(qK);
    MeasureBound b;
    b.T = T;
    const double w = 0.25 - r;
    if (K == 0) {
        b.correction = 0;
    } else {
        Magnitude logQ = Q.log();
        SignedLog l;
        l.add(std::log(0.51 * K) + 4 * std::log(m.ratio()) - 5 * std::log(w) - 2 * std::log(eps));
        l.add(2 * logQ.log_double()).sub(Magnitude::from_double(w) * logQ);
        Magnitude c = l.exp();
        b.correction = c.to_double();
    }
    b.vacuous = !(b.correction < 1);
    b.bound = b.vacuous ? Magnitude::from_double(0.0) : T * Magnitude::from_double(1 - b.correction);
    b.q_hypothesis = q_above_threshold(qK, Q);
    b.t_hypothesis = T.log() >= t_threshold_log(1.02 * (0.75 + r) / w, Q);
    return b;
}

}  // namespace euni
