#pragma once

// Hurwitz zeta, Dirichlet L-functions, truncated Dirichlet series with an
// explicit error term, and factor-wise logarithms of Euler products.

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "arith.hpp"
#include "characters.hpp"
#include "primes.hpp"

namespace euni {

class pole_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

namespace detail {

// B_{2k}/(2k)! for k = 1..10
inline constexpr double kBernoulliOverFactorial[] = {
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
    43867.0 / 5109094217170944000.0,
    -174611.0 / 802857662698291200000.0,
};

/// psi(a) for a > 0.
inline double digamma(double a)
{
    double r = 0;
    while (a < 10) { r -= 1 / a; a += 1; }
    double f = 1 / (a * a);
    return r + std::log(a) - 0.5 / a -
           f * (1.0 / 12 - f * (1.0 / 120 - f * (1.0 / 252 - f * (1.0 / 240 - f * (1.0 / 132)))));
}

}  // namespace detail

struct HurwitzOptions {
    int shift = 50;  // minimum number of direct terms
    int order = 8;   // Bernoulli corrections
};

/// zeta(s,a) = sum_{n>=0} (n+a)^{-s} by Euler-Maclaurin, a in (0,1], any s != 1.
/// Direct terms N = shift + ceil(|t|).
inline cplx hurwitz_zeta(cplx s, double a, HurwitzOptions opt = {})
{
    if (!(a > 0 && a <= 1)) throw validation_error("hurwitz_zeta: a must lie in (0,1]");
    if (s == cplx(1.0, 0.0)) throw pole_error("hurwitz_zeta: pole at s = 1");
    if (opt.order < 1 || opt.order > 10) throw validation_error("hurwitz_zeta: order must be in [1,10]");
    const int N = opt.shift + static_cast<int>(std::ceil(std::fabs(s.imag())));
    cplx sum = 0;
    for (int n = N - 1; n >= 0; --n) sum += std::exp(-s * std::log(n + a));
    const double w = N + a;
    const double lw = std::log(w);
    const cplx wms = std::exp(-s * lw);  // w^{-s}
    sum += w * wms / (s - 1.0) + 0.5 * wms;
    // sum_k B_2k/(2k)! s(s+1)...(s+2k-2) w^{-s-2k+1}
    cplx rising = s;        // s(s+1)...(s+2k-2)
    cplx wpow = wms / w;    // w^{-s-1}
    for (int k = 1; k <= opt.order; ++k) {
        sum += detail::kBernoulliOverFactorial[k - 1] * rising * wpow;
        rising *= (s + (2.0 * k - 1)) * (s + 2.0 * k);
        wpow /= w * w;
    }
    return sum;
}

/// L(s,chi) = q^{-s} sum_a chi(a) zeta(s, a/q).
inline cplx l_reference(cplx s, const Character& chi, HurwitzOptions opt = {})
{
    const std::uint64_t q = chi.modulus();
    if (q == 1) return hurwitz_zeta(s, 1.0, opt);
    if (s == cplx(1.0, 0.0)) {
        if (chi.is_principal()) throw pole_error("l_reference: principal character has a pole at s = 1");
        // L(1,chi) = -(1/q) sum chi(a) psi(a/q)
        cplx acc = 0;
        for (std::uint64_t a = 1; a < q; ++a) acc += chi(a) * detail::digamma(static_cast<double>(a) / q);
        return -acc / static_cast<double>(q);
    }
    cplx acc = 0;
    for (std::uint64_t a = 1; a < q; ++a) acc += chi(a) * hurwitz_zeta(s, static_cast<double>(a) / q, opt);
    return std::exp(-s * std::log(static_cast<double>(q))) * acc;
}

struct TruncationResult {
    cplx value;
    double error_bound = 0;
    std::uint64_t terms_used = 0;
};

/// sum_{n<=qx} chi(n) n^{-s} + E0(chi) (phi(q)/q) (qx)^{1-s}/(s-1), with error
/// (phi(q)(7 sqrt2/pi + 4)/q^sigma + c1(q)) x^{-sigma}.
/// The main term carries phi(q)/q and q^{1-s}; for q = 1 this is x^{1-s}/(s-1).
inline TruncationResult l_truncated(cplx s, const Character& chi, double x)
{
    const double sigma = s.real(), t = s.imag();
    if (!(sigma > 0)) throw validation_error("l_truncated: sigma must be positive");
    if (x < 1 || x < std::fabs(t) / kPi) throw validation_error("l_truncated: need x >= max(1, |t|/pi)");
    const std::uint64_t q = chi.modulus();
    ModulusInfo m(q);
    const std::uint64_t n_max = floor_u64(static_cast<double>(q) * x);
    cplx acc = 0;
    for (std::uint64_t n = n_max; n >= 1; --n) {
        cplx c = chi(n);
        if (c == cplx(0.0, 0.0)) continue;
        acc += c * std::exp(-s * std::log(static_cast<double>(n)));
    }
    TruncationResult r;
    r.terms_used = n_max;
    if (chi.is_principal()) {
        if (s == cplx(1.0, 0.0)) throw pole_error("l_truncated: pole at s = 1");
        double qx = static_cast<double>(q) * x;
        acc += m.ratio() * std::exp((1.0 - s) * std::log(qx)) / (s - 1.0);
    }
    r.value = acc;
    double c1 = q == 1 ? 1.0 : static_cast<double>(m.phi) / 2.0;
    r.error_bound = (static_cast<double>(m.phi) * (7.0 * std::sqrt(2.0) / kPi + 4.0) / std::pow(static_cast<double>(q), sigma) + c1) *
                    std::pow(x, -sigma);
    return r;
}

/// -log(1 - w), principal branch, |w| < 1.
inline cplx log_factor(cplx w)
{
    const double aw = std::abs(w);
    if (!(aw < 1)) throw validation_error("log_factor: |w| must be < 1");
    if (aw > 0.5) return -std::log(1.0 - w);
    cplx term = w, acc = 0;
    for (int k = 1; k < 200; ++k) {
        cplx add = term / static_cast<double>(k);
        acc += add;
        if (std::abs(add) < 1e-18) break;
        term *= w;
    }
    return acc;
}

/// -log(1 - w) - w.
inline cplx log_factor_tail(cplx w)
{
    const double aw = std::abs(w);
    if (!(aw < 1)) throw validation_error("log_factor_tail: |w| must be < 1");
    if (aw > 0.5) return -std::log(1.0 - w) - w;
    cplx term = w * w, acc = 0;
    for (int k = 2; k < 200; ++k) {
        cplx add = term / static_cast<double>(k);
        acc += add;
        if (std::abs(add) < 1e-18 * std::max(1e-30, std::abs(acc))) break;
        term *= w;
    }
    return acc;
}

/// p^{-s}
inline cplx prime_pow(std::uint64_t p, cplx s) { return std::exp(-s * std::log(static_cast<double>(p))); }

struct EulerProductValue {
    std::uint64_t Q = 0;
    cplx log_value;
    cplx value;
};

inline EulerProductValue log_euler_product(cplx s, const Character& chi, double Q, const PrimeTable& t)
{
    if (!(s.real() > 0)) throw validation_error("log_euler_product: sigma must be positive");
    EulerProductValue v;
    v.Q = floor_u64(Q);
    cplx acc = 0;
    if (Q >= 2) {
        std::size_t n = t.pi(Q);
        for (std::size_t i = 0; i < n; ++i) {
            std::uint64_t p = t.primes()[i];
            cplx c = chi(p);
            if (c == cplx(0.0, 0.0)) continue;
            acc += log_factor(c * prime_pow(p, s));
        }
    }
    v.log_value = acc;
    v.value = std::exp(acc);
    return v;
}

struct Linearization {
    cplx linear_term;          // sum chi(p) e^{-2 pi i theta_p} p^{-s}
    double remainder_bound = 0; // 1.11 sigma/(2 sigma - 1) lambda^{1-2 sigma}/log lambda
    cplx exact_remainder;      // full log sum minus the linear term
};

/// `phases[i]` is theta_p for the i-th prime of (lambda, rho].
inline Linearization linearize_log_factors(cplx s, const Character& chi, double lambda, double rho,
                                           const std::vector<double>& phases, const PrimeTable& t)
{
    const double sigma = s.real();
    if (!(sigma > 0.5)) throw validation_error("linearize_log_factors: sigma must exceed 1/2");
    if (lambda < kPiThreshold) throw validation_error("linearize_log_factors: lambda must be >= 355991");
    if (rho < lambda) throw validation_error("linearize_log_factors: rho must be >= lambda");
    t.require(rho);
    auto [a, b] = t.range(lambda, rho);
    if (phases.size() != b - a) throw validation_error("linearize_log_factors: phase count does not match prime range");
    Linearization out;
    for (std::size_t i = a; i < b; ++i) {
        std::uint64_t p = t.primes()[i];
        cplx w = chi(p) * std::polar(1.0, -kTwoPi * phases[i - a]) * prime_pow(p, s);
        out.linear_term += w;
        out.exact_remainder += log_factor_tail(w);
    }
    out.remainder_bound = 1.11 * sigma / (2 * sigma - 1) * std::pow(lambda, 1 - 2 * sigma) / std::log(lambda);
    return out;
}

/// (q^s/phi(q)) sum_chi conj(chi(p)) L(s,chi); equals zeta(s, p/q).
inline cplx hurwitz_from_characters(cplx s, std::uint64_t p, std::uint64_t q, HurwitzOptions opt = {})
{
    if (!is_prime(q)) throw validation_error("hurwitz_from_characters: q must be prime");
    if (p < 1 || p >= q) throw validation_error("hurwitz_from_characters: need 1 <= p < q");
    if (s == cplx(1.0, 0.0)) throw pole_error("hurwitz_from_characters: pole at s = 1");
    cplx acc = 0;
    for (const auto& chi : enumerate_characters(q)) acc += std::conj(chi(p)) * l_reference(s, chi, opt);
    return std::exp(s * std::log(static_cast<double>(q))) / static_cast<double>(q - 1) * acc;
}

}  // namespace euni
