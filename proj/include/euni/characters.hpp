#pragma once

// Dirichlet characters modulo a prime, plus the trivial character mod 1.

#include <complex>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "report.hpp"

namespace euni {

using cplx = std::complex<double>;
inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 6.283185307179586476925286766559005768;
inline constexpr double kEulerGamma = 0.577215664901532860606512090082402431;

class validation_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline bool is_prime(std::uint64_t n)
{
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::uint64_t d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

/// Distinct prime factors, ascending.
inline std::vector<std::uint64_t> prime_factors(std::uint64_t n)
{
    std::vector<std::uint64_t> f;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            f.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) f.push_back(n);
    return f;
}

inline std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m)
{
    unsigned __int128 r = 1, x = b % m;
    while (e) {
        if (e & 1) r = r * x % m;
        x = x * x % m;
        e >>= 1;
    }
    return static_cast<std::uint64_t>(r);
}

/// Smallest primitive root of a prime q.
inline std::uint64_t primitive_root(std::uint64_t q)
{
    if (!is_prime(q)) throw validation_error("primitive_root: modulus " + std::to_string(q) + " is not prime");
    if (q == 2) return 1;
    auto fac = prime_factors(q - 1);
    for (std::uint64_t g = 2; g < q; ++g) {
        bool ok = true;
        for (auto p : fac)
            if (powmod(g, (q - 1) / p, q) == 1) { ok = false; break; }
        if (ok) return g;
    }
    throw std::logic_error("primitive_root: none found");
}

/// e^{2 pi i num/den}, exact at multiples of a quarter turn.
inline cplx root_of_unity(long num, long den)
{
    num %= den;
    if (num < 0) num += den;
    if ((4 * num) % den == 0) {
        switch ((4 * num) / den) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
        }
    }
    double a = kTwoPi * static_cast<double>(num) / static_cast<double>(den);
    return {std::cos(a), std::sin(a)};
}

class Character {
public:
    /// The unique character mod 1.
    static Character trivial()
    {
        Character c;
        c.q_ = 1;
        c.k_ = 0;
        c.order_ = 1;
        c.exps_ = {0};
        c.vals_ = {cplx(1.0, 0.0)};
        return c;
    }

    /// chi_k(g^j) = e^{2 pi i jk/(q-1)}, g the smallest primitive root.
    Character(std::uint64_t q, long k)
    {
        if (!is_prime(q)) throw validation_error("character modulus " + std::to_string(q) + " is not prime");
        q_ = q;
        order_ = static_cast<long>(q - 1);
        k_ = ((k % order_) + order_) % order_;
        exps_.assign(q, -1);
        vals_.assign(q, cplx(0.0, 0.0));
        std::uint64_t g = primitive_root(q), x = 1;
        for (long j = 0; j < order_; ++j) {
            long e = static_cast<long>((static_cast<long long>(j) * k_) % order_);
            exps_[x] = e;
            vals_[x] = root_of_unity(e, order_);
            x = x * g % q;
        }
    }

    std::uint64_t modulus() const { return q_; }
    long index() const { return k_; }
    /// Order of the value group, q-1 (1 for the trivial character).
    long root_order() const { return order_; }
    bool is_principal() const { return k_ == 0; }

    cplx operator()(std::uint64_t n) const { return vals_[n % q_]; }

    /// Exponent e with chi(n) = e^{2 pi i e/(q-1)}, or -1 when chi(n) = 0.
    long exponent(std::uint64_t n) const { return exps_[n % q_]; }

    const std::vector<cplx>& values() const { return vals_; }

    Character conj() const { return q_ == 1 ? *this : Character(q_, order_ - k_); }

    friend Character operator*(const Character& a, const Character& b)
    {
        if (a.q_ != b.q_) throw validation_error("character product: moduli differ");
        if (a.q_ == 1) return a;
        return Character(a.q_, a.k_ + b.k_);
    }

    friend bool operator==(const Character& a, const Character& b)
    {
        return a.q_ == b.q_ && a.exps_ == b.exps_;
    }

private:
    Character() = default;
    std::uint64_t q_ = 1;
    long k_ = 0;
    long order_ = 1;
    std::vector<long> exps_;
    std::vector<cplx> vals_;
};

inline std::vector<Character> enumerate_characters(std::uint64_t q)
{
    if (!is_prime(q)) throw validation_error("enumerate_characters: modulus " + std::to_string(q) + " is not prime");
    std::vector<Character> out;
    out.reserve(q - 1);
    for (long k = 0; k < static_cast<long>(q - 1); ++k) out.emplace_back(q, k);
    return out;
}

inline cplx char_value(const Character& chi, std::uint64_t n) { return chi(n); }

/// Both orthogonality relations; the report's single case is the max defect.
inline Report verify_orthogonality(std::uint64_t q, double tol = 1e-12)
{
    auto chars = enumerate_characters(q);
    double defect = 0.0;
    for (const auto& c : chars) {
        if (c.is_principal()) continue;
        cplx s = 0;
        for (std::uint64_t n = 0; n < q; ++n) s += c(n);
        defect = std::max(defect, std::abs(s));
    }
    for (std::uint64_t a = 0; a < q; ++a) {
        for (std::uint64_t b = 0; b < q; ++b) {
            cplx s = 0;
            for (const auto& c : chars) s += c(a) * std::conj(c(b));
            double expect = (a == b && a % q != 0) ? static_cast<double>(q - 1) : 0.0;
            defect = std::max(defect, std::abs(s - expect));
        }
    }
    Report r("orthogonality");
    r.check("orthogonality-q" + std::to_string(q), defect, tol, {{"q", q}});
    return r;
}

}  // namespace euni
