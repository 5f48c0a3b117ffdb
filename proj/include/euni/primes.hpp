#pragma once

// Segmented sieve with pi(x) / theta(x) queries, an on-disk cache and the
// explicit prime-counting inequalities.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>
#include <vector>

#include "characters.hpp"
#include "report.hpp"

namespace euni {

inline constexpr std::uint64_t kMaxSieveLimit = 100000000ull;
inline constexpr double kPiThreshold = 355991.0;

class PrimeTable {
public:
    PrimeTable() = default;
    PrimeTable(std::uint64_t limit, std::vector<std::uint32_t> primes)
        : limit_(limit), primes_(std::move(primes))
    {
        cumlog_.resize(primes_.size());
        long double acc = 0;
        for (std::size_t i = 0; i < primes_.size(); ++i) {
            acc += std::log(static_cast<long double>(primes_[i]));
            cumlog_[i] = static_cast<double>(acc);
        }
    }

    std::uint64_t limit() const { return limit_; }
    const std::vector<std::uint32_t>& primes() const { return primes_; }
    std::size_t size() const { return primes_.size(); }

    /// pi(x) for real x <= limit.
    std::uint64_t pi(double x) const
    {
        if (x < 2) return 0;
        require(x);
        auto v = static_cast<std::uint64_t>(std::floor(x));
        return static_cast<std::uint64_t>(std::upper_bound(primes_.begin(), primes_.end(), v) - primes_.begin());
    }

    /// theta(x) = sum_{p<=x} log p.
    double theta(double x) const
    {
        auto n = pi(x);
        return n == 0 ? 0.0 : cumlog_[n - 1];
    }

    /// theta at the i-th stored prime (0-based).
    double theta_at(std::size_t i) const { return cumlog_[i]; }

    /// 1-based index of the prime p in the sequence of all primes.
    std::uint64_t index_of(std::uint64_t p) const
    {
        auto it = std::lower_bound(primes_.begin(), primes_.end(), p);
        if (it == primes_.end() || *it != p) throw std::invalid_argument("index_of: not a stored prime");
        return static_cast<std::uint64_t>(it - primes_.begin()) + 1;
    }

    /// Primes p with lo < p <= hi.
    std::pair<std::size_t, std::size_t> range(double lo, double hi) const
    {
        std::size_t a = pi(std::max(lo, 0.0)), b = pi(hi);
        return {a, std::max(a, b)};
    }

    void require(double x) const
    {
        if (x > static_cast<double>(limit_))
            throw validation_error("argument " + std::to_string(x) + " exceeds sieve limit " + std::to_string(limit_));
    }

private:
    std::uint64_t limit_ = 0;
    std::vector<std::uint32_t> primes_;
    std::vector<double> cumlog_;
};

/// Segmented sieve of Eratosthenes over odd numbers.
inline PrimeTable sieve(std::uint64_t limit)
{
    if (limit < 2 || limit > kMaxSieveLimit)
        throw validation_error("sieve limit must lie in [2, 1e8], got " + std::to_string(limit));
    std::uint64_t root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit)));
    while (root * root > limit) --root;
    while ((root + 1) * (root + 1) <= limit) ++root;

    std::vector<char> small(root + 1, 1);
    std::vector<std::uint32_t> base;
    for (std::uint64_t i = 2; i <= root; ++i) {
        if (!small[i]) continue;
        if (i > 2) base.push_back(static_cast<std::uint32_t>(i));
        for (std::uint64_t j = i * i; j <= root; j += i) small[j] = 0;
    }

    std::vector<std::uint32_t> primes;
    primes.reserve(static_cast<std::size_t>(1.1 * limit / std::max(1.0, std::log(static_cast<double>(limit)) - 1.1)) + 16);
    primes.push_back(2);

    constexpr std::uint64_t kSeg = 1u << 18;  // odd numbers per segment
    std::vector<char> seg(kSeg);
    std::vector<std::uint64_t> next(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) next[i] = static_cast<std::uint64_t>(base[i]) * base[i];

    // segment covers odd n = lo + 2*j, j < kSeg
    for (std::uint64_t lo = 3; lo <= limit; lo += 2 * kSeg) {
        std::uint64_t hi = std::min(limit, lo + 2 * kSeg - 1);
        std::fill(seg.begin(), seg.end(), 1);
        for (std::size_t i = 0; i < base.size(); ++i) {
            std::uint64_t p = base[i], m = next[i];
            if (m > hi) continue;
            for (; m <= hi; m += 2 * p) seg[(m - lo) >> 1] = 0;
            next[i] = m;
        }
        for (std::uint64_t n = lo; n <= hi; n += 2)
            if (seg[(n - lo) >> 1]) primes.push_back(static_cast<std::uint32_t>(n));
    }
    return PrimeTable(limit, std::move(primes));
}

// Cache file layout (little endian):
//   8 bytes  magic "EUPRIME\0"
//   u32      version (1)
//   u64      limit
//   u64      prime count
//   LEB128   deltas between consecutive primes, starting from 0
namespace cache {

inline constexpr char kMagic[8] = {'E', 'U', 'P', 'R', 'I', 'M', 'E', '\0'};
inline constexpr std::uint32_t kVersion = 1;

inline void write(const std::filesystem::path& path, const PrimeTable& t)
{
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write sieve cache " + tmp.string());
        out.write(kMagic, 8);
        std::uint32_t v = kVersion;
        std::uint64_t lim = t.limit(), cnt = t.size();
        out.write(reinterpret_cast<const char*>(&v), 4);
        out.write(reinterpret_cast<const char*>(&lim), 8);
        out.write(reinterpret_cast<const char*>(&cnt), 8);
        std::uint32_t prev = 0;
        std::string buf;
        buf.reserve(t.size() + 16);
        for (auto p : t.primes()) {
            std::uint32_t d = p - prev;
            prev = p;
            do {
                unsigned char b = d & 0x7f;
                d >>= 7;
                if (d) b |= 0x80;
                buf.push_back(static_cast<char>(b));
            } while (d);
        }
        out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
        if (!out) throw std::runtime_error("short write on sieve cache");
    }
    std::filesystem::rename(tmp, path);
}

/// Returns false when the file is missing or malformed.
inline bool read(const std::filesystem::path& path, std::uint64_t limit, PrimeTable& t)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    char magic[8];
    std::uint32_t v = 0;
    std::uint64_t lim = 0, cnt = 0;
    in.read(magic, 8);
    in.read(reinterpret_cast<char*>(&v), 4);
    in.read(reinterpret_cast<char*>(&lim), 8);
    in.read(reinterpret_cast<char*>(&cnt), 8);
    if (!in || !std::equal(magic, magic + 8, kMagic) || v != kVersion || lim != limit) return false;
    std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::vector<std::uint32_t> primes;
    primes.reserve(cnt);
    std::uint32_t prev = 0, d = 0;
    int shift = 0;
    for (unsigned char b : body) {
        d |= static_cast<std::uint32_t>(b & 0x7f) << shift;
        if (b & 0x80) { shift += 7; continue; }
        prev += d;
        primes.push_back(prev);
        d = 0;
        shift = 0;
    }
    if (primes.size() != cnt || shift != 0 || (cnt && primes.back() > limit)) return false;
    t = PrimeTable(limit, std::move(primes));
    return true;
}

}  // namespace cache

/// Sieve, going through the cache directory named by EU_SIEVE_CACHE when set.
inline PrimeTable load_primes(std::uint64_t limit)
{
    const char* dir = std::getenv("EU_SIEVE_CACHE");
    if (!dir || !*dir) return sieve(limit);
    std::filesystem::path p = std::filesystem::path(dir) / ("primes-" + std::to_string(limit) + ".bin");
    PrimeTable t;
    if (cache::read(p, limit, t)) return t;
    t = sieve(limit);
    try {
        std::filesystem::create_directories(dir);
        cache::write(p, t);
    } catch (const std::exception&) {
        // cache is best effort
    }
    return t;
}

struct PiBoundCheck {
    double x = 0;
    std::uint64_t pi = 0;
    double bound_full = 0;   // (x/log x)(1 + 1/log x + 2.51/log^2 x)
    double bound_1094 = 0;   // 1.094 x/log x
    double ratio_full = 0;   // pi / bound_full
    double ratio_1094 = 0;   // pi log x / x  (compare to 1.094)
    bool passed = false;
};

inline PiBoundCheck check_pi_bound(double x, const PrimeTable& t, double cushion = 1e-12)
{
    if (x < kPiThreshold) throw validation_error("check_pi_bound: x must be >= 355991");
    t.require(x);
    PiBoundCheck c;
    c.x = x;
    c.pi = t.pi(x);
    double L = std::log(x), pi = static_cast<double>(c.pi);
    c.bound_full = x / L * (1.0 + 1.0 / L + 2.51 / (L * L));
    c.bound_1094 = 1.094 * x / L;
    c.ratio_full = pi / c.bound_full;
    c.ratio_1094 = pi * L / x;
    c.passed = pi <= c.bound_full * (1 - cushion) && pi < c.bound_1094 * (1 - cushion);
    return c;
}

/// Both pi-bounds at x = lo and at every prime jump in [lo, hi].
inline Report verify_pi_bound(const PrimeTable& t, double lo, double hi)
{
    Report r("pi-bound");
    t.require(hi);
    double worst_full = 0, worst_1094 = 0, arg_full = lo, arg_1094 = lo;
    std::size_t checked = 0, failed = 0;
    json first_fail;
    auto visit = [&](double x) {
        auto c = check_pi_bound(x, t);
        ++checked;
        if (c.ratio_full > worst_full) { worst_full = c.ratio_full; arg_full = x; }
        if (c.ratio_1094 > worst_1094) { worst_1094 = c.ratio_1094; arg_1094 = x; }
        if (!c.passed && failed++ == 0) first_fail = x;
    };
    visit(lo);
    auto [a, b] = t.range(lo, hi);
    for (std::size_t i = a; i < b; ++i) visit(t.primes()[i]);
    r.check("pi<=x/logx(1+1/logx+2.51/log^2x)", worst_full, 1.0, {{"lo", lo}, {"hi", hi}, {"argmax", arg_full}}, 1e-12);
    r.check("pi<1.094x/logx", worst_1094, 1.094, {{"lo", lo}, {"hi", hi}, {"argmax", arg_1094}}, 1e-12);
    r.notes()["points_checked"] = checked;
    r.notes()["points_failed"] = failed;
    if (failed) r.notes()["first_failure"] = first_fail;
    return r;
}

struct ThetaBoundCheck {
    double x = 0;
    double theta = 0;
    double ratio = 0;  // theta/x
    bool passed = false;
};

inline ThetaBoundCheck check_theta_bound(double x, const PrimeTable& t)
{
    if (x < 2) throw validation_error("check_theta_bound: x must be >= 2");
    t.require(x);
    ThetaBoundCheck c;
    c.x = x;
    c.theta = t.theta(x);
    c.ratio = c.theta / x;
    c.passed = c.theta <= 1.000081 * x;
    return c;
}

/// theta(p)/p at every prime p <= hi; the maximum over real x sits at these jumps.
inline Report verify_theta_bound(const PrimeTable& t, double hi)
{
    Report r("theta-bound");
    t.require(hi);
    double worst = 0, arg = 2;
    std::size_t n = t.pi(hi);
    for (std::size_t i = 0; i < n; ++i) {
        double p = t.primes()[i];
        double ratio = t.theta_at(i) / p;
        if (ratio > worst) { worst = ratio; arg = p; }
    }
    r.check("theta<=1.000081x", worst, 1.000081, {{"hi", hi}, {"argmax", arg}});
    r.notes()["points_checked"] = n;
    return r;
}

struct PrimePowerSum {
    double value = 0;
    bool bound_checked = false;
    double bound = 0;  // 8.57 M^{e+1}/log M
    bool passed = true;
};

/// sum_{p<=M} p^e; with e = r - 3/4, 0 < r < 1/4 and M > 355991 also checks
/// the 8.57 M^{r+1/4}/log M bound.
inline PrimePowerSum prime_power_sum(double M, double e, const PrimeTable& t)
{
    if (M < 2) throw validation_error("prime_power_sum: M must be >= 2");
    if (!(e > -1 && e < 0)) throw validation_error("prime_power_sum: exponent must lie in (-1, 0)");
    t.require(M);
    PrimePowerSum s;
    long double acc = 0;
    std::size_t n = t.pi(M);
    for (std::size_t i = 0; i < n; ++i) acc += std::pow(static_cast<long double>(t.primes()[i]), static_cast<long double>(e));
    s.value = static_cast<double>(acc);
    double r = e + 0.75;
    if (M > kPiThreshold && r > 0 && r < 0.25) {
        s.bound_checked = true;
        s.bound = 8.57 * std::pow(M, e + 1) / std::log(M);
        s.passed = s.value <= s.bound;
    }
    return s;
}

}  // namespace euni
