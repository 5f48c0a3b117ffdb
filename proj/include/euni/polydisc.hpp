#pragma once

// Approximation of an analytic target by -sum log(1 - chi(p) e^{-2 pi i theta_p} p^{-s-3/4}):
// Taylor truncation, the polydisc moment system, boundary pushing, alternating
// phases for small primes and dyadic unimodularization.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "characters.hpp"
#include "lfunc.hpp"
#include "meanvalue.hpp"
#include "params.hpp"
#include "primes.hpp"

namespace euni {

using AnalyticFn = std::function<cplx(cplx)>;

/// Center, a ring of circle/2 points at radius r/2 and a ring of `circle` points at radius r.
inline std::vector<cplx> disc_grid(double r, int circle = 16)
{
    std::vector<cplx> g{cplx(0.0, 0.0)};
    int inner = std::max(1, circle / 2);
    for (int j = 0; j < inner; ++j) g.push_back(std::polar(0.5 * r, kTwoPi * j / inner));
    for (int j = 0; j < circle; ++j) g.push_back(std::polar(r, kTwoPi * j / circle));
    return g;
}

/// e^{-2 pi i theta}
inline cplx unit_phase(double theta) { return std::polar(1.0, -kTwoPi * theta); }

/// theta in [0,1) with e^{-2 pi i theta} = z/|z|; 0 for z = 0.
inline double phase_of(cplx z)
{
    if (z == cplx(0.0, 0.0)) return 0.0;
    double t = -std::arg(z) / kTwoPi;
    t -= std::floor(t);
    return t >= 1.0 ? 0.0 : t;
}

// ---- Taylor truncation ----------------------------------------------------------

struct TaylorModel {
    std::vector<cplx> a;     // a_0..a_K
    double R = 0, r = 0;
    double M_f = 0;          // max |f| on |s| = R
    double remainder_bound = 0;
    double empirical_defect = 0;  // max |f - sum a_k s^k| on |s| = r
    bool coefficient_bound_ok = true;  // |a_k| <= M_f/R^k
};

inline TaylorModel taylor_truncate(const AnalyticFn& f, double R, double r, int K, int nodes = 0)
{
    if (!(r > 0 && r < R)) throw validation_error("taylor_truncate: need 0 < r < R");
    if (K < 0) throw validation_error("taylor_truncate: need K >= 0");
    const int n = std::max({nodes, 4 * K + 64, 256});
    std::vector<cplx> vals(n);
    double mx = 0;
    for (int j = 0; j < n; ++j) {
        vals[j] = f(std::polar(R, kTwoPi * j / n));
        if (!std::isfinite(vals[j].real()) || !std::isfinite(vals[j].imag()))
            throw std::runtime_error("taylor_truncate: non-finite function value on the circle");
        mx = std::max(mx, std::abs(vals[j]));
    }
    TaylorModel m;
    m.R = R;
    m.r = r;
    m.a.resize(K + 1);
    for (int k = 0; k <= K; ++k) {
        cplx acc = 0;
        for (int j = 0; j < n; ++j) acc += vals[j] * std::polar(1.0, -kTwoPi * static_cast<double>(k) * j / n);
        m.a[k] = acc / static_cast<double>(n) / std::pow(R, k);
    }
    m.M_f = std::max(mx, circle_max(f, 0.0, R, std::min(n, 1024)));
    m.remainder_bound = std::pow(r / R, K) * m.M_f / (R / r - 1);
    for (int k = 0; k <= K; ++k)
        if (std::abs(m.a[k]) > m.M_f / std::pow(R, k) * (1 + 1e-9)) m.coefficient_bound_ok = false;
    const int ne = 512;
    for (int j = 0; j < ne; ++j) {
        cplx s = std::polar(r, kTwoPi * j / ne), poly = 0;
        for (int k = K; k >= 0; --k) poly = poly * s + m.a[k];
        m.empirical_defect = std::max(m.empirical_defect, std::abs(f(s) - poly));
    }
    return m;
}

// ---- linear systems over the polydisc ------------------------------------------

struct PolydiscSolution {
    double lambda = 0, rho = 0;
    std::vector<std::uint64_t> primes;  // empty for abstract systems
    std::vector<cplx> z;
    std::vector<double> residuals;      // |A_k z - b_k| / sum_l |A_kl|
    std::size_t unimodular_count = 0;
    std::size_t iterations = 0;
    bool feasible = false;
    std::string status;

    double max_residual() const { return residuals.empty() ? 0.0 : *std::max_element(residuals.begin(), residuals.end()); }
    double max_modulus() const
    {
        double m = 0;
        for (auto v : z) m = std::max(m, std::abs(v));
        return m;
    }
};

inline std::vector<double> relative_residuals(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& b, const Eigen::VectorXcd& z)
{
    Eigen::VectorXcd d = A * z - b;
    std::vector<double> out(A.rows());
    for (Eigen::Index k = 0; k < A.rows(); ++k) {
        double scale = A.row(k).cwiseAbs().sum();
        out[k] = std::abs(d(k)) / (scale > 0 ? scale : 1.0);
    }
    return out;
}

inline std::size_t count_unimodular(const std::vector<cplx>& z, double tol = 1e-12)
{
    std::size_t c = 0;
    for (auto v : z)
        if (std::fabs(std::abs(v) - 1.0) <= tol) ++c;
    return c;
}

struct PolydiscSolveOptions {
    std::size_t max_iterations = 100000;
    double tolerance = 1e-9;
};

/// A point z with |z_l| <= 1 and A z = b: minimum-norm solution, then
/// alternating projection (Dykstra) between the affine set and the polydisc.
inline PolydiscSolution solve_polydisc_system(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& b,
                                              const PolydiscSolveOptions& opt = {})
{
    const Eigen::Index m = A.rows(), L = A.cols();
    PolydiscSolution sol;
    if (m > L) throw validation_error("solve_polydisc_system: more equations than unknowns");
    if (m == 0) {
        sol.z.assign(L, cplx(0.0, 0.0));
        sol.feasible = true;
        sol.status = "no equations";
        return sol;
    }
    // orthonormal basis of the row space: A^H = Q1 R, so A z = b  <=>  Q1^H z = R^{-H} b
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(A.adjoint());
    Eigen::MatrixXcd Q1 = qr.householderQ() * Eigen::MatrixXcd::Identity(L, m);
    Eigen::MatrixXcd Rm = qr.matrixQR().topLeftCorner(m, m).triangularView<Eigen::Upper>();
    double dmax = 0, dmin = INFINITY;
    for (Eigen::Index i = 0; i < m; ++i) { dmax = std::max(dmax, std::abs(Rm(i, i))); dmin = std::min(dmin, std::abs(Rm(i, i))); }
    if (!(dmin > 1e-14 * dmax)) {
        sol.status = "rank deficient system";
        sol.z.assign(L, cplx(0.0, 0.0));
        sol.residuals = relative_residuals(A, b, Eigen::VectorXcd::Zero(L));
        return sol;
    }
    Eigen::VectorXcd c = Rm.adjoint().triangularView<Eigen::Lower>().solve(b);
    auto project_affine = [&](const Eigen::VectorXcd& y) -> Eigen::VectorXcd { return y - Q1 * (Q1.adjoint() * y - c); };
    auto project_disc = [&](Eigen::VectorXcd y) {
        for (Eigen::Index l = 0; l < L; ++l) {
            double a = std::abs(y(l));
            if (a > 1) y(l) /= a;
        }
        return y;
    };
    auto finish = [&](const Eigen::VectorXcd& z, std::size_t it, const std::string& st) {
        sol.z.assign(z.data(), z.data() + L);
        sol.residuals = relative_residuals(A, b, z);
        sol.iterations = it;
        sol.feasible = sol.max_residual() <= opt.tolerance && sol.max_modulus() <= 1 + 1e-12;
        sol.unimodular_count = count_unimodular(sol.z);
        sol.status = sol.feasible ? st : "infeasible after iteration budget";
        return sol;
    };

    Eigen::VectorXcd x = Q1 * c;
    if (x.cwiseAbs().maxCoeff() <= 1.0) return finish(x, 0, "minimum-norm solution");
    Eigen::VectorXcd p = Eigen::VectorXcd::Zero(L);
    for (std::size_t it = 1; it <= opt.max_iterations; ++it) {
        Eigen::VectorXcd y = project_disc(x + p);
        p = x + p - y;
        x = project_affine(y);
        if (x.cwiseAbs().maxCoeff() <= 1.0 + 1e-13) return finish(project_disc(x), it, "alternating projection");
        if (it % 16 == 0) {
            auto res = relative_residuals(A, b, y);
            if (*std::max_element(res.begin(), res.end()) <= 0.1 * opt.tolerance) return finish(y, it, "alternating projection");
        }
    }
    return finish(project_disc(x), opt.max_iterations, "");
}

struct PushOptions {
    double interior_tol = 1e-12;
};

/// Moves a feasible z along null directions of the interior columns until at
/// most K = rows(A) coordinates are strictly inside the unit disc.
inline PolydiscSolution push_to_boundary(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& b, std::vector<cplx> z,
                                         const PushOptions& opt = {})
{
    const Eigen::Index K = A.rows(), L = A.cols();
    if (static_cast<Eigen::Index>(z.size()) != L) throw validation_error("push_to_boundary: size mismatch");
    if (K > L) throw validation_error("push_to_boundary: need K <= L");
    for (auto& v : z)
        if (std::abs(v) > 1) v /= std::abs(v);

    // row-normalized copy for the null-vector computations
    Eigen::MatrixXcd An = A;
    for (Eigen::Index k = 0; k < K; ++k) {
        double nrm = An.row(k).norm();
        if (nrm > 0) An.row(k) /= nrm;
    }
    auto interior = [&](Eigen::Index l) { return std::abs(z[l]) < 1 - opt.interior_tol; };

    std::vector<Eigen::Index> window;
    Eigen::Index cursor = 0;
    auto refill = [&]() {
        while (static_cast<Eigen::Index>(window.size()) < K + 1 && cursor < L) {
            if (interior(cursor)) window.push_back(cursor);
            ++cursor;
        }
    };
    refill();
    std::size_t steps = 0;
    while (static_cast<Eigen::Index>(window.size()) == K + 1) {
        Eigen::VectorXcd v(K + 1);
        if (K == 0) {
            v(0) = 1;
        } else {
            Eigen::MatrixXcd sub(K, K + 1);
            for (Eigen::Index j = 0; j <= K; ++j) sub.col(j) = An.col(window[j]);
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(sub, Eigen::ComputeFullV);
            v = svd.matrixV().col(K);
            double defect = (sub * v).norm();
            if (!(defect <= 1e-10)) throw std::runtime_error("push_to_boundary: null vector defect " + std::to_string(defect));
        }
        // smallest positive and negative real steps reaching |z + t v| = 1
        double tpos = INFINITY, tneg = -INFINITY;
        for (Eigen::Index j = 0; j <= K; ++j) {
            cplx zz = z[window[j]], vv = v(j);
            double a = std::norm(vv);
            if (a < 1e-300) continue;
            double bh = (std::conj(zz) * vv).real();
            double c = std::norm(zz) - 1;  // < 0
            double disc = std::sqrt(bh * bh - a * c);
            // roots (-bh +- disc)/a, computed stably
            double q = bh >= 0 ? -(bh + disc) : -(bh - disc);
            double r1 = q / a, r2 = c / q;
            double hi = std::max(r1, r2), lo = std::min(r1, r2);
            tpos = std::min(tpos, hi);
            tneg = std::max(tneg, lo);
        }
        double t = (std::fabs(tneg) < tpos) ? tneg : tpos;
        if (!std::isfinite(t)) throw std::runtime_error("push_to_boundary: degenerate null vector");
        for (Eigen::Index j = 0; j <= K; ++j) z[window[j]] += t * v(j);
        // snap the coordinate(s) that reached the circle
        std::vector<Eigen::Index> keep;
        double closest = INFINITY;
        Eigen::Index closest_j = 0;
        for (Eigen::Index j = 0; j <= K; ++j) {
            double d = std::fabs(std::abs(z[window[j]]) - 1);
            if (d < closest) { closest = d; closest_j = j; }
        }
        for (Eigen::Index j = 0; j <= K; ++j) {
            Eigen::Index l = window[j];
            double a = std::abs(z[l]);
            if (j == closest_j || a >= 1 - opt.interior_tol) z[l] /= a;
            else keep.push_back(l);
        }
        window = std::move(keep);
        refill();
        ++steps;
    }
    PolydiscSolution sol;
    sol.z = std::move(z);
    Eigen::VectorXcd ze = Eigen::Map<Eigen::VectorXcd>(sol.z.data(), L);
    sol.residuals = relative_residuals(A, b, ze);
    sol.unimodular_count = count_unimodular(sol.z, opt.interior_tol);
    sol.iterations = steps;
    sol.feasible = sol.max_modulus() <= 1 + 1e-12;
    sol.status = "boundary push";
    return sol;
}

// ---- moment system --------------------------------------------------------------

/// Rows k = 0..K of chi(p) p^{-sigma} (-log p)^k / k!^{use_factorial}.
inline Eigen::MatrixXcd moment_matrix(const std::vector<std::uint64_t>& primes, const Character& chi, double sigma, int K,
                                      bool use_factorial)
{
    Eigen::MatrixXcd A(K + 1, static_cast<Eigen::Index>(primes.size()));
    for (std::size_t l = 0; l < primes.size(); ++l) {
        double lp = std::log(static_cast<double>(primes[l]));
        cplx base = chi(primes[l]) * std::pow(static_cast<double>(primes[l]), -sigma);
        double pw = 1;
        for (int k = 0; k <= K; ++k) {
            A(k, static_cast<Eigen::Index>(l)) = base * pw;
            pw *= -lp / (use_factorial ? (k + 1.0) : 1.0);
        }
    }
    return A;
}

inline std::vector<std::uint64_t> primes_in(const PrimeTable& t, double lo, double hi)
{
    auto [a, b] = t.range(lo, hi);
    return {t.primes().begin() + static_cast<std::ptrdiff_t>(a), t.primes().begin() + static_cast<std::ptrdiff_t>(b)};
}

struct MomentHypotheses {
    bool k_cubed = false;   // K^3 <= 0.06 log^2 lambda log(rho/lambda)
    bool w_bound = false;   // |w_k| below the admissible size
    bool lambda_ok = false; // lambda >= 355991
    bool all() const { return k_cubed && w_bound && lambda_ok; }
};

/// Largest admissible |w_k| for the moment system g_k(z) = w_k (no factorials).
inline double moment_target_limit(double lambda, double rho, double sigma, int K, int k)
{
    double Kd = std::max(1, K);
    double lr = std::log(rho), ll = std::log(lambda);
    double lg = (1 - sigma) * ll + std::log(lr) - std::log(10 * Kd * Kd * Kd * ll) +
                (K + 1) * std::log((1 - ll / lr) / (2 * Kd)) + std::lgamma(k + 1.0) + std::lgamma(K - k + 1.0) + k * std::log(lr);
    return std::exp(lg);
}

inline MomentHypotheses moment_hypotheses(double lambda, double rho, double sigma, const std::vector<cplx>& w)
{
    MomentHypotheses h;
    const int K = static_cast<int>(w.size()) - 1;
    double ll = std::log(lambda);
    h.k_cubed = static_cast<double>(K) * K * K <= 0.06 * ll * ll * std::log(rho / lambda);
    h.lambda_ok = lambda >= kPiThreshold;
    h.w_bound = true;
    for (int k = 0; k <= K; ++k)
        if (std::abs(w[k]) > moment_target_limit(lambda, rho, sigma, K, k)) h.w_bound = false;
    return h;
}

struct MomentSolution : PolydiscSolution {
    MomentHypotheses hypotheses;
};

/// Solves sum_{lambda<p<=rho} chi(p) z_p p^{-sigma} (-log p)^k = w_k, k = 0..K, |z_p| <= 1.
inline MomentSolution solve_moment_system(double lambda, double rho, double sigma, const Character& chi,
                                          const std::vector<cplx>& w, const PrimeTable& t,
                                          const PolydiscSolveOptions& opt = {})
{
    if (!(lambda < rho)) throw validation_error("solve_moment_system: need lambda < rho");
    if (w.empty()) throw validation_error("solve_moment_system: need at least one target");
    t.require(rho);
    auto primes = primes_in(t, lambda, rho);
    // chi(p) = 0 columns carry no information; they are kept but stay at 0
    std::vector<std::uint64_t> active;
    for (auto p : primes)
        if (chi(p) != cplx(0.0, 0.0)) active.push_back(p);
    const int K = static_cast<int>(w.size()) - 1;
    if (static_cast<std::size_t>(K + 1) > active.size())
        throw validation_error("solve_moment_system: fewer primes than equations");
    Eigen::MatrixXcd A = moment_matrix(active, chi, sigma, K, false);
    Eigen::VectorXcd b = Eigen::Map<const Eigen::VectorXcd>(w.data(), K + 1);
    PolydiscSolution s = solve_polydisc_system(A, b, opt);
    MomentSolution out;
    static_cast<PolydiscSolution&>(out) = s;
    out.lambda = lambda;
    out.rho = rho;
    // expand back to all primes of the range
    std::vector<cplx> z(primes.size(), cplx(0.0, 0.0));
    for (std::size_t i = 0, j = 0; i < primes.size(); ++i)
        if (chi(primes[i]) != cplx(0.0, 0.0)) z[i] = s.z[j++];
    out.primes = std::move(primes);
    out.z = std::move(z);
    out.unimodular_count = count_unimodular(out.z);
    out.hypotheses = moment_hypotheses(lambda, rho, sigma, w);
    return out;
}

// ---- alternating phases -----------------------------------------------------------

struct AlternatingPhases {
    std::vector<std::uint64_t> primes;  // p <= lambda, p != q
    std::vector<double> theta;
    double grid_max = 0;     // max over the s-grid of |sum log(1 - (-1)^n p_n^{-s-3/4})|
    double bound = 0;        // 1.5 + 3.42/(1 - 4R)
    int max_abs_A = 0;       // max_x |A_q(x)|
    bool passed = false;     // grid_max <= bound and max_abs_A <= 2
};

/// theta_{p_n} with chi(p_n) e^{-2 pi i theta} = (-1)^n, n the index of p_n among all primes.
inline double alternating_phase(const Character& chi, std::uint64_t p, std::uint64_t n)
{
    long e = chi.exponent(p);
    if (e < 0) throw validation_error("alternating_phase: chi(p) = 0");
    long den = 2 * chi.root_order();
    long num = (2 * e - static_cast<long>(n % 2) * chi.root_order()) % den;
    if (num < 0) num += den;
    return static_cast<double>(num) / static_cast<double>(den);
}

inline AlternatingPhases alternating_phases(double lambda, const Character& chi, const PrimeTable& t, double r = 1e-4,
                                            double R = 0.06, int circle = 16)
{
    if (lambda < 2) throw validation_error("alternating_phases: need lambda >= 2");
    t.require(lambda);
    const std::uint64_t q = chi.modulus();
    AlternatingPhases out;
    std::size_t n_all = t.pi(lambda);
    std::vector<double> sign;
    int A = 0;
    for (std::size_t i = 0; i < n_all; ++i) {
        std::uint64_t p = t.primes()[i], n = i + 1;
        if (q > 1 && p == q) continue;
        A += (n % 2 == 0) ? 1 : -1;
        out.max_abs_A = std::max(out.max_abs_A, std::abs(A));
        out.primes.push_back(p);
        out.theta.push_back(alternating_phase(chi, p, n));
        sign.push_back((n % 2 == 0) ? 1.0 : -1.0);
    }
    out.bound = 1.5 + 3.42 / (1 - 4 * R);
    for (cplx s : disc_grid(r, circle)) {
        cplx acc = 0;
        for (std::size_t i = 0; i < out.primes.size(); ++i)
            acc -= log_factor(sign[i] * prime_pow(out.primes[i], s + 0.75));
        out.grid_max = std::max(out.grid_max, std::abs(acc));
    }
    out.passed = out.grid_max <= out.bound && out.max_abs_A <= 2;
    return out;
}

// ---- dyadic unimodularization --------------------------------------------------

struct DyadicBlock {
    double lo = 0, hi = 0;
    int N = 0;
    std::size_t L = 0;
    std::size_t unimodular = 0;
    double residual = 0;
    double defect = 0;  // sup over the s-grid for this block
};

struct DyadicResult {
    std::vector<std::uint64_t> primes;
    std::vector<double> phases;
    std::vector<DyadicBlock> blocks;
    double sup_defect = 0;
    double bound = 0;  // 1.1 lambda^{r-3/4} log lambda
    bool passed = false;
};

/// Replaces z_p over (lambda, rho] by unit phases block by block, keeping the
/// first N+1 moments of each dyadic block (N = floor(0.3 log(2^j lambda))).
inline DyadicResult dyadic_unimodularize(double lambda, double rho, const std::vector<cplx>& z, double r, const Character& chi,
                                         const PrimeTable& t, int circle = 16)
{
    if (!(lambda < rho)) throw validation_error("dyadic_unimodularize: need lambda < rho");
    t.require(rho);
    DyadicResult out;
    out.primes = primes_in(t, lambda, rho);
    if (z.size() != out.primes.size()) throw validation_error("dyadic_unimodularize: z does not match the prime range");
    out.phases.assign(z.size(), 0.0);
    std::vector<cplx> zu(z.size());
    auto grid = disc_grid(r, circle);
    std::size_t offset = 0;
    for (double eta = lambda; eta < rho; eta *= 2) {
        DyadicBlock blk;
        blk.lo = eta;
        blk.hi = std::min(2 * eta, rho);
        blk.N = static_cast<int>(std::floor(0.3 * std::log(eta)));
        auto bp = primes_in(t, blk.lo, blk.hi);
        blk.L = bp.size();
        std::vector<std::uint64_t> act;
        std::vector<std::size_t> pos;
        for (std::size_t i = 0; i < bp.size(); ++i)
            if (chi(bp[i]) != cplx(0.0, 0.0)) { act.push_back(bp[i]); pos.push_back(offset + i); }
        std::vector<cplx> zb(act.size());
        for (std::size_t i = 0; i < act.size(); ++i) zb[i] = z[pos[i]];
        std::vector<cplx> zp = zb;
        if (act.size() > static_cast<std::size_t>(blk.N + 1)) {
            Eigen::MatrixXcd A = moment_matrix(act, chi, 0.75, blk.N, true);
            Eigen::VectorXcd b = A * Eigen::Map<Eigen::VectorXcd>(zb.data(), static_cast<Eigen::Index>(zb.size()));
            auto s = push_to_boundary(A, b, zb);
            zp = s.z;
            blk.residual = s.max_residual();
            blk.unimodular = s.unimodular_count;
        }
        for (std::size_t i = 0; i < act.size(); ++i) {
            out.phases[pos[i]] = phase_of(zp[i]);
            zu[pos[i]] = unit_phase(out.phases[pos[i]]);
        }
        for (cplx s : grid) {
            cplx acc = 0;
            for (std::size_t i = 0; i < act.size(); ++i)
                acc += chi(act[i]) * (z[pos[i]] - zu[pos[i]]) * prime_pow(act[i], s + 0.75);
            blk.defect = std::max(blk.defect, std::abs(acc));
        }
        offset += bp.size();
        out.blocks.push_back(blk);
    }
    for (cplx s : grid) {
        cplx acc = 0;
        for (std::size_t i = 0; i < out.primes.size(); ++i)
            acc += chi(out.primes[i]) * (z[i] - zu[i]) * prime_pow(out.primes[i], s + 0.75);
        out.sup_defect = std::max(out.sup_defect, std::abs(acc));
    }
    out.bound = 1.1 * std::pow(lambda, r - 0.75) * std::log(lambda);
    out.passed = out.sup_defect <= out.bound;
    return out;
}

// ---- the full construction --------------------------------------------------------

struct NamedConstraint {
    std::string name;
    bool holds = false;
    double lhs = 0, rhs = 0;  // holds <=> lhs < rhs (or <=)
};

struct PipelineOptions {
    bool strict = false;
    int K_override = -1;         // >= 0 replaces floor(delta log rho)
    double lambda_override = 0;  // > 0 replaces rho e^{-4K}
    int circle = 16;
    PolydiscSolveOptions solver;
};

struct ApproximationBound {
    double taylor = 0, alpha = 0, tail = 0, square = 0;
    double total() const { return taylor + alpha + tail + square; }
};

/// M/((R/r - 1) rho^{delta log(R/r)}) + 3/(rho^alpha log rho)
///   + 3 log rho/rho^{(1-4 delta)(3/4-r)} + 3/(rho^{(1-4 delta)(1/2-2r)} log rho)
inline ApproximationBound approximation_bound(double M, double r, double R, double delta, double alpha, double rho)
{
    ApproximationBound b;
    double L = std::log(rho);
    b.taylor = M / ((R / r - 1) * std::exp(delta * std::log(R / r) * L));
    b.alpha = 3 / (std::exp(alpha * L) * L);
    b.tail = 3 * L / std::exp((1 - 4 * delta) * (0.75 - r) * L);
    b.square = 3 / (std::exp((1 - 4 * delta) * (0.5 - 2 * r) * L) * L);
    return b;
}

struct PipelineResult {
    double rho = 0, lambda = 0;
    int K = 0;
    double delta = 0, alpha = 0, M = 0, g_max = 0;
    std::vector<NamedConstraint> constraints;
    bool strict_hypotheses = false;
    std::vector<std::uint64_t> primes;  // p <= rho, p != q, ascending
    std::vector<double> phases;
    AlternatingPhases small;
    TaylorModel taylor;
    std::string moment_status;
    bool moment_feasible = true;
    double moment_residual = 0;
    std::vector<DyadicBlock> blocks;
    double dyadic_defect = 0, dyadic_bound = 0;
    std::vector<cplx> grid;
    std::vector<cplx> log_sums;  // -sum_{p<=rho} log(1 - chi(p) e^{-2 pi i theta_p} p^{-s-3/4}) on the grid
    double empirical_defect = 0; // max over the grid of |g(s) - log_sums|
    ApproximationBound theoretical;
    bool bound_asserted = false;
    bool passed = true;
};

inline std::vector<NamedConstraint> approximation_constraints(const UniversalityParams& p, double g_max)
{
    std::vector<NamedConstraint> c;
    double d = p.delta();
    c.push_back({"0<r<R<1/4", p.r > 0 && p.r < p.R && p.R < 0.25, p.r, p.R});
    c.push_back({"0<beta+R<1/4", p.beta + p.R > 0 && p.beta + p.R < 0.25, p.beta + p.R, 0.25});
    double rb = d * std::exp(-1 - 1 / (4 * d));
    c.push_back({"r<delta*exp(-1-1/(4delta))", p.r < rb, p.r, rb});
    double M = g_max + 1.5 + 3.42 / (1 - 4 * p.R);
    c.push_back({"M<=rho^beta/(5e*delta^3*log^4(rho))", M <= p.M_ceiling(), M, p.M_ceiling()});
    c.push_back({"rho>355991^(1/(1-4delta))", p.rho > p.rho_min(), p.rho_min(), p.rho});
    return c;
}

inline PipelineResult approximation_pipeline(const AnalyticFn& g, const Character& chi, const UniversalityParams& params,
                                     const PrimeTable& t, const PipelineOptions& opt = {})
{
    PipelineResult res;
    const double rho = params.rho, r = params.r, R = params.R;
    t.require(rho);
    res.rho = rho;
    res.delta = params.delta();
    res.alpha = params.alpha();
    res.g_max = circle_max(g, 0.0, R);
    res.M = res.g_max + 1.5 + 3.42 / (1 - 4 * R);
    res.constraints = approximation_constraints(params, res.g_max);
    res.strict_hypotheses = std::all_of(res.constraints.begin(), res.constraints.end(), [](const auto& c) { return c.holds; });
    if (opt.strict && !res.strict_hypotheses) {
        for (const auto& c : res.constraints)
            if (!c.holds)
                throw validation_error("strict mode: constraint '" + c.name + "' violated (" + std::to_string(c.lhs) + " vs " +
                                       std::to_string(c.rhs) + ")");
    }
    res.K = opt.K_override >= 0 ? opt.K_override : static_cast<int>(std::floor(res.delta * std::log(rho)));
    res.lambda = opt.lambda_override > 0 ? opt.lambda_override : rho * std::exp(-4.0 * res.K);
    res.lambda = std::min(res.lambda, rho);

    // small primes: alternating phases
    res.small = alternating_phases(std::max(2.0, res.lambda), chi, t, r, R, opt.circle);
    std::vector<cplx> small_w(res.small.primes.size());
    std::vector<double> small_log(res.small.primes.size());
    for (std::size_t i = 0; i < small_w.size(); ++i) {
        small_w[i] = chi(res.small.primes[i]) * unit_phase(res.small.theta[i]);
        small_log[i] = std::log(static_cast<double>(res.small.primes[i]));
    }
    auto small_sum = [&](cplx s) {
        cplx acc = 0;
        for (std::size_t i = 0; i < small_w.size(); ++i) acc += log_factor(small_w[i] * std::exp(-(s + 0.75) * small_log[i]));
        return acc;  // -sum log(1 - w p^{-s-3/4})
    };
    // f = g + sum_{p<=lambda} log(1 - ...)
    AnalyticFn f = [&](cplx s) { return g(s) - small_sum(s); };
    res.taylor = taylor_truncate(f, R, r, res.K);

    // moment system over (lambda, rho]
    std::vector<std::uint64_t> mid_primes = primes_in(t, res.lambda, rho);
    std::vector<double> mid_phases;
    if (!mid_primes.empty()) {
        std::vector<cplx> w(res.K + 1);
        for (int k = 0; k <= res.K; ++k) w[k] = res.taylor.a[k];
        std::vector<std::uint64_t> act;
        for (auto p : mid_primes)
            if (chi(p) != cplx(0.0, 0.0)) act.push_back(p);
        std::vector<cplx> z(mid_primes.size(), cplx(0.0, 0.0));
        if (act.size() >= static_cast<std::size_t>(res.K + 1)) {
            Eigen::MatrixXcd A = moment_matrix(act, chi, 0.75, res.K, true);
            Eigen::VectorXcd b = Eigen::Map<Eigen::VectorXcd>(w.data(), res.K + 1);
            auto sol = solve_polydisc_system(A, b, opt.solver);
            res.moment_status = sol.status;
            res.moment_feasible = sol.feasible;
            res.moment_residual = sol.max_residual();
            for (std::size_t i = 0, j = 0; i < mid_primes.size(); ++i)
                if (chi(mid_primes[i]) != cplx(0.0, 0.0)) z[i] = sol.z[j++];
        } else {
            res.moment_status = "fewer primes than moments";
            res.moment_feasible = false;
        }
        if (opt.strict && !res.moment_feasible) throw std::runtime_error("moment system: " + res.moment_status);
        auto dy = dyadic_unimodularize(res.lambda, rho, z, r, chi, t, opt.circle);
        res.blocks = dy.blocks;
        res.dyadic_defect = dy.sup_defect;
        res.dyadic_bound = dy.bound;
        mid_phases = dy.phases;
    } else {
        res.moment_status = "empty prime range (lambda = rho)";
    }

    // assemble
    res.primes = res.small.primes;
    res.phases = res.small.theta;
    for (std::size_t i = 0; i < mid_primes.size(); ++i) {
        if (chi(mid_primes[i]) == cplx(0.0, 0.0)) continue;
        res.primes.push_back(mid_primes[i]);
        res.phases.push_back(mid_phases[i]);
    }
    res.grid = disc_grid(r, opt.circle);
    for (cplx s : res.grid) {
        cplx acc = 0;
        for (std::size_t i = 0; i < res.primes.size(); ++i)
            acc += log_factor(chi(res.primes[i]) * unit_phase(res.phases[i]) * prime_pow(res.primes[i], s + 0.75));
        res.log_sums.push_back(acc);
        res.empirical_defect = std::max(res.empirical_defect, std::abs(g(s) - acc));
    }
    res.theoretical = approximation_bound(res.M, r, R, res.delta, res.alpha, rho);
    res.bound_asserted = res.strict_hypotheses;
    res.passed = !res.bound_asserted || res.empirical_defect <= res.theoretical.total();
    return res;
}

}  // namespace euni
