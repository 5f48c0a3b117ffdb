#pragma once

#include <cmath>
#include <cstdint>
#include <optional>

#include "characters.hpp"
#include "magnitude.hpp"

namespace euni {

struct DeltaAlpha {
    double delta = 0;       // (1/4 - R - beta)/log(e/(2R))
    double alpha = 0;       // delta log(delta/(e r)) - 1/4
    double r_boundary = 0;  // delta e^{-1 - 1/(4 delta)}
    bool alpha_positive = false;
    bool r_below_boundary = false;
};

inline double delta_of(double R, double beta) { return (0.25 - R - beta) / std::log(std::exp(1.0) / (2 * R)); }

inline DeltaAlpha derive_delta_alpha(double R, double beta, double r)
{
    if (!(R > 0 && R < 0.25)) throw validation_error("derive_delta_alpha: need 0 < R < 1/4");
    if (!(beta + R > 0 && beta + R < 0.25)) throw validation_error("derive_delta_alpha: need 0 < beta + R < 1/4");
    if (!(r > 0)) throw validation_error("derive_delta_alpha: need r > 0");
    DeltaAlpha d;
    d.delta = delta_of(R, beta);
    d.alpha = d.delta * std::log(d.delta / (std::exp(1.0) * r)) - 0.25;
    d.r_boundary = d.delta * std::exp(-1 - 1 / (4 * d.delta));
    d.alpha_positive = d.alpha > 0;
    d.r_below_boundary = r < d.r_boundary;
    return d;
}

/// Parameter tuple of the joint universality statement.
struct UniversalityParams {
    std::uint64_t q = 3;
    double r = 1e-4;
    double R = 0.06;
    double beta = 0.039;
    double eps = 1.0;
    double eps1 = 0.5;
    double rho = 1e7;
    double V = 50;
    double theta_q = 0;
    double g_max = 0;                // max |g| on |s| <= R
    std::optional<Magnitude> Q;      // when absent, derived thresholds are reported
    std::optional<Magnitude> T;

    double delta() const { return delta_of(R, beta); }
    double alpha() const { double d = delta(); return d * std::log(d / (std::exp(1.0) * r)) - 0.25; }
    /// max|g| + 1.5 + 3.42/(1 - 4R)
    double M() const { return g_max + 1.5 + 3.42 / (1 - 4 * R); }
    /// Simplified variant max|g| + 6
    double M_density() const { return g_max + 6.0; }
    /// rho^beta/(5 e delta^3 log^4 rho)
    double M_ceiling() const
    {
        double d = delta(), L = std::log(rho);
        return std::pow(rho, beta) / (5 * std::exp(1.0) * d * d * d * L * L * L * L);
    }
    double rho_min() const { return std::pow(355991.0, 1 / (1 - 4 * delta())); }
};

}  // namespace euni
