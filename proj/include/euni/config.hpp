#pragma once

// Parameter files for the bound calculators and the pipeline (JSON).
//
//   q, r, R, beta, epsilon, epsilon1, theta_q   numbers
//   rho        number, or "minimal" (smallest rho meeting every rho condition of the mode)
//   V          number, or "sqrt-rho-log" for V = sqrt(rho/log rho)
//   mode       "general" | "density" | "hurwitz"
//   target     polynomial coefficients of g, each a number or [re, im]
//   p          numerator of the Hurwitz parameter p/q (mode "hurwitz")
//   log_Q, log_T   optional; Q = e^{log_Q}, T = e^{log_T}

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bounds.hpp"
#include "report.hpp"

namespace euni {

class config_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct RunConfig {
    UniversalityParams params;
    std::string mode = "general";
    std::vector<cplx> target;  // g(s) = sum target[k] s^k
    std::uint64_t hurwitz_p = 1;
    bool rho_minimal = false, V_sqrt_rho_log = false;
    json raw = json::object();

    cplx g(cplx s) const
    {
        cplx acc = 0;
        for (auto it = target.rbegin(); it != target.rend(); ++it) acc = acc * s + *it;
        return acc;
    }
};

inline double number_of(const json& j, const std::string& key)
{
    if (!j.is_number()) throw config_error("config: '" + key + "' must be a number");
    return j.get<double>();
}

inline RunConfig parse_config(const json& j)
{
    if (!j.is_object()) throw config_error("config: top level must be an object");
    RunConfig c;
    c.raw = j;
    auto& p = c.params;
    for (const auto& [key, v] : j.items()) {
        if (key == "q") {
            double q = number_of(v, key);
            if (q < 1 || q != std::floor(q)) throw config_error("config: 'q' must be a positive integer");
            p.q = static_cast<std::uint64_t>(q);
        } else if (key == "r") p.r = number_of(v, key);
        else if (key == "R") p.R = number_of(v, key);
        else if (key == "beta") p.beta = number_of(v, key);
        else if (key == "epsilon") p.eps = number_of(v, key);
        else if (key == "epsilon1") p.eps1 = number_of(v, key);
        else if (key == "theta_q") p.theta_q = number_of(v, key);
        else if (key == "rho") {
            if (v.is_string() && v.get<std::string>() == "minimal") c.rho_minimal = true;
            else p.rho = number_of(v, key);
        } else if (key == "V") {
            if (v.is_string() && v.get<std::string>() == "sqrt-rho-log") c.V_sqrt_rho_log = true;
            else p.V = number_of(v, key);
        } else if (key == "mode") {
            if (!v.is_string()) throw config_error("config: 'mode' must be a string");
            c.mode = v.get<std::string>();
            if (c.mode != "general" && c.mode != "density" && c.mode != "hurwitz")
                throw config_error("config: unknown mode '" + c.mode + "'");
        } else if (key == "target") {
            if (!v.is_array()) throw config_error("config: 'target' must be an array of coefficients");
            for (const auto& e : v) {
                if (e.is_number()) c.target.emplace_back(e.get<double>(), 0.0);
                else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
                    c.target.emplace_back(e[0].get<double>(), e[1].get<double>());
                else throw config_error("config: target coefficients are numbers or [re, im] pairs");
            }
        } else if (key == "p") {
            double pp = number_of(v, key);
            if (pp < 1 || pp != std::floor(pp)) throw config_error("config: 'p' must be a positive integer");
            c.hurwitz_p = static_cast<std::uint64_t>(pp);
        } else if (key == "log_Q") p.Q = Magnitude::from_log(number_of(v, key));
        else if (key == "log_T") p.T = Magnitude::from_log(number_of(v, key));
        else throw config_error("config: unknown key '" + key + "'");
    }
    return c;
}

inline RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw config_error("config: cannot open '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("config: parse error: ") + e.what());
    }
    return parse_config(j);
}

/// Fills in max|g|, a "minimal" rho and V = sqrt(rho/log rho) when requested.
/// For mode "hurwitz" the M condition is taken on the Hurwitz targets, which needs
/// the setup; the caller passes their maximum over |s| <= R in `hurwitz_target_max`.
inline void resolve(RunConfig& c, double hurwitz_target_max = -1)
{
    auto& p = c.params;
    if (!c.target.empty() && p.R > 0) p.g_max = circle_max([&c](cplx s) { return c.g(s); }, 0.0, p.R);
    if (c.rho_minimal) {
        if (!(p.R > 0 && p.R < 0.25 && p.beta > 0 && p.beta + p.R < 0.25 && p.r > 0 && p.r < 0.25 && p.eps > 0))
            throw config_error("config: rho = \"minimal\" needs valid R, beta, r, epsilon");
        const double d = p.delta();
        double lower = std::log(p.rho_min()) + 1e-9;
        double M_needed = p.M();
        if (c.mode != "general") {
            lower = std::max(lower, threshold_log_rho(p.r, d, p.eps));
            M_needed = (c.mode == "hurwitz" && hurwitz_target_max >= 0 ? hurwitz_target_max : p.g_max) + 6;
        }
        double L = minimal_log_rho(p.beta, d, M_needed, lower);
        p.rho = std::exp(L * (1 + 1e-12));
    }
    if (c.V_sqrt_rho_log) p.V = std::sqrt(p.rho / std::log(p.rho));
}

}  // namespace euni
