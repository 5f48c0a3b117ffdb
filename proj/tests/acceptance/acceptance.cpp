// Acceptance runner: one line per criterion, exit status 1 if any selected criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "euni/suites.hpp"

using namespace euni;

namespace {

struct Criterion {
    int id;
    const char* title;
    double time_limit;  // seconds
    std::function<Report(std::uint64_t seed)> run;
};

Report combine(std::string name, std::vector<Report> parts)
{
    Report r(std::move(name));
    for (auto& p : parts) r.merge(p);
    return r;
}

/// Keeps only the named case of a report (the other cases stay as notes).
Report only_case(Report src, const std::string& id)
{
    Report r(src.suite());
    for (const auto& c : src.cases()) {
        if (c.id == id) r.record(c.id, c.pass, c.measured, c.bound, c.inputs);
        else r.notes()["also: " + c.id] = {{"pass", c.pass}, {"measured", c.measured}, {"bound", c.bound}};
    }
    return r;
}

/// Note stored under `id`, either directly or one level down (merged reports).
const json* find_note(const json& notes, const std::string& id)
{
    if (notes.contains(id)) return &notes[id];
    for (const auto& [k, v] : notes.items())
        if (v.is_object() && v.contains(id)) return &v[id];
    return nullptr;
}

std::vector<Criterion> criteria()
{
    return {
        {1, "pi(x) < 1.094 x/log x at every prime jump in [355991, 1e7]", 60,
         [](std::uint64_t) { return only_case(verify_pi_bound(shared_primes(10000000), kPiThreshold, 1e7), "pi<1.094x/logx"); }},
        {2, "theta(x) <= 1.000081 x at every prime jump <= 1e7", 60,
         [](std::uint64_t) { return verify_theta_bound(shared_primes(10000000), 1e7); }},
        {3, "coprime harmonic and fractional sum bounds, q in {1,2,3,5,7,11}, x in [3,1e5] + log grid to 1e6", 120,
         [](std::uint64_t) { return suite_arith({}, {ArithSum::harmonic, ArithSum::fractional}, "arith"); }},
        {4, "D(x,q) error bound (C=0.397, theta=1/2) on the same ranges; |Delta(x)| <= 0.397 sqrt(x) on [5560,1e6]", 180,
         [](std::uint64_t) { return combine("divisor", {suite_arith({}, {ArithSum::divisor}, "divisor"), suite_delta({})}); }},
        {5, "mean square deviation <= 837 sum n|a_n|^2, 500 random vectors", 10,
         [](std::uint64_t seed) { SuiteOptions o; o.seed = seed; o.trials = 500; return suite_meansquare(o); }},
        {6, "truncated L error bound on 200 samples; character decomposition of Hurwitz zeta to 1e-10", 120,
         [](std::uint64_t seed) {
             SuiteOptions o; o.seed = seed; o.trials = 200;
             SuiteOptions h; h.max = 13;
             return combine("l-functions", {suite_l_truncation(o), suite_hurwitz(h)});
         }},
        {7, "boundary pushing: 100 random systems, >= L-K unimodular, residual <= 1e-8", 5,
         [](std::uint64_t seed) { SuiteOptions o; o.seed = seed; o.trials = 100; return suite_boundary_push(o); }},
        {8, "linearization remainder and phase perturbation bounds, lambda, M in [355991, 4e5]", 60,
         [](std::uint64_t seed) {
             SuiteOptions o; o.seed = seed; o.max = 400000;
             return combine("perturbation", {suite_linearize(o), suite_phase_perturbation(o)});
         }},
        {9, "Koksma deviation bound, L in {1,2}, p in {2,3}, 50 boxes, T in {1e4,1e5,1e6}", 300,
         [](std::uint64_t seed) { SuiteOptions o; o.seed = seed; o.trials = 50; return suite_koksma(o); }},
        {10, "bound calculators: delta, alpha, minimal rho, density claim and threshold budget", 1,
         [](std::uint64_t) { return suite_calculators(); }},
        {11, "relaxed pipeline on g = 0, rho = 5e5: log sums and defect match direct evaluation to 1e-10", 300,
         [](std::uint64_t) {
             UniversalityParams p;
             p.rho = 5e5;
             return suite_pipeline([](cplx) { return cplx(0.0, 0.0); }, Character(3, 1), p);
         }},
    };
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"acceptance criteria"};
    int only = 0;
    std::uint64_t seed = 20240601;
    bool verbose = false;
    app.add_option("--only", only, "run a single criterion (1-11)")->check(CLI::Range(1, 11));
    app.add_option("--seed", seed, "seed for the randomized criteria");
    app.add_flag("-v,--verbose", verbose, "print the full JSON report of each criterion");
    CLI11_PARSE(app, argc, argv);

    int failed = 0;
    for (const auto& c : criteria()) {
        if (only && c.id != only) continue;
        auto t0 = std::chrono::steady_clock::now();
        Report r;
        std::string error;
        try {
            r = c.run(seed);
        } catch (const std::exception& e) {
            error = e.what();
        }
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = dt <= c.time_limit;
        const bool pass = error.empty() && r.all_passed() && in_time;
        if (!pass) ++failed;
        const auto s = r.summary();
        std::printf("[%s] C%-2d %s | cases %zu/%zu, max ratio %.4g, %.2f s (limit %.0f s)\n", pass ? "PASS" : "FAIL", c.id, c.title,
                    s.passed, s.total, s.max_ratio, dt, c.time_limit);
        if (!error.empty()) std::printf("      error: %s\n", error.c_str());
        if (!in_time) std::printf("      over time limit\n");
        for (const auto& k : r.cases())
            if (!k.pass) {
                std::printf("      failed case: %s (measured %.6g, bound %.6g)\n", k.id.c_str(), k.measured, k.bound);
                if (const json* n = find_note(r.notes(), k.id)) std::printf("        %s\n", n->dump().c_str());
            }
        if (verbose) std::printf("%s\n", to_json(r).dump(2).c_str());
        std::fflush(stdout);
    }
    return failed ? 1 : 0;
}
