// Command-line front end: verify, bound, approximate, scan.
// Exit status: 0 all checks pass, 1 some check fails, 2 usage or configuration error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "euni/suites.hpp"

using namespace euni;
namespace fs = std::filesystem;

namespace {

struct Common {
    std::string config;
    std::uint64_t seed = 1;
    std::uint64_t max = 0;
    std::size_t trials = 0;
    std::string json_path;
    unsigned threads = 1;
};

std::vector<std::uint64_t> parse_list(const std::string& s)
{
    std::vector<std::uint64_t> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t pos = 0;
        unsigned long long v = std::stoull(item, &pos);
        if (pos != item.size()) throw config_error("bad integer list '" + s + "'");
        out.push_back(v);
    }
    return out;
}

std::vector<double> parse_reals(const std::string& s)
{
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t pos = 0;
        double v = std::stod(item, &pos);
        if (pos != item.size()) throw config_error("bad number list '" + s + "'");
        out.push_back(v);
    }
    return out;
}

/// Writes the report next to earlier ones without replacing any of them.
/// A directory argument (existing, or ending in '/') receives <suite>-<hash>.json.
fs::path write_report(const std::string& where, const std::string& stem, const std::string& hash, const std::string& payload)
{
    fs::path target(where);
    bool dir = fs::is_directory(target) || (!where.empty() && where.back() == '/');
    if (dir) {
        fs::create_directories(target);
        target /= stem + "-" + hash + ".json";
    }
    fs::path out = target;
    for (int i = 1; fs::exists(out); ++i) {
        out = target.parent_path() / (target.stem().string() + "." + std::to_string(i) + target.extension().string());
    }
    std::ofstream f(out);
    if (!f) throw config_error("cannot write report to '" + out.string() + "'");
    f << payload << '\n';
    return out;
}

int finish(Report& r, const Common& c, const json& identity, std::uint64_t sieve_limit)
{
    r.provenance().config_hash = fnv1a_hex(identity.dump());
    r.provenance().seed = c.seed;
    r.provenance().sieve_limit = sieve_limit;
    const std::string payload = to_json(r).dump(2);
    if (!c.json_path.empty()) {
        auto path = write_report(c.json_path, r.suite(), r.provenance().config_hash, payload);
        std::cerr << "report written to " << path.string() << '\n';
    } else {
        std::cout << payload << '\n';
    }
    const auto s = r.summary();
    std::cerr << r.suite() << ": " << s.passed << "/" << s.total << " checks passed\n";
    return r.all_passed() ? 0 : 1;
}

void add_common(CLI::App* app, Common& c)
{
    app->add_option("--config", c.config, "parameter file (JSON)");
    app->add_option("--seed", c.seed, "seed of the suite generator");
    app->add_option("--max", c.max, "upper end of the scanned range");
    app->add_option("--trials", c.trials, "number of random trials");
    app->add_option("--json", c.json_path, "write the report here (a directory gets <suite>-<hash>.json)");
    app->add_option("--threads", c.threads, "worker threads (suites currently run on one thread)");
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Explicit bounds toolkit for Dirichlet L-function universality"};
    app.require_subcommand(1);

    Common common;
    std::string suite_id, q_list;
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("suite", suite_id, "suite id")->required();
    verify->add_option("--q", q_list, "comma-separated moduli");
    add_common(verify, common);

    std::uint64_t hurwitz_p = 0;
    auto* bound = app.add_subcommand("bound", "validate a parameter set and evaluate the bounds");
    add_common(bound, common);

    std::string preset = "zero", coeffs;
    double rho = 5e5, lambda = 0;
    std::uint64_t q = 3, k = 1;
    int K = -1;
    bool strict = false, relaxed = false;
    std::string phases_path;
    auto* approx = app.add_subcommand("approximate", "run the phase construction for a target");
    approx->add_option("--preset", preset, "zero | poly");
    approx->add_option("--coeffs", coeffs, "polynomial coefficients of the target, lowest first");
    approx->add_option("--rho", rho, "upper prime bound");
    approx->add_option("--chi-q", q, "character modulus (prime)");
    approx->add_option("--chi-k", k, "character index");
    approx->add_option("--K", K, "override the number of matched Taylor terms");
    approx->add_option("--lambda", lambda, "override lambda");
    auto* so = approx->add_flag("--strict", strict, "refuse unless every hypothesis holds");
    auto* ro = approx->add_flag("--relaxed", relaxed, "run even when hypotheses fail (default)");
    so->excludes(ro);
    approx->add_option("--phases", phases_path, "write primes and phases here");
    add_common(approx, common);

    std::string alphas, primes, centers, widths, intervals_path;
    double t0 = 0, t1 = 1e5, H = 100;
    auto* scan = app.add_subcommand("scan", "find tau with ||tau alpha_l - c_l|| <= w_l");
    scan->add_option("--alpha", alphas, "frequencies");
    scan->add_option("--primes", primes, "use alpha_l = log p_l/(2 pi)");
    scan->add_option("--center", centers, "box centres c_l");
    scan->add_option("--width", widths, "half-widths w_l");
    scan->add_option("--t0", t0, "start of the range");
    scan->add_option("--t1", t1, "end of the range");
    scan->add_option("--H", H, "smoothing parameter of the discrepancy bound");
    scan->add_option("--intervals", intervals_path, "write hit intervals here");
    add_common(scan, common);

    bound->add_option("--hurwitz-p", hurwitz_p, "numerator p for mode hurwitz (overrides the file)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (verify->parsed()) {
            const auto& suites = verify_suites();
            auto it = suites.find(suite_id);
            if (it == suites.end()) {
                std::cerr << "unknown suite '" << suite_id << "'; known:";
                for (const auto& [name, fn] : suites) std::cerr << ' ' << name;
                std::cerr << '\n';
                return 2;
            }
            SuiteOptions o;
            o.max = common.max;
            o.trials = common.trials;
            o.seed = common.seed;
            o.qs = parse_list(q_list);
            Report r = it->second(o);
            json id = {{"command", "verify"}, {"suite", suite_id}, {"max", o.max}, {"trials", o.trials}, {"seed", o.seed}, {"q", o.qs}};
            return finish(r, common, id, o.max);
        }
        if (bound->parsed()) {
            if (common.config.empty()) throw config_error("bound: --config is required");
            RunConfig cfg = load_config(common.config);
            if (hurwitz_p) cfg.hurwitz_p = hurwitz_p;
            Report r = suite_bound(cfg);
            json id = {{"command", "bound"}, {"config", cfg.raw}, {"p", cfg.hurwitz_p}};
            return finish(r, common, id, 20000000);
        }
        if (approx->parsed()) {
            RunConfig cfg;
            if (!common.config.empty()) cfg = load_config(common.config);
            else cfg.params.rho = rho;
            if (approx->count("--rho")) cfg.params.rho = rho;
            if (preset == "poly" || !coeffs.empty()) {
                cfg.target.clear();
                for (double v : parse_reals(coeffs)) cfg.target.emplace_back(v, 0.0);
            } else if (preset != "zero") {
                throw config_error("approximate: unknown preset '" + preset + "'");
            }
            if (cfg.params.rho > static_cast<double>(kMaxSieveLimit)) throw config_error("approximate: rho beyond the sieve limit");
            PipelineOptions po;
            po.strict = strict;
            po.K_override = K;
            po.lambda_override = lambda;
            Character chi = q == 1 ? Character::trivial() : Character(q, k);
            AnalyticFn g = [&cfg](cplx s) { return cfg.g(s); };
            Report r = suite_pipeline(g, chi, cfg.params, po);
            json id = {{"command", "approximate"}, {"config", cfg.raw}, {"rho", cfg.params.rho}, {"target", coeffs}, {"preset", preset},
                       {"q", q}, {"k", k}, {"K", K}, {"lambda", lambda}, {"strict", strict}};
            if (!phases_path.empty()) {
                auto pc = run_pipeline_check(g, chi, cfg.params, po);
                json ph = {{"schema", 1}, {"rho", pc.result.rho}, {"q", q}, {"k", k}, {"convention", "chi(p) e^{-2 pi i theta_p}"},
                           {"primes", pc.result.primes}, {"theta", pc.result.phases}};
                auto out = write_report(phases_path, "phases", fnv1a_hex(id.dump()), ph.dump());
                std::cerr << "phases written to " << out.string() << '\n';
            }
            return finish(r, common, id, static_cast<std::uint64_t>(cfg.params.rho));
        }
        if (scan->parsed()) {
            ScanTarget tg;
            if (!alphas.empty()) tg.alpha = parse_reals(alphas);
            for (auto p : parse_list(primes)) tg.alpha.push_back(std::log(static_cast<double>(p)) / kTwoPi);
            tg.center = parse_reals(centers);
            tg.half_width = parse_reals(widths);
            if (tg.center.empty()) tg.center.assign(tg.alpha.size(), 0.0);
            if (tg.half_width.size() == 1 && tg.alpha.size() > 1) tg.half_width.assign(tg.alpha.size(), tg.half_width[0]);
            if (tg.half_width.empty()) tg.half_width.assign(tg.alpha.size(), 0.0);
            auto res = tau_scan(tg, t0, t1);
            Report r("scan");
            json in = {{"alpha", tg.alpha}, {"center", tg.center}, {"half_width", tg.half_width}, {"t0", t0}, {"t1", t1}};
            r.notes()["intervals"] = res.hits.size();
            r.notes()["measure"] = res.measure;
            r.notes()["density"] = res.density;
            r.notes()["expected"] = res.expected;
            r.notes()["step"] = res.step;
            bool positive = true;
            for (double w : tg.half_width) positive = positive && w > 0 && w < 0.5;
            if (positive && t0 == 0 && tg.alpha.size() <= 3) {
                KoksmaBox box;
                for (std::size_t l = 0; l < tg.alpha.size(); ++l) {
                    box.a.push_back(tg.center[l] - tg.half_width[l]);
                    box.b.push_back(tg.center[l] + tg.half_width[l]);
                    box.alpha.push_back(tg.alpha[l]);
                    box.H.push_back(H);
                }
                auto kb = koksma_deviation_bound(box, t1);
                r.check("|density-volume|<=koksma bound", std::fabs(res.density - res.expected), kb.total(), in);
            } else {
                r.record("scan completed", true, res.density, res.expected, in);
                r.notes()["koksma"] = "not applicable (needs t0 = 0, L <= 3 and 0 < w < 1/2)";
            }
            json id = {{"command", "scan"}, {"inputs", in}, {"H", H}};
            if (!intervals_path.empty()) {
                json iv = json::array();
                for (const auto& h : res.hits) iv.push_back({h.lo, h.hi});
                auto out = write_report(intervals_path, "intervals", fnv1a_hex(id.dump()), json{{"schema", 1}, {"intervals", iv}}.dump());
                std::cerr << "intervals written to " << out.string() << '\n';
            }
            return finish(r, common, id, 0);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
