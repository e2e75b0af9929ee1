// Command-line surface of the workbench: expression cohomology, stability
// verdicts, the one-shot verification report, subspace tooling, and
// parameter sweeps.
//
// Exit codes: 0 success, 1 failed claims or failed sweep rows, 2 parse or
// configuration error, 3 unresolvable expression, 4 inconsistent table
// (engine bug), 5 unknown stability verdict.

#include "tango/chase.hpp"
#include "tango/deformation.hpp"
#include "tango/expr.hpp"
#include "tango/stability.hpp"
#include "tango/weights.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace tango;
using nlohmann::json;

constexpr const char* kSchema = "tango-workbench/1";
constexpr long kSweepGuard = 10000;

enum ExitCode {
    kOk = 0,
    kClaimFailed = 1,
    kParseError = 2,
    kUnresolvable = 3,
    kInconsistent = 4,
    kUnknownVerdict = 5,
};

std::string int_str(const Int& v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

std::string dim_str(const DimValue& d) {
    if (d.is_exact()) return int_str(d.lo);
    return "[" + int_str(d.lo) + "," + int_str(d.hi) + "]";
}

json dim_json(const DimValue& d) {
    if (d.is_exact()) return int_str(d.lo);
    return json::array({int_str(d.lo), int_str(d.hi)});
}

struct CacheFile {
    std::string path;

    void load(Engine& engine) const {
        if (path.empty()) return;
        std::ifstream in(path);
        if (!in) return; // absent cache files are created on save
        std::ostringstream buf;
        buf << in.rdbuf();
        engine.load_cache_json(buf.str());
    }
    void save(const Engine& engine) const {
        if (path.empty()) return;
        std::ofstream out(path);
        if (out) out << engine.cache_to_json();
    }
};

struct CommonOpts {
    int n = 3;
    long gamma = 1;
    long alpha = 0;
    long beta = 0;
    std::string format = "text";
    std::string cache_path;

    TangoParams params() const {
        TangoParams p{n, gamma, alpha, beta};
        p.require_valid();
        return p;
    }
    CacheFile cache() const {
        if (!cache_path.empty()) return {cache_path};
        if (const char* env = std::getenv("TANGO_CACHE")) return {env};
        return {};
    }
    bool json_out() const { return format == "json"; }
};

void add_param_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("-n", o.n, "ambient projective dimension")->check(CLI::Range(3, 64));
    cmd->add_option("-g,--gamma", o.gamma, "twist of the defining form");
    cmd->add_option("-a,--alpha", o.alpha, "first weight");
    cmd->add_option("-b,--beta", o.beta, "second weight");
    cmd->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
    cmd->add_option("--cache", o.cache_path, "persistent cohomology cache path");
}

json table_json(const CohomTable& t) {
    json dims = json::array();
    for (int i = 0; i <= t.n; ++i) dims.push_back(dim_json(t.h(i)));
    return json{{"n", t.n}, {"h", dims}, {"euler", int_str(t.euler)}};
}

void print_table(const CohomTable& t, const std::string& label) {
    std::cout << label << "\n";
    for (int i = 0; i <= t.n; ++i)
        std::cout << "  h^" << i << " = " << dim_str(t.h(i)) << "\n";
    std::cout << "  chi = " << int_str(t.euler) << "\n";
}

// ---------------------------------------------------------------------------
// cohom

int cmd_cohom(const CommonOpts& o, const std::string& expr_text, long m) {
    TangoParams p = o.params();
    ExprPtr e = parse_expr(expr_text, p); // ParseError handled by main
    Engine engine;
    CacheFile cache = o.cache();
    cache.load(engine);
    CohomTable t = engine.cohomology(e, m);
    cache.save(engine);

    if (o.json_out()) {
        json out = table_json(t);
        out["schema"] = kSchema;
        out["expr"] = to_string(normalize(e));
        out["twist"] = m;
        std::cout << out.dump() << "\n";
    } else {
        print_table(t, to_string(normalize(e)) +
                           (m != 0 ? " (" + std::to_string(m) + ")" : ""));
    }
    return kOk;
}

// ---------------------------------------------------------------------------
// stability

int cmd_stability(const CommonOpts& o, long q_max) {
    TangoParams p = o.params();
    Engine engine;
    CacheFile cache = o.cache();
    cache.load(engine);
    StabilityVerdict v = analyze_stability(engine, p);
    // Optional explicit section-check battery up to exterior power q.
    if (q_max > 0)
        for (const HoppeEntry& e : hoppe_verify(engine, p, q_max))
            v.certificates.push_back(
                {"section count of normalized Wedge^" + std::to_string(e.q) +
                     " F at twist " + std::to_string(e.norm_twist),
                 dim_str(e.h0)});
    cache.save(engine);

    const char* name = v.verdict == Verdict::Stable
                           ? "stable"
                           : (v.verdict == Verdict::NotStable ? "not-stable" : "unknown");
    if (o.json_out()) {
        json certs = json::array();
        for (const auto& c : v.certificates)
            certs.push_back({{"claim", c.claim}, {"evidence", c.evidence}});
        std::cout << json{{"schema", kSchema},
                          {"params", {{"n", p.n}, {"gamma", p.gamma}, {"alpha", p.alpha}, {"beta", p.beta}}},
                          {"verdict", name},
                          {"certificates", certs}}
                         .dump()
                  << "\n";
    } else {
        std::cout << "verdict: " << name << "\n";
        for (const auto& c : v.certificates)
            std::cout << "  " << c.claim << ": " << c.evidence << "\n";
    }
    return v.verdict == Verdict::Unknown ? kUnknownVerdict : kOk;
}

// ---------------------------------------------------------------------------
// report

struct Claim {
    std::string name;
    std::string status; // pass | fail | indeterminate
    std::string detail;
};

int cmd_report(const CommonOpts& o, std::uint64_t seed) {
    TangoParams p = o.params();
    Engine engine;
    CacheFile cache = o.cache();
    cache.load(engine);

    std::vector<Claim> claims;

    // First Chern class of the Tango cokernel against its closed form
    // (alpha+beta) * 3n(n-1)/2.
    {
        long twice = (p.alpha + p.beta) * 3L * p.n * (p.n - 1);
        bool ok = twice % 2 == 0 && c1_tango(p) == twice / 2;
        claims.push_back({"c1-closed-form", ok ? "pass" : "fail",
                          "c1(F) = " + std::to_string(c1_tango(p))});
    }

    // Section counts of the classical construction.
    if (p.alpha == 0 && p.beta == 0 && p.gamma == 1) {
        DimValue h0 = engine.cohomology(f_bundle(p), 1).h(0);
        bool ok = h0.is_exact() && h0.value() == 2 * p.n - 1;
        claims.push_back({"classical-section-count", ok ? "pass" : "fail",
                          "h0(F(1)) = " + dim_str(h0)});
        DimValue h1 = engine.cohomology(dual(twist(f_bundle(p), 1))).h(1);
        Int want = binom(p.n + 1, 2) - (2 * p.n - 1);
        bool ok1 = h1.is_exact() && h1.value() == want;
        claims.push_back({"classical-extension-count", ok1 ? "pass" : "fail",
                          "h1(F(1)*) = " + dim_str(h1)});
    }

    // Stability.
    {
        StabilityVerdict v = analyze_stability(engine, p);
        const char* name = v.verdict == Verdict::Stable
                               ? "stable"
                               : (v.verdict == Verdict::NotStable ? "not-stable" : "unknown");
        claims.push_back({"stability",
                          v.verdict == Verdict::Unknown ? "indeterminate" : "pass", name});
    }

    // Twisted quotient h1 vanishing.
    claims.push_back({"twisted-quotient-h1-vanishing",
                      h1_twisted_q_vanishing(engine, p) ? "pass" : "fail", ""});

    // Deformation identities.
    DeformationReport dr = smoothness_report(engine, p);
    for (const auto& id : dr.identities) {
        const char* st = id.status == IdentityStatus::Holds
                             ? "pass"
                             : (id.status == IdentityStatus::Fails ? "fail" : "indeterminate");
        claims.push_back({"deformation/" + id.name, st, id.detail});
    }
    claims.push_back({"kuranishi-dimension", "pass", dim_str(dr.kuranishi_dim)});
    claims.push_back({"quot-dimension", "pass", dim_str(dr.dim_y)});

    // Sampled admissible subspace.
    {
        WSpace w = sample_wspace(p.n, seed);
        auto rep = wspace_validate(w);
        auto ev = wspace_no_decomposable_check(w, 100, seed);
        bool ok = rep.in_family && ev.structural_ok && ev.randomized_ok;
        claims.push_back({"sampled-subspace-admissible", ok ? "pass" : "fail",
                          "dim W = " + int_str(rep.dim_w)});
    }
    cache.save(engine);

    bool any_fail = false;
    for (const auto& c : claims) any_fail = any_fail || c.status == "fail";

    if (o.json_out()) {
        json arr = json::array();
        for (const auto& c : claims)
            arr.push_back({{"name", c.name}, {"status", c.status}, {"detail", c.detail}});
        std::cout << json{{"schema", kSchema},
                          {"params", {{"n", p.n}, {"gamma", p.gamma}, {"alpha", p.alpha}, {"beta", p.beta}}},
                          {"seed", seed},
                          {"claims", arr}}
                         .dump()
                  << "\n";
    } else {
        std::cout << "verification report (n=" << p.n << ", gamma=" << p.gamma
                  << ", alpha=" << p.alpha << ", beta=" << p.beta << ", seed=" << seed
                  << ")\n";
        for (const auto& c : claims) {
            std::cout << "  [" << c.status << "] " << c.name;
            if (!c.detail.empty()) std::cout << ": " << c.detail;
            std::cout << "\n";
        }
    }
    return any_fail ? kClaimFailed : kOk;
}

// ---------------------------------------------------------------------------
// wspace

int cmd_wspace(const CommonOpts& o, const std::string& mode, std::uint64_t seed,
               const std::string& file) {
    if (mode == "sample") {
        WSpace w = sample_wspace(o.n, seed);
        if (o.json_out()) {
            json out = json::parse(wspace_to_json(w));
            out["schema"] = kSchema;
            out["seed"] = seed;
            std::cout << out.dump() << "\n";
        } else {
            std::cout << "seed: " << seed << "\n" << wspace_to_json(w) << "\n";
        }
        return kOk;
    }

    // check
    std::string text;
    if (file.empty() || file == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        text = buf.str();
    } else {
        std::ifstream in(file);
        if (!in) {
            std::cerr << "cannot open " << file << "\n";
            return kParseError;
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }
    // Tolerate a header line before the JSON object (the text-mode sample
    // output); malformed JSON is handled by main as a parse error.
    size_t brace = text.find('{');
    if (brace == std::string::npos) {
        std::cerr << "parse error: no JSON object in input\n";
        return kParseError;
    }
    WSpace w = wspace_from_json(text.substr(brace));
    auto rep = wspace_validate(w);
    auto ev = wspace_no_decomposable_check(w, 100, seed);
    bool ok = rep.in_family && ev.structural_ok && ev.randomized_ok;
    if (o.json_out()) {
        json fails = json::array();
        for (const auto& f : rep.failures) fails.push_back(f);
        for (const auto& f : ev.failures) fails.push_back(f);
        std::cout << json{{"schema", kSchema},
                          {"valid", ok},
                          {"dim_w", int_str(rep.dim_w)},
                          {"seed", seed},
                          {"failures", fails}}
                         .dump()
                  << "\n";
    } else {
        std::cout << (ok ? "valid" : "invalid") << ", dim W = " << int_str(rep.dim_w)
                  << " (seed " << seed << ")\n";
        for (const auto& f : rep.failures) std::cout << "  " << f << "\n";
        for (const auto& f : ev.failures) std::cout << "  " << f << "\n";
    }
    return ok ? kOk : kClaimFailed;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepRange {
    long gamma_min = 1, gamma_max = 8;
    long alpha_min = 0, alpha_max = 1;
};

int cmd_sweep(const CommonOpts& o, const SweepRange& r) {
    std::vector<TangoParams> grid;
    for (long a = r.alpha_min; a <= r.alpha_max; ++a)
        for (long b = -a; b <= a; ++b)
            for (long g = r.gamma_min; g <= r.gamma_max; ++g) {
                TangoParams p{o.n, g, a, b};
                if (p.valid()) grid.push_back(p);
                if (static_cast<long>(grid.size()) > kSweepGuard) {
                    std::cerr << "sweep grid exceeds " << kSweepGuard
                              << " tuples, refusing\n";
                    return kParseError;
                }
            }

    Engine engine;
    CacheFile cache = o.cache();
    cache.load(engine);

    bool any_error = false;
    json rows = json::array();
    if (!o.json_out())
        std::cout << "n,gamma,alpha,beta,c1,verdict,kuranishi\n";
    for (const TangoParams& p : grid) {
        std::string verdict = "error", kur = "", err;
        long c1 = c1_tango(p);
        try {
            StabilityVerdict v = analyze_stability(engine, p);
            verdict = v.verdict == Verdict::Stable
                          ? "stable"
                          : (v.verdict == Verdict::NotStable ? "not-stable" : "unknown");
            kur = dim_str(kuranishi_dimension(engine, p));
        } catch (const std::exception& ex) {
            any_error = true;
            err = ex.what();
        }
        if (o.json_out()) {
            json row{{"n", p.n},       {"gamma", p.gamma}, {"alpha", p.alpha},
                     {"beta", p.beta}, {"c1", c1},         {"verdict", verdict},
                     {"kuranishi", kur}};
            if (!err.empty()) row["error"] = err;
            rows.push_back(std::move(row));
        } else {
            std::cout << p.n << "," << p.gamma << "," << p.alpha << "," << p.beta << ","
                      << c1 << "," << verdict << ",\"" << kur << "\"\n";
        }
    }
    cache.save(engine);
    if (o.json_out())
        std::cout << json{{"schema", kSchema}, {"rows", rows}}.dump() << "\n";
    return any_error ? kClaimFailed : kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact-arithmetic workbench for weighted quotient and Tango bundles"};
    app.require_subcommand(1);

    CommonOpts o;
    std::string expr_text = "F";
    long twist_m = 0;
    std::uint64_t seed = 1;
    std::string wspace_mode = "sample";
    std::string wspace_file;
    SweepRange range;

    CLI::App* cohom = app.add_subcommand("cohom", "cohomology table of an expression");
    add_param_flags(cohom, o);
    cohom->add_option("-e,--expr", expr_text, "bundle expression")->required();
    cohom->add_option("-m,--twist", twist_m, "extra twist applied to the expression");

    long q_max = 0;
    CLI::App* stab = app.add_subcommand("stability", "stability verdict with certificates");
    add_param_flags(stab, o);
    stab->add_option("-q", q_max, "also list section checks of Wedge^1..q F");

    CLI::App* rep = app.add_subcommand("report", "one-shot verification report");
    add_param_flags(rep, o);
    rep->add_option("--seed", seed, "seed for the sampled subspace")->capture_default_str();

    CLI::App* wsp = app.add_subcommand("wspace", "admissible subspace tooling");
    add_param_flags(wsp, o);
    wsp->add_option("mode", wspace_mode, "sample | check")
        ->check(CLI::IsMember({"sample", "check"}));
    wsp->add_option("--seed", seed, "sampling / trial seed")->capture_default_str();
    wsp->add_option("--file", wspace_file, "subspace JSON to check ('-' for stdin)");

    CLI::App* sweep = app.add_subcommand("sweep", "aggregate over a parameter grid");
    add_param_flags(sweep, o);
    sweep->add_option("--gamma-min", range.gamma_min)->capture_default_str();
    sweep->add_option("--gamma-max", range.gamma_max)->capture_default_str();
    sweep->add_option("--alpha-min", range.alpha_min)->capture_default_str();
    sweep->add_option("--alpha-max", range.alpha_max)->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (cohom->parsed()) return cmd_cohom(o, expr_text, twist_m);
        if (stab->parsed()) return cmd_stability(o, q_max);
        if (rep->parsed()) return cmd_report(o, seed);
        if (wsp->parsed()) return cmd_wspace(o, wspace_mode, seed, wspace_file);
        if (sweep->parsed()) return cmd_sweep(o, range);
    } catch (const ParseError& ex) {
        std::cerr << "parse error: " << ex.what() << "\n";
        return kParseError;
    } catch (const nlohmann::json::exception& ex) {
        std::cerr << "parse error: " << ex.what() << "\n";
        return kParseError;
    } catch (const UnresolvableExpression& ex) {
        std::cerr << "unresolvable: " << ex.what() << "\n";
        return kUnresolvable;
    } catch (const InconsistentTable& ex) {
        std::cerr << "inconsistent table (engine bug): " << ex.what() << "\n";
        return kInconsistent;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "invalid parameters: " << ex.what() << "\n";
        return kParseError;
    }
    return kParseError;
}
