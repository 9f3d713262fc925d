#include "conespectra/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "conespectra/asymptotics.hpp"
#include "conespectra/cone.hpp"
#include "conespectra/energy.hpp"
#include "conespectra/errors.hpp"
#include "conespectra/oracle.hpp"

namespace conespectra::cli {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

[[noreturn]] void parse_fail(const std::string& text, size_t pos, const std::string& expected) {
    throw ParseError("descriptor '" + text + "' at position " + std::to_string(pos) +
                     ": expected " + expected);
}

double parse_float(const std::string& text, size_t pos, const std::string& val) {
    size_t used = 0;
    double out = 0.0;
    try {
        out = std::stod(val, &used);
    } catch (const std::exception&) {
        parse_fail(text, pos, "floating-point value");
    }
    if (used != val.size()) parse_fail(text, pos, "floating-point value");
    return out;
}

int parse_int(const std::string& text, size_t pos, const std::string& val) {
    size_t used = 0;
    int out = 0;
    try {
        out = std::stoi(val, &used);
    } catch (const std::exception&) {
        parse_fail(text, pos, "integer value");
    }
    if (used != val.size()) parse_fail(text, pos, "integer value");
    return out;
}

}  // namespace

Descriptor parse_descriptor(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        parse_fail(text, text.size(), "':' after the generator name");
    const std::string name = text.substr(0, colon);

    Descriptor d;
    if (name == "circle")
        d.kind = Descriptor::Kind::circle;
    else if (name == "sphere")
        d.kind = Descriptor::Kind::sphere;
    else if (name == "football")
        d.kind = Descriptor::Kind::football;
    else
        parse_fail(text, 0, "one of 'circle', 'sphere', 'football'");

    bool have_L = false, have_m = false, have_q = false;
    size_t pos = colon + 1;
    while (pos < text.size()) {
        auto next = text.find(',', pos);
        if (next == std::string::npos) next = text.size();
        const std::string item = text.substr(pos, next - pos);
        const auto eq = item.find('=');
        if (eq == std::string::npos) parse_fail(text, pos, "key=value");
        const std::string key = item.substr(0, eq);
        const std::string val = item.substr(eq + 1);
        const size_t vpos = pos + eq + 1;

        if (d.kind == Descriptor::Kind::circle && key == "L") {
            d.circumference = parse_float(text, vpos, val);
            have_L = true;
        } else if (d.kind == Descriptor::Kind::sphere && key == "m") {
            d.m = parse_int(text, vpos, val);
            have_m = true;
        } else if (d.kind == Descriptor::Kind::sphere && key == "r") {
            d.radius = parse_float(text, vpos, val);
        } else if (d.kind == Descriptor::Kind::football && key == "q") {
            d.q = parse_int(text, vpos, val);
            have_q = true;
        } else {
            parse_fail(text, pos, "a key valid for '" + name + "' (unknown key '" + key + "')");
        }
        pos = next + 1;
    }
    if (d.kind == Descriptor::Kind::circle && !have_L)
        parse_fail(text, text.size(), "required key L");
    if (d.kind == Descriptor::Kind::sphere && !have_m)
        parse_fail(text, text.size(), "required key m");
    if (d.kind == Descriptor::Kind::football && !have_q)
        parse_fail(text, text.size(), "required key q");
    return d;
}

Spectrum build_cross_section(const Descriptor& d, double lambda_max) {
    switch (d.kind) {
        case Descriptor::Kind::circle:
            return circle_spectrum(d.circumference, lambda_max);
        case Descriptor::Kind::sphere:
            return sphere_spectrum(d.m, d.radius, lambda_max);
        case Descriptor::Kind::football:
            return football_spectrum(d.q, lambda_max);
    }
    throw DomainError("unreachable descriptor kind");
}

Spectrum cross_section_with_count(const Descriptor& d, long long min_positive) {
    double lambda_max = 16.0;
    for (;;) {
        Spectrum s = build_cross_section(d, lambda_max);
        if (positive_count(s) >= min_positive) return s;
        lambda_max *= 2.0;
    }
}

int thread_cap() {
    if (const char* env = std::getenv("CONE_SPECTRA_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

namespace {

std::string descriptor_name(const Descriptor& d) {
    std::ostringstream os;
    switch (d.kind) {
        case Descriptor::Kind::circle: os << "circle:L=" << d.circumference; break;
        case Descriptor::Kind::sphere: os << "sphere:m=" << d.m << ",r=" << d.radius; break;
        case Descriptor::Kind::football: os << "football:q=" << d.q; break;
    }
    return os.str();
}

struct FuzzResult {
    unsigned long long seed = 0;
    int k = 0;
    int n = 0;
    double r = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

// One eigenvalue-sum inequality trial on a random subspace of expansions.
FuzzResult fuzz_trial(const std::shared_ptr<const ConeGeometry>& cone,
                      long long index_pool, int k, unsigned long long trial_seed) {
    std::mt19937_64 rng(trial_seed);
    std::uniform_real_distribution<double> logr(std::log(1e-2), std::log(1e2));
    std::normal_distribution<double> gauss(0.0, 1.0);

    for (int attempt = 0;; ++attempt) {
        // Shared random index support of size k+2 keeps the basis
        // independent almost surely.
        std::vector<long long> pool(static_cast<size_t>(index_pool));
        for (long long i = 0; i < index_pool; ++i) pool[static_cast<size_t>(i)] = i + 1;
        std::shuffle(pool.begin(), pool.end(), rng);
        const size_t support = std::min<size_t>(pool.size(), static_cast<size_t>(k) + 2);

        std::vector<HarmonicExpansion> basis;
        for (int v = 0; v < k; ++v) {
            std::vector<ExpansionTerm> terms;
            for (size_t s = 0; s < support; ++s)
                terms.push_back({pool[s], gauss(rng)});
            basis.emplace_back(cone, std::move(terms));
        }
        const double r = std::exp(logr(rng));
        try {
            const EigensumCheck chk = eigensum_inequality_check(cone, basis, r);
            FuzzResult out;
            out.seed = trial_seed;
            out.k = k;
            out.n = cone->n;
            out.r = r;
            out.lhs = chk.lhs;
            out.rhs = chk.rhs;
            out.holds = chk.holds;
            return out;
        } catch (const SingularGramError&) {
            if (attempt > 8) throw;
        }
    }
}

std::vector<FuzzResult> run_fuzz(const std::shared_ptr<const ConeGeometry>& cone, int dim,
                                 int trials, unsigned long long seed) {
    const long long pool = std::max<long long>(dim + 10, 20);
    std::vector<FuzzResult> results(static_cast<size_t>(trials));
    const int threads = std::min(thread_cap(), std::max(trials, 1));
    std::vector<std::thread> workers;
    workers.reserve(static_cast<size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        workers.emplace_back([&, t] {
            for (int i = t; i < trials; i += threads)
                results[static_cast<size_t>(i)] =
                    fuzz_trial(cone, pool, dim, seed + 1000003ULL * static_cast<unsigned long long>(i));
        });
    }
    for (auto& w : workers) w.join();
    return results;
}

std::shared_ptr<const ConeGeometry> euclidean_like_cone(int n, long long min_positive) {
    Descriptor d;
    if (n == 2) {
        d.kind = Descriptor::Kind::circle;
        d.circumference = kTwoPi;
    } else {
        d.kind = Descriptor::Kind::sphere;
        d.m = n - 1;
        d.radius = 1.0;
    }
    return std::make_shared<const ConeGeometry>(make_cone(cross_section_with_count(d, min_positive)));
}

struct WeylDiagnostics {
    double lambda = 0.0;
    long long count = 0;
    double ratio = 0.0;
    double target = 0.0;
    double rel_err = 0.0;
    double per_index_ratio = 0.0;
    double per_index_target = 0.0;
    double per_index_rel_err = 0.0;
};

WeylDiagnostics weyl_diagnostics(const ConeGeometry& cone, double lambda) {
    WeylDiagnostics w;
    w.lambda = lambda;
    w.count = counting_function(cone, lambda);
    w.target = weyl_target(cone);
    w.ratio = static_cast<double>(w.count) / std::pow(lambda, 0.5 * (cone.n - 1));
    w.rel_err = std::abs(w.ratio - w.target) / w.target;
    w.per_index_target = eigenvalue_growth_target(cone);
    const double lam_i = eigenvalue_at(cone.cross_section, w.count);
    w.per_index_ratio =
        lam_i / std::pow(static_cast<double>(w.count), 2.0 / (cone.n - 1));
    w.per_index_rel_err = std::abs(w.per_index_ratio - w.per_index_target) / w.per_index_target;
    return w;
}

nlohmann::json weyl_json(const WeylDiagnostics& w) {
    return {{"lambda", w.lambda},
            {"count", w.count},
            {"ratio", w.ratio},
            {"target", w.target},
            {"rel_err", w.rel_err},
            {"per_index_ratio", w.per_index_ratio},
            {"per_index_target", w.per_index_target},
            {"per_index_rel_err", w.per_index_rel_err}};
}

// Stream wrapper: file when a path is set, stdout otherwise.
class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) throw IoError("cannot open output file '" + path + "'");
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

void write_sidecar(const RunConfig& config, const std::string& json_text) {
    if (config.out.empty()) {
        std::cout << json_text << "\n";
        return;
    }
    const std::string path = config.out + ".meta.json";
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open output file '" + path + "'");
    f << json_text << "\n";
}

int cmd_spectrum(const RunConfig& config) {
    const Descriptor d = parse_descriptor(config.descriptor);
    const double lambda_max = config.lambda_max < 0 ? 100.0 : config.lambda_max;
    const Spectrum s = build_cross_section(d, lambda_max);
    Output out(config.out);
    if (config.format == "json") {
        nlohmann::json j;
        j["lambda_max"] = s.lambda_max;
        j["dim"] = s.cross_section_dim;
        j["total_measure"] = s.total_measure;
        j["entries"] = nlohmann::json::array();
        for (const auto& e : s.entries) {
            if (e.eigenvalue.is_exact())
                j["entries"].push_back({to_pq(e.eigenvalue.rational()), e.multiplicity});
            else
                j["entries"].push_back({e.eigenvalue.value(), e.multiplicity});
        }
        out.stream() << j.dump() << "\n";
    } else {
        write_spectrum_csv(s, out.stream());
        write_sidecar(config, spectrum_sidecar_json(s));
    }
    return 0;
}

int cmd_hd(const RunConfig& config) {
    const Descriptor d = parse_descriptor(config.descriptor);
    const double needed =
        static_cast<double>(config.d_max) *
        (static_cast<double>(config.d_max) + 10.0);  // covers any catalog n
    const double lambda_max = config.lambda_max < 0 ? needed : config.lambda_max;
    const ConeGeometry cone = make_cone(build_cross_section(d, lambda_max));
    const CountingReport rep = counting_report(cone, config.d_max);
    Output out(config.out);
    if (config.format == "json") {
        nlohmann::json j = nlohmann::json::parse(report_metadata_json(rep));
        j["rows"] = nlohmann::json::array();
        for (const auto& r : rep.rows)
            j["rows"].push_back({r.d, r.h_d, r.k_d, r.S_d, r.ratio_sum, r.ratio_hd});
        out.stream() << j.dump() << "\n";
    } else {
        write_report_csv(rep, out.stream());
        write_sidecar(config, report_metadata_json(rep));
    }
    return 0;
}

int cmd_weyl(const RunConfig& config) {
    const Descriptor d = parse_descriptor(config.descriptor);
    const double lambda = config.lambda_max < 0 ? 1e6 : config.lambda_max;
    const ConeGeometry cone = make_cone(build_cross_section(d, lambda));
    const WeylDiagnostics w = weyl_diagnostics(cone, lambda);
    nlohmann::json j = weyl_json(w);
    j["cross_section"] = descriptor_name(d);
    const bool pass = w.rel_err <= config.weyl_tol && w.per_index_rel_err <= config.weyl_tol;
    j["pass"] = pass;
    Output out(config.out);
    out.stream() << j.dump() << "\n";
    return pass ? 0 : 1;
}

int cmd_gram_check(const RunConfig& config) {
    std::shared_ptr<const ConeGeometry> cone;
    if (!config.descriptor.empty()) {
        const Descriptor d = parse_descriptor(config.descriptor);
        cone = std::make_shared<const ConeGeometry>(
            make_cone(cross_section_with_count(d, std::max<long long>(config.dim + 12, 22))));
    } else {
        cone = euclidean_like_cone(config.n, std::max<long long>(config.dim + 12, 22));
    }
    const auto results = run_fuzz(cone, config.dim, config.trials, config.seed);
    Output out(config.out);
    bool all_hold = true;
    for (const auto& r : results) {
        nlohmann::json j = {{"seed", r.seed}, {"k", r.k},     {"n", r.n},
                            {"r", r.r},       {"lhs", r.lhs}, {"rhs", r.rhs},
                            {"margin", r.rhs - r.lhs},        {"holds", r.holds}};
        out.stream() << j.dump() << "\n";
        all_hold = all_hold && r.holds;
    }
    return all_hold ? 0 : 1;
}

int cmd_oracle(const RunConfig& config) {
    const Descriptor d = parse_descriptor(config.descriptor);
    DiscreteLaplacian lap;
    double analytic_lambda_max = config.lambda_max;
    switch (d.kind) {
        case Descriptor::Kind::circle:
            lap = build_circle(config.points, d.circumference);
            if (analytic_lambda_max < 0) analytic_lambda_max = 100.0;
            break;
        case Descriptor::Kind::sphere:
            if (d.m != 2 || d.radius != 1.0)
                throw DomainError("mesh oracle supports only sphere:m=2,r=1");
            lap = build_icosphere(config.level, 1);
            if (analytic_lambda_max < 0) analytic_lambda_max = 13.0;
            break;
        case Descriptor::Kind::football:
            lap = build_icosphere(config.level, d.q);
            if (analytic_lambda_max < 0) analytic_lambda_max = 13.0;
            break;
    }
    const Spectrum analytic = build_cross_section(d, analytic_lambda_max);
    const int count =
        static_cast<int>(std::min<long long>(1 + positive_count(analytic), lap.size()));
    const std::vector<double> numeric = lowest_eigenvalues(lap, count);
    const MatchReport rep = spectrum_match(analytic, numeric, config.rel_tol);
    if (!config.mesh_out.empty()) {
        std::ofstream f(config.mesh_out, std::ios::binary);
        if (!f) throw IoError("cannot open mesh output '" + config.mesh_out + "'");
        write_mesh(lap.mesh, f);
    }
    Output out(config.out);
    out.stream() << match_report_json(rep) << "\n";
    return rep.pass ? 0 : 1;
}

int cmd_report(const RunConfig& config) {
    const Descriptor d = parse_descriptor(config.descriptor);
    const long long d_max = config.d_max;
    nlohmann::json j;
    j["cone"] = descriptor_name(d);

    // Counting-dimension verdicts.
    Spectrum spec = build_cross_section(
        d, static_cast<double>(d_max) * (static_cast<double>(d_max) + 10.0));
    const ConeGeometry cone = make_cone(std::move(spec));
    j["n"] = cone.n;
    j["avr"] = cone.avr();
    const CountingReport rep = counting_report(cone, d_max);
    Series sum_series, hd_series;
    for (const auto& row : rep.rows) {
        sum_series.emplace_back(row.d, row.ratio_sum);
        hd_series.emplace_back(row.d, row.ratio_hd);
    }
    const Verdict sum_verdict = limit_estimate(sum_series, rep.target_sum);
    const double hd_liminf = liminf_estimate(hd_series);
    const bool hd_pass =
        sum_verdict.abs_err <= config.sum_tol * rep.target_sum &&
        std::abs(hd_liminf - rep.target_hd) <= 2.0 * config.sum_tol * rep.target_hd;
    j["hd"] = {{"d_max", d_max},
               {"target_sum", rep.target_sum},
               {"target_hd", rep.target_hd},
               {"ratio_sum", nlohmann::json::parse(verdict_json(sum_verdict))},
               {"ratio_hd_liminf", hd_liminf},
               {"pass", hd_pass}};

    // Weyl verdict.
    const double weyl_lambda = config.lambda_max < 0 ? 1e6 : config.lambda_max;
    const ConeGeometry weyl_cone = make_cone(build_cross_section(d, weyl_lambda));
    const WeylDiagnostics w = weyl_diagnostics(weyl_cone, weyl_lambda);
    const bool weyl_pass =
        w.rel_err <= config.weyl_tol && w.per_index_rel_err <= config.weyl_tol;
    j["weyl"] = weyl_json(w);
    j["weyl"]["pass"] = weyl_pass;

    // Eigenvalue-sum inequality fuzzing.
    auto cone_ptr = std::make_shared<const ConeGeometry>(
        make_cone(cross_section_with_count(d, std::max<long long>(config.dim + 12, 22))));
    const auto fuzz = run_fuzz(cone_ptr, config.dim, config.trials, config.seed);
    int violations = 0;
    for (const auto& r : fuzz)
        if (!r.holds) ++violations;
    j["gram_check"] = {{"trials", config.trials},
                       {"dim", config.dim},
                       {"seed", config.seed},
                       {"violations", violations},
                       {"pass", violations == 0}};

    const bool pass = hd_pass && weyl_pass && violations == 0;
    j["pass"] = pass;
    Output out(config.out);
    out.stream() << j.dump() << "\n";
    return pass ? 0 : 1;
}

}  // namespace

int run(const RunConfig& config) {
    try {
        switch (config.command) {
            case Command::spectrum: return cmd_spectrum(config);
            case Command::hd: return cmd_hd(config);
            case Command::weyl: return cmd_weyl(config);
            case Command::gram_check: return cmd_gram_check(config);
            case Command::oracle: return cmd_oracle(config);
            case Command::report: return cmd_report(config);
        }
        return 2;
    } catch (const Error& e) {
        std::cerr << "error:" << e.category() << ": " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error:internal: " << e.what() << "\n";
        return 2;
    }
}

int main_entry(int argc, char** argv) {
    CLI::App app{"Neumann spectra of cone cross-sections, harmonic growth counting, "
                 "Weyl diagnostics and energy-form checks"};
    app.require_subcommand(1);

    RunConfig config;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", config.out, "output path (stdout when omitted)");
        sub->add_option("--format", config.format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
    };

    auto* spectrum = app.add_subcommand("spectrum", "emit a catalog cross-section spectrum");
    spectrum->add_option("--cross-section,-x", config.descriptor, "cross-section descriptor")
        ->required();
    spectrum->add_option("--lambda-max", config.lambda_max, "spectrum coverage bound");
    add_common(spectrum);

    auto* hd = app.add_subcommand("hd", "harmonic-dimension counting report");
    hd->add_option("--cone,-c", config.descriptor, "cone cross-section descriptor")->required();
    hd->add_option("--d-max", config.d_max, "largest growth order");
    hd->add_option("--lambda-max", config.lambda_max, "override spectrum coverage");
    add_common(hd);

    auto* weyl = app.add_subcommand("weyl", "Weyl-law diagnostics");
    weyl->add_option("--cross-section,-x", config.descriptor, "cross-section descriptor")
        ->required();
    weyl->add_option("--lambda-max", config.lambda_max, "evaluation point (default 1e6)");
    weyl->add_option("--weyl-tol", config.weyl_tol, "pass threshold (default 2%)");
    add_common(weyl);

    auto* gram = app.add_subcommand("gram-check", "eigenvalue-sum inequality fuzzing");
    gram->add_option("--n", config.n, "ambient cone dimension (Euclidean catalog entry)");
    gram->add_option("--cone,-c", config.descriptor, "explicit cone descriptor");
    gram->add_option("--dim", config.dim, "subspace dimension");
    gram->add_option("--trials", config.trials, "number of randomized subspaces");
    gram->add_option("--seed", config.seed, "base RNG seed");
    add_common(gram);

    auto* oracle = app.add_subcommand("oracle", "discrete eigensolver validation");
    oracle->add_option("--cross-section,-x", config.descriptor, "cross-section descriptor")
        ->required();
    oracle->add_option("--level", config.level, "mesh subdivision level");
    oracle->add_option("--points", config.points, "circle discretization nodes");
    oracle->add_option("--lambda-max", config.lambda_max, "analytic comparison range");
    oracle->add_option("--rel-tol", config.rel_tol, "cluster match tolerance");
    oracle->add_option("--mesh-out", config.mesh_out, "dump the mesh as ASCII");
    add_common(oracle);

    auto* report = app.add_subcommand("report", "bundled hd + weyl + gram-check verdicts");
    report->add_option("--cone,-c", config.descriptor, "cone cross-section descriptor")
        ->required();
    report->add_option("--d-max", config.d_max, "largest growth order");
    report->add_option("--lambda-max", config.lambda_max, "Weyl evaluation point");
    report->add_option("--trials", config.trials, "fuzz trials");
    report->add_option("--dim", config.dim, "fuzz subspace dimension");
    report->add_option("--seed", config.seed, "base RNG seed");
    report->add_option("--weyl-tol", config.weyl_tol, "Weyl threshold (default 2%)");
    report->add_option("--sum-tol", config.sum_tol, "ratio_sum threshold (default 0.5%)");
    add_common(report);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "error:usage: " << e.what() << "\n";
        return 2;
    }

    if (spectrum->parsed()) config.command = Command::spectrum;
    else if (hd->parsed()) config.command = Command::hd;
    else if (weyl->parsed()) config.command = Command::weyl;
    else if (gram->parsed()) config.command = Command::gram_check;
    else if (oracle->parsed()) config.command = Command::oracle;
    else config.command = Command::report;

    return run(config);
}

}  // namespace conespectra::cli
