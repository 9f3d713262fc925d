// Acceptance gate: one pass/fail line per criterion, exit code = number of
// failed criteria.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <memory>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "conespectra/asymptotics.hpp"
#include "conespectra/cli.hpp"
#include "conespectra/cone.hpp"
#include "conespectra/energy.hpp"
#include "conespectra/errors.hpp"
#include "conespectra/oracle.hpp"

using namespace conespectra;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Round-trip-exact float formatting, so circle:L=<2pi> hits the exact
// rational spectrum path.
std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int g_failures = 0;
int g_checks = 0;
bool g_current_ok = true;

void require(bool ok, const std::string& what) {
    ++g_checks;
    if (!ok) {
        g_current_ok = false;
        std::printf("    FAILED: %s\n", what.c_str());
    }
}

template <typename Fn>
void criterion(int id, const std::string& label, Fn&& fn) {
    g_current_ok = true;
    try {
        fn();
    } catch (const std::exception& e) {
        g_current_ok = false;
        std::printf("    EXCEPTION: %s\n", e.what());
    }
    std::printf("criterion %d (%s): %s\n", id, label.c_str(),
                g_current_ok ? "PASS" : "FAIL");
    if (!g_current_ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// The cross-section catalog exercised by the cross-cone criteria.
std::vector<std::string> catalog_descriptors() {
    std::vector<std::string> out = {"circle:L=" + fmt(kTwoPi)};
    for (double beta : {0.3, 0.7, 0.95})
        out.push_back("circle:L=" + fmt(kTwoPi * beta));
    out.push_back("sphere:m=2");
    out.push_back("sphere:m=3");
    for (int q : {2, 3, 5}) out.push_back("football:q=" + std::to_string(q));
    return out;
}

ConeGeometry build_cone(const std::string& desc, double lambda_max) {
    return make_cone(cli::build_cross_section(cli::parse_descriptor(desc), lambda_max));
}

HarmonicExpansion random_expansion(const std::shared_ptr<const ConeGeometry>& cone,
                                   std::mt19937_64& rng, int nterms, long long pool) {
    std::vector<long long> indices(static_cast<size_t>(pool));
    for (long long i = 0; i < pool; ++i) indices[static_cast<size_t>(i)] = i + 1;
    std::shuffle(indices.begin(), indices.end(), rng);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<ExpansionTerm> terms;
    for (int t = 0; t < nterms; ++t) terms.push_back({indices[static_cast<size_t>(t)], gauss(rng)});
    return HarmonicExpansion(cone, std::move(terms));
}

void criterion1() {
    const auto t0 = std::chrono::steady_clock::now();

    auto plane = build_cone("circle:L=" + fmt(kTwoPi), 1.1e6);
    auto plane_rep = counting_report(plane, 1000);
    require(std::abs(plane_rep.rows.back().ratio_sum / plane_rep.target_sum - 1.0) <= 0.005,
            "R^2 ratio_sum at d=1000 within 0.5%");
    Series plane_hd;
    for (const auto& row : plane_rep.rows) plane_hd.emplace_back(row.d, row.ratio_hd);
    require(std::abs(liminf_estimate(plane_hd) / plane_rep.target_hd - 1.0) <= 0.01,
            "R^2 window-min ratio_hd within 1%");
    for (const auto& row : plane_rep.rows)
        require(row.h_d == 2 * row.d, "R^2 h_d = 2d at d=" + std::to_string(row.d));

    auto space = build_cone("sphere:m=2", 1.1e6);
    auto space_rep = counting_report(space, 1000);
    require(std::abs(space_rep.rows.back().ratio_sum / space_rep.target_sum - 1.0) <= 0.005,
            "R^3 ratio_sum at d=1000 within 0.5%");
    Series space_hd;
    for (const auto& row : space_rep.rows) space_hd.emplace_back(row.d, row.ratio_hd);
    require(std::abs(liminf_estimate(space_hd) / space_rep.target_hd - 1.0) <= 0.01,
            "R^3 window-min ratio_hd within 1%");
    for (const auto& row : space_rep.rows)
        require(row.h_d == row.d * (row.d + 2),
                "R^3 h_d = d(d+2) at d=" + std::to_string(row.d));

    require(seconds_since(t0) < 10.0, "runtime < 10 s");
}

void criterion2() {
    std::vector<std::string> descs;
    for (double beta : {0.3, 0.7, 0.95})
        descs.push_back("circle:L=" + fmt(kTwoPi * beta));
    for (int q : {2, 3, 5}) descs.push_back("football:q=" + std::to_string(q));

    for (const auto& desc : descs) {
        const auto t0 = std::chrono::steady_clock::now();
        auto cone = build_cone(desc, 1.1e6);
        auto rep = counting_report(cone, 1000);
        require(std::abs(rep.rows.back().ratio_sum / rep.target_sum - 1.0) <= 0.01,
                desc + " ratio_sum at d=1000 within 1%");
        Series series;
        for (const auto& row : rep.rows) series.emplace_back(row.d, row.ratio_sum);
        require(limit_estimate(series, rep.target_sum).monotone,
                desc + " error monotone over the last half");
        require(seconds_since(t0) < 30.0, desc + " runtime < 30 s");
    }
}

void criterion3() {
    const double lambda = 1e6;
    for (const auto& desc : catalog_descriptors()) {
        auto cone = build_cone(desc, lambda);
        const long long count = counting_function(cone, lambda);
        const double ratio =
            static_cast<double>(count) / std::pow(lambda, 0.5 * (cone.n - 1));
        require(std::abs(ratio / weyl_target(cone) - 1.0) <= 0.02,
                desc + " N(1e6)/1e6^{(n-1)/2} within 2% of weyl_target");
        const double lam_i = eigenvalue_at(cone.cross_section, count);
        const double per_index =
            lam_i / std::pow(static_cast<double>(count), 2.0 / (cone.n - 1));
        require(std::abs(per_index / eigenvalue_growth_target(cone) - 1.0) <= 0.02,
                desc + " lambda_i/i^{2/(n-1)} within 2% of growth target");
    }
}

void criterion4() {
    const auto t0 = std::chrono::steady_clock::now();

    auto circle = build_circle(2048, kTwoPi);
    auto circle_vals = lowest_eigenvalues(circle, 11);
    auto circle_analytic = circle_spectrum(kTwoPi, 26.0);
    for (long long i = 1; i <= 10; ++i) {
        const double exact = eigenvalue_at(circle_analytic, i);
        require(std::abs(circle_vals[static_cast<size_t>(i)] - exact) / exact <= 1e-3,
                "circle N=2048 eigenvalue " + std::to_string(i) + " within 0.1%");
    }

    auto sphere = build_icosphere(4);
    auto sphere_match =
        spectrum_match(sphere_spectrum(2, 1.0, 13.0), lowest_eigenvalues(sphere, 16), 0.02);
    require(sphere_match.pass, "icosphere level-4 clusters {2,6,12} x {3,5,7} within 2%");

    auto football = build_icosphere(4, 2);
    auto football_match =
        spectrum_match(football_spectrum(2, 7.0), lowest_eigenvalues(football, 3), 0.02);
    require(football_match.clusters.size() >= 2 && football_match.clusters[1].pass &&
                football_match.clusters[1].numeric_count == 1,
            "football q=2 first cluster within 2% of 2, multiplicity 1");

    require(seconds_since(t0) < 60.0, "runtime < 60 s");
}

void criterion5() {
    auto plane = std::make_shared<const ConeGeometry>(
        build_cone("circle:L=" + fmt(kTwoPi), 200.0));
    auto space = std::make_shared<const ConeGeometry>(build_cone("sphere:m=2", 200.0));
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> logr(std::log(0.2), std::log(5.0));

    int worst_shown = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const auto& cone = (trial % 2 == 0) ? plane : space;
        auto u = random_expansion(cone, rng, 1 + static_cast<int>(rng() % 5), 12);
        const double r = std::exp(logr(rng));
        const double h = 2e-5 * r;
        const double fd = (energy(u, u, r + h) - energy(u, u, r - h)) / (2.0 * h);
        const double exact = energy_derivative(u, u, r);
        const double rel = std::abs(fd - exact) / std::abs(exact);
        if (rel > 1e-6 && worst_shown++ < 3)
            std::printf("    energy fd rel err %.3g at trial %d\n", rel, trial);
        require(rel <= 1e-6, "energy_derivative matches FD, trial " + std::to_string(trial));
    }

    int done = 0;
    while (done < 200) {
        const auto& cone = (done % 2 == 0) ? plane : space;
        const int k = 2 + static_cast<int>(rng() % 5);  // 2..6
        std::vector<HarmonicExpansion> basis;
        for (int i = 0; i < k; ++i) basis.push_back(random_expansion(cone, rng, k + 2, 14));
        const double r = std::exp(logr(rng));
        const double h = 5e-5 * r;
        try {
            const double fd = log_det_ratio(basis, r - h, r + h) / (2.0 * h);
            const double exact = log_det_derivative(basis, r);
            require(std::abs(fd - exact) / std::abs(exact) <= 1e-6,
                    "log_det_derivative matches FD, subspace " + std::to_string(done));
            ++done;
        } catch (const SingularGramError&) {
        }
    }
}

void criterion6() {
    const std::vector<std::string> descs = {
        "circle:L=" + fmt(kTwoPi), "circle:L=" + fmt(kTwoPi * 0.7),
        "sphere:m=2", "football:q=2", "football:q=3"};
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> logr(std::log(1e-2), std::log(1e2));
    long long triples = 0;
    int violations = 0;
    for (const auto& desc : descs) {
        auto cone = std::make_shared<const ConeGeometry>(build_cone(desc, 500.0));
        int done = 0;
        while (done < 2000) {
            const int k = 1 + static_cast<int>(rng() % 4);
            std::vector<HarmonicExpansion> basis;
            for (int i = 0; i < k; ++i) basis.push_back(random_expansion(cone, rng, k + 2, 16));
            const double r = std::exp(logr(rng));
            try {
                if (!eigensum_inequality_check(cone, basis, r).holds) ++violations;
                ++done;
                ++triples;
            } catch (const SingularGramError&) {
            }
        }
    }
    require(triples >= 10000, "at least 10^4 triples exercised");
    require(violations == 0,
            "zero violations (saw " + std::to_string(violations) + ")");

    // 1-dimensional n=2 equality case.
    auto plane = std::make_shared<const ConeGeometry>(
        build_cone("circle:L=" + fmt(kTwoPi), 50.0));
    HarmonicExpansion u(plane, {{1, 0.37}});
    for (double r : {0.02, 1.0, 40.0}) {
        auto chk = eigensum_inequality_check(plane, {u}, r);
        require(std::abs(chk.lhs - chk.rhs) <= 1e-12 * std::max(1.0, std::abs(chk.rhs)),
                "n=2 k=1 equality at r=" + std::to_string(r));
    }
}

void criterion7() {
    std::mt19937_64 rng(31337);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const int dim = 3 + static_cast<int>(rng() % 8);  // 3..10
        const int k = 2 + static_cast<int>(rng() % (static_cast<unsigned>(dim) - 1));
        Eigen::MatrixXd a(dim, dim), phi(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) {
                a(i, j) = gauss(rng);
                phi(i, j) = gauss(rng);
            }
        Eigen::MatrixXd l = a.transpose() * a + 0.5 * Eigen::MatrixXd::Identity(dim, dim);
        std::vector<Eigen::VectorXd> basis, w;
        for (int i = 0; i < k; ++i) {
            Eigen::VectorXd v(dim);
            for (int j = 0; j < dim; ++j) v(j) = gauss(rng);
            basis.push_back(v);
        }
        for (int i = 0; i < k - 1; ++i) {
            Eigen::VectorXd v(dim);
            for (int j = 0; j < dim; ++j) v(j) = gauss(rng);
            w.push_back(v);
        }
        const auto v = constrained_orthonormalize(basis, l, phi, w);
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < k; ++j)
                require(std::abs(v[static_cast<size_t>(i)].dot(l * v[static_cast<size_t>(j)]) -
                                 (i == j ? 1.0 : 0.0)) <= 1e-10,
                        "L-orthonormality, trial " + std::to_string(trial));
            for (int j = 0; j < i; ++j)
                require(std::abs(v[static_cast<size_t>(i)].dot(
                            phi * w[static_cast<size_t>(j)])) <= 1e-10,
                        "Phi-annihilation, trial " + std::to_string(trial));
        }
    }
}

void criterion8() {
    for (int n = 2; n <= 8; ++n) {
        FaulhaberEval f(n);
        Rational running(0);
        bool all_equal = true;
        for (long long p = 1; p <= 10000; ++p) {
            BigInt term(1);
            for (int e = 0; e < n - 1; ++e) term *= p;
            running += Rational(term);
            if (f.eval(p) != running) {
                all_equal = false;
                break;
            }
        }
        require(all_equal, "power_sum exact for n=" + std::to_string(n) + ", p <= 10^4");
    }
}

void criterion9() {
    for (const auto& desc : catalog_descriptors()) {
        auto probe = build_cone(desc, 1.0);
        const double lambda_max = 500.0 * (500.0 + probe.n - 2) + 10.0;
        auto cone = build_cone(desc, lambda_max);
        bool ok = true;
        for (long long d = 1; d <= 500 && ok; ++d) {
            const double lam = static_cast<double>(d) * (static_cast<double>(d) + cone.n - 2);
            const long long h = h_d(cone, static_cast<double>(d));
            const long long lower = counting_function(cone, lam - 1e-9) - 1;
            if (h < lower) ok = false;
            if (h != counting_function(cone, lam)) ok = false;  // equality up to -1 slack
        }
        require(ok, desc + " satisfies h_d >= N(d(d+n-2)-1e-9)-1 with equality, d <= 500");
    }
}

}  // namespace

int main() {
    criterion(1, "euclidean recovery", criterion1);
    criterion(2, "general-cone asymptotics", criterion2);
    criterion(3, "weyl law", criterion3);
    criterion(4, "oracle agreement", criterion4);
    criterion(5, "energy identities", criterion5);
    criterion(6, "eigenvalue-sum inequality fuzzing", criterion6);
    criterion(7, "constrained orthonormalization", criterion7);
    criterion(8, "faulhaber power sums", criterion8);
    criterion(9, "counting consistency", criterion9);
    std::printf("%d criteria failed, %d checks run\n", g_failures, g_checks);
    return g_failures;
}
