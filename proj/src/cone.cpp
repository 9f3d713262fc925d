#include "conespectra/cone.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include <nlohmann/json.hpp>

#include "conespectra/errors.hpp"

namespace conespectra {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

}  // namespace

double unit_ball_volume(int k) {
    if (k < 0) throw DomainError("ball dimension must be nonnegative");
    if (k == 0) return 1.0;
    if (k == 1) return 2.0;
    double v = (k % 2 == 0) ? std::numbers::pi : 2.0;
    for (int j = (k % 2 == 0) ? 4 : 3; j <= k; j += 2) v *= kTwoPi / j;
    return v;
}

ConeGeometry make_cone(Spectrum cross_section) {
    if (cross_section.cross_section_dim < 1)
        throw DomainError("cross-section dimension must be >= 1");
    if (!(cross_section.total_measure > 0.0))
        throw DomainError("cross-section measure must be positive");
    ConeGeometry cone;
    cone.n = cross_section.cross_section_dim + 1;
    cone.cross_section = std::move(cross_section);
    const double omega_n = unit_ball_volume(cone.n);
    if (cone.avr() > omega_n * (1.0 + 1e-12))
        throw DomainError("asymptotic volume ratio " + fmt_double(cone.avr()) +
                          " exceeds unit-ball volume " + fmt_double(omega_n));
    return cone;
}

double exponent_of_eigenvalue(double lambda, int n) {
    if (!(lambda >= 0.0)) throw DomainError("eigenvalue must be nonnegative");
    if (n < 2) throw DomainError("cone dimension must be >= 2");
    const double b = n - 2.0;
    // Nonnegative root of alpha^2 + b*alpha - lambda = 0, in the
    // cancellation-free form.
    if (lambda == 0.0) return 0.0;
    return 2.0 * lambda / (b + std::sqrt(b * b + 4.0 * lambda));
}

long long counting_function(const ConeGeometry& cone, double lambda) {
    const Spectrum& s = cone.cross_section;
    if (lambda > s.lambda_max + tie_tolerance(s.lambda_max))
        throw CoverageError("spectrum complete only up to " + fmt_double(s.lambda_max) +
                            ", counting requested at " + fmt_double(lambda));
    long long count = 0;
    for (const auto& e : s.entries) {
        if (e.eigenvalue.value() <= 0.0) continue;
        if (eigenvalue_le(e.eigenvalue, lambda)) count += e.multiplicity;
    }
    return count;
}

long long h_d(const ConeGeometry& cone, double d) {
    if (!(d > 0.0)) throw DomainError("growth order d must be positive");
    // Boundary ties alpha_i = d count as <= d; the tolerance lives in
    // d-space and is mapped through d -> d(d+n-2).
    const double eps = 1e-9 * (d > 1.0 ? d : 1.0);
    const double lambda_exact = d * (d + cone.n - 2);
    const double lambda_tol = (d + eps) * (d + eps + cone.n - 2);
    const Spectrum& s = cone.cross_section;
    if (lambda_exact > s.lambda_max + tie_tolerance(s.lambda_max))
        throw CoverageError("h_d at d=" + fmt_double(d) + " needs coverage up to " +
                            fmt_double(lambda_exact) + ", spectrum stops at " +
                            fmt_double(s.lambda_max));
    return counting_function(cone, std::min(lambda_tol, s.lambda_max));
}

double weyl_target(const ConeGeometry& cone) {
    return cone.n * unit_ball_volume(cone.n - 1) * cone.avr() /
           std::pow(kTwoPi, cone.n - 1);
}

double eigenvalue_growth_target(const ConeGeometry& cone) {
    return kTwoPi * kTwoPi /
           std::pow(cone.n * unit_ball_volume(cone.n - 1) * cone.avr(),
                    2.0 / (cone.n - 1));
}

double ball_measure(const ConeGeometry& cone, double R) {
    if (!(R >= 0.0)) throw DomainError("radius must be nonnegative");
    return cone.avr() * std::pow(R, cone.n);
}

CountingReport counting_report(const ConeGeometry& cone, long long d_max) {
    if (d_max < 1) throw DomainError("d_max must be >= 1");
    CountingReport rep;
    rep.n = cone.n;
    rep.avr = cone.avr();
    const double omega_n = unit_ball_volume(cone.n);
    rep.target_sum = 2.0 * rep.avr / (factorial(cone.n) * omega_n);
    rep.target_hd = 2.0 * rep.avr / (factorial(cone.n - 1) * omega_n);
    rep.rows.reserve(static_cast<size_t>(d_max));

    long long prev_h = 0;  // h_0 = 0: every positive exponent exceeds 0
    long long running_sum = 0;
    for (long long d = 1; d <= d_max; ++d) {
        const long long h = h_d(cone, static_cast<double>(d));
        running_sum += prev_h;  // S_d = sum_{i=1}^{d} h_{i-1}
        CountingRow row;
        row.d = d;
        row.h_d = h;
        row.k_d = h - prev_h;
        row.S_d = running_sum;
        row.ratio_sum = static_cast<double>(running_sum) /
                        std::pow(static_cast<double>(d), cone.n);
        row.ratio_hd = static_cast<double>(h) /
                       std::pow(static_cast<double>(d), cone.n - 1);
        rep.rows.push_back(row);
        prev_h = h;
    }
    return rep;
}

void write_report_csv(const CountingReport& rep, std::ostream& out) {
    out << "d,h_d,k_d,S_d,ratio_sum,ratio_hd\n";
    for (const auto& r : rep.rows) {
        out << r.d << "," << r.h_d << "," << r.k_d << "," << r.S_d << ","
            << fmt_double(r.ratio_sum) << "," << fmt_double(r.ratio_hd) << "\n";
    }
}

std::string report_metadata_json(const CountingReport& rep) {
    nlohmann::json j;
    j["n"] = rep.n;
    j["avr"] = rep.avr;
    j["target_sum"] = rep.target_sum;
    j["target_hd"] = rep.target_hd;
    j["tie_tolerance"] = rep.tie_tol;
    return j.dump();
}

}  // namespace conespectra
