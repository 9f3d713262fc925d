#include "conespectra/spectrum.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "conespectra/errors.hpp"

namespace conespectra {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Area of the unit m-sphere: |S^m| = 2 pi^{(m+1)/2} / Gamma((m+1)/2).
double unit_sphere_area(int m) {
    return 2.0 * std::pow(std::numbers::pi, 0.5 * (m + 1)) / std::tgamma(0.5 * (m + 1));
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

EigenvalueV EigenvalueV::exact(Rational r) {
    EigenvalueV ev;
    ev.val_ = static_cast<double>(r);
    ev.rat_ = std::move(r);
    return ev;
}

EigenvalueV EigenvalueV::approx(double v) {
    EigenvalueV ev;
    ev.val_ = v;
    return ev;
}

bool eigenvalue_le(const EigenvalueV& ev, double threshold) {
    if (ev.is_exact()) return ev.rational() <= Rational(threshold);
    return ev.value() <= threshold + tie_tolerance(threshold);
}

Spectrum circle_spectrum(double circumference, double lambda_max) {
    if (!(circumference > 0.0) || circumference > kTwoPi)
        throw DomainError("circle circumference must lie in (0, 2pi], got " +
                          fmt_double(circumference));
    if (!(lambda_max >= 0.0))
        throw DomainError("lambda_max must be nonnegative");

    const bool exact = circumference == kTwoPi;
    Spectrum s;
    s.lambda_max = lambda_max;
    s.cross_section_dim = 1;
    s.total_measure = circumference;
    s.entries.push_back({EigenvalueV::exact(Rational(0)), 1});
    for (long long k = 1;; ++k) {
        const double freq = kTwoPi * static_cast<double>(k) / circumference;
        EigenvalueV ev = exact ? EigenvalueV::exact(Rational(k) * Rational(k))
                               : EigenvalueV::approx(freq * freq);
        if (!eigenvalue_le(ev, lambda_max)) break;
        s.entries.push_back({ev, 2});
    }
    return s;
}

long long sphere_multiplicity(int k, int m) {
    if (k < 0) return 0;
    // C(m+k, m) - C(m+k-2, m); also correct at k = 0, 1.
    BigInt mult = binomial(static_cast<unsigned>(m + k), static_cast<unsigned>(m));
    if (k >= 2) mult -= binomial(static_cast<unsigned>(m + k - 2), static_cast<unsigned>(m));
    return static_cast<long long>(mult);
}

Spectrum sphere_spectrum(int m, double radius, double lambda_max) {
    if (m < 2) throw DomainError("sphere dimension m must be >= 2");
    if (!(radius > 0.0) || radius > 1.0)
        throw DomainError("sphere radius must lie in (0, 1]");
    if (!(lambda_max >= 0.0))
        throw DomainError("lambda_max must be nonnegative");

    const bool exact = radius == 1.0;
    Spectrum s;
    s.lambda_max = lambda_max;
    s.cross_section_dim = m;
    s.total_measure = std::pow(radius, m) * unit_sphere_area(m);
    for (long long k = 0;; ++k) {
        Rational lam = Rational(k) * Rational(k + m - 1);
        EigenvalueV ev = exact
            ? EigenvalueV::exact(lam)
            : EigenvalueV::approx(static_cast<double>(lam) / (radius * radius));
        if (k > 0 && !eigenvalue_le(ev, lambda_max)) break;
        s.entries.push_back({ev, sphere_multiplicity(static_cast<int>(k), m)});
    }
    return s;
}

Spectrum football_spectrum(int q, double lambda_max) {
    if (q < 1) throw DomainError("football order q must be >= 1");
    if (!(lambda_max >= 0.0))
        throw DomainError("lambda_max must be nonnegative");

    Spectrum s;
    s.lambda_max = lambda_max;
    s.cross_section_dim = 2;
    s.total_measure = 4.0 * std::numbers::pi / q;
    s.entries.push_back({EigenvalueV::exact(Rational(0)), 1});
    for (long long k = 1;; ++k) {
        EigenvalueV ev = EigenvalueV::exact(Rational(k) * Rational(k + 1));
        if (!eigenvalue_le(ev, lambda_max)) break;
        // Rotation-invariant modes: j in [-k, k] with q | j.
        s.entries.push_back({ev, 2 * (k / q) + 1});
    }
    return s;
}

bool merge_check(const Spectrum& s) {
    if (!(s.total_measure > 0.0)) return false;
    if (s.cross_section_dim < 1) return false;
    if (s.entries.empty()) return false;
    if (s.entries.front().eigenvalue.value() != 0.0) return false;
    if (s.entries.front().multiplicity != 1) return false;
    double prev = -1.0;
    for (const auto& e : s.entries) {
        if (e.multiplicity < 1) return false;
        if (e.eigenvalue.value() < 0.0) return false;
        if (!(e.eigenvalue.value() > prev)) return false;  // strictly increasing
        prev = e.eigenvalue.value();
        if (!eigenvalue_le(e.eigenvalue, s.lambda_max)) return false;
    }
    return true;
}

double eigenvalue_at(const Spectrum& s, long long i) {
    if (i < 1) throw DomainError("eigenvalue index must be >= 1");
    long long seen = 0;
    for (const auto& e : s.entries) {
        if (e.eigenvalue.value() <= 0.0) continue;
        seen += e.multiplicity;
        if (i <= seen) return e.eigenvalue.value();
    }
    throw CoverageError("spectrum covers only " + std::to_string(seen) +
                        " positive eigenvalues, index " + std::to_string(i) + " requested");
}

long long positive_count(const Spectrum& s) {
    long long n = 0;
    for (const auto& e : s.entries)
        if (e.eigenvalue.value() > 0.0) n += e.multiplicity;
    return n;
}

void write_spectrum_csv(const Spectrum& s, std::ostream& out) {
    out << "eigenvalue,multiplicity\n";
    for (const auto& e : s.entries) {
        if (e.eigenvalue.is_exact())
            out << to_pq(e.eigenvalue.rational());
        else
            out << fmt_double(e.eigenvalue.value());
        out << "," << e.multiplicity << "\n";
    }
}

std::string spectrum_sidecar_json(const Spectrum& s) {
    nlohmann::json j;
    j["lambda_max"] = s.lambda_max;
    j["dim"] = s.cross_section_dim;
    j["total_measure"] = s.total_measure;
    return j.dump();
}

Spectrum read_spectrum_csv(std::istream& csv, const std::string& sidecar_json) {
    Spectrum s;
    nlohmann::json j = nlohmann::json::parse(sidecar_json);
    s.lambda_max = j.at("lambda_max").get<double>();
    s.cross_section_dim = j.at("dim").get<int>();
    s.total_measure = j.at("total_measure").get<double>();

    std::string line;
    if (!std::getline(csv, line) || line != "eigenvalue,multiplicity")
        throw ParseError("missing spectrum CSV header");
    while (std::getline(csv, line)) {
        if (line.empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw ParseError("malformed spectrum CSV row '" + line + "'");
        std::string ev_text = line.substr(0, comma);
        long long mult = 0;
        try {
            mult = std::stoll(line.substr(comma + 1));
        } catch (const std::exception&) {
            throw ParseError("bad multiplicity in row '" + line + "'");
        }
        SpectrumEntry e;
        e.multiplicity = mult;
        // Floats carry a '.', 'e' or infinity marker; everything else is p/q.
        if (ev_text.find_first_of(".eE") != std::string::npos ||
            ev_text.find("inf") != std::string::npos) {
            e.eigenvalue = EigenvalueV::approx(std::strtod(ev_text.c_str(), nullptr));
        } else {
            e.eigenvalue = EigenvalueV::exact(parse_pq(ev_text));
        }
        s.entries.push_back(std::move(e));
    }
    return s;
}

}  // namespace conespectra
