#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "conespectra/rational.hpp"

namespace conespectra {

// Eigenvalue that is either an exact rational (unit spheres, rotation
// quotients) or a plain double (scaled radii). The double view is always
// available; the rational one only when exact.
class EigenvalueV {
public:
    EigenvalueV() = default;  // approx 0; placeholder before assignment
    static EigenvalueV exact(Rational r);
    static EigenvalueV approx(double v);

    bool is_exact() const noexcept { return rat_.has_value(); }
    double value() const noexcept { return val_; }
    const Rational& rational() const { return *rat_; }

private:
    std::optional<Rational> rat_;
    double val_ = 0.0;
};

struct SpectrumEntry {
    EigenvalueV eigenvalue;
    long long multiplicity = 1;
};

// Neumann spectrum of a cross-section: complete below lambda_max, with
// multiplicities aggregated per distinct eigenvalue.
struct Spectrum {
    std::vector<SpectrumEntry> entries;
    double lambda_max = 0.0;
    int cross_section_dim = 1;   // m = dim X
    double total_measure = 0.0;  // H^m(X)
};

// Tie tolerance used whenever a float eigenvalue meets a threshold.
inline double tie_tolerance(double threshold) {
    return 1e-9 * (threshold > 1.0 ? threshold : 1.0);
}

// Closed comparison eigenvalue <= threshold; exact when the eigenvalue is
// rational (a double threshold is itself an exact rational), tolerance
// 1e-9*max(1,threshold) otherwise.
bool eigenvalue_le(const EigenvalueV& ev, double threshold);

Spectrum circle_spectrum(double circumference, double lambda_max);
Spectrum sphere_spectrum(int m, double radius, double lambda_max);
Spectrum football_spectrum(int q, double lambda_max);

// Multiplicity of degree-k spherical harmonics on S^m.
long long sphere_multiplicity(int k, int m);

// Diagnostic: all Spectrum invariants (sortedness, coverage, positivity).
bool merge_check(const Spectrum& s);

// i-th positive eigenvalue counted with multiplicity, i >= 1 (lambda_0 = 0
// excluded). Throws CoverageError past the last stored entry.
double eigenvalue_at(const Spectrum& s, long long i);

// Total multiplicity of the stored positive eigenvalues.
long long positive_count(const Spectrum& s);

// CSV body `eigenvalue,multiplicity` (rationals as p/q) plus a JSON sidecar
// {lambda_max, dim, total_measure}. Round-trip is bit-exact for rationals.
void write_spectrum_csv(const Spectrum& s, std::ostream& out);
std::string spectrum_sidecar_json(const Spectrum& s);
Spectrum read_spectrum_csv(std::istream& csv, const std::string& sidecar_json);

}  // namespace conespectra
