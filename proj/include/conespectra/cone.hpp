#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "conespectra/spectrum.hpp"

namespace conespectra {

// Metric cone C(X) over a cross-section spectrum. The asymptotic volume
// ratio is pinned to the cross-section measure by H^{n-1}(X) = n * avr.
struct ConeGeometry {
    int n = 2;  // ambient cone dimension, = cross_section_dim + 1
    Spectrum cross_section;

    double avr() const { return cross_section.total_measure / n; }
};

// Volume of the unit k-ball (omega_1 = 2, omega_2 = pi, omega_k = omega_{k-2} * 2pi/k).
double unit_ball_volume(int k);

// Validates dimensions and 0 < avr <= omega_n.
ConeGeometry make_cone(Spectrum cross_section);

// Nonnegative root of alpha*(alpha + n - 2) = lambda.
double exponent_of_eigenvalue(double lambda, int n);

// #{i >= 1 : lambda_i <= lambda} with multiplicity; CoverageError when
// lambda exceeds the spectrum's guaranteed range.
long long counting_function(const ConeGeometry& cone, double lambda);

// Dimension of harmonic functions of growth order <= d vanishing at the
// vertex: #{i >= 1 : alpha_i <= d}. d may be non-integer.
long long h_d(const ConeGeometry& cone, double d);

// Weyl limit of N(lambda)/lambda^{(n-1)/2}: n * omega_{n-1} * avr / (2pi)^{n-1}.
double weyl_target(const ConeGeometry& cone);

// Per-index limit of lambda_i / i^{2/(n-1)}: (2pi)^2 / (n omega_{n-1} avr)^{2/(n-1)}.
double eigenvalue_growth_target(const ConeGeometry& cone);

// H^n(B(R)) = avr * R^n, from the conic co-area formula.
double ball_measure(const ConeGeometry& cone, double R);

struct CountingRow {
    long long d = 0;
    long long h_d = 0;
    long long k_d = 0;  // h_d - h_{d-1}
    long long S_d = 0;  // sum_{i=1}^{d} h_{i-1}
    double ratio_sum = 0.0;  // S_d / d^n
    double ratio_hd = 0.0;   // h_d / d^{n-1}
};

struct CountingReport {
    std::vector<CountingRow> rows;
    int n = 2;
    double avr = 0.0;
    double target_sum = 0.0;  // 2 avr / (n! omega_n)
    double target_hd = 0.0;   // 2 avr / ((n-1)! omega_n)
    double tie_tol = 1e-9;
};

CountingReport counting_report(const ConeGeometry& cone, long long d_max);

// CSV `d,h_d,k_d,S_d,ratio_sum,ratio_hd` + JSON metadata
// {n, avr, target_sum, target_hd, tie_tolerance}.
void write_report_csv(const CountingReport& rep, std::ostream& out);
std::string report_metadata_json(const CountingReport& rep);

}  // namespace conespectra
