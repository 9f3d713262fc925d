#pragma once

#include <string>

#include "conespectra/spectrum.hpp"

namespace conespectra::cli {

// Catalog descriptor grammar:
//   circle:L=<float> | sphere:m=<int>[,r=<float>] | football:q=<int>
struct Descriptor {
    enum class Kind { circle, sphere, football };
    Kind kind = Kind::circle;
    double circumference = 0.0;  // circle
    int m = 2;                   // sphere
    double radius = 1.0;         // sphere
    int q = 1;                   // football
};

// ParseError (with position and expected-token message) on bad input.
Descriptor parse_descriptor(const std::string& text);

Spectrum build_cross_section(const Descriptor& d, double lambda_max);

// Smallest catalog spectrum holding at least `min_positive` positive
// eigenvalues (lambda_max doubled until covered).
Spectrum cross_section_with_count(const Descriptor& d, long long min_positive);

enum class Command { spectrum, hd, weyl, gram_check, oracle, report };

struct RunConfig {
    Command command = Command::spectrum;
    std::string descriptor;  // --cross-section / --cone
    long long d_max = 50;
    double lambda_max = -1.0;  // per-command default when negative
    int trials = 10;
    unsigned long long seed = 12345;
    int level = 4;
    int points = 256;  // circle oracle nodes
    int n = 2;         // gram-check ambient dimension
    int dim = 3;       // gram-check subspace dimension
    double rel_tol = 0.02;   // oracle match tolerance
    double weyl_tol = 0.02;  // report: Weyl threshold
    double sum_tol = 0.005;  // report: ratio_sum threshold
    std::string out;         // empty: stdout
    std::string format = "csv";
    std::string mesh_out;
};

// Exit code 0 on success, 1 when a verdict fails its threshold, 2 on
// usage or I/O errors.
int run(const RunConfig& config);

// Full argv surface (CLI11); the binary in tools/ delegates here.
int main_entry(int argc, char** argv);

// Parallelism cap from CONE_SPECTRA_THREADS (hardware concurrency when unset).
int thread_cap();

}  // namespace conespectra::cli
