#pragma once

#include <string>
#include <utility>
#include <vector>

#include "conespectra/rational.hpp"

namespace conespectra {

// Faulhaber evaluation of sum_{i=1}^{p} i^{n-1} through Bernoulli numbers
// with B_1 = -1/2, entering with alternating signs:
//   (1/n) sum_{j=0}^{n-1} (-1)^j C(n,j) B_j p^{n-j}.
struct FaulhaberEval {
    int n = 2;                        // power is n-1
    std::vector<Rational> bernoulli;  // B_0 .. B_{n-1}

    explicit FaulhaberEval(int n);
    Rational eval(long long p) const;
};

// B_0 .. B_{count-1}, B_1 = -1/2.
std::vector<Rational> bernoulli_numbers(int count);

// Exact sum_{i=1}^{p} i^{n-1}.
Rational power_sum(long long p, int n);

struct Verdict {
    double target = 0.0;
    double last = 0.0;
    double window_min = 0.0;
    double window_mean = 0.0;
    double abs_err = 0.0;  // |last - target|
    bool monotone = false; // |value - target| nonincreasing over the last half
};

using Series = std::vector<std::pair<long long, double>>;

// Convergence verdict for a d-indexed series against a target. The window
// is the trailing half of the series. InsufficientDataError below 8 points.
Verdict limit_estimate(const Series& series, double target);

// Trailing-window minimum, the operational liminf over d in [d_max/2, d_max].
double liminf_estimate(const Series& series);

std::string verdict_json(const Verdict& v);

}  // namespace conespectra
