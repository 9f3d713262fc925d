#include "conespectra/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "conespectra/errors.hpp"

namespace conespectra {

std::vector<Rational> bernoulli_numbers(int count) {
    if (count < 1) throw DomainError("need at least one Bernoulli number");
    // sum_{k=0}^{m} C(m+1,k) B_k = 0 for m >= 1, starting from B_0 = 1;
    // this recursion yields B_1 = -1/2.
    std::vector<Rational> b;
    b.reserve(static_cast<size_t>(count));
    b.emplace_back(1);
    for (int m = 1; m < count; ++m) {
        Rational acc(0);
        for (int k = 0; k < m; ++k)
            acc += Rational(binomial(static_cast<unsigned>(m + 1), static_cast<unsigned>(k))) *
                   b[static_cast<size_t>(k)];
        b.push_back(-acc / Rational(m + 1));
    }
    return b;
}

FaulhaberEval::FaulhaberEval(int n) : n(n) {
    if (n < 2) throw DomainError("Faulhaber power n must be >= 2");
    bernoulli = bernoulli_numbers(n);
}

Rational FaulhaberEval::eval(long long p) const {
    if (p < 0) throw DomainError("upper limit p must be nonnegative");
    if (p == 0) return Rational(0);
    Rational acc(0);
    std::vector<Rational> p_pows(static_cast<size_t>(n) + 1, Rational(1));
    for (int e = 1; e <= n; ++e) p_pows[static_cast<size_t>(e)] = p_pows[static_cast<size_t>(e - 1)] * p;
    for (int j = 0; j < n; ++j) {
        Rational term = Rational(binomial(static_cast<unsigned>(n), static_cast<unsigned>(j))) *
                        bernoulli[static_cast<size_t>(j)] * p_pows[static_cast<size_t>(n - j)];
        acc += (j % 2 == 0) ? term : -term;
    }
    return acc / n;
}

Rational power_sum(long long p, int n) { return FaulhaberEval(n).eval(p); }

Verdict limit_estimate(const Series& series, double target) {
    if (series.size() < 8)
        throw InsufficientDataError("limit estimate needs at least 8 points, got " +
                                    std::to_string(series.size()));
    Verdict v;
    v.target = target;
    v.last = series.back().second;
    v.abs_err = std::abs(v.last - target);

    const size_t start = series.size() / 2;
    double sum = 0.0;
    double minimum = series[start].second;
    v.monotone = true;
    double prev_err = std::abs(series[start].second - target);
    for (size_t i = start; i < series.size(); ++i) {
        const double val = series[i].second;
        sum += val;
        minimum = std::min(minimum, val);
        const double err = std::abs(val - target);
        if (err > prev_err + 1e-15) v.monotone = false;
        prev_err = err;
    }
    v.window_min = minimum;
    v.window_mean = sum / static_cast<double>(series.size() - start);
    return v;
}

double liminf_estimate(const Series& series) {
    if (series.size() < 8)
        throw InsufficientDataError("liminf estimate needs at least 8 points");
    const long long d_max = series.back().first;
    double minimum = series.back().second;
    for (const auto& [d, val] : series)
        if (2 * d >= d_max) minimum = std::min(minimum, val);
    return minimum;
}

std::string verdict_json(const Verdict& v) {
    nlohmann::json j;
    j["target"] = v.target;
    j["last"] = v.last;
    j["window_min"] = v.window_min;
    j["window_mean"] = v.window_mean;
    j["abs_err"] = v.abs_err;
    j["monotone"] = v.monotone;
    return j.dump();
}

}  // namespace conespectra
