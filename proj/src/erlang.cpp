#include "uqueue/erlang.hpp"

#include <cmath>
#include <stdexcept>

namespace uq {

namespace {

double poisson_log_pmf(double mean, long k) {
    return -mean + static_cast<double>(k) * std::log(mean) - std::lgamma(static_cast<double>(k) + 1.0);
}

// P(X <= k), summing downward from k when that tail is the small side.
double poisson_lower_cdf(double mean, long k) {
    if (k < 0) return 0.0;
    if (mean == 0.0) return 1.0;
    if (static_cast<double>(k) >= mean) return 1.0 - poisson_upper_tail(mean, k + 1);
    double term = std::exp(poisson_log_pmf(mean, k));
    double sum = 0.0;
    for (long n = k; n >= 0; --n) {
        sum += term;
        if (term < 1e-17 * sum) break;
        term *= static_cast<double>(n) / mean;
    }
    return std::min(sum, 1.0);
}

}  // namespace

ErlangStage::ErlangStage(int n, double mu) : n_(n), mu_(mu) {
    if (n < 1) throw std::invalid_argument("ErlangStage: n must be >= 1");
    if (!(mu > 0.0) || !std::isfinite(mu)) throw std::invalid_argument("ErlangStage: mu must be > 0");
}

double erlang_pdf(const ErlangStage& stage, double t) {
    if (t < 0.0) throw std::invalid_argument("erlang_pdf: t must be >= 0");
    const int n = stage.n();
    const double mu = stage.mu();
    if (t == 0.0) return n == 1 ? mu : 0.0;
    const double log_f = n * std::log(mu) + (n - 1) * std::log(t) - mu * t - std::lgamma(n);
    return std::exp(log_f);
}

double erlang_survival(const ErlangStage& stage, double t) {
    if (t <= 0.0) return 1.0;
    // n services unfinished by t <=> fewer than n Poisson(mu t) completions.
    return poisson_lower_cdf(stage.mu() * t, stage.n() - 1);
}

double poisson_upper_tail(double mean, long k) {
    if (k <= 0) return 1.0;
    if (mean == 0.0) return 0.0;
    if (static_cast<double>(k) <= mean) return 1.0 - poisson_lower_cdf(mean, k - 1);
    double term = std::exp(poisson_log_pmf(mean, k));
    double sum = 0.0;
    for (long n = k;; ++n) {
        sum += term;
        term *= mean / static_cast<double>(n + 1);
        if (term < 1e-17 * sum || term == 0.0) break;
    }
    return std::min(sum, 1.0);
}

}  // namespace uq
