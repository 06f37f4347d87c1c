#include "uqueue/transient.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "uqueue/errors.hpp"

namespace uq {

namespace {

constexpr double kTwoOverPi = 2.0 / std::numbers::pi;

// Minimum panel count for an integrand oscillating like a_i(y) a_j(y).
int oscillation_panels(const QuadConfig& cfg, int i, int j) {
    return std::max(cfg.min_panels, 8 * (i + j + 2));
}

void require_analytic(const QueueParams& p, const char* what) {
    if (!(p.lambda() > 0.0))
        throw DomainError(std::string(what) + ": lambda must be > 0 for the spectral formula");
}

void check_count(int n, const char* what) {
    if (n < 0) throw std::invalid_argument(std::string(what) + ": counts must be >= 0");
}

void check_time(double t, const char* what) {
    if (!(t >= 0.0) || !std::isfinite(t))
        throw std::invalid_argument(std::string(what) + ": t must be finite and >= 0");
}

// The inner integral is scaled by `scale` afterwards; shrink the absolute
// tolerance so the scaled result still meets cfg.abs_tol.
QuadConfig scaled_config(const QuadConfig& cfg, double scale) {
    QuadConfig inner = cfg;
    inner.abs_tol = cfg.abs_tol / std::max(scale, 1e-300);
    return inner;
}

}  // namespace

QueueParams::QueueParams(double lambda, double mu) : lambda_(lambda), mu_(mu) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("QueueParams: lambda must be finite and >= 0");
    if (!(mu > 0.0) || !std::isfinite(mu))
        throw std::invalid_argument("QueueParams: mu must be finite and > 0");
}

void TransientQuery::validate() const {
    check_count(i, "TransientQuery");
    if (j) check_count(*j, "TransientQuery");
    check_time(t, "TransientQuery");
}

double gamma_kernel(double y, double rho) {
    // 1 + rho - 2 sqrt(rho) cos(y), rewritten without cancellation near y = 0.
    const double r = std::sqrt(rho);
    const double s = std::sin(0.5 * y);
    return (1.0 - r) * (1.0 - r) + 4.0 * r * s * s;
}

double a_kernel(int k, double y, double rho) {
    return std::sin(k * y) - std::sqrt(rho) * std::sin((k + 1) * y);
}

TransientValue transient_prob_raw(const TransientQuery& q, const QueueParams& p,
                                  const QuadConfig& cfg) {
    q.validate();
    if (!q.j) throw std::invalid_argument("transient_prob: target count j is required");
    require_analytic(p, "transient_prob");
    const int i = q.i;
    const int j = *q.j;
    const double rho = p.rho();
    const double decay = p.mu() * q.t;

    const double scale = kTwoOverPi * std::exp(0.5 * (j - i) * std::log(rho));
    auto integrand = [&](double y) {
        const double g = gamma_kernel(y, rho);
        return std::exp(-decay * g) / g * a_kernel(i, y, rho) * a_kernel(j, y, rho);
    };
    const QuadResult r = require_converged(
        integrate_finite(integrand, 0.0, std::numbers::pi, scaled_config(cfg, scale),
                         oscillation_panels(cfg, i, j)),
        "transient_prob");

    const double steady = rho < 1.0 ? (1.0 - rho) * std::pow(rho, j) : 0.0;
    return {scale * r.value + steady, scale * r.error_estimate};
}

double transient_prob(const TransientQuery& q, const QueueParams& p, const QuadConfig& cfg) {
    const TransientValue raw = transient_prob_raw(q, p, cfg);
    const double band = 1e-6 * (1.0 + raw.error_estimate);
    if (raw.value < -band || raw.value > 1.0 + band) {
        throw ConvergenceError("transient_prob: value " + std::to_string(raw.value) +
                                   " outside [0, 1] beyond tolerance",
                               raw.value, raw.error_estimate);
    }
    return std::clamp(raw.value, 0.0, 1.0);
}

TransientValue expected_length_with_error(int i, double t, const QueueParams& p,
                                          const QuadConfig& cfg) {
    check_count(i, "expected_length");
    check_time(t, "expected_length");
    require_analytic(p, "expected_length");
    if (!p.stable()) throw DomainError("expected_length: requires rho < 1");
    const double rho = p.rho();
    const double decay = p.mu() * t;

    const double scale = kTwoOverPi * std::exp(0.5 * (1 - i) * std::log(rho));
    auto integrand = [&](double y) {
        const double g = gamma_kernel(y, rho);
        return std::exp(-decay * g) / (g * g) * a_kernel(i, y, rho) * std::sin(y);
    };
    const QuadResult r = require_converged(
        integrate_finite(integrand, 0.0, std::numbers::pi, scaled_config(cfg, scale),
                         oscillation_panels(cfg, i, 0)),
        "expected_length");
    return {scale * r.value + rho / (1.0 - rho), scale * r.error_estimate};
}

double expected_length(int i, double t, const QueueParams& p, const QuadConfig& cfg) {
    return expected_length_with_error(i, t, p, cfg).value;
}

int state_cap(int i, double t, const QueueParams& p) {
    const double base = p.stable() ? std::max<double>(i, steady_state_length(p)) : i;
    const double arrivals = p.lambda() * t;
    const double cap = base + 10.0 * std::sqrt(std::max(i, 1)) + arrivals +
                       10.0 * std::sqrt(arrivals + 1.0);
    return static_cast<int>(std::ceil(cap));
}

double transient_tail_bound(int i, double t, const QueueParams& p, int cap, double c0, double c1) {
    const double arrivals = p.lambda() * t;
    const long k = static_cast<long>(cap) - i;
    return (c0 + c1 * i) * poisson_upper_tail(arrivals, k + 1) +
           c1 * arrivals * poisson_upper_tail(arrivals, k);
}

TransientValue transient_moment(int i, double t, const QueueParams& p,
                                const std::function<double(int)>& weight, int cap,
                                const QuadConfig& cfg) {
    check_count(i, "transient_moment");
    check_count(cap, "transient_moment");
    check_time(t, "transient_moment");
    require_analytic(p, "transient_moment");
    const double rho = p.rho();
    const double root = std::sqrt(rho);
    const double decay = p.mu() * t;

    // weights[n] = w(n) rho^(n/2); the integrand sums w(n) rho^(n/2) a_n(y).
    std::vector<double> weights(static_cast<std::size_t>(cap) + 1);
    double steady = 0.0;
    double power = 1.0;
    for (int n = 0; n <= cap; ++n) {
        const double w = weight(n);
        weights[n] = w * power;
        if (rho < 1.0) steady += w * (1.0 - rho) * power * power;
        power *= root;
    }

    const double scale = kTwoOverPi * std::exp(-0.5 * i * std::log(rho));
    auto integrand = [&](double y) {
        const double c2 = 2.0 * std::cos(y);
        double s_prev = 0.0;          // sin(n y)
        double s_cur = std::sin(y);   // sin((n+1) y)
        double sum = 0.0;
        for (int n = 0; n <= cap; ++n) {
            sum += weights[n] * (s_prev - root * s_cur);
            const double s_next = c2 * s_cur - s_prev;
            s_prev = s_cur;
            s_cur = s_next;
        }
        const double g = gamma_kernel(y, rho);
        return std::exp(-decay * g) / g * a_kernel(i, y, rho) * sum;
    };
    const QuadResult r = require_converged(
        integrate_finite(integrand, 0.0, std::numbers::pi, scaled_config(cfg, scale),
                         oscillation_panels(cfg, i, cap)),
        "transient_moment");
    return {scale * r.value + steady, scale * r.error_estimate};
}

double expected_length_by_sum(int i, double t, const QueueParams& p, std::optional<int> cap,
                              double tail_tol, const QuadConfig& cfg) {
    check_count(i, "expected_length_by_sum");
    check_time(t, "expected_length_by_sum");
    const int n_max = cap.value_or(state_cap(i, t, p));
    const double tail = transient_tail_bound(i, t, p, n_max, 0.0, 1.0);
    if (tail > tail_tol) {
        throw TruncationError("expected_length_by_sum: tail bound " + std::to_string(tail) +
                                  " exceeds tolerance at cap " + std::to_string(n_max),
                              tail);
    }
    return transient_moment(i, t, p, [](int n) { return static_cast<double>(n); }, n_max, cfg)
        .value;
}

double steady_state_length(const QueueParams& p) {
    if (!p.stable()) throw DomainError("steady_state_length: requires rho < 1");
    return p.lambda() / (p.mu() - p.lambda());
}

double initial_slope(const QueueParams& p) { return p.lambda() - p.mu(); }

}  // namespace uq
