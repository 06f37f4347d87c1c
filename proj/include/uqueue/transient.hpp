#pragma once

#include <functional>
#include <optional>

#include "uqueue/quadrature.hpp"

namespace uq {

/// Arrival and service rates of one M/M/1 system. Utilization is derived.
class QueueParams {
public:
    /// Requires lambda >= 0 and mu > 0, both finite.
    QueueParams(double lambda, double mu);

    double lambda() const noexcept { return lambda_; }
    double mu() const noexcept { return mu_; }
    double rho() const noexcept { return lambda_ / mu_; }
    bool stable() const noexcept { return lambda_ < mu_; }

private:
    double lambda_;
    double mu_;
};

/// Start with `i` customers, observe at time `t`; `j` is the target count
/// for probability queries and absent for expected-length queries.
struct TransientQuery {
    int i = 0;
    std::optional<int> j;
    double t = 0.0;

    void validate() const;
};

struct TransientValue {
    double value = 0.0;
    double error_estimate = 0.0;
};

double gamma_kernel(double y, double rho);
double a_kernel(int k, double y, double rho);

/// Transient probability p_ij(t) from the spectral integral over [0, pi]
/// plus the steady-state addend (1 - rho) rho^j when rho < 1.
///
/// The raw value must lie within 1e-6 * (1 + error) of [0, 1]; it is then
/// clamped. Anything further out throws ConvergenceError. Requires
/// lambda > 0 (DomainError otherwise).
double transient_prob(const TransientQuery& q, const QueueParams& p, const QuadConfig& cfg = {});

/// Unclamped p_ij(t) with its error estimate.
TransientValue transient_prob_raw(const TransientQuery& q, const QueueParams& p,
                                  const QuadConfig& cfg = {});

/// EL_i(t). Only defined for 0 < rho < 1; DomainError otherwise.
double expected_length(int i, double t, const QueueParams& p, const QuadConfig& cfg = {});
TransientValue expected_length_with_error(int i, double t, const QueueParams& p,
                                          const QuadConfig& cfg = {});

/// Default state cap for truncated sums over the target count:
/// max(i, steady-state mean) + 10 sqrt(max(i,1)) + lambda t + 10 sqrt(lambda t + 1).
/// For rho >= 1 the steady-state term is dropped.
int state_cap(int i, double t, const QueueParams& p);

/// Upper bound on sum_{n > cap} w(n) p_in(t) for w(n) = c0 + c1 n, from the
/// sample-path bound L_i(t) <= i + Poisson(lambda t).
double transient_tail_bound(int i, double t, const QueueParams& p, int cap, double c0, double c1);

/// sum_{n=0..cap} weight(n) p_in(t), integrating the weighted sum of
/// spectral terms in one pass. Works for any rho > 0.
TransientValue transient_moment(int i, double t, const QueueParams& p,
                                const std::function<double(int)>& weight, int cap,
                                const QuadConfig& cfg = {});

/// EL_i(t) as sum_{n <= cap} n p_in(t). Also defined for rho >= 1.
/// Throws TruncationError when the neglected tail bound exceeds `tail_tol`.
double expected_length_by_sum(int i, double t, const QueueParams& p,
                              std::optional<int> cap = std::nullopt, double tail_tol = 1e-8,
                              const QuadConfig& cfg = {});

/// lambda / (mu - lambda). DomainError for rho >= 1.
double steady_state_length(const QueueParams& p);

/// d EL_i / dt at t = 0, which is lambda - mu for i >= 1. At i = 0 the true
/// slope is +lambda; this function does not cover that case.
double initial_slope(const QueueParams& p);

}  // namespace uq
