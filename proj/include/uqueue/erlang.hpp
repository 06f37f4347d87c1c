#pragma once

namespace uq {

/// Time to complete `n` exponential(mu) services.
class ErlangStage {
public:
    ErlangStage(int n, double mu);

    int n() const noexcept { return n_; }
    double mu() const noexcept { return mu_; }
    double mean() const noexcept { return n_ / mu_; }

private:
    int n_;
    double mu_;
};

/// mu^n t^(n-1) e^(-mu t) / (n-1)!, evaluated in log space so large n does
/// not overflow.
double erlang_pdf(const ErlangStage& stage, double t);

/// P(T > t) for T ~ Erlang(n, mu).
double erlang_survival(const ErlangStage& stage, double t);

/// P(X >= k) for X ~ Poisson(mean).
double poisson_upper_tail(double mean, long k);

}  // namespace uq
