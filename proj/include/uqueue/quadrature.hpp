#pragma once

#include <functional>

#include "uqueue/erlang.hpp"

namespace uq {

struct QuadConfig {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    // Deepest bisection level any panel may reach.
    int max_refinements = 40;
    int min_panels = 64;
    // Base panel count for the Erlang-weighted integral over [0, T*]. Its
    // integrand is smooth and unimodal, so it starts coarser than min_panels.
    int erlang_panels = 16;
    // Bound on the neglected part of a semi-infinite Erlang-weighted integral.
    double truncation_tail_mass = 1e-12;

    /// Throws std::invalid_argument when a field is out of range.
    void validate() const;

    /// Same config with both tolerances divided by `factor`.
    QuadConfig tightened(double factor) const;
};

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    long evaluations = 0;
    bool converged = false;
};

using Integrand = std::function<double(double)>;

/// Adaptive composite Gauss-Kronrod (7/15) integration over [lo, hi].
///
/// The interval starts as `max(cfg.min_panels, panels)` equal panels and the
/// panel with the largest error estimate is bisected until the total error
/// estimate meets max(rel_tol * |value|, abs_tol). Nodes are interior to each
/// panel, so `f` is never evaluated at lo or hi (or at any panel boundary).
/// Never throws on nonconvergence; inspect `converged`.
QuadResult integrate_finite(const Integrand& f, double lo, double hi, const QuadConfig& cfg,
                            int panels = 0);

/// Throws ConvergenceError if `r` did not converge; returns it otherwise.
const QuadResult& require_converged(const QuadResult& r, const char* what);

/// |g(t)| <= c0 + c1 * t for all t >= 0.
struct GrowthEnvelope {
    double c0 = 1.0;
    double c1 = 0.0;

    double at(double t) const noexcept { return c0 + c1 * t; }
};

/// Upper bound on |integral_T^inf f_n(t) g(t) dt| given the envelope of g.
double erlang_tail_bound(const ErlangStage& stage, const GrowthEnvelope& env, double horizon);

/// Smallest horizon on the search schedule starting at (n + 10 sqrt(n)) / mu
/// whose tail bound is below `tail_mass`.
double erlang_truncation_point(const ErlangStage& stage, const GrowthEnvelope& env,
                               double tail_mass);

/// integral_0^inf f_n(t) g(t) dt. The domain is cut at erlang_truncation_point
/// and the tail bound is folded into error_estimate. Every sampled g(t) is
/// checked against `env`; a violation throws EnvelopeViolation.
QuadResult integrate_erlang_weighted(const Integrand& g, const ErlangStage& stage,
                                     const GrowthEnvelope& env, const QuadConfig& cfg);

/// Same integral cut at an explicit horizon.
QuadResult integrate_erlang_weighted_to(const Integrand& g, const ErlangStage& stage,
                                        const GrowthEnvelope& env, double horizon,
                                        const QuadConfig& cfg);

}  // namespace uq
