#include "uqueue/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "uqueue/errors.hpp"

namespace uq {

namespace {

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1].
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for kXgk[1], kXgk[3], kXgk[5], kXgk[7].
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr long kMaxEvaluations = 20'000'000;

struct Panel {
    double lo;
    double hi;
    double value;
    double error;
    int depth;
    // |K - G| is below the roundoff floor; bisecting cannot shrink the error.
    bool roundoff_limited;
};

Panel gauss_kronrod(const Integrand& f, double lo, double hi, int depth) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double fc = f(center);
    double kronrod = kWgk[7] * fc;
    double gauss = kWg[3] * fc;
    double abs_sum = kWgk[7] * std::abs(fc);
    for (int k = 0; k < 7; ++k) {
        const double dx = half * kXgk[k];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        kronrod += kWgk[k] * (f1 + f2);
        abs_sum += kWgk[k] * (std::abs(f1) + std::abs(f2));
        if (k % 2 == 1) gauss += kWg[k / 2] * (f1 + f2);
    }
    kronrod *= half;
    gauss *= half;
    abs_sum *= std::abs(half);
    const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * abs_sum;
    const double diff = std::abs(kronrod - gauss);
    return {lo, hi, kronrod, std::max(diff, roundoff), depth, diff <= roundoff};
}

bool worse(const Panel& x, const Panel& y) {
    if (x.error != y.error) return x.error < y.error;
    return x.lo > y.lo;
}

double target(const QuadConfig& cfg, double value) {
    return std::max(cfg.rel_tol * std::abs(value), cfg.abs_tol);
}

}  // namespace

void QuadConfig::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || !(truncation_tail_mass > 0.0))
        throw std::invalid_argument("QuadConfig: tolerances must be > 0");
    if (max_refinements < 1) throw std::invalid_argument("QuadConfig: max_refinements must be >= 1");
    if (min_panels < 1 || erlang_panels < 1)
        throw std::invalid_argument("QuadConfig: panel counts must be >= 1");
}

QuadConfig QuadConfig::tightened(double factor) const {
    QuadConfig c = *this;
    c.rel_tol /= factor;
    c.abs_tol /= factor;
    c.truncation_tail_mass /= factor;
    return c;
}

QuadResult integrate_finite(const Integrand& f, double lo, double hi, const QuadConfig& cfg,
                            int panels) {
    cfg.validate();
    if (!(lo <= hi)) throw std::invalid_argument("integrate_finite: requires lo <= hi");
    if (lo == hi) return {0.0, 0.0, 0, true};

    const int count = std::max(cfg.min_panels, panels);
    std::vector<Panel> heap;
    heap.reserve(static_cast<std::size_t>(count) * 2);
    const double width = (hi - lo) / count;
    double value = 0.0;
    double error = 0.0;
    for (int k = 0; k < count; ++k) {
        const double a = lo + k * width;
        const double b = k + 1 == count ? hi : lo + (k + 1) * width;
        heap.push_back(gauss_kronrod(f, a, b, 0));
        value += heap.back().value;
        error += heap.back().error;
    }
    long evaluations = 15L * count;
    std::make_heap(heap.begin(), heap.end(), worse);

    while (error > target(cfg, value)) {
        const Panel top = heap.front();
        if (top.depth >= cfg.max_refinements || top.roundoff_limited ||
            evaluations >= kMaxEvaluations)
            break;
        std::pop_heap(heap.begin(), heap.end(), worse);
        heap.pop_back();
        const double mid = 0.5 * (top.lo + top.hi);
        const Panel left = gauss_kronrod(f, top.lo, mid, top.depth + 1);
        const Panel right = gauss_kronrod(f, mid, top.hi, top.depth + 1);
        evaluations += 30;
        value += left.value + right.value - top.value;
        error += left.error + right.error - top.error;
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end(), worse);
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end(), worse);
    }

    // Re-add in position order so the reported sums carry no update drift.
    std::sort(heap.begin(), heap.end(), [](const Panel& x, const Panel& y) { return x.lo < y.lo; });
    value = 0.0;
    error = 0.0;
    for (const Panel& p : heap) {
        value += p.value;
        error += p.error;
    }
    return {value, error, evaluations, error <= target(cfg, value)};
}

const QuadResult& require_converged(const QuadResult& r, const char* what) {
    if (!r.converged) {
        std::ostringstream msg;
        msg << what << ": quadrature did not converge (estimate " << r.value << ", error "
            << r.error_estimate << ", " << r.evaluations << " evaluations)";
        throw ConvergenceError(msg.str(), r.value, r.error_estimate);
    }
    return r;
}

double erlang_tail_bound(const ErlangStage& stage, const GrowthEnvelope& env, double horizon) {
    // integral_T^inf f_n(t) t dt = (n / mu) P(Erlang(n+1) > T)
    const ErlangStage next(stage.n() + 1, stage.mu());
    return std::abs(env.c0) * erlang_survival(stage, horizon) +
           std::abs(env.c1) * stage.mean() * erlang_survival(next, horizon);
}

double erlang_truncation_point(const ErlangStage& stage, const GrowthEnvelope& env,
                               double tail_mass) {
    const double root_n = std::sqrt(static_cast<double>(stage.n()));
    const double step = std::max(1.0, root_n) / stage.mu();
    double horizon = (stage.n() + 10.0 * root_n) / stage.mu();
    for (int k = 0; k < 100000 && erlang_tail_bound(stage, env, horizon) > tail_mass; ++k) {
        horizon += step;
    }
    return horizon;
}

QuadResult integrate_erlang_weighted_to(const Integrand& g, const ErlangStage& stage,
                                        const GrowthEnvelope& env, double horizon,
                                        const QuadConfig& cfg) {
    cfg.validate();
    if (!(horizon > 0.0)) throw std::invalid_argument("integrate_erlang_weighted: horizon must be > 0");
    auto weighted = [&](double t) {
        const double gt = g(t);
        if (!(std::abs(gt) <= env.at(t) * (1.0 + 1e-6) + 1e-9)) {
            throw EnvelopeViolation("integrate_erlang_weighted: |g(" + std::to_string(t) +
                                    ")| = " + std::to_string(gt) + " exceeds declared envelope " +
                                    std::to_string(env.at(t)));
        }
        return erlang_pdf(stage, t) * gt;
    };
    QuadConfig inner = cfg;
    inner.rel_tol *= 0.5;
    inner.abs_tol *= 0.5;
    inner.min_panels = cfg.erlang_panels;
    QuadResult r = integrate_finite(weighted, 0.0, horizon, inner);
    const double tail = erlang_tail_bound(stage, env, horizon);
    r.error_estimate += tail;
    r.converged = r.converged && r.error_estimate <= target(cfg, r.value);
    return r;
}

QuadResult integrate_erlang_weighted(const Integrand& g, const ErlangStage& stage,
                                     const GrowthEnvelope& env, const QuadConfig& cfg) {
    const double horizon = erlang_truncation_point(stage, env, cfg.truncation_tail_mass);
    return integrate_erlang_weighted_to(g, stage, env, horizon, cfg);
}

}  // namespace uq
