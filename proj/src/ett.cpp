#include "uqueue/ett.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>

#include "parallel.hpp"
#include "uqueue/errors.hpp"

namespace uq {

namespace {

void check_lengths(int a, int b, const char* what) {
    if (a < 0 || b < 0) throw std::invalid_argument(std::string(what) + ": a and b must be >= 0");
}

int parse_int(std::string_view text) {
    int value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end)
        throw std::invalid_argument("invalid integer '" + std::string(text) + "'");
    return value;
}

}  // namespace

std::string_view to_string(Recommendation r) {
    switch (r) {
        case Recommendation::ShorterFirst: return "shorter-first";
        case Recommendation::LongerFirst: return "longer-first";
        case Recommendation::Tie: return "tie";
    }
    return "?";
}

std::string_view to_string(CaseLabel c) {
    switch (c) {
        case CaseLabel::Case1: return "Case1";
        case CaseLabel::Case2: return "Case2";
        case CaseLabel::Case3: return "Case3";
        case CaseLabel::Boundary: return "Boundary";
    }
    return "?";
}

TransientValue ett_with_error(const Scenario& s, const QuadConfig& cfg) {
    check_lengths(s.a, s.b, "ett");
    const QueueParams& p = s.params;
    if (!p.stable()) throw DomainError("ett: requires rho < 1 (use the sum form or simulation)");
    const double mu = p.mu();

    // EL_b(t) <= b + lambda t: nobody leaves faster than zero, arrivals are Poisson.
    const GrowthEnvelope env{static_cast<double>(s.b), p.lambda()};
    double inner_error = 0.0;
    auto el = [&](double t) {
        const TransientValue v = expected_length_with_error(s.b, t, p, cfg);
        inner_error = std::max(inner_error, v.error_estimate);
        return v.value;
    };
    const QuadResult r = require_converged(
        integrate_erlang_weighted(el, ErlangStage(s.a + 1, mu), env, cfg), "ett");
    return {(s.a + 2) / mu + r.value / mu, (r.error_estimate + inner_error) / mu};
}

double ett(const Scenario& s, const QuadConfig& cfg) { return ett_with_error(s, cfg).value; }

double ett_sum_form(const Scenario& s, const QuadConfig& cfg, std::function<int(double)> cap,
                    double tail_tol) {
    check_lengths(s.a, s.b, "ett_sum_form");
    const QueueParams& p = s.params;
    const double mu = p.mu();
    if (!cap) cap = [&](double t) { return state_cap(s.b, t, p); };

    const auto service = [mu](int n) { return (n + 1) / mu; };
    const GrowthEnvelope env{(s.b + 1) / mu, p.lambda() / mu};
    auto inner = [&](double t) {
        const int n_max = cap(t);
        const double tail = transient_tail_bound(s.b, t, p, n_max, 1.0 / mu, 1.0 / mu);
        if (tail > tail_tol) {
            throw TruncationError("ett_sum_form: tail bound " + std::to_string(tail) +
                                      " exceeds tolerance at t = " + std::to_string(t),
                                  tail);
        }
        return transient_moment(s.b, t, p, service, n_max, cfg).value;
    };
    const QuadResult r = require_converged(
        integrate_erlang_weighted(inner, ErlangStage(s.a + 1, mu), env, cfg), "ett_sum_form");
    return (s.a + 1) / mu + r.value;
}

EttReport compare_orders(const QueueParams& p, int a, int b, const QuadConfig& cfg) {
    const TransientValue ab = ett_with_error({p, a, b}, cfg);
    const TransientValue ba = a == b ? ab : ett_with_error({p, b, a}, cfg);

    EttReport report;
    report.ett_ab = ab.value;
    report.ett_ba = ba.value;
    report.error_estimate = ab.error_estimate + ba.error_estimate;
    report.case_label = classify_case(p, a, b);

    const double gap = ab.value - ba.value;
    if (a == b || std::abs(gap) <= 2.0 * report.error_estimate) {
        report.recommended_order = Recommendation::Tie;
    } else {
        const bool a_first_wins = gap < 0.0;
        const bool a_is_shorter = a < b;
        report.recommended_order = a_first_wins == a_is_shorter ? Recommendation::ShorterFirst
                                                                : Recommendation::LongerFirst;
    }
    return report;
}

CaseLabel classify_case(const QueueParams& p, int a, int b) {
    check_lengths(a, b, "classify_case");
    const double mean = steady_state_length(p);
    const double lo = std::min(a, b);
    const double hi = std::max(a, b);
    if (lo == mean || hi == mean) return CaseLabel::Boundary;
    if (hi < mean) return CaseLabel::Case2;
    if (lo > mean) return CaseLabel::Case3;
    return CaseLabel::Case1;
}

double fluid_linear(const QueueParams& p, int a, int b) {
    check_lengths(a, b, "fluid_linear");
    if (!p.stable()) throw DomainError("fluid_linear: requires mu > lambda");
    const double first = (a + 1) / p.mu();
    const double remaining = std::max(b - (p.mu() - p.lambda()) * first, 0.0);
    return first + (remaining + 1.0) / p.mu();
}

double fluid_curve(const QueueParams& p, int a, int b, const QuadConfig& cfg) {
    check_lengths(a, b, "fluid_curve");
    const double first = (a + 1) / p.mu();
    return first + (expected_length(b, first, p, cfg) + 1.0) / p.mu();
}

IntRange IntRange::parse(std::string_view text) {
    IntRange r;
    if (const auto dots = text.find(".."); dots != std::string_view::npos) {
        r.lo = parse_int(text.substr(0, dots));
        r.hi = parse_int(text.substr(dots + 2));
    } else {
        r.lo = r.hi = parse_int(text);
    }
    if (r.lo < 0 || r.hi < r.lo)
        throw std::invalid_argument("invalid range '" + std::string(text) + "'");
    return r;
}

void sweep(const QueueParams& p, IntRange a_range, IntRange b_range, const QuadConfig& cfg,
           const std::function<void(const SweepRow&)>& on_row, unsigned threads) {
    if (a_range.lo < 0 || a_range.hi < a_range.lo || b_range.lo < 0 || b_range.hi < b_range.lo)
        throw std::invalid_argument("sweep: invalid range");
    const std::size_t cols = static_cast<std::size_t>(b_range.size());
    const std::size_t cells = static_cast<std::size_t>(a_range.size()) * cols;
    std::vector<SweepRow> rows(cells);
    const auto errors = detail::parallel_for(cells, threads, [&](std::size_t k) {
        const int a = a_range.lo + static_cast<int>(k / cols);
        const int b = b_range.lo + static_cast<int>(k % cols);
        const EttReport r = compare_orders(p, a, b, cfg);
        rows[k] = {a, b, r.ett_ab, r.ett_ba, r.recommended_order, r.case_label};
    });
    for (std::size_t k = 0; k < cells; ++k) {
        if (errors[k]) std::rethrow_exception(errors[k]);
        on_row(rows[k]);
    }
}

std::vector<SweepRow> sweep(const QueueParams& p, IntRange a_range, IntRange b_range,
                            const QuadConfig& cfg, unsigned threads) {
    std::vector<SweepRow> out;
    sweep(p, a_range, b_range, cfg, [&](const SweepRow& r) { out.push_back(r); }, threads);
    return out;
}

}  // namespace uq
