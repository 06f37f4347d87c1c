#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "uqueue/transient.hpp"

namespace uq {

/// The special customer joins the queue holding `a` customers first, then
/// the queue that held `b` at time 0.
struct Scenario {
    QueueParams params;
    int a = 0;
    int b = 0;

    Scenario swapped() const { return {params, b, a}; }
};

enum class Recommendation { ShorterFirst, LongerFirst, Tie };
enum class CaseLabel { Case1, Case2, Case3, Boundary };

std::string_view to_string(Recommendation r);
std::string_view to_string(CaseLabel c);

struct EttReport {
    double ett_ab = 0.0;  // queue `a` joined first
    double ett_ba = 0.0;
    Recommendation recommended_order = Recommendation::Tie;
    CaseLabel case_label = CaseLabel::Boundary;
    double error_estimate = 0.0;  // ett_ab and ett_ba errors summed
};

/// Expected total time (a+2)/mu + (1/mu) integral f_{a+1}(t) EL_b(t) dt.
double ett(const Scenario& s, const QuadConfig& cfg = {});
TransientValue ett_with_error(const Scenario& s, const QuadConfig& cfg = {});

/// The same expectation as (a+1)/mu + integral f_{a+1}(t) sum_n p_bn(t) (n+1)/mu dt,
/// with the state sum truncated at `cap(t)` (default: state_cap). Defined for
/// any rho > 0.
double ett_sum_form(const Scenario& s, const QuadConfig& cfg = {},
                    std::function<int(double)> cap = {}, double tail_tol = 1e-8);

/// Runs ett for both orders. Tie when |ett_ab - ett_ba| <= 2 * error_estimate.
EttReport compare_orders(const QueueParams& p, int a, int b, const QuadConfig& cfg = {});

CaseLabel classify_case(const QueueParams& p, int a, int b);

/// Deterministic drift path: first stage (a+1)/mu, the other queue drains at
/// mu - lambda (floored at zero), then (L + 1)/mu.
double fluid_linear(const QueueParams& p, int a, int b);

/// As fluid_linear but reading the other queue's length off EL_b((a+1)/mu).
double fluid_curve(const QueueParams& p, int a, int b, const QuadConfig& cfg = {});

struct IntRange {
    int lo = 0;
    int hi = 0;

    /// Parses "N" or "LO..HI". Throws std::invalid_argument.
    static IntRange parse(std::string_view text);
    int size() const noexcept { return hi - lo + 1; }
};

struct SweepRow {
    int a = 0;
    int b = 0;
    double ett_ab = 0.0;
    double ett_ba = 0.0;
    Recommendation winner = Recommendation::Tie;
    CaseLabel case_label = CaseLabel::Boundary;
};

/// Evaluates every (a, b) cell, possibly in parallel, and hands rows to
/// `on_row` in (a, b) order. If a cell fails, every earlier row has already
/// been delivered when the exception propagates.
void sweep(const QueueParams& p, IntRange a_range, IntRange b_range, const QuadConfig& cfg,
           const std::function<void(const SweepRow&)>& on_row, unsigned threads = 0);

std::vector<SweepRow> sweep(const QueueParams& p, IntRange a_range, IntRange b_range,
                            const QuadConfig& cfg = {}, unsigned threads = 0);

}  // namespace uq
