#include "uqueue/sim.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "parallel.hpp"

namespace uq {

namespace {

constexpr long kBlockSize = 1024;

// Running mean and centered second moment of one block of replications.
struct Moments {
    long count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++count;
        const double delta = x - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (x - mean);
    }
};

Moments combine(const Moments& x, const Moments& y) {
    if (x.count == 0) return y;
    if (y.count == 0) return x;
    Moments out;
    out.count = x.count + y.count;
    const double n = static_cast<double>(out.count);
    const double delta = y.mean - x.mean;
    out.mean = x.mean + delta * static_cast<double>(y.count) / n;
    out.m2 = x.m2 + y.m2 + delta * delta * static_cast<double>(x.count) * static_cast<double>(y.count) / n;
    return out;
}

// Pairwise reduction over a fixed index range, independent of which thread
// filled which block.
Moments reduce(const std::vector<Moments>& blocks, std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) return blocks[lo];
    const std::size_t mid = lo + (hi - lo) / 2;
    return combine(reduce(blocks, lo, mid), reduce(blocks, mid, hi));
}

Rng block_rng(const SimConfig& cfg, std::size_t block) {
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                      cfg.stream_id, static_cast<std::uint32_t>(block),
                      static_cast<std::uint32_t>(static_cast<std::uint64_t>(block) >> 32)};
    return Rng(seq);
}

std::size_t block_count(const SimConfig& cfg) {
    return static_cast<std::size_t>((cfg.replications + kBlockSize - 1) / kBlockSize);
}

long block_length(const SimConfig& cfg, std::size_t block) {
    return std::min(kBlockSize, cfg.replications - static_cast<long>(block) * kBlockSize);
}

SimEstimate run(const SimConfig& cfg, const std::function<double(Rng&)>& draw) {
    cfg.validate();
    std::vector<Moments> blocks(block_count(cfg));
    const auto errors = detail::parallel_for(blocks.size(), cfg.threads, [&](std::size_t k) {
        Rng rng = block_rng(cfg, k);
        Moments m;
        for (long r = 0, n = block_length(cfg, k); r < n; ++r) m.add(draw(rng));
        blocks[k] = m;
    });
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    const Moments total = reduce(blocks, 0, blocks.size());
    const double n = static_cast<double>(total.count);
    const double variance = total.count > 1 ? total.m2 / (n - 1.0) : 0.0;
    return {total.mean, std::sqrt(variance / n), total.count, cfg.seed};
}

void check_scenario(const Scenario& s) {
    if (s.a < 0 || s.b < 0) throw std::invalid_argument("simulation: a and b must be >= 0");
}

SpecialCustomerPath two_stage(const Scenario& s, Rng& rng) {
    const double mu = s.params.mu();
    const double first = sample_erlang(s.a + 1, mu, rng);
    const int behind = sample_queue_length(s.b, first, s.params, rng);
    return {first, first + sample_erlang(behind + 1, mu, rng)};
}

SpecialCustomerPath full_event(const Scenario& s, Rng& rng) {
    const double lambda = s.params.lambda();
    const double mu = s.params.mu();
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    long in_first = s.a + 1;  // special customer at the back
    long in_second = s.b;
    long ahead = s.a;         // customers ahead of the special one in its current queue
    bool in_phase_one = true;
    double clock = 0.0;
    SpecialCustomerPath path;
    for (;;) {
        const double dep1 = in_first > 0 ? mu : 0.0;
        const double dep2 = in_second > 0 ? mu : 0.0;
        const double total = 2.0 * lambda + dep1 + dep2;
        clock += std::exponential_distribution<double>(total)(rng);
        double u = unit(rng) * total;
        if ((u -= lambda) < 0.0) {
            ++in_first;
        } else if ((u -= lambda) < 0.0) {
            ++in_second;
        } else if ((u -= dep1) < 0.0) {
            --in_first;
            if (in_phase_one) {
                if (ahead == 0) {
                    path.first_stage = clock;
                    in_phase_one = false;
                    ahead = in_second;
                    ++in_second;
                } else {
                    --ahead;
                }
            }
        } else {
            --in_second;
            if (!in_phase_one) {
                if (ahead == 0) {
                    path.total = clock;
                    return path;
                }
                --ahead;
            }
        }
    }
}

}  // namespace

void SimConfig::validate() const {
    if (replications < 1) throw std::invalid_argument("SimConfig: replications must be >= 1");
}

int sample_queue_length(int b, double horizon, const QueueParams& p, Rng& rng) {
    if (b < 0) throw std::invalid_argument("sample_queue_length: b must be >= 0");
    if (!(horizon >= 0.0)) throw std::invalid_argument("sample_queue_length: horizon must be >= 0");
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int n = b;
    double clock = 0.0;
    for (;;) {
        const double rate = p.lambda() + (n > 0 ? p.mu() : 0.0);
        if (rate == 0.0) return n;
        clock += std::exponential_distribution<double>(rate)(rng);
        if (clock > horizon) return n;
        if (unit(rng) * rate < p.lambda()) {
            ++n;
        } else {
            --n;
        }
    }
}

double sample_erlang(int n, double mu, Rng& rng) {
    std::exponential_distribution<double> service(mu);
    double t = 0.0;
    for (int k = 0; k < n; ++k) t += service(rng);
    return t;
}

SpecialCustomerPath sample_special_customer(const Scenario& s, SimMethod method, Rng& rng) {
    check_scenario(s);
    return method == SimMethod::TwoStage ? two_stage(s, rng) : full_event(s, rng);
}

SimEstimate simulate_ett(const Scenario& s, const SimConfig& cfg) {
    check_scenario(s);
    return run(cfg, [&](Rng& rng) { return sample_special_customer(s, cfg.method, rng).total; });
}

SimEstimate simulate_first_stage(const Scenario& s, const SimConfig& cfg) {
    check_scenario(s);
    return run(cfg, [&](Rng& rng) { return full_event(s, rng).first_stage; });
}

SimEstimate simulate_pij(int i, int j, double t, const QueueParams& p, const SimConfig& cfg) {
    return run(cfg, [&](Rng& rng) { return sample_queue_length(i, t, p, rng) == j ? 1.0 : 0.0; });
}

SimEstimate simulate_queue_length(int i, double t, const QueueParams& p, const SimConfig& cfg) {
    return run(cfg, [&](Rng& rng) { return static_cast<double>(sample_queue_length(i, t, p, rng)); });
}

std::vector<double> sample_ett_replications(const Scenario& s, const SimConfig& cfg) {
    check_scenario(s);
    cfg.validate();
    std::vector<double> out(static_cast<std::size_t>(cfg.replications));
    const auto errors = detail::parallel_for(block_count(cfg), cfg.threads, [&](std::size_t k) {
        Rng rng = block_rng(cfg, k);
        const std::size_t first = k * kBlockSize;
        for (long r = 0, n = block_length(cfg, k); r < n; ++r)
            out[first + r] = sample_special_customer(s, cfg.method, rng).total;
    });
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

}  // namespace uq
