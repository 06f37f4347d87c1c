#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "uqueue/ett.hpp"

namespace uq {

using Rng = std::mt19937_64;

enum class SimMethod {
    // Erlang first stage, birth-death path of the other queue, Erlang second stage.
    TwoStage,
    // Event-by-event simulation of both queues with the special customer's position tracked.
    FullEvent,
};

struct SimConfig {
    long replications = 10000;
    std::uint64_t seed = 1;
    std::uint32_t stream_id = 0;
    SimMethod method = SimMethod::TwoStage;
    unsigned threads = 0;  // 0 = hardware concurrency; never changes results

    void validate() const;
};

struct SimEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    long replications = 0;
    std::uint64_t seed = 0;
};

/// One exact draw of L_b(horizon). Lambda may be zero.
int sample_queue_length(int b, double horizon, const QueueParams& p, Rng& rng);

/// Draw of the sum of n exponential(mu) times.
double sample_erlang(int n, double mu, Rng& rng);

struct SpecialCustomerPath {
    double first_stage = 0.0;
    double total = 0.0;
};

/// One replication of the special customer's journey under `method`.
SpecialCustomerPath sample_special_customer(const Scenario& s, SimMethod method, Rng& rng);

SimEstimate simulate_ett(const Scenario& s, const SimConfig& cfg);

/// Mean time at which the special customer leaves the first queue, measured
/// with the full event simulation.
SimEstimate simulate_first_stage(const Scenario& s, const SimConfig& cfg);

/// Fraction of replications with L_i(t) = j.
SimEstimate simulate_pij(int i, int j, double t, const QueueParams& p, const SimConfig& cfg);

/// Mean of L_i(t).
SimEstimate simulate_queue_length(int i, double t, const QueueParams& p, const SimConfig& cfg);

/// Raw per-replication totals for simulate_ett's configuration, in replication order.
std::vector<double> sample_ett_replications(const Scenario& s, const SimConfig& cfg);

}  // namespace uq
