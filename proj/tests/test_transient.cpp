#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "uqueue/errors.hpp"
#include "uqueue/sim.hpp"
#include "uqueue/transient.hpp"

using namespace uq;
using std::numbers::pi;

namespace {

double p(int i, int j, double t, const QueueParams& q) { return transient_prob({i, j, t}, q); }

}  // namespace

TEST_CASE("gamma_kernel") {
    CHECK(gamma_kernel(0.0, 1.0) == 0.0);
    CHECK(gamma_kernel(pi / 2, 0.75) == doctest::Approx(1.75).epsilon(1e-15));
    CHECK(gamma_kernel(pi, 0.75) == doctest::Approx(3.482050807568877).epsilon(1e-14));
    for (const double rho : {0.0, 0.25, 0.75, 1.0, 2.0}) {
        for (double y = 0.0; y <= pi; y += 0.1) {
            const double naive = 1.0 + rho - 2.0 * std::sqrt(rho) * std::cos(y);
            CHECK(std::abs(gamma_kernel(y, rho) - naive) < 1e-14);
            CHECK(gamma_kernel(y, rho) >= std::pow(1.0 - std::sqrt(rho), 2) - 1e-15);
        }
    }
}

TEST_CASE("a_kernel") {
    CHECK(std::abs(a_kernel(0, pi, 0.75)) < 1e-15);
    for (const int k : {0, 1, 5, 40}) CHECK(a_kernel(k, 0.0, 0.6) == 0.0);
    CHECK(a_kernel(1, pi / 2, 0.25) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("transient_prob examples") {
    const QueueParams q(3.0, 4.0);
    CHECK(p(5, 5, 0.0, q) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(p(5, 4, 0.0, q)) < 1e-9);
    CHECK(std::abs(p(3, 0, 50.0, q) - 0.25) < 1e-4);

    // Frozen from scipy expm on states 0..200; also recomputed live.
    const double frozen = 0.158988194017595;
    const double live = oracle::uniformization_row(2, 0.5, 3.0, 4.0, 201)[3];
    CHECK(std::abs(live - frozen) < 1e-12);
    CHECK(std::abs(p(2, 3, 0.5, q) - frozen) < 1e-6);
}

TEST_CASE("transient_prob matches uniformization across regimes") {
    for (const auto& [lambda, mu] : std::vector<std::pair<double, double>>{{3, 4}, {1, 2}, {4, 4}, {5, 4}}) {
        const QueueParams q(lambda, mu);
        for (const int i : {0, 2, 6}) {
            for (const double t : {0.2, 1.0, 3.0}) {
                const auto row = oracle::uniformization_row(i, t, lambda, mu, 300);
                for (const int j : {0, 1, 4, 9}) {
                    INFO("lambda=" << lambda << " mu=" << mu << " i=" << i << " j=" << j << " t=" << t);
                    CHECK(std::abs(p(i, j, t, q) - row[j]) < 1e-8);
                }
            }
        }
    }
}

TEST_CASE("transient_prob rejects bad input") {
    CHECK_THROWS_AS(p(1, 1, 1.0, QueueParams(0.0, 1.0)), DomainError);
    CHECK_THROWS_AS(transient_prob({1, std::nullopt, 1.0}, QueueParams(1, 2)), std::invalid_argument);
    CHECK_THROWS_AS(p(-1, 0, 1.0, QueueParams(1, 2)), std::invalid_argument);
    CHECK_THROWS_AS(p(1, 0, -1.0, QueueParams(1, 2)), std::invalid_argument);
    CHECK_THROWS_AS(QueueParams(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(QueueParams(-1.0, 1.0), std::invalid_argument);
}

TEST_CASE("expected_length examples") {
    const QueueParams q(3.0, 4.0);
    CHECK(std::abs(expected_length(7, 0.0, q) - 7.0) < 1e-6);
    CHECK(std::abs(expected_length(0, 100.0, q) - 3.0) < 1e-3);
    CHECK(std::abs(expected_length(7, 1.0, q) - 6.0) < 0.3);
    CHECK(std::abs(expected_length(3, 2.0, q) - 2.6) < 0.2);
    // Frozen scipy expm values on 201 states.
    CHECK(std::abs(expected_length(7, 1.0, q) - 6.01637748692575) < 1e-8);
    CHECK(std::abs(expected_length(3, 2.0, q) - 2.40615555694217) < 1e-8);
}

TEST_CASE("expected_length domain") {
    CHECK_THROWS_AS(expected_length(1, 1.0, QueueParams(4, 4)), DomainError);
    CHECK_THROWS_AS(expected_length(1, 1.0, QueueParams(5, 4)), DomainError);
    CHECK_THROWS_AS(expected_length(1, 1.0, QueueParams(0, 4)), DomainError);
}

TEST_CASE("expected_length_by_sum") {
    const QueueParams q(3.0, 4.0);
    CHECK(std::abs(expected_length_by_sum(0, 0.0, q)) < 1e-9);
    CHECK(std::abs(expected_length_by_sum(7, 1.0, q) - expected_length(7, 1.0, q)) < 1e-4);

    // rho = 1: no closed form; compare with the chain and with simulation.
    const QueueParams critical(4.0, 4.0);
    const double by_sum = expected_length_by_sum(2, 1.0, critical);
    CHECK(std::abs(by_sum - oracle::uniformization_mean(2, 1.0, 4.0, 4.0, 300)) < 1e-7);
    SimConfig sim;
    sim.replications = 200000;
    sim.seed = 11;
    const SimEstimate est = simulate_queue_length(2, 1.0, critical, sim);
    CHECK(std::abs(by_sum - est.mean) < 3.0 * est.std_error);

    CHECK_THROWS_AS(expected_length_by_sum(7, 1.0, q, 8), TruncationError);
}

TEST_CASE("steady_state_length and initial_slope") {
    CHECK(steady_state_length(QueueParams(3, 4)) == 3.0);
    CHECK(steady_state_length(QueueParams(9, 10)) == 9.0);
    CHECK(steady_state_length(QueueParams(0, 1)) == 0.0);
    CHECK_THROWS_AS(steady_state_length(QueueParams(4, 4)), DomainError);
    CHECK(initial_slope(QueueParams(3, 4)) == -1.0);
    CHECK(initial_slope(QueueParams(9, 10)) == -1.0);
    CHECK(initial_slope(QueueParams(2.5, 2.5)) == 0.0);
}

TEST_CASE("state cap covers the tail") {
    for (const int i : {0, 3, 12}) {
        for (const double t : {0.1, 1.0, 10.0}) {
            const QueueParams q(3, 4);
            const int cap = state_cap(i, t, q);
            CHECK(cap >= i);
            CHECK(transient_tail_bound(i, t, q, cap, 1.0, 1.0) < 1e-10);
        }
    }
}

TEST_CASE("row normalization") {
    for (const auto& [lambda, mu] : std::vector<std::pair<double, double>>{{3, 4}, {1, 2}, {4, 4}}) {
        const QueueParams q(lambda, mu);
        for (const int i : {0, 3, 10}) {
            for (const double t : {0.5, 2.0}) {
                double sum = 0.0;
                for (int j = 0, cap = state_cap(i, t, q); j <= cap; ++j) sum += p(i, j, t, q);
                INFO("lambda=" << lambda << " i=" << i << " t=" << t);
                CHECK(std::abs(sum - 1.0) <= 1e-4);
            }
        }
    }
}

TEST_CASE("nonnegativity and initial condition") {
    const QueueParams q(3, 4);
    for (int i = 0; i <= 15; ++i) {
        for (int j = 0; j <= 15; ++j) {
            for (const double t : {0.1, 0.5, 1.0, 2.0, 5.0}) {
                CHECK(transient_prob_raw({i, j, t}, q).value >= -1e-6);
            }
            const double at_zero = transient_prob_raw({i, j, 0.0}, q).value;
            CHECK(std::abs(at_zero - (i == j ? 1.0 : 0.0)) <= 1e-6);
        }
        CHECK(std::abs(expected_length(i, 0.0, q) - i) <= 1e-6);
    }
}

TEST_CASE("Chapman-Kolmogorov") {
    const QueueParams q(3, 4);
    const double s = 0.3, t = 0.7;
    for (const int i : {0, 3}) {
        for (const int j : {0, 2, 5}) {
            const int cap = state_cap(i, s, q);
            double sum = 0.0;
            for (int k = 0; k <= cap; ++k) sum += p(i, k, s, q) * p(k, j, t, q);
            CHECK(std::abs(sum - p(i, j, s + t, q)) <= 1e-4);
        }
    }
}

TEST_CASE("closed form agrees with the state sum") {
    for (const auto& [lambda, mu] : std::vector<std::pair<double, double>>{{3, 4}, {1, 2}, {9, 10}}) {
        const QueueParams q(lambda, mu);
        for (const int i : {0, 2, 7, 12}) {
            for (const double t : {0.5, 1.0, 3.0}) {
                CHECK(std::abs(expected_length(i, t, q) - expected_length_by_sum(i, t, q)) <= 1e-4);
            }
        }
    }
}

TEST_CASE("initial slope by finite difference") {
    const double h = 1e-4;
    for (const auto& [lambda, mu] : std::vector<std::pair<double, double>>{{3, 4}, {9, 10}, {1, 2}}) {
        const QueueParams q(lambda, mu);
        for (int i = 1; i <= 10; ++i) {
            const double slope = (expected_length(i, h, q) - expected_length(i, 0.0, q)) / h;
            CHECK(std::abs(slope - initial_slope(q)) < 1e-2);
        }
        // An empty system can only grow at first.
        const double empty = (expected_length(0, h, q) - expected_length(0, 0.0, q)) / h;
        CHECK(std::abs(empty - lambda) < 1e-2);
    }
}

TEST_CASE("large-t limit on the relaxation time scale") {
    for (const auto& [lambda, mu] : std::vector<std::pair<double, double>>{{3, 4}, {9, 10}, {1, 2}}) {
        const QueueParams q(lambda, mu);
        const double relax = 1.0 / (mu * std::pow(1.0 - std::sqrt(q.rho()), 2));
        for (int i = 0; i <= 10; ++i) {
            CHECK(std::abs(expected_length(i, 50.0 * relax, q) - steady_state_length(q)) <= 1e-3);
        }
    }
}
