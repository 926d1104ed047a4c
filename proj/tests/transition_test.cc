#include "gptsim/transition.h"

#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "testing.h"

using namespace gptsim;
using gptsim::testing::random_ket;
using gptsim::testing::random_mixed;
using gptsim::testing::random_pure;

namespace {

const SystemModel kQubit = SystemModel::quantum(2);

State ket_state(std::string_view name) {
    return pure_state(kQubit, named_qubit_ket(name));
}

}  // namespace

TEST(Tau, examples) {
    State zero = ket_state("0");
    EXPECT_EQ(tau(zero, zero), 1.0);
    EXPECT_EQ(tau(ket_state("1"), zero), 0.0);
    EXPECT_NEAR(tau(ket_state("+"), zero), 0.5, 1e-15);
    EXPECT_NEAR(tau(ket_state("+i"), ket_state("-")), 0.5, 1e-15);

    SystemModel c3 = SystemModel::classical(3);
    EXPECT_EQ(tau(deterministic_point(c3, 1), deterministic_point(c3, 1)), 1.0);
    EXPECT_EQ(tau(deterministic_point(c3, 1), deterministic_point(c3, 2)), 0.0);
}

TEST(Tau, errors) {
    EXPECT_GPT_ERROR(tau(maximally_mixed(kQubit), ket_state("0")), ErrorCode::not_pure);
    EXPECT_GPT_ERROR(tau(ket_state("0"), computational_state(SystemModel::quantum(3), 0)), ErrorCode::model_mismatch);
}

TEST(Tau, matches_squared_overlap_in_higher_dimension) {
    std::mt19937_64 rng(31);
    SystemModel q4 = SystemModel::quantum(4);
    for (int trial = 0; trial < 100; trial++) {
        Eigen::VectorXcd a = random_ket(rng, 4);
        Eigen::VectorXcd b = random_ket(rng, 4);
        EXPECT_NEAR(tau(pure_state(q4, a), pure_state(q4, b)), std::norm(a.dot(b)), 1e-14);
    }
}

TEST(TauLp, classical_examples) {
    SystemModel c2 = SystemModel::classical(2);
    State p0 = deterministic_point(c2, 0);
    State p1 = deterministic_point(c2, 1);
    EXPECT_NEAR(tau_lp(p0, p0).value, 1.0, 1e-12);
    EXPECT_NEAR(tau_lp(p1, p0).value, 0.0, 1e-12);
}

TEST(TauLp, classical_matches_closed_form_exactly) {
    for (int n : {2, 3, 5}) {
        SystemModel c = SystemModel::classical(n);
        for (int i = 0; i < n; i++) {
            for (int j = 0; j < n; j++) {
                State a = deterministic_point(c, i);
                State b = deterministic_point(c, j);
                LpTau r = tau_lp(a, b);
                EXPECT_NEAR(r.value, tau(a, b), 1e-12) << n << " " << i << " " << j;
                EXPECT_EQ(r.diagnostics.generators, n);
                EXPECT_EQ(r.diagnostics.reduced_dimension, n);
            }
        }
    }
}

TEST(TauLp, qubit_great_circle_grid) {
    State plus = ket_state("+");
    State zero = ket_state("0");
    std::vector<State> grid = great_circle_states(plus, zero, 360);
    LpTau r = tau_lp(plus, zero, grid);
    EXPECT_NEAR(r.value, 0.5, 5e-3);
    EXPECT_EQ(r.diagnostics.generators, 360);
    EXPECT_EQ(r.diagnostics.reduced_dimension, 3);
}

TEST(TauLp, error_shrinks_as_grid_refines) {
    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 10; trial++) {
        State psi = random_pure(rng, kQubit);
        State phi = random_pure(rng, kQubit);
        double exact = tau(psi, phi);
        double previous = 1.0;
        for (int count : {90, 180, 360, 720}) {
            std::vector<State> grid = great_circle_states(psi, phi, count);
            double err = std::abs(tau_lp(psi, phi, grid).value - exact);
            EXPECT_LE(err, previous + 1e-9) << count;
            EXPECT_LE(err, 4.0 * std::numbers::pi / count) << count;
            previous = err;
        }
    }
}

TEST(TauLp, never_exceeds_closed_form_minimum_over_polytope) {
    // The generator polytope contains the true effect set, so the infimum over
    // it can only undershoot tau.
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 20; trial++) {
        State psi = random_pure(rng, kQubit);
        State phi = random_pure(rng, kQubit);
        std::vector<State> grid = great_circle_states(psi, phi, 180);
        EXPECT_LE(tau_lp(psi, phi, grid).value, tau(psi, phi) + 1e-9);
    }
}

TEST(TauLp, errors) {
    State zero = ket_state("0");
    State plus = ket_state("+");
    EXPECT_GPT_ERROR(tau_lp(plus, zero), ErrorCode::unbounded_model);
    // Generators on the xz circle do not span the y direction.
    std::vector<State> grid = great_circle_states(plus, zero, 36);
    EXPECT_GPT_ERROR(tau_lp(ket_state("+i"), zero, grid), ErrorCode::unbounded_model);
    std::vector<State> foreign{maximally_mixed(SystemModel::quantum(3))};
    EXPECT_GPT_ERROR(tau_lp(plus, zero, foreign), ErrorCode::model_mismatch);
    EXPECT_GPT_ERROR(tau_lp(maximally_mixed(kQubit), zero, grid), ErrorCode::not_pure);
}

TEST(DistinguishingMeasurement, examples) {
    DistinguishingPair z = distinguishing_measurement(ket_state("0"));
    EXPECT_LT((z.accept.op() - ket_state("0").density()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_NEAR(tau(z.phi_perp, ket_state("1")), 1.0, 1e-15);

    DistinguishingPair x = distinguishing_measurement(ket_state("+"));
    EXPECT_LT((x.accept.op() - ket_state("+").density()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_NEAR(tau(x.phi_perp, ket_state("-")), 1.0, 1e-15);

    EXPECT_GPT_ERROR(distinguishing_measurement(maximally_mixed(kQubit)), ErrorCode::not_pure);
}

TEST(DistinguishingMeasurement, pair_invariants) {
    std::mt19937_64 rng(34);
    for (int d : {2, 3, 5}) {
        SystemModel m = SystemModel::quantum(d);
        for (int trial = 0; trial < 50; trial++) {
            DistinguishingPair p = distinguishing_measurement(random_pure(rng, m));
            EXPECT_NEAR(evaluate(p.accept, p.phi), 1.0, 1e-12);
            EXPECT_NEAR(evaluate(p.accept, p.phi_perp), 0.0, 1e-12);
            EXPECT_NEAR(evaluate(p.reject, p.phi_perp), 1.0, 1e-12);
            EXPECT_LT((p.accept.covector() + p.reject.covector() - m.order_unit()).cwiseAbs().maxCoeff(), 1e-12);
            EXPECT_TRUE(p.phi_perp.is_pure());
        }
    }
    SystemModel c3 = SystemModel::classical(3);
    DistinguishingPair c = distinguishing_measurement(deterministic_point(c3, 2));
    EXPECT_EQ(point_of(c.phi_perp), 0);
    EXPECT_EQ(evaluate(c.accept, c.phi), 1.0);
    EXPECT_EQ(evaluate(c.accept, c.phi_perp), 0.0);
}

TEST(DistinguishingMeasurement, outcomes_sum_to_one_on_random_states) {
    std::mt19937_64 rng(35);
    for (int trial = 0; trial < 1000; trial++) {
        SystemModel m = SystemModel::quantum(2 + trial % 3);
        DistinguishingPair p = distinguishing_measurement(random_pure(rng, m));
        State psi = random_pure(rng, m);
        EXPECT_NEAR(evaluate(p.accept, psi) + evaluate(p.reject, psi), 1.0, 1e-12);
    }
}

TEST(StateWithTau, examples) {
    State zero = ket_state("0");
    State one = ket_state("1");
    EXPECT_EQ(max_abs_difference(state_with_tau(zero, 1.0, 4), zero), 0.0);
    EXPECT_NEAR(tau(state_with_tau(zero, 0.0, 4), one), 1.0, 1e-15);
    State psi = state_with_tau(zero, 0.3, 7);
    EXPECT_NEAR(tau(psi, zero), 0.3, 1e-12);
    EXPECT_NEAR(evaluate(projector_effect(zero), psi), 0.3, 1e-12);
}

TEST(StateWithTau, deterministic_per_seed) {
    State phi = ket_state("+i");
    State a = state_with_tau(phi, 0.42, 99);
    State b = state_with_tau(phi, 0.42, 99);
    State c = state_with_tau(phi, 0.42, 100);
    EXPECT_EQ(max_abs_difference(a, b), 0.0);
    EXPECT_GT(max_abs_difference(a, c), 1e-6);
}

TEST(StateWithTau, qubit_rotation_angle) {
    // The Bloch vector of psi makes angle theta with phi, cos^2(theta/2) = p.
    std::mt19937_64 rng(36);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 100; trial++) {
        State phi = random_pure(rng, kQubit);
        double p = unit(rng);
        State psi = state_with_tau(phi, p, rng());
        double cos_theta = bloch_vector(psi).dot(bloch_vector(phi));
        EXPECT_NEAR((1 + cos_theta) / 2, p, 1e-12);
    }
}

TEST(StateWithTau, errors) {
    State zero = ket_state("0");
    EXPECT_GPT_ERROR(state_with_tau(zero, 1.5, 0), ErrorCode::domain_error);
    EXPECT_GPT_ERROR(state_with_tau(zero, -0.1, 0), ErrorCode::domain_error);
    EXPECT_GPT_ERROR(state_with_tau(maximally_mixed(kQubit), 0.5, 0), ErrorCode::not_pure);
    SystemModel c2 = SystemModel::classical(2);
    State p0 = deterministic_point(c2, 0);
    EXPECT_GPT_ERROR(state_with_tau(p0, 0.5, 0), ErrorCode::unsupported_model);
    EXPECT_EQ(point_of(state_with_tau(p0, 1.0, 0)), 0);
    EXPECT_EQ(point_of(state_with_tau(p0, 0.0, 0)), 1);
}

TEST(MixedTau, examples) {
    State zero = ket_state("0");
    EXPECT_NEAR(mixed_tau(maximally_mixed(kQubit), zero), 0.5, 1e-15);

    State psi1 = state_with_tau(zero, 0.2, 1);
    State psi2 = state_with_tau(zero, 0.4, 2);
    State omega = mix(Ensemble({{0.5, psi1}, {0.5, psi2}}));
    EXPECT_NEAR(mixed_tau(omega, zero), 0.3, 1e-12);

    State plus = ket_state("+");
    EXPECT_NEAR(mixed_tau(plus, zero), tau(plus, zero), 1e-15);
    EXPECT_GPT_ERROR(mixed_tau(maximally_mixed(SystemModel::quantum(3)), zero), ErrorCode::model_mismatch);
}

TEST(GreatCircle, spacing_and_membership) {
    State plus = ket_state("+");
    State zero = ket_state("0");
    std::vector<State> grid = great_circle_states(plus, zero, 8);
    ASSERT_EQ(grid.size(), 8u);
    EXPECT_LT(max_abs_difference(grid[0], plus), 1e-15);
    EXPECT_LT(max_abs_difference(grid[2], zero), 1e-15);
    for (const State &s : grid) {
        EXPECT_TRUE(s.is_pure());
        EXPECT_NEAR(bloch_vector(s).y(), 0.0, 1e-15);
    }
    // Parallel endpoints fall back to a fixed perpendicular direction.
    EXPECT_EQ(great_circle_states(zero, zero, 4).size(), 4u);
    EXPECT_GPT_ERROR(great_circle_states(plus, zero, 2), ErrorCode::invalid_argument);
}

// Properties.

TEST(TransitionProperties, complement_identities_on_random_pairs) {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 1000; trial++) {
        State psi = random_pure(rng, kQubit);
        State phi = random_pure(rng, kQubit);
        double t = tau(psi, phi);
        EXPECT_GE(t, 0.0);
        EXPECT_LE(t, 1.0);
        EXPECT_NEAR(tau(phi, phi), 1.0, 1e-12);
        State perp = distinguishing_measurement(phi).phi_perp;
        EXPECT_NEAR(t + tau(psi, perp), 1.0, 1e-12);
        EXPECT_NEAR(t, evaluate(distinguishing_measurement(phi).accept, psi), 1e-12);
        EXPECT_NEAR(t, tau(phi, psi), 1e-14);
    }
}

TEST(TransitionProperties, mixed_tau_is_linear) {
    std::mt19937_64 rng(38);
    std::exponential_distribution<double> ex;
    for (int trial = 0; trial < 300; trial++) {
        SystemModel m = SystemModel::quantum(2 + trial % 3);
        State phi = random_pure(rng, m);
        int n = 1 + trial % 4;
        std::vector<double> w(n);
        double total = 0;
        for (double &x : w) {
            x = ex(rng);
            total += x;
        }
        std::vector<EnsembleMember> members;
        double expected = 0;
        for (int i = 0; i < n; i++) {
            State s = random_pure(rng, m);
            expected += w[i] / total * tau(s, phi);
            members.push_back({w[i] / total, s});
        }
        EXPECT_NEAR(mixed_tau(mix(Ensemble(members)), phi), expected, 1e-12);
    }
}

TEST(TransitionProperties, state_with_tau_roundtrip) {
    std::mt19937_64 rng(39);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 1000; trial++) {
        SystemModel m = SystemModel::quantum(2 + trial % 4);
        State phi = random_pure(rng, m);
        double p = unit(rng);
        State psi = state_with_tau(phi, p, rng());
        EXPECT_TRUE(psi.is_pure());
        EXPECT_NEAR(tau(psi, phi), p, 1e-12);
    }
}

TEST(TransitionProperties, mixed_tau_bounded_for_mixed_states) {
    std::mt19937_64 rng(40);
    for (int trial = 0; trial < 200; trial++) {
        SystemModel m = SystemModel::quantum(2 + trial % 3);
        double t = mixed_tau(random_mixed(rng, m), random_pure(rng, m));
        EXPECT_GE(t, 0.0);
        EXPECT_LE(t, 1.0);
    }
}
