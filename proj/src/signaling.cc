#include "gptsim/signaling.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "gptsim/steering.h"
#include "gptsim/transition.h"

namespace gptsim {

namespace {

void require_unit_interval(double v, const char *name) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw Error(ErrorCode::domain_error, std::string(name) + " must lie in [0, 1]");
    }
}

// Grid values closer than this count as ties.
constexpr double kTieTol = 1e-14;

GapSample sample_at(const ProbabilityRule &rule, double p1, double p2, double lambda) {
    double prob1 = lambda * rule(p1) + (1 - lambda) * rule(p2);
    double prob2 = rule(lambda * p1 + (1 - lambda) * p2);
    return {p1, p2, lambda, prob1, prob2, prob1 - prob2};
}

}  // namespace

std::string mode_name(Protocol2Mode mode) {
    return mode == Protocol2Mode::trivial_average ? "trivial-average" : "steered-uniform";
}

Protocol2Mode parse_mode(const std::string &name) {
    if (name == "trivial-average" || name == "trivial") {
        return Protocol2Mode::trivial_average;
    }
    if (name == "steered-uniform" || name == "steered") {
        return Protocol2Mode::steered_uniform;
    }
    throw Error(ErrorCode::parse_error, "unknown protocol-2 mode '" + name + "'");
}

Scenario make_scenario(ProbabilityRule rule, double p1, double p2, double lambda, Protocol2Mode mode,
                       std::uint64_t seed) {
    require_unit_interval(p1, "p1");
    require_unit_interval(p2, "p2");
    require_unit_interval(lambda, "lambda");
    Scenario s;
    s.rule = std::move(rule);
    s.p1 = p1;
    s.p2 = p2;
    s.lambda = lambda;
    s.mode = mode;
    s.seed = seed;
    return s;
}

double protocol_probability(const ProbabilityRule &rule, const BipartiteState &psi, const Protocol &protocol,
                            const State &phi) {
    if (const Measurement *m = std::get_if<Measurement>(&protocol)) {
        return predict_ensemble(rule, steer(psi, *m), phi);
    }
    return predict_average(rule, marginal(psi, Side::B), phi);
}

Ensemble uniform_tau_decomposition(const State &omega, const State &phi) {
    if (!(omega.model() == phi.model())) {
        throw Error(ErrorCode::model_mismatch, "state and reference live on different models");
    }
    if (!omega.model().is_quantum() || omega.model().dimension() != 2) {
        throw Error(ErrorCode::unsupported_model, "uniform-tau decompositions are built for qubits");
    }
    if (!phi.is_pure()) {
        throw Error(ErrorCode::not_pure, "reference state must be pure");
    }
    if (omega.is_pure()) {
        return Ensemble({{1.0, omega}});
    }
    Eigen::Vector3d r = bloch_vector(omega);
    Eigen::Vector3d n = bloch_vector(phi).normalized();
    double height = r.dot(n);
    Eigen::Vector3d in_plane = r - height * n;

    // Chord through r inside the circle {q : |q| = 1, q.n = height}.
    Eigen::Vector3d axis = std::abs(n.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
    Eigen::Vector3d dir = (axis - n * n.dot(axis)).normalized();
    double b = in_plane.dot(dir);
    double disc = b * b - in_plane.squaredNorm() + (1.0 - height * height);
    double root = std::sqrt(std::max(disc, 0.0));
    double t_plus = -b + root;
    double t_minus = -b - root;
    if (t_plus - t_minus < 1e-12) {
        return Ensemble({{1.0, omega}});
    }
    double w_plus = std::clamp(-t_minus / (t_plus - t_minus), 0.0, 1.0);
    Eigen::Vector3d q_plus = height * n + in_plane + t_plus * dir;
    Eigen::Vector3d q_minus = height * n + in_plane + t_minus * dir;
    return Ensemble({{w_plus, qubit_from_bloch(q_plus.normalized())},
                     {1.0 - w_plus, qubit_from_bloch(q_minus.normalized())}});
}

SignalingReport run_scenario(const Scenario &s) {
    require_unit_interval(s.p1, "p1");
    require_unit_interval(s.p2, "p2");
    require_unit_interval(s.lambda, "lambda");
    const State &phi = s.target;
    if (!phi.model().is_quantum()) {
        throw Error(ErrorCode::unsupported_model, "signaling scenarios need steering, which classical models lack");
    }

    std::mt19937_64 rng(s.seed);
    std::uint64_t seed1 = rng();
    std::uint64_t seed2 = rng();
    State psi1 = state_with_tau(phi, s.p1, seed1);
    State psi2 = state_with_tau(phi, s.p2, seed2);
    Ensemble decomposition({{s.lambda, psi1}, {1.0 - s.lambda, psi2}});
    State omega = mix(decomposition);
    BipartiteState shared = purify(omega, 2);

    Measurement alice1 = synthesize_steering_measurement(shared, decomposition).measurement;
    Protocol protocol2 = TrivialProtocol{};
    Measurement alice2 = trivial_measurement(shared.model_a());
    if (s.mode == Protocol2Mode::steered_uniform) {
        alice2 = synthesize_steering_measurement(shared, uniform_tau_decomposition(marginal(shared, Side::B), phi))
                     .measurement;
        protocol2 = alice2;
    }

    double residual = verify_no_signaling_marginal(shared, alice1, alice2);
    if (residual > 1e-10) {
        throw Error(ErrorCode::marginal_mismatch,
                    "protocols disagree on Bob's average state by " + std::to_string(residual));
    }
    double prob1 = protocol_probability(s.rule, shared, alice1, phi);
    double prob2 = protocol_probability(s.rule, shared, protocol2, phi);
    return SignalingReport{
        .scenario = s,
        .p_bar = s.lambda * s.p1 + (1 - s.lambda) * s.p2,
        .prob1 = prob1,
        .prob2 = prob2,
        .gap = prob1 - prob2,
        .protocol1 = steer(shared, alice1),
        .protocol2 = steer(shared, alice2),
        .marginal_residual = residual,
    };
}

double closed_form_gap(const ProbabilityRule &rule, double p1, double p2, double lambda) {
    require_unit_interval(p1, "p1");
    require_unit_interval(p2, "p2");
    require_unit_interval(lambda, "lambda");
    return sample_at(rule, p1, p2, lambda).gap;
}

SearchResult max_gap_search(const ProbabilityRule &rule, int grid, int refine, std::uint64_t seed,
                            const std::function<void(const GapSample &)> &sweep) {
    if (grid < 3) {
        throw Error(ErrorCode::invalid_argument, "search grid needs at least 3 points per axis");
    }
    const double step = 1.0 / (grid - 1);
    std::vector<double> axis(grid);
    for (int k = 0; k < grid; k++) {
        axis[k] = k * step;
    }
    axis.back() = 1.0;

    long evaluations = 0;
    GapSample best = sample_at(rule, 0, 0, 0);
    double best_abs = -1;
    for (double p1 : axis) {
        for (double p2 : axis) {
            for (double lambda : axis) {
                GapSample g = sample_at(rule, p1, p2, lambda);
                evaluations++;
                if (sweep) {
                    sweep(g);
                }
                if (std::abs(g.gap) > best_abs + kTieTol) {
                    best_abs = std::abs(g.gap);
                    best = g;
                }
            }
        }
    }

    GapSample current = best;
    double h = step;
    for (int it = 0; it < refine; it++) {
        bool improved = false;
        for (int coord = 0; coord < 3; coord++) {
            for (double dir : {1.0, -1.0}) {
                std::array<double, 3> x{current.p1, current.p2, current.lambda};
                x[coord] = std::clamp(x[coord] + dir * h, 0.0, 1.0);
                GapSample g = sample_at(rule, x[0], x[1], x[2]);
                evaluations++;
                if (std::abs(g.gap) > std::abs(current.gap)) {
                    current = g;
                    improved = true;
                }
            }
        }
        if (!improved) {
            h *= 0.5;
        }
    }

    Scenario s = make_scenario(rule, current.p1, current.p2, current.lambda, Protocol2Mode::trivial_average, seed);
    return SearchResult{best, current, evaluations, run_scenario(s)};
}

AffinityCertificate affinity_certificate(const ProbabilityRule &rule, int samples, double tol, std::uint64_t seed) {
    if (samples < 1 || !(tol > 0)) {
        throw Error(ErrorCode::invalid_argument, "affinity certificate needs samples >= 1 and tol > 0");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::optional<SignalingReport> worst;
    double worst_abs = -1;
    for (int k = 0; k < samples; k++) {
        double p1 = unit(rng);
        double p2 = unit(rng);
        double lambda = unit(rng);
        std::uint64_t scenario_seed = rng();
        SignalingReport rep =
            run_scenario(make_scenario(rule, p1, p2, lambda, Protocol2Mode::trivial_average, scenario_seed));
        if (std::abs(rep.gap) > worst_abs) {
            worst_abs = std::abs(rep.gap);
            worst = std::move(rep);
        }
    }
    return AffinityCertificate{worst_abs <= tol, samples, tol, seed, worst_abs, std::move(*worst)};
}

std::vector<PaperRow> reproduce_paper(std::optional<double> tol) {
    std::vector<PaperRow> rows;
    auto add = [&](std::string name, double computed, double exact, double published, int decimals,
                   double default_tol) {
        double t = tol.value_or(default_tol);
        double rounding = 0.5 * std::pow(10.0, -decimals) + 1e-15;
        bool pass = std::abs(computed - exact) <= t && std::abs(exact - published) <= rounding;
        rows.push_back({std::move(name), computed, exact, published, decimals, t, pass});
    };

    // Power rule on the maximally entangled pair: Alice measures Z or X,
    // Bob tests for |0>.
    ProbabilityRule convex = ProbabilityRule::power(1.5);
    BipartiteState bell = maximally_entangled(2);
    SystemModel qubit = SystemModel::quantum(2);
    State zero = computational_state(qubit, 0);
    std::array<Eigen::VectorXcd, 2> x_kets{named_qubit_ket("+"), named_qubit_ket("-")};
    Measurement z_basis = computational_basis_measurement(qubit);
    Measurement x_basis = projective_measurement(qubit, x_kets);
    double prob1 = protocol_probability(convex, bell, z_basis, zero);
    double prob2 = protocol_probability(convex, bell, x_basis, zero);
    double half_pow = std::pow(0.5, 1.5);
    add("ex1.P1", prob1, 0.5, 0.5, 1, 1e-3);
    add("ex1.P2", prob2, half_pow, 0.354, 3, 1e-3);
    add("ex1.gap", prob1 - prob2, 0.5 - half_pow, 0.146, 3, 1e-3);

    ProbabilityRule normalized = ProbabilityRule::piecewise_quadratic();
    double sym = run_scenario(make_scenario(normalized, 0.3, 0.7, 0.5)).gap;
    double asym = run_scenario(make_scenario(normalized, 0.2, 0.4, 0.5)).gap;
    add("ex2.sym.gap", sym, 0.0, 0.0, 12, 1e-12);
    add("ex2.asym.gap", asym, 0.5 * (0.08 + 0.32) - 0.18, 0.02, 2, 1e-6);
    return rows;
}

DetectionEstimate simulate_detection(double prob1, double prob2, long runs, std::uint64_t seed) {
    require_unit_interval(prob1, "prob1");
    require_unit_interval(prob2, "prob2");
    if (runs < 1) {
        throw Error(ErrorCode::invalid_argument, "detection simulation needs runs >= 1");
    }
    std::mt19937_64 rng(seed);
    std::binomial_distribution<long> protocol1(runs, prob1);
    std::binomial_distribution<long> protocol2(runs, prob2);
    long hits1 = protocol1(rng);
    long hits2 = protocol2(rng);
    double n = static_cast<double>(runs);
    DetectionEstimate est;
    est.runs = runs;
    est.seed = seed;
    est.freq1 = hits1 / n;
    est.freq2 = hits2 / n;
    est.gap_estimate = est.freq1 - est.freq2;
    est.analytic_gap = prob1 - prob2;
    est.sigma = std::sqrt(prob1 * (1 - prob1) / n + prob2 * (1 - prob2) / n);
    return est;
}

}  // namespace gptsim
