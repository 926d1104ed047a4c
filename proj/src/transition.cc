#include "gptsim/transition.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "gptsim/simplex.h"

namespace gptsim {

namespace {

void require_pure_pair(const State &psi, const State &phi) {
    if (!(psi.model() == phi.model())) {
        throw Error(ErrorCode::model_mismatch, psi.model().describe() + " vs " + phi.model().describe());
    }
    if (!psi.is_pure() || !phi.is_pure()) {
        throw Error(ErrorCode::not_pure, "transition probability is defined on pure states");
    }
}

bool is_qubit(const SystemModel &m) {
    return m.is_quantum() && m.dimension() == 2;
}

Eigen::VectorXcd orthogonal_ket(const Eigen::VectorXcd &phi) {
    const Eigen::Index d = phi.size();
    if (d == 2) {
        Eigen::VectorXcd perp(2);
        perp << -std::conj(phi[1]), std::conj(phi[0]);
        return fix_phase(perp);
    }
    Eigen::Index best = 0;
    phi.cwiseAbs2().minCoeff(&best);
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(d);
    e[best] = 1.0;
    e -= phi * phi.dot(e);
    return fix_phase(e.normalized());
}

}  // namespace

double tau(const State &psi, const State &phi) {
    require_pure_pair(psi, phi);
    if (!psi.model().is_quantum()) {
        return point_of(psi) == point_of(phi) ? 1.0 : 0.0;
    }
    double overlap = (psi.density() * phi.density()).trace().real();
    return std::clamp(overlap, 0.0, 1.0);
}

LpTau tau_lp(const State &psi, const State &phi, std::span<const State> generators) {
    require_pure_pair(psi, phi);
    const SystemModel &model = psi.model();

    std::vector<State> defaults;
    if (generators.empty()) {
        if (model.is_quantum()) {
            throw Error(ErrorCode::unbounded_model, "quantum tau_lp needs an explicit generator set");
        }
        for (int k = 0; k < model.dimension(); k++) {
            defaults.push_back(deterministic_point(model, k));
        }
        generators = defaults;
    }

    const Eigen::Index dim = model.ambient_dimension();
    const Eigen::Index count = static_cast<Eigen::Index>(generators.size());
    Eigen::MatrixXd g(dim, count);
    for (Eigen::Index j = 0; j < count; j++) {
        if (!(generators[j].model() == model)) {
            throw Error(ErrorCode::model_mismatch, "generator state from another model");
        }
        g.col(j) = generators[j].coeffs();
    }

    // Only the restriction of e to span(generators) is constrained; work in
    // an orthonormal basis of that span.
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(g, Eigen::ComputeThinU);
    const Eigen::VectorXd &sv = svd.singularValues();
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv[rank] > 1e-10 * sv[0]) {
        rank++;
    }
    Eigen::MatrixXd basis = svd.matrixU().leftCols(rank);
    auto project = [&](const Eigen::VectorXd &v, const char *name) {
        Eigen::VectorXd r = basis.transpose() * v;
        if ((basis * r - v).cwiseAbs().maxCoeff() > kSpectralTol) {
            throw Error(ErrorCode::unbounded_model, std::string(name) + " lies outside the span of the generators");
        }
        return r;
    };
    Eigen::VectorXd psi_r = project(psi.coeffs(), "psi");
    Eigen::VectorXd phi_r = project(phi.coeffs(), "phi");
    Eigen::MatrixXd g_r = basis.transpose() * g;

    // Primal (x free): max -psi_r.x  s.t.  g_j.x <= 1, -g_j.x <= 0, phi_r.x <= 1, -phi_r.x <= -1.
    // Dual: min sum(y_j^+) + y_phi^+ - y_phi^-  s.t.  sum (y_j^+ - y_j^-) g_j + (y_phi^+ - y_phi^-) phi_r = -psi_r.
    const Eigen::Index cols = 2 * count + 2;
    Eigen::MatrixXd a(rank, cols);
    Eigen::VectorXd cost = Eigen::VectorXd::Zero(cols);
    for (Eigen::Index j = 0; j < count; j++) {
        a.col(2 * j) = g_r.col(j);
        a.col(2 * j + 1) = -g_r.col(j);
        cost[2 * j] = 1.0;
    }
    a.col(2 * count) = phi_r;
    a.col(2 * count + 1) = -phi_r;
    cost[2 * count] = 1.0;
    cost[2 * count + 1] = -1.0;

    lp::Result res = lp::minimize(cost, a, -psi_r);
    if (res.status == lp::Status::infeasible) {
        throw Error(ErrorCode::unbounded_model, "effect LP is unbounded below; generators do not bound the cone");
    }
    if (res.status == lp::Status::unbounded) {
        throw Error(ErrorCode::infeasible, "no effect in the generator polytope attains e(phi) = 1");
    }
    LpTau out;
    out.value = -res.objective;
    out.diagnostics.generators = static_cast<int>(count);
    out.diagnostics.reduced_dimension = static_cast<int>(rank);
    out.diagnostics.phase1_iterations = res.phase1_iterations;
    out.diagnostics.phase2_iterations = res.phase2_iterations;
    return out;
}

DistinguishingPair distinguishing_measurement(const State &phi) {
    if (!phi.is_pure()) {
        throw Error(ErrorCode::not_pure, "distinguishing measurement needs a pure reference state");
    }
    const SystemModel &model = phi.model();
    Effect accept = projector_effect(phi);
    Effect reject = complement(accept);
    if (!model.is_quantum()) {
        int k = (point_of(phi) + 1) % model.dimension();
        return {std::move(accept), std::move(reject), phi, deterministic_point(model, k)};
    }
    State perp = pure_state(model, orthogonal_ket(ket_of(phi)));
    return {std::move(accept), std::move(reject), phi, std::move(perp)};
}

State state_with_tau(const State &phi, double p, std::uint64_t seed) {
    if (!phi.is_pure()) {
        throw Error(ErrorCode::not_pure, "reference state must be pure");
    }
    if (!(p >= -kLinearTol && p <= 1.0 + kLinearTol)) {
        throw Error(ErrorCode::domain_error, "target transition probability outside [0, 1]");
    }
    p = std::clamp(p, 0.0, 1.0);
    const SystemModel &model = phi.model();
    if (p == 1.0) {
        return phi;
    }
    if (p == 0.0) {
        return distinguishing_measurement(phi).phi_perp;
    }
    if (!model.is_quantum()) {
        throw Error(ErrorCode::unsupported_model, "classical pure states only reach tau in {0, 1}");
    }

    std::mt19937_64 rng(seed);
    Eigen::VectorXcd ket = ket_of(phi);
    Eigen::VectorXcd chi;
    if (model.dimension() == 2) {
        std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
        chi = orthogonal_ket(ket) * std::polar(1.0, angle(rng));
    } else {
        std::normal_distribution<double> normal;
        Eigen::VectorXcd v(model.dimension());
        for (Eigen::Index k = 0; k < v.size(); k++) {
            double re = normal(rng);
            double im = normal(rng);
            v[k] = complex(re, im);
        }
        v -= ket * ket.dot(v);
        chi = v.normalized();
    }
    Eigen::VectorXcd psi = std::sqrt(p) * ket + std::sqrt(1.0 - p) * chi;
    return pure_state(model, psi.normalized());
}

double mixed_tau(const State &omega, const State &phi) {
    return evaluate(projector_effect(phi), omega);
}

Eigen::Vector3d bloch_vector(const State &qubit) {
    if (!is_qubit(qubit.model())) {
        throw Error(ErrorCode::unsupported_model, "Bloch vectors are defined for qubits");
    }
    return std::sqrt(2.0) * qubit.coeffs().tail<3>();
}

State qubit_from_bloch(const Eigen::Vector3d &r) {
    Eigen::VectorXd c(4);
    c[0] = 1.0 / std::sqrt(2.0);
    c.tail<3>() = r / std::sqrt(2.0);
    return validate_state(SystemModel::quantum(2), c);
}

std::vector<State> great_circle_states(const State &a, const State &b, int count) {
    if (count < 3) {
        throw Error(ErrorCode::invalid_argument, "great circle grid needs at least 3 points");
    }
    Eigen::Vector3d u = bloch_vector(a).normalized();
    Eigen::Vector3d w = bloch_vector(b);
    w -= u * u.dot(w);
    if (w.norm() < 1e-9) {
        Eigen::Vector3d axis = std::abs(u.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitZ();
        w = axis - u * u.dot(axis);
    }
    w.normalize();
    std::vector<State> out;
    out.reserve(count);
    for (int k = 0; k < count; k++) {
        double t = 2.0 * std::numbers::pi * k / count;
        out.push_back(qubit_from_bloch(std::cos(t) * u + std::sin(t) * w));
    }
    return out;
}

}  // namespace gptsim
