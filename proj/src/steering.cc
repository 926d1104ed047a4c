#include "gptsim/steering.h"

#include <algorithm>
#include <cmath>

namespace gptsim {

namespace {

constexpr double kDropProbability = 1e-14;
constexpr double kSupportTol = 1e-12;

// Modified Gram-Schmidt: keeps the leading columns (re-orthonormalized) and
// appends computational basis vectors until `target` columns exist.
Eigen::MatrixXcd complete_orthonormal(const Eigen::MatrixXcd &leading, Eigen::Index target) {
    const Eigen::Index n = leading.rows();
    Eigen::MatrixXcd out(n, target);
    Eigen::Index filled = 0;
    auto push = [&](Eigen::VectorXcd v) {
        for (Eigen::Index j = 0; j < filled; j++) {
            v -= out.col(j) * out.col(j).dot(v);
        }
        double norm = v.norm();
        if (norm < 1e-6) {
            return false;
        }
        out.col(filled++) = v / norm;
        return true;
    };
    for (Eigen::Index j = 0; j < leading.cols(); j++) {
        if (!push(leading.col(j))) {
            throw Error(ErrorCode::invalid_argument, "steering isometry is rank deficient");
        }
    }
    for (Eigen::Index k = 0; k < n && filled < target; k++) {
        push(Eigen::VectorXcd::Unit(n, k));
    }
    return out;
}

Eigen::MatrixXcd conditional_state(const Eigen::MatrixXcd &amp, const Eigen::MatrixXcd &alice_op) {
    Eigen::MatrixXcd sigma = amp.transpose() * alice_op.transpose() * amp.conjugate();
    return (sigma + sigma.adjoint()) * 0.5;
}

}  // namespace

BipartiteState maximally_entangled(int d) {
    SystemModel m = SystemModel::quantum(d);
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(d * d);
    for (int k = 0; k < d; k++) {
        amps[k * d + k] = 1.0 / std::sqrt(static_cast<double>(d));
    }
    return BipartiteState::quantum(m, m, amps);
}

BipartiteState purify(const State &omega, int purifier_dim) {
    const SystemModel &model = omega.model();
    if (!model.is_quantum()) {
        if (!omega.is_pure()) {
            throw Error(ErrorCode::unsupported_model, "classical mixed states have no purification");
        }
        int k = point_of(omega);
        return BipartiteState::classical_product(model, k, model, k);
    }
    HermitianSpectrum spec = hermitian_spectrum(omega.density());
    int rank = 0;
    while (rank < spec.values.size() && spec.values[rank] > kSupportTol) {
        rank++;
    }
    rank = std::max(rank, 1);
    if (purifier_dim > 0 && purifier_dim < rank) {
        throw Error(ErrorCode::rank_deficit, "purifier dimension " + std::to_string(purifier_dim) +
                                                 " is below the state's rank " + std::to_string(rank));
    }
    const int da = std::max({rank, 2, purifier_dim});
    const int db = model.dimension();
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(da * db);
    for (int k = 0; k < rank; k++) {
        double s = std::sqrt(std::max(spec.values[k], 0.0));
        for (int j = 0; j < db; j++) {
            amps[k * db + j] = s * spec.vectors(j, k);
        }
    }
    amps.normalize();
    return BipartiteState::quantum(SystemModel::quantum(da), model, std::move(amps));
}

Ensemble steer(const BipartiteState &psi, const Measurement &alice) {
    if (!(alice.model() == psi.model_a())) {
        throw Error(ErrorCode::model_mismatch, "measurement does not act on side A");
    }
    std::vector<EnsembleMember> members;
    if (!psi.is_quantum()) {
        State a = marginal(psi, Side::A);
        State b = marginal(psi, Side::B);
        for (const Effect &e : alice.effects()) {
            double p = evaluate(e, a);
            if (p >= kDropProbability) {
                members.push_back({p, b});
            }
        }
        return Ensemble(std::move(members));
    }
    Eigen::MatrixXcd amp = psi.amplitude_matrix();
    for (const Effect &e : alice.effects()) {
        Eigen::MatrixXcd sigma = conditional_state(amp, e.op());
        double p = sigma.trace().real();
        if (p < kDropProbability) {
            continue;
        }
        members.push_back({p, state_from_density(psi.model_b(), sigma / p)});
    }
    double total = 0;
    for (const EnsembleMember &m : members) {
        total += m.weight;
    }
    for (EnsembleMember &m : members) {
        m.weight /= total;
    }
    return Ensemble(std::move(members));
}

SteeringMeasurement synthesize_steering_measurement(const BipartiteState &psi, const Ensemble &target) {
    if (!psi.is_quantum()) {
        throw Error(ErrorCode::unsupported_model, "steering needs a quantum joint state");
    }
    if (!(target.model() == psi.model_b())) {
        throw Error(ErrorCode::model_mismatch, "target ensemble lives on a different system than side B");
    }
    if (!target.all_pure()) {
        throw Error(ErrorCode::not_pure, "steering targets must be pure-state decompositions");
    }
    State rho_b = marginal(psi, Side::B);
    double mismatch = max_abs_difference(mix(target), rho_b);
    if (mismatch > kSpectralTol) {
        throw Error(ErrorCode::marginal_mismatch,
                    "target averages to a different state (max coefficient gap " + std::to_string(mismatch) + ")");
    }
    const Eigen::Index n = static_cast<Eigen::Index>(target.size());
    const Eigen::Index da = psi.model_a().dimension();
    if (n > da) {
        throw Error(ErrorCode::rank_deficit, "target has " + std::to_string(n) + " members but the purifier has dimension " +
                                                 std::to_string(da) + "; re-purify with purifier dimension >= " +
                                                 std::to_string(n));
    }

    HermitianSpectrum spec = hermitian_spectrum(rho_b.density());
    Eigen::Index rank = 0;
    while (rank < spec.values.size() && spec.values[rank] > kSupportTol) {
        rank++;
    }
    Eigen::MatrixXcd amp = psi.amplitude_matrix();

    // Schmidt vectors on A: alpha_k = M conj(v_k) / sqrt(mu_k).
    Eigen::MatrixXcd alpha(da, rank);
    for (Eigen::Index k = 0; k < rank; k++) {
        alpha.col(k) = amp * spec.vectors.col(k).conjugate() / std::sqrt(spec.values[k]);
    }
    // c(i, k) = <v_k | sqrt(lambda_i) psi_i> / sqrt(mu_k); the columns of c
    // are orthonormal because the target averages to rho_B.
    Eigen::MatrixXcd c(n, rank);
    for (Eigen::Index i = 0; i < n; i++) {
        const EnsembleMember &m = target.members()[i];
        Eigen::VectorXcd w = std::sqrt(m.weight) * ket_of(m.state);
        for (Eigen::Index k = 0; k < rank; k++) {
            c(i, k) = spec.vectors.col(k).dot(w) / std::sqrt(spec.values[k]);
        }
    }
    Eigen::MatrixXcd unitary = complete_orthonormal(c, n);
    Eigen::MatrixXcd a_basis = complete_orthonormal(alpha, da);

    std::vector<Effect> effects;
    Eigen::MatrixXcd used = Eigen::MatrixXcd::Zero(da, da);
    for (Eigen::Index i = 0; i < n; i++) {
        Eigen::VectorXcd m = a_basis.leftCols(n) * unitary.row(i).adjoint();
        Eigen::MatrixXcd op = m * m.adjoint();
        op = (op + op.adjoint()) * 0.5;
        used += op;
        effects.push_back(effect_from_operator(psi.model_a(), op));
    }
    Eigen::MatrixXcd deficit = Eigen::MatrixXcd::Identity(da, da) - used;
    if (deficit.cwiseAbs().maxCoeff() > kLinearTol) {
        effects.push_back(effect_from_operator(psi.model_a(), (deficit + deficit.adjoint()) * 0.5));
    } else if (!effects.empty()) {
        // Fold rounding noise into the last element so the effects sum to u.
        Eigen::MatrixXcd last = effects.back().op() + deficit;
        effects.back() = effect_from_operator(psi.model_a(), (last + last.adjoint()) * 0.5);
    }

    double residual = 0;
    for (Eigen::Index i = 0; i < n; i++) {
        const EnsembleMember &m = target.members()[i];
        Eigen::MatrixXcd sigma = conditional_state(amp, effects[i].op());
        residual = std::max(residual, (sigma - m.weight * m.state.density()).cwiseAbs().maxCoeff());
    }
    return SteeringMeasurement{Measurement(std::move(effects)), target, psi, residual};
}

double verify_no_signaling_marginal(const BipartiteState &psi, const Measurement &alice1, const Measurement &alice2) {
    return max_abs_difference(mix(steer(psi, alice1)), mix(steer(psi, alice2)));
}

}  // namespace gptsim
