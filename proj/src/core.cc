#include "gptsim/core.h"

#include <algorithm>
#include <cmath>

namespace gptsim {

std::string_view error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::invalid_argument:
            return "InvalidArgument";
        case ErrorCode::not_normalized:
            return "NotNormalized";
        case ErrorCode::outside_cone:
            return "OutsideCone";
        case ErrorCode::model_mismatch:
            return "ModelMismatch";
        case ErrorCode::empty_ensemble:
            return "EmptyEnsemble";
        case ErrorCode::not_pure:
            return "NotPure";
        case ErrorCode::probability_out_of_range:
            return "ProbabilityOutOfRange";
        case ErrorCode::infeasible:
            return "Infeasible";
        case ErrorCode::unbounded_model:
            return "UnboundedModel";
        case ErrorCode::unsupported_model:
            return "UnsupportedModel";
        case ErrorCode::domain_error:
            return "DomainError";
        case ErrorCode::marginal_mismatch:
            return "MarginalMismatch";
        case ErrorCode::rank_deficit:
            return "RankDeficit";
        case ErrorCode::parse_error:
            return "ParseError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string &message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {
}

State make_checked_state(const SystemModel &model, Eigen::VectorXd coeffs, Eigen::MatrixXcd density, bool pure);
Effect make_checked_effect(const SystemModel &model, Eigen::VectorXd covector, Eigen::MatrixXcd op);

namespace {

const double kSqrt2 = std::sqrt(2.0);

void require_same_model(const SystemModel &a, const SystemModel &b, const char *what) {
    if (!(a == b)) {
        throw Error(ErrorCode::model_mismatch, std::string(what) + ": " + a.describe() + " vs " + b.describe());
    }
}

double hermiticity_defect(const Eigen::MatrixXcd &m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

bool quantum_purity(const Eigen::MatrixXcd &rho) {
    double purity = (rho * rho).trace().real();
    return std::abs(purity - 1.0) <= kSpectralTol;
}

bool classical_purity(const Eigen::VectorXd &p) {
    for (Eigen::Index k = 0; k < p.size(); k++) {
        if (std::abs(p[k] - 1.0) <= kLinearTol) {
            return true;
        }
    }
    return false;
}

void check_normalized(const SystemModel &model, const Eigen::VectorXd &coeffs) {
    double total = model.order_unit().dot(coeffs);
    if (!std::isfinite(total) || std::abs(total - 1.0) > kLinearTol) {
        throw Error(ErrorCode::not_normalized, "u(state) = " + std::to_string(total));
    }
}

// Rejects density matrices with eigenvalues below -kSpectralTol. Small
// negative eigenvalues (between -kSpectralTol and -kLinearTol) are clipped
// and the trace restored; numerical noise below kLinearTol is left alone.
Eigen::MatrixXcd checked_psd(const Eigen::MatrixXcd &rho) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho);
    Eigen::VectorXd values = solver.eigenvalues();
    double smallest = values.minCoeff();
    if (smallest < -kSpectralTol) {
        throw Error(ErrorCode::outside_cone, "smallest eigenvalue " + std::to_string(smallest));
    }
    if (smallest >= -kLinearTol) {
        return rho;
    }
    double trace = values.sum();
    values = values.cwiseMax(0.0);
    values *= trace / values.sum();
    Eigen::MatrixXcd clipped = solver.eigenvectors() * values.asDiagonal() * solver.eigenvectors().adjoint();
    return (clipped + clipped.adjoint()) * 0.5;
}

void require_effect_bounds(const Eigen::VectorXd &values) {
    double lo = values.minCoeff();
    double hi = values.maxCoeff();
    if (lo < -kSpectralTol || hi > 1.0 + kSpectralTol) {
        throw Error(ErrorCode::outside_cone,
                    "effect values on cone generators span [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// SystemModel

SystemModel SystemModel::quantum(int d) {
    if (d < 2) {
        throw Error(ErrorCode::invalid_argument, "quantum dimension must be >= 2");
    }
    return SystemModel(ModelKind::quantum, d);
}

SystemModel SystemModel::classical(int n) {
    if (n < 2) {
        throw Error(ErrorCode::invalid_argument, "classical outcome count must be >= 2");
    }
    return SystemModel(ModelKind::classical, n);
}

int SystemModel::ambient_dimension() const noexcept {
    return is_quantum() ? dim_ * dim_ : dim_;
}

Eigen::VectorXd SystemModel::order_unit() const {
    if (!is_quantum()) {
        return Eigen::VectorXd::Ones(dim_);
    }
    Eigen::VectorXd u = Eigen::VectorXd::Zero(ambient_dimension());
    u[0] = std::sqrt(static_cast<double>(dim_));
    return u;
}

bool SystemModel::in_cone(const Eigen::VectorXd &coeffs) const {
    if (coeffs.size() != ambient_dimension()) {
        return false;
    }
    if (!is_quantum()) {
        return coeffs.minCoeff() >= -kSpectralTol;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix_of(coeffs), Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff() >= -kSpectralTol;
}

Eigen::VectorXd SystemModel::coeffs_of(const Eigen::MatrixXcd &h) const {
    const int d = dim_;
    Eigen::VectorXd c(d * d);
    c[0] = h.trace().real() / std::sqrt(static_cast<double>(d));
    int k = 1;
    for (int i = 0; i < d; i++) {
        for (int j = i + 1; j < d; j++) {
            c[k++] = kSqrt2 * h(i, j).real();
            c[k++] = -kSqrt2 * h(i, j).imag();
        }
    }
    for (int l = 1; l < d; l++) {
        double acc = 0;
        for (int m = 0; m < l; m++) {
            acc += h(m, m).real();
        }
        acc -= l * h(l, l).real();
        c[k++] = acc / std::sqrt(static_cast<double>(l * (l + 1)));
    }
    return c;
}

Eigen::MatrixXcd SystemModel::matrix_of(const Eigen::VectorXd &c) const {
    const int d = dim_;
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Identity(d, d) * (c[0] / std::sqrt(static_cast<double>(d)));
    int k = 1;
    for (int i = 0; i < d; i++) {
        for (int j = i + 1; j < d; j++) {
            double re = c[k++] / kSqrt2;
            double im = -c[k++] / kSqrt2;
            h(i, j) += complex(re, im);
            h(j, i) += complex(re, -im);
        }
    }
    for (int l = 1; l < d; l++) {
        double s = c[k++] / std::sqrt(static_cast<double>(l * (l + 1)));
        for (int m = 0; m < l; m++) {
            h(m, m) += s;
        }
        h(l, l) -= l * s;
    }
    return h;
}

std::string SystemModel::describe() const {
    return (is_quantum() ? "quantum:" : "classical:") + std::to_string(dim_);
}

// ---------------------------------------------------------------------------
// State

State make_checked_state(const SystemModel &model, Eigen::VectorXd coeffs, Eigen::MatrixXcd density, bool pure) {
    return State(model, std::move(coeffs), std::move(density), pure);
}

State validate_state(const SystemModel &model, const Eigen::VectorXd &coeffs) {
    if (coeffs.size() != model.ambient_dimension()) {
        throw Error(ErrorCode::invalid_argument, "expected " + std::to_string(model.ambient_dimension()) +
                                                     " coefficients, got " + std::to_string(coeffs.size()));
    }
    check_normalized(model, coeffs);
    if (!model.is_quantum()) {
        if (coeffs.minCoeff() < -kSpectralTol) {
            throw Error(ErrorCode::outside_cone, "negative probability " + std::to_string(coeffs.minCoeff()));
        }
        return make_checked_state(model, coeffs, Eigen::MatrixXcd(), classical_purity(coeffs));
    }
    Eigen::MatrixXcd rho = model.matrix_of(coeffs);
    Eigen::MatrixXcd projected = checked_psd(rho);
    if (projected != rho) {
        Eigen::VectorXd c = model.coeffs_of(projected);
        return make_checked_state(model, std::move(c), projected, quantum_purity(projected));
    }
    return make_checked_state(model, coeffs, rho, quantum_purity(rho));
}

State state_from_density(const SystemModel &model, const Eigen::MatrixXcd &rho) {
    if (!model.is_quantum()) {
        throw Error(ErrorCode::unsupported_model, "density matrices require a quantum model");
    }
    const int d = model.dimension();
    if (rho.rows() != d || rho.cols() != d) {
        throw Error(ErrorCode::invalid_argument, "density matrix must be " + std::to_string(d) + "x" + std::to_string(d));
    }
    if (hermiticity_defect(rho) > kLinearTol) {
        throw Error(ErrorCode::invalid_argument, "density matrix is not Hermitian");
    }
    Eigen::MatrixXcd herm = (rho + rho.adjoint()) * 0.5;
    Eigen::VectorXd coeffs = model.coeffs_of(herm);
    check_normalized(model, coeffs);
    Eigen::MatrixXcd projected = checked_psd(herm);
    if (projected != herm) {
        coeffs = model.coeffs_of(projected);
    }
    bool pure = quantum_purity(projected);
    return make_checked_state(model, std::move(coeffs), std::move(projected), pure);
}

State pure_state(const SystemModel &model, const Eigen::VectorXcd &ket) {
    if (!model.is_quantum()) {
        throw Error(ErrorCode::unsupported_model, "kets require a quantum model");
    }
    if (ket.size() != model.dimension()) {
        throw Error(ErrorCode::invalid_argument, "ket dimension mismatch");
    }
    if (std::abs(ket.squaredNorm() - 1.0) > kLinearTol) {
        throw Error(ErrorCode::not_normalized, "ket norm^2 = " + std::to_string(ket.squaredNorm()));
    }
    return state_from_density(model, ket * ket.adjoint());
}

State deterministic_point(const SystemModel &model, int point) {
    if (model.is_quantum()) {
        throw Error(ErrorCode::unsupported_model, "deterministic points belong to classical models");
    }
    if (point < 0 || point >= model.dimension()) {
        throw Error(ErrorCode::invalid_argument, "point index out of range");
    }
    Eigen::VectorXd p = Eigen::VectorXd::Zero(model.dimension());
    p[point] = 1.0;
    return make_checked_state(model, std::move(p), Eigen::MatrixXcd(), true);
}

State maximally_mixed(const SystemModel &model) {
    const int d = model.dimension();
    if (!model.is_quantum()) {
        return validate_state(model, Eigen::VectorXd::Constant(d, 1.0 / d));
    }
    return state_from_density(model, Eigen::MatrixXcd::Identity(d, d) / static_cast<double>(d));
}

State computational_state(const SystemModel &model, int k) {
    if (!model.is_quantum()) {
        return deterministic_point(model, k);
    }
    if (k < 0 || k >= model.dimension()) {
        throw Error(ErrorCode::invalid_argument, "basis index out of range");
    }
    return pure_state(model, Eigen::VectorXcd::Unit(model.dimension(), k));
}

Eigen::VectorXcd named_qubit_ket(std::string_view name) {
    const double h = 1.0 / std::sqrt(2.0);
    Eigen::VectorXcd k(2);
    if (name == "0") {
        k << 1.0, 0.0;
    } else if (name == "1") {
        k << 0.0, 1.0;
    } else if (name == "+") {
        k << h, h;
    } else if (name == "-") {
        k << h, -h;
    } else if (name == "+i") {
        k << h, complex(0, h);
    } else if (name == "-i") {
        k << h, complex(0, -h);
    } else {
        throw Error(ErrorCode::parse_error, "unknown qubit state '" + std::string(name) + "'");
    }
    return k;
}

State restore_state(const SystemModel &model, const Eigen::VectorXd &coeffs, const Eigen::MatrixXcd &density) {
    if (!model.is_quantum()) {
        State checked = validate_state(model, coeffs);
        return make_checked_state(model, coeffs, Eigen::MatrixXcd(), checked.is_pure());
    }
    const int d = model.dimension();
    if (coeffs.size() != model.ambient_dimension() || density.rows() != d || density.cols() != d) {
        throw Error(ErrorCode::invalid_argument, "serialized state has wrong dimensions");
    }
    if (hermiticity_defect(density) > kLinearTol) {
        throw Error(ErrorCode::invalid_argument, "serialized density matrix is not Hermitian");
    }
    if ((model.coeffs_of(density) - coeffs).cwiseAbs().maxCoeff() > kLinearTol) {
        throw Error(ErrorCode::invalid_argument, "serialized coefficients disagree with matrix");
    }
    check_normalized(model, coeffs);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(density, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -kSpectralTol) {
        throw Error(ErrorCode::outside_cone, "serialized density matrix is not PSD");
    }
    return make_checked_state(model, coeffs, density, quantum_purity(density));
}

Eigen::VectorXcd fix_phase(Eigen::VectorXcd v) {
    for (Eigen::Index k = 0; k < v.size(); k++) {
        double mag = std::abs(v[k]);
        if (mag > 1e-8) {
            v *= std::conj(v[k]) / mag;
            v[k] = complex(v[k].real(), 0.0);
            break;
        }
    }
    return v;
}

HermitianSpectrum hermitian_spectrum(const Eigen::MatrixXcd &m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
    const Eigen::Index n = m.rows();
    HermitianSpectrum out{Eigen::VectorXd(n), Eigen::MatrixXcd(n, n)};
    for (Eigen::Index k = 0; k < n; k++) {
        Eigen::Index src = n - 1 - k;
        out.values[k] = solver.eigenvalues()[src];
        out.vectors.col(k) = fix_phase(solver.eigenvectors().col(src));
    }
    return out;
}

Eigen::VectorXcd ket_of(const State &pure) {
    if (!pure.model().is_quantum()) {
        throw Error(ErrorCode::unsupported_model, "kets require a quantum model");
    }
    if (!pure.is_pure()) {
        throw Error(ErrorCode::not_pure, "state is mixed");
    }
    // For a rank-1 projector every nonzero column is proportional to the ket;
    // the column with the largest diagonal entry is the best conditioned.
    const Eigen::MatrixXcd &rho = pure.density();
    Eigen::Index best = 0;
    rho.diagonal().real().maxCoeff(&best);
    Eigen::VectorXcd v = rho.col(best) / std::sqrt(rho(best, best).real());
    return fix_phase(v.normalized());
}

int point_of(const State &pure) {
    if (pure.model().is_quantum()) {
        throw Error(ErrorCode::unsupported_model, "deterministic points belong to classical models");
    }
    if (!pure.is_pure()) {
        throw Error(ErrorCode::not_pure, "state is mixed");
    }
    Eigen::Index k = 0;
    pure.coeffs().maxCoeff(&k);
    return static_cast<int>(k);
}

double max_abs_difference(const State &a, const State &b) {
    require_same_model(a.model(), b.model(), "compare");
    return (a.coeffs() - b.coeffs()).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// Effects

Effect make_checked_effect(const SystemModel &model, Eigen::VectorXd covector, Eigen::MatrixXcd op) {
    return Effect(model, std::move(covector), std::move(op));
}

Effect effect_from_covector(const SystemModel &model, const Eigen::VectorXd &covector) {
    if (covector.size() != model.ambient_dimension()) {
        throw Error(ErrorCode::invalid_argument, "covector dimension mismatch");
    }
    if (!model.is_quantum()) {
        // Vertices of the simplex are the cone generators; e(vertex k) = e_k.
        require_effect_bounds(covector);
        return make_checked_effect(model, covector, Eigen::MatrixXcd());
    }
    Eigen::MatrixXcd op = model.matrix_of(covector);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(op, Eigen::EigenvaluesOnly);
    require_effect_bounds(solver.eigenvalues());
    return make_checked_effect(model, covector, std::move(op));
}

Effect effect_from_operator(const SystemModel &model, const Eigen::MatrixXcd &op) {
    if (!model.is_quantum()) {
        throw Error(ErrorCode::unsupported_model, "effect operators require a quantum model");
    }
    const int d = model.dimension();
    if (op.rows() != d || op.cols() != d) {
        throw Error(ErrorCode::invalid_argument, "effect operator dimension mismatch");
    }
    if (hermiticity_defect(op) > kLinearTol) {
        throw Error(ErrorCode::invalid_argument, "effect operator is not Hermitian");
    }
    Eigen::MatrixXcd herm = (op + op.adjoint()) * 0.5;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
    require_effect_bounds(solver.eigenvalues());
    Eigen::VectorXd covector = model.coeffs_of(herm);
    return make_checked_effect(model, std::move(covector), std::move(herm));
}

Effect restore_effect(const SystemModel &model, const Eigen::VectorXd &covector, const Eigen::MatrixXcd &op) {
    Effect checked = effect_from_covector(model, covector);
    if (!model.is_quantum()) {
        return checked;
    }
    if (op.rows() != model.dimension() || op.cols() != model.dimension() ||
        (checked.op() - op).cwiseAbs().maxCoeff() > kLinearTol) {
        throw Error(ErrorCode::invalid_argument, "serialized effect operator disagrees with covector");
    }
    return make_checked_effect(model, covector, op);
}

Effect unit_effect(const SystemModel &model) {
    if (!model.is_quantum()) {
        return make_checked_effect(model, model.order_unit(), Eigen::MatrixXcd());
    }
    const int d = model.dimension();
    return make_checked_effect(model, model.order_unit(), Eigen::MatrixXcd::Identity(d, d));
}

Effect projector_effect(const State &pure) {
    if (!pure.is_pure()) {
        throw Error(ErrorCode::not_pure, "projector effects need a pure state");
    }
    const SystemModel &model = pure.model();
    if (!model.is_quantum()) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(model.dimension());
        e[point_of(pure)] = 1.0;
        return make_checked_effect(model, std::move(e), Eigen::MatrixXcd());
    }
    // A pure density matrix is its own projector.
    return make_checked_effect(model, pure.coeffs(), pure.density());
}

Effect complement(const Effect &e) {
    const SystemModel &model = e.model();
    Eigen::VectorXd c = model.order_unit() - e.covector();
    if (!model.is_quantum()) {
        return make_checked_effect(model, std::move(c), Eigen::MatrixXcd());
    }
    const int d = model.dimension();
    Eigen::MatrixXcd op = Eigen::MatrixXcd::Identity(d, d) - e.op();
    return make_checked_effect(model, std::move(c), std::move(op));
}

Measurement::Measurement(std::vector<Effect> effects) : effects_(std::move(effects)) {
    if (effects_.empty()) {
        throw Error(ErrorCode::invalid_argument, "measurement needs at least one effect");
    }
    const SystemModel &m = effects_.front().model();
    Eigen::VectorXd total = Eigen::VectorXd::Zero(m.ambient_dimension());
    for (const Effect &e : effects_) {
        require_same_model(m, e.model(), "measurement");
        total += e.covector();
    }
    double defect = (total - m.order_unit()).cwiseAbs().maxCoeff();
    if (defect > kLinearTol) {
        throw Error(ErrorCode::not_normalized, "effects sum to u only within " + std::to_string(defect));
    }
}

Measurement projective_measurement(const SystemModel &model, std::span<const Eigen::VectorXcd> kets) {
    std::vector<Effect> effects;
    effects.reserve(kets.size());
    for (const Eigen::VectorXcd &k : kets) {
        effects.push_back(projector_effect(pure_state(model, k)));
    }
    return Measurement(std::move(effects));
}

Measurement computational_basis_measurement(const SystemModel &model) {
    std::vector<Effect> effects;
    for (int k = 0; k < model.dimension(); k++) {
        if (model.is_quantum()) {
            Eigen::VectorXcd ket = Eigen::VectorXcd::Zero(model.dimension());
            ket[k] = 1.0;
            effects.push_back(projector_effect(pure_state(model, ket)));
        } else {
            effects.push_back(projector_effect(deterministic_point(model, k)));
        }
    }
    return Measurement(std::move(effects));
}

Measurement trivial_measurement(const SystemModel &model) {
    return Measurement({unit_effect(model)});
}

double evaluate(const Effect &e, const State &omega) {
    require_same_model(e.model(), omega.model(), "evaluate");
    double value = e.covector().dot(omega.coeffs());
    if (value < -kSpectralTol || value > 1.0 + kSpectralTol) {
        throw Error(ErrorCode::probability_out_of_range, "e(omega) = " + std::to_string(value));
    }
    return std::clamp(value, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Ensembles

Ensemble::Ensemble(std::vector<EnsembleMember> members) : members_(std::move(members)) {
    if (members_.empty()) {
        throw Error(ErrorCode::empty_ensemble, "ensemble has no members");
    }
    double total = 0;
    for (const EnsembleMember &m : members_) {
        require_same_model(members_.front().state.model(), m.state.model(), "ensemble");
        if (!(m.weight >= 0.0)) {
            throw Error(ErrorCode::invalid_argument, "negative ensemble weight");
        }
        total += m.weight;
    }
    if (std::abs(total - 1.0) > kLinearTol) {
        throw Error(ErrorCode::not_normalized, "ensemble weights sum to " + std::to_string(total));
    }
}

bool Ensemble::all_pure() const noexcept {
    return std::all_of(members_.begin(), members_.end(), [](const EnsembleMember &m) {
        return m.state.is_pure();
    });
}

State mix(const Ensemble &ens) {
    const SystemModel &model = ens.model();
    if (!model.is_quantum()) {
        Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(model.ambient_dimension());
        for (const EnsembleMember &m : ens.members()) {
            coeffs += m.weight * m.state.coeffs();
        }
        return validate_state(model, coeffs);
    }
    const int d = model.dimension();
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
    for (const EnsembleMember &m : ens.members()) {
        rho += m.weight * m.state.density();
    }
    return state_from_density(model, rho);
}

// ---------------------------------------------------------------------------
// Bipartite states

BipartiteState BipartiteState::quantum(const SystemModel &a, const SystemModel &b, Eigen::VectorXcd amplitudes) {
    if (!a.is_quantum() || !b.is_quantum()) {
        throw Error(ErrorCode::unsupported_model, "amplitude vectors need quantum models on both sides");
    }
    if (amplitudes.size() != a.dimension() * b.dimension()) {
        throw Error(ErrorCode::invalid_argument, "joint amplitude vector has wrong length");
    }
    if (std::abs(amplitudes.squaredNorm() - 1.0) > kLinearTol) {
        throw Error(ErrorCode::not_normalized, "joint state norm^2 = " + std::to_string(amplitudes.squaredNorm()));
    }
    BipartiteState out(a, b);
    out.amplitudes_ = std::move(amplitudes);
    return out;
}

BipartiteState BipartiteState::classical_product(const SystemModel &a, int point_a, const SystemModel &b, int point_b) {
    if (a.is_quantum() || b.is_quantum()) {
        throw Error(ErrorCode::unsupported_model, "classical product needs classical models");
    }
    if (point_a < 0 || point_a >= a.dimension() || point_b < 0 || point_b >= b.dimension()) {
        throw Error(ErrorCode::invalid_argument, "point index out of range");
    }
    BipartiteState out(a, b);
    out.point_a_ = point_a;
    out.point_b_ = point_b;
    return out;
}

Eigen::MatrixXcd BipartiteState::amplitude_matrix() const {
    const int da = model_a_.dimension();
    const int db = model_b_.dimension();
    Eigen::MatrixXcd m(da, db);
    for (int i = 0; i < da; i++) {
        for (int j = 0; j < db; j++) {
            m(i, j) = amplitudes_[i * db + j];
        }
    }
    return m;
}

State marginal(const BipartiteState &psi, Side side) {
    if (!psi.is_quantum()) {
        return deterministic_point(psi.model(side), psi.point(side));
    }
    Eigen::MatrixXcd m = psi.amplitude_matrix();
    Eigen::MatrixXcd rho = side == Side::A ? Eigen::MatrixXcd(m * m.adjoint())
                                           : Eigen::MatrixXcd(m.transpose() * m.conjugate());
    rho = (rho + rho.adjoint()) * 0.5;
    return state_from_density(psi.model(side), rho);
}

}  // namespace gptsim
