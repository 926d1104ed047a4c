#pragma once

#include <complex>
#include <span>
#include <string_view>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gptsim/error.h"

namespace gptsim {

/// Tolerance for linear identities (normalization, effect completeness).
inline constexpr double kLinearTol = 1e-12;
/// Tolerance for eigenvalue-based checks (PSD, purity, effect bounds).
inline constexpr double kSpectralTol = 1e-9;

using complex = std::complex<double>;

enum class ModelKind { quantum, classical };

/// A finite-dimensional ordered vector space: either the Hermitian operators
/// on C^d with the PSD cone, or R^n with the nonnegative orthant.
///
/// Quantum coefficients are the expansion of a Hermitian matrix in a fixed
/// orthonormal Hermitian basis: I/sqrt(d) first, then for every pair j<k the
/// symmetric and antisymmetric off-diagonal elements, then the d-1 diagonal
/// generalized Gell-Mann elements. For d=2 this is (I, X, Y, Z)/sqrt(2).
class SystemModel {
   public:
    static SystemModel quantum(int d);
    static SystemModel classical(int n);

    ModelKind kind() const noexcept {
        return kind_;
    }
    bool is_quantum() const noexcept {
        return kind_ == ModelKind::quantum;
    }
    /// Hilbert dimension d for quantum, outcome count n for classical.
    int dimension() const noexcept {
        return dim_;
    }
    /// d*d for quantum, n for classical.
    int ambient_dimension() const noexcept;
    Eigen::VectorXd order_unit() const;

    bool in_cone(const Eigen::VectorXd &coeffs) const;

    Eigen::VectorXd coeffs_of(const Eigen::MatrixXcd &hermitian) const;
    Eigen::MatrixXcd matrix_of(const Eigen::VectorXd &coeffs) const;

    /// "quantum:2" or "classical:3".
    std::string describe() const;

    bool operator==(const SystemModel &other) const = default;

   private:
    SystemModel(ModelKind kind, int dim) : kind_(kind), dim_(dim) {
    }
    ModelKind kind_;
    int dim_;
};

class State {
   public:
    const SystemModel &model() const noexcept {
        return model_;
    }
    const Eigen::VectorXd &coeffs() const noexcept {
        return coeffs_;
    }
    /// Density matrix; empty for classical states.
    const Eigen::MatrixXcd &density() const noexcept {
        return density_;
    }
    bool is_pure() const noexcept {
        return pure_;
    }

   private:
    State(SystemModel model, Eigen::VectorXd coeffs, Eigen::MatrixXcd density, bool pure)
        : model_(model), coeffs_(std::move(coeffs)), density_(std::move(density)), pure_(pure) {
    }
    friend State make_checked_state(const SystemModel &, Eigen::VectorXd, Eigen::MatrixXcd, bool);

    SystemModel model_;
    Eigen::VectorXd coeffs_;
    Eigen::MatrixXcd density_;
    bool pure_;
};

class Effect {
   public:
    const SystemModel &model() const noexcept {
        return model_;
    }
    const Eigen::VectorXd &covector() const noexcept {
        return covector_;
    }
    /// Effect operator; empty for classical effects.
    const Eigen::MatrixXcd &op() const noexcept {
        return op_;
    }

   private:
    Effect(SystemModel model, Eigen::VectorXd covector, Eigen::MatrixXcd op)
        : model_(model), covector_(std::move(covector)), op_(std::move(op)) {
    }
    friend Effect make_checked_effect(const SystemModel &, Eigen::VectorXd, Eigen::MatrixXcd);

    SystemModel model_;
    Eigen::VectorXd covector_;
    Eigen::MatrixXcd op_;
};

class Measurement {
   public:
    explicit Measurement(std::vector<Effect> effects);

    const SystemModel &model() const noexcept {
        return effects_.front().model();
    }
    const std::vector<Effect> &effects() const noexcept {
        return effects_;
    }
    size_t size() const noexcept {
        return effects_.size();
    }
    const Effect &operator[](size_t k) const {
        return effects_[k];
    }

   private:
    std::vector<Effect> effects_;
};

struct EnsembleMember {
    double weight;
    State state;
};

/// Weighted collection of states with weights summing to one.
///
/// Members are normally pure. Steering with a coarse-grained measurement
/// yields mixed conditional states, so mixed members are accepted and
/// `all_pure()` reports whether this is a pure-state decomposition.
class Ensemble {
   public:
    explicit Ensemble(std::vector<EnsembleMember> members);

    const std::vector<EnsembleMember> &members() const noexcept {
        return members_;
    }
    const SystemModel &model() const noexcept {
        return members_.front().state.model();
    }
    size_t size() const noexcept {
        return members_.size();
    }
    bool all_pure() const noexcept;

   private:
    std::vector<EnsembleMember> members_;
};

enum class Side { A, B };

/// Pure joint state of two systems. Quantum amplitudes are indexed a*d_B + b.
/// Classical joint pure states are product deterministic points.
class BipartiteState {
   public:
    static BipartiteState quantum(const SystemModel &a, const SystemModel &b, Eigen::VectorXcd amplitudes);
    static BipartiteState classical_product(const SystemModel &a, int point_a, const SystemModel &b, int point_b);

    const SystemModel &model_a() const noexcept {
        return model_a_;
    }
    const SystemModel &model_b() const noexcept {
        return model_b_;
    }
    const SystemModel &model(Side side) const noexcept {
        return side == Side::A ? model_a_ : model_b_;
    }
    bool is_quantum() const noexcept {
        return model_a_.is_quantum();
    }
    const Eigen::VectorXcd &amplitudes() const noexcept {
        return amplitudes_;
    }
    /// d_A x d_B matrix with M(a, b) = amplitude of |a>|b>.
    Eigen::MatrixXcd amplitude_matrix() const;
    int point(Side side) const noexcept {
        return side == Side::A ? point_a_ : point_b_;
    }

   private:
    BipartiteState(SystemModel a, SystemModel b) : model_a_(a), model_b_(b) {
    }
    SystemModel model_a_;
    SystemModel model_b_;
    Eigen::VectorXcd amplitudes_;
    int point_a_ = -1;
    int point_b_ = -1;
};

// States.
State validate_state(const SystemModel &model, const Eigen::VectorXd &coeffs);
State state_from_density(const SystemModel &model, const Eigen::MatrixXcd &rho);
State pure_state(const SystemModel &model, const Eigen::VectorXcd &ket);
State deterministic_point(const SystemModel &model, int point);
State maximally_mixed(const SystemModel &model);
/// |k> for quantum models, the k-th deterministic point for classical ones.
State computational_state(const SystemModel &model, int k);
/// Qubit kets by name: "0", "1", "+", "-", "+i", "-i".
Eigen::VectorXcd named_qubit_ket(std::string_view name);
/// Rebuilds a state from previously serialized coefficient and matrix data,
/// keeping both exactly as given after checking they agree.
State restore_state(const SystemModel &model, const Eigen::VectorXd &coeffs, const Eigen::MatrixXcd &density);

/// Unit vector of a pure quantum state, phase fixed so that the first
/// non-negligible component is real positive.
Eigen::VectorXcd ket_of(const State &pure);
/// Index of the deterministic point of a pure classical state.
int point_of(const State &pure);

// Effects and measurements.
Effect effect_from_covector(const SystemModel &model, const Eigen::VectorXd &covector);
Effect effect_from_operator(const SystemModel &model, const Eigen::MatrixXcd &op);
Effect unit_effect(const SystemModel &model);
/// Serialized-form counterpart of restore_state.
Effect restore_effect(const SystemModel &model, const Eigen::VectorXd &covector, const Eigen::MatrixXcd &op);
Effect projector_effect(const State &pure);
Effect complement(const Effect &e);
Measurement projective_measurement(const SystemModel &model, std::span<const Eigen::VectorXcd> kets);
Measurement computational_basis_measurement(const SystemModel &model);
Measurement trivial_measurement(const SystemModel &model);

double evaluate(const Effect &e, const State &omega);
State mix(const Ensemble &ens);
State marginal(const BipartiteState &psi, Side side);

/// Largest absolute coefficient difference between two states of one model.
double max_abs_difference(const State &a, const State &b);

/// Eigen-decomposition of a Hermitian matrix with eigenvalues in descending
/// order and eigenvectors phase-fixed (first non-negligible component real
/// positive).
struct HermitianSpectrum {
    Eigen::VectorXd values;
    Eigen::MatrixXcd vectors;
};
HermitianSpectrum hermitian_spectrum(const Eigen::MatrixXcd &m);
Eigen::VectorXcd fix_phase(Eigen::VectorXcd v);

}  // namespace gptsim
