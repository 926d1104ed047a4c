#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gptsim/core.h"

namespace gptsim {

enum class RuleFamily { identity, power, piecewise_quadratic, tabulated };

/// A probability rule Phi: [0,1] -> [0,1] mapping transition probability to
/// predicted outcome probability. Immutable once built.
class ProbabilityRule {
   public:
    static ProbabilityRule identity();
    /// Phi(p) = p^alpha. Accepted even though it violates Phi(p)+Phi(1-p)=1
    /// for alpha != 1; check_constraints reports that.
    static ProbabilityRule power(double alpha);
    /// Phi(p) = 2p^2 on [0, 1/2], 1 - 2(1-p)^2 on [1/2, 1].
    static ProbabilityRule piecewise_quadratic();
    /// Piecewise-linear interpolation through (p, Phi(p)) samples, held
    /// constant outside the sampled range. Sample values outside [0,1] are
    /// clamped and counted in clamped_samples().
    static ProbabilityRule tabulated(std::vector<std::pair<double, double>> samples);

    RuleFamily family() const noexcept {
        return family_;
    }
    double alpha() const noexcept {
        return alpha_;
    }
    const std::vector<std::pair<double, double>> &samples() const noexcept {
        return samples_;
    }
    int clamped_samples() const noexcept {
        return clamped_;
    }

    /// "identity", "power(1.5)", "piecewise-quadratic", "tabulated(n=5)".
    std::string name() const;

    /// Raw evaluation; p must already lie in [0,1].
    double operator()(double p) const;

   private:
    explicit ProbabilityRule(RuleFamily f) : family_(f) {
    }
    RuleFamily family_;
    double alpha_ = 1.0;
    std::vector<std::pair<double, double>> samples_;
    int clamped_ = 0;
};

std::string family_name(RuleFamily family);
RuleFamily parse_family(const std::string &name);

/// Phi(p), with DomainError for p outside [0,1] beyond 1e-12.
double eval_rule(const ProbabilityRule &rule, double p);

enum class Curvature { convex, concave, affine };
std::string curvature_name(Curvature c);

struct CurvatureSegment {
    double lo;
    double hi;
    Curvature kind;
};

struct ConstraintReport {
    int grid_n = 0;
    double curvature_tol = 0;
    double boundary_residual = 0;
    bool boundary_ok = false;
    int monotonicity_violations = 0;
    /// Adjacent grid pair with the largest decrease (only meaningful when
    /// violations > 0).
    std::pair<double, double> worst_monotonicity_pair{0, 0};
    double worst_monotonicity_drop = 0;
    double normalization_residual = 0;
    double midpoint_residual = 0;
    std::vector<CurvatureSegment> curvature;

    bool monotone() const noexcept {
        return monotonicity_violations == 0;
    }
    bool normalization_ok() const noexcept;
    bool midpoint_ok() const noexcept;
    bool passes() const noexcept {
        return boundary_ok && monotone() && normalization_ok() && midpoint_ok();
    }
};

/// Residual threshold for the boundary, normalization and midpoint checks.
inline constexpr double kConstraintTol = 1e-9;

/// Audits Phi on the uniform grid k/(grid_n-1): boundary values,
/// monotonicity, Phi(p)+Phi(1-p)=1, Phi(1/2)=1/2, and the sign of second
/// differences (threshold `curvature_tol`) merged into contiguous segments
/// covering [0,1].
ConstraintReport check_constraints(const ProbabilityRule &rule, int grid_n = 4097, double curvature_tol = 1e-8);

/// Phi(tau(psi, phi)).
double predict_pure(const ProbabilityRule &rule, const State &psi, const State &phi);

/// Sum_i w_i P(phi | member_i). Pure members use Phi(tau); mixed members
/// (coarse-grained steering outcomes) use the single-state rule Phi(e_phi(omega)).
double predict_ensemble(const ProbabilityRule &rule, const Ensemble &ens, const State &phi);

/// Phi(e_phi(omega)): prediction from the average state alone.
double predict_average(const ProbabilityRule &rule, const State &omega, const State &phi);

}  // namespace gptsim
