#pragma once

#include "gptsim/core.h"

namespace gptsim {

/// An A-side measurement together with the B-side ensemble it steers to.
struct SteeringMeasurement {
    Measurement measurement;
    Ensemble target;
    BipartiteState shared;
    /// max_i |sigma_i - lambda_i psi_i| over density matrix entries, where
    /// sigma_i is the subnormalized conditional state of outcome i.
    double max_residual;
};

/// Pure joint state on (purifier A, system B) whose B marginal is omega.
///
/// A has dimension max(rank(omega), 2, purifier_dim); a purifier_dim below
/// the rank is rejected with RankDeficit. The Schmidt vectors on B are the
/// eigenvectors of omega in descending eigenvalue order, and the A side is
/// the computational basis. Classical models only purify pure states.
BipartiteState purify(const State &omega, int purifier_dim = 0);

/// Measures `alice` on side A and returns the normalized conditional states
/// of B with their outcome probabilities. Outcomes with probability below
/// 1e-14 are dropped.
Ensemble steer(const BipartiteState &psi, const Measurement &alice);

/// Builds an A-side projective measurement (plus a completion element when
/// A is larger than the target) that steers B to `target`.
///
/// Each sqrt(lambda_i) psi_i is expanded in the Schmidt basis of `psi`; the
/// coefficient isometry is completed to a unitary whose rows define the
/// measurement vectors on A. The target must average to the B marginal, and
/// A must have dimension >= target.size().
SteeringMeasurement synthesize_steering_measurement(const BipartiteState &psi, const Ensemble &target);

/// Largest coefficient difference between the B-side average states
/// produced by two A-side measurements.
double verify_no_signaling_marginal(const BipartiteState &psi, const Measurement &alice1, const Measurement &alice2);

/// (|00> + |11> + ... )/sqrt(d).
BipartiteState maximally_entangled(int d);

}  // namespace gptsim
