#pragma once

#include <cstdint>
#include <span>

#include "gptsim/core.h"

namespace gptsim {

/// Two-outcome test {e_phi, e_phi_perp} that accepts phi with certainty and
/// rejects the reference orthogonal state phi_perp with certainty.
struct DistinguishingPair {
    Effect accept;
    Effect reject;
    State phi;
    State phi_perp;
};

/// Geometric transition probability of pure psi onto pure phi, computed in
/// closed form: |<phi|psi>|^2 for quantum, point equality for classical.
double tau(const State &psi, const State &phi);

struct LpDiagnostics {
    int generators = 0;
    int reduced_dimension = 0;
    int phase1_iterations = 0;
    int phase2_iterations = 0;
};

struct LpTau {
    double value;
    LpDiagnostics diagnostics;
};

/// Transition probability as a linear program over covectors e:
///
///     minimize e(psi)  subject to  e(phi) = 1,  0 <= e(g) <= 1 for g in generators.
///
/// The generator states describe the effect polytope from outside; the
/// optimum converges to `tau` as they densify. Classical models default to
/// the simplex vertices when `generators` is empty; quantum models require
/// an explicit set. Solved through the LP dual in the span of the generators.
LpTau tau_lp(const State &psi, const State &phi, std::span<const State> generators = {});

DistinguishingPair distinguishing_measurement(const State &phi);

/// Pure state psi with tau(psi, phi) = p. The component orthogonal to phi is
/// drawn from a generator seeded with `seed`; for qubits this is a Bloch
/// rotation of phi by theta = 2 acos(sqrt(p)) about a random equatorial axis.
State state_with_tau(const State &phi, double p, std::uint64_t seed);

/// e_phi(omega): transition probability extended to mixed states.
double mixed_tau(const State &omega, const State &phi);

/// Qubit pure states on the great circle through the Bloch vectors of a and
/// b (the xz circle when they are parallel), `count` points evenly spaced
/// starting at a.
std::vector<State> great_circle_states(const State &a, const State &b, int count);

/// Bloch vector of a qubit state.
Eigen::Vector3d bloch_vector(const State &qubit);
State qubit_from_bloch(const Eigen::Vector3d &r);

}  // namespace gptsim
