#pragma once

#include <Eigen/Dense>

namespace gptsim::lp {

enum class Status { optimal, infeasible, unbounded };

struct Result {
    Status status = Status::infeasible;
    double objective = 0;
    Eigen::VectorXd x;
    int phase1_iterations = 0;
    int phase2_iterations = 0;
};

/// Dense two-phase tableau simplex for
///
///     minimize c.x  subject to  A x = b,  x >= 0.
///
/// Entering and leaving variables follow Bland's rule (lowest index), so the
/// pivot sequence is deterministic and cycling cannot occur.
Result minimize(const Eigen::VectorXd &c, const Eigen::MatrixXd &a, const Eigen::VectorXd &b, double eps = 1e-10);

}  // namespace gptsim::lp
