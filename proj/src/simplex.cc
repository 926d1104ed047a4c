#include "gptsim/simplex.h"

#include <limits>
#include <stdexcept>
#include <vector>

namespace gptsim::lp {

namespace {

class Tableau {
   public:
    // Rows 0..m-1 are constraints, row m is the objective (reduced costs,
    // with -z in the last column).
    Tableau(const Eigen::MatrixXd &a, const Eigen::VectorXd &b) : m_(a.rows()), n_(a.cols()) {
        t_ = Eigen::MatrixXd::Zero(m_ + 1, n_ + m_ + 1);
        basis_.resize(m_);
        for (Eigen::Index i = 0; i < m_; i++) {
            double sign = b[i] < 0 ? -1.0 : 1.0;
            t_.row(i).head(n_) = sign * a.row(i);
            t_(i, n_ + i) = 1.0;
            t_(i, rhs()) = sign * b[i];
            basis_[i] = n_ + i;
        }
    }

    Eigen::Index rhs() const {
        return n_ + m_;
    }

    void set_objective(const Eigen::VectorXd &cost) {
        t_.row(m_).setZero();
        t_.row(m_).head(cost.size()) = cost.transpose();
        for (Eigen::Index i = 0; i < m_; i++) {
            double cb = cost[basis_[i]];
            if (cb != 0) {
                t_.row(m_) -= cb * t_.row(i);
            }
        }
    }

    double objective() const {
        return -t_(m_, rhs());
    }

    // Returns the number of pivots, or -1 if unbounded.
    int run(Eigen::Index allowed_columns, double eps) {
        int iterations = 0;
        const int cap = 100 * static_cast<int>(m_ + n_ + 1);
        while (true) {
            Eigen::Index enter = -1;
            for (Eigen::Index j = 0; j < allowed_columns; j++) {
                if (t_(m_, j) < -eps) {
                    enter = j;
                    break;
                }
            }
            if (enter < 0) {
                return iterations;
            }
            Eigen::Index leave = -1;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (Eigen::Index i = 0; i < m_; i++) {
                double a = t_(i, enter);
                if (a <= eps) {
                    continue;
                }
                double ratio = t_(i, rhs()) / a;
                if (ratio < best_ratio - eps ||
                    (ratio <= best_ratio + eps && leave >= 0 && basis_[i] < basis_[leave])) {
                    best_ratio = std::min(best_ratio, ratio);
                    leave = i;
                }
            }
            if (leave < 0) {
                return -1;
            }
            pivot(leave, enter);
            if (++iterations > cap) {
                throw std::runtime_error("simplex iteration cap exceeded");
            }
        }
    }

    void pivot(Eigen::Index row, Eigen::Index col) {
        t_.row(row) /= t_(row, col);
        for (Eigen::Index i = 0; i <= m_; i++) {
            if (i != row && t_(i, col) != 0) {
                t_.row(i) -= t_(i, col) * t_.row(row);
            }
        }
        basis_[row] = col;
    }

    // Pivots artificial variables out of the basis where a structural column
    // can replace them. Rows that cannot be repaired are redundant.
    void expel_artificials(double eps) {
        for (Eigen::Index i = 0; i < m_; i++) {
            if (basis_[i] < n_) {
                continue;
            }
            for (Eigen::Index j = 0; j < n_; j++) {
                if (std::abs(t_(i, j)) > eps) {
                    pivot(i, j);
                    break;
                }
            }
        }
    }

    Eigen::VectorXd solution() const {
        Eigen::VectorXd x = Eigen::VectorXd::Zero(n_);
        for (Eigen::Index i = 0; i < m_; i++) {
            if (basis_[i] < n_) {
                x[basis_[i]] = t_(i, rhs());
            }
        }
        return x;
    }

    Eigen::Index rows() const {
        return m_;
    }
    Eigen::Index cols() const {
        return n_;
    }

   private:
    Eigen::Index m_;
    Eigen::Index n_;
    Eigen::MatrixXd t_;
    std::vector<Eigen::Index> basis_;
};

}  // namespace

Result minimize(const Eigen::VectorXd &c, const Eigen::MatrixXd &a, const Eigen::VectorXd &b, double eps) {
    if (c.size() != a.cols() || b.size() != a.rows()) {
        throw std::invalid_argument("lp::minimize: dimension mismatch");
    }
    Tableau tab(a, b);
    const Eigen::Index n = a.cols();
    const Eigen::Index m = a.rows();

    Eigen::VectorXd phase1_cost = Eigen::VectorXd::Zero(n + m);
    phase1_cost.tail(m).setOnes();
    tab.set_objective(phase1_cost);

    Result result;
    result.phase1_iterations = tab.run(n + m, eps);
    // Phase 1 is bounded below by zero, so it never reports unbounded.
    if (tab.objective() > 1e-9 * std::max(1.0, b.cwiseAbs().maxCoeff())) {
        result.status = Status::infeasible;
        return result;
    }
    tab.expel_artificials(eps);

    Eigen::VectorXd phase2_cost = Eigen::VectorXd::Zero(n + m);
    phase2_cost.head(n) = c;
    tab.set_objective(phase2_cost);
    int it = tab.run(n, eps);
    if (it < 0) {
        result.status = Status::unbounded;
        return result;
    }
    result.phase2_iterations = it;
    result.status = Status::optimal;
    result.x = tab.solution();
    result.objective = c.dot(result.x);
    return result;
}

}  // namespace gptsim::lp
