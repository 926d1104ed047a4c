#include "gptsim/rules.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gptsim/transition.h"

namespace gptsim {

ProbabilityRule ProbabilityRule::identity() {
    return ProbabilityRule(RuleFamily::identity);
}

ProbabilityRule ProbabilityRule::power(double alpha) {
    if (!std::isfinite(alpha) || alpha <= 0) {
        throw Error(ErrorCode::invalid_argument, "power rule needs a finite alpha > 0");
    }
    ProbabilityRule r(RuleFamily::power);
    r.alpha_ = alpha;
    return r;
}

ProbabilityRule ProbabilityRule::piecewise_quadratic() {
    return ProbabilityRule(RuleFamily::piecewise_quadratic);
}

ProbabilityRule ProbabilityRule::tabulated(std::vector<std::pair<double, double>> samples) {
    if (samples.size() < 2) {
        throw Error(ErrorCode::invalid_argument, "tabulated rule needs at least two samples");
    }
    std::sort(samples.begin(), samples.end());
    ProbabilityRule r(RuleFamily::tabulated);
    for (size_t k = 0; k < samples.size(); k++) {
        auto &[p, v] = samples[k];
        if (!std::isfinite(p) || !std::isfinite(v) || p < 0 || p > 1) {
            throw Error(ErrorCode::invalid_argument, "tabulated sample abscissa outside [0, 1]");
        }
        if (k > 0 && p == samples[k - 1].first) {
            throw Error(ErrorCode::invalid_argument, "duplicate tabulated abscissa");
        }
        if (v < 0 || v > 1) {
            v = std::clamp(v, 0.0, 1.0);
            r.clamped_++;
        }
    }
    r.samples_ = std::move(samples);
    return r;
}

std::string ProbabilityRule::name() const {
    switch (family_) {
        case RuleFamily::power: {
            std::ostringstream out;
            out << "power(" << alpha_ << ")";
            return out.str();
        }
        case RuleFamily::tabulated:
            return "tabulated(n=" + std::to_string(samples_.size()) + ")";
        default:
            return family_name(family_);
    }
}

double ProbabilityRule::operator()(double p) const {
    switch (family_) {
        case RuleFamily::identity:
            return p;
        case RuleFamily::power:
            return std::pow(p, alpha_);
        case RuleFamily::piecewise_quadratic:
            if (p <= 0.5) {
                return 2 * p * p;
            }
            return 1 - 2 * (1 - p) * (1 - p);
        case RuleFamily::tabulated: {
            if (p <= samples_.front().first) {
                return samples_.front().second;
            }
            if (p >= samples_.back().first) {
                return samples_.back().second;
            }
            auto hi = std::upper_bound(samples_.begin(), samples_.end(), p,
                                       [](double x, const std::pair<double, double> &s) {
                                           return x < s.first;
                                       });
            auto lo = hi - 1;
            double t = (p - lo->first) / (hi->first - lo->first);
            return lo->second + t * (hi->second - lo->second);
        }
    }
    return p;
}

std::string family_name(RuleFamily family) {
    switch (family) {
        case RuleFamily::identity:
            return "identity";
        case RuleFamily::power:
            return "power";
        case RuleFamily::piecewise_quadratic:
            return "piecewise-quadratic";
        case RuleFamily::tabulated:
            return "tabulated";
    }
    return "unknown";
}

RuleFamily parse_family(const std::string &name) {
    for (RuleFamily f :
         {RuleFamily::identity, RuleFamily::power, RuleFamily::piecewise_quadratic, RuleFamily::tabulated}) {
        if (family_name(f) == name) {
            return f;
        }
    }
    throw Error(ErrorCode::parse_error, "unknown rule family '" + name + "'");
}

double eval_rule(const ProbabilityRule &rule, double p) {
    if (!(p >= -kLinearTol && p <= 1.0 + kLinearTol)) {
        throw Error(ErrorCode::domain_error, "rule argument " + std::to_string(p) + " outside [0, 1]");
    }
    return std::clamp(rule(std::clamp(p, 0.0, 1.0)), 0.0, 1.0);
}

std::string curvature_name(Curvature c) {
    switch (c) {
        case Curvature::convex:
            return "convex";
        case Curvature::concave:
            return "concave";
        case Curvature::affine:
            return "affine";
    }
    return "unknown";
}

bool ConstraintReport::normalization_ok() const noexcept {
    return normalization_residual <= kConstraintTol;
}

bool ConstraintReport::midpoint_ok() const noexcept {
    return midpoint_residual <= kConstraintTol;
}

ConstraintReport check_constraints(const ProbabilityRule &rule, int grid_n, double curvature_tol) {
    if (grid_n < 3) {
        throw Error(ErrorCode::invalid_argument, "constraint grid needs at least 3 points");
    }
    ConstraintReport rep;
    rep.grid_n = grid_n;
    rep.curvature_tol = curvature_tol;

    const int last = grid_n - 1;
    std::vector<double> p(grid_n);
    std::vector<double> v(grid_n);
    for (int k = 0; k < grid_n; k++) {
        p[k] = static_cast<double>(k) / last;
        v[k] = eval_rule(rule, p[k]);
    }

    rep.boundary_residual = std::max(std::abs(v.front()), std::abs(v.back() - 1.0));
    rep.boundary_ok = rep.boundary_residual <= kConstraintTol;

    for (int k = 0; k < last; k++) {
        double drop = v[k] - v[k + 1];
        if (drop > kLinearTol) {
            rep.monotonicity_violations++;
            if (drop > rep.worst_monotonicity_drop) {
                rep.worst_monotonicity_drop = drop;
                rep.worst_monotonicity_pair = {p[k], p[k + 1]};
            }
        }
    }

    for (int k = 0; k < grid_n; k++) {
        double r = std::abs(v[k] + eval_rule(rule, 1.0 - p[k]) - 1.0);
        rep.normalization_residual = std::max(rep.normalization_residual, r);
    }
    rep.midpoint_residual = std::abs(eval_rule(rule, 0.5) - 0.5);

    // Interior point k classifies the stencil [p[k-1], p[k+1]]. Consecutive
    // points of one class form a segment; each segment ends at its last
    // point and the next one starts there.
    auto classify = [&](int k) {
        double second = v[k - 1] - 2 * v[k] + v[k + 1];
        if (second > curvature_tol) {
            return Curvature::convex;
        }
        if (second < -curvature_tol) {
            return Curvature::concave;
        }
        return Curvature::affine;
    };
    double start = 0.0;
    Curvature current = classify(1);
    for (int k = 2; k < last; k++) {
        Curvature c = classify(k);
        if (c != current) {
            rep.curvature.push_back({start, p[k - 1], current});
            start = p[k - 1];
            current = c;
        }
    }
    rep.curvature.push_back({start, 1.0, current});
    return rep;
}

double predict_pure(const ProbabilityRule &rule, const State &psi, const State &phi) {
    return eval_rule(rule, tau(psi, phi));
}

double predict_ensemble(const ProbabilityRule &rule, const Ensemble &ens, const State &phi) {
    double total = 0;
    for (const EnsembleMember &m : ens.members()) {
        double t = m.state.is_pure() ? tau(m.state, phi) : mixed_tau(m.state, phi);
        total += m.weight * eval_rule(rule, t);
    }
    return total;
}

double predict_average(const ProbabilityRule &rule, const State &omega, const State &phi) {
    return eval_rule(rule, mixed_tau(omega, phi));
}

}  // namespace gptsim
