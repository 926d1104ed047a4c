#include "gptsim/io.h"

#include <fstream>

#include <fmt/format.h>

namespace gptsim::io {

namespace {

template <typename F>
auto parsing(const char *what, F &&body) {
    try {
        return body();
    } catch (const json::exception &e) {
        throw Error(ErrorCode::parse_error, std::string(what) + ": " + e.what());
    }
}

json complex_pairs(const Eigen::Ref<const Eigen::VectorXcd> &values) {
    json out = json::array();
    for (Eigen::Index k = 0; k < values.size(); k++) {
        out.push_back({values[k].real(), values[k].imag()});
    }
    return out;
}

json matrix_pairs(const Eigen::MatrixXcd &m) {
    json out = json::array();
    for (Eigen::Index i = 0; i < m.rows(); i++) {
        for (Eigen::Index j = 0; j < m.cols(); j++) {
            out.push_back({m(i, j).real(), m(i, j).imag()});
        }
    }
    return out;
}

Eigen::VectorXcd read_pairs(const json &arr) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(arr.size()));
    for (size_t k = 0; k < arr.size(); k++) {
        const json &pair = arr.at(k);
        if (!pair.is_array() || pair.size() != 2) {
            throw Error(ErrorCode::parse_error, "complex entries must be [re, im] pairs");
        }
        v[static_cast<Eigen::Index>(k)] = complex(pair.at(0).get<double>(), pair.at(1).get<double>());
    }
    return v;
}

Eigen::MatrixXcd read_matrix(const json &arr, int d) {
    Eigen::VectorXcd flat = read_pairs(arr);
    if (flat.size() != d * d) {
        throw Error(ErrorCode::parse_error, "matrix must have d*d entries");
    }
    Eigen::MatrixXcd m(d, d);
    for (int i = 0; i < d; i++) {
        for (int j = 0; j < d; j++) {
            m(i, j) = flat[i * d + j];
        }
    }
    return m;
}

json real_array(const Eigen::VectorXd &v) {
    return json(std::vector<double>(v.data(), v.data() + v.size()));
}

Eigen::VectorXd read_reals(const json &arr) {
    std::vector<double> v = arr.get<std::vector<double>>();
    return Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

json to_json(const SystemModel &model) {
    if (model.is_quantum()) {
        return {{"kind", "quantum"}, {"d", model.dimension()}};
    }
    return {{"kind", "classical"}, {"n", model.dimension()}};
}

SystemModel model_from_json(const json &j) {
    return parsing("model", [&] {
        std::string kind = j.at("kind").get<std::string>();
        if (kind == "quantum") {
            return SystemModel::quantum(j.at("d").get<int>());
        }
        if (kind == "classical") {
            return SystemModel::classical(j.at("n").get<int>());
        }
        throw Error(ErrorCode::parse_error, "unknown model kind '" + kind + "'");
    });
}

json to_json(const State &state) {
    json out = {{"model", to_json(state.model())}, {"coeffs", real_array(state.coeffs())}};
    if (state.model().is_quantum()) {
        out["matrix"] = matrix_pairs(state.density());
    }
    return out;
}

State state_from_json(const json &j) {
    return parsing("state", [&] {
        SystemModel model = model_from_json(j.at("model"));
        Eigen::VectorXd coeffs = read_reals(j.at("coeffs"));
        if (model.is_quantum() && j.contains("matrix")) {
            return restore_state(model, coeffs, read_matrix(j.at("matrix"), model.dimension()));
        }
        return validate_state(model, coeffs);
    });
}

json to_json(const Effect &effect) {
    json out = {{"model", to_json(effect.model())}, {"coeffs", real_array(effect.covector())}};
    if (effect.model().is_quantum()) {
        out["matrix"] = matrix_pairs(effect.op());
    }
    return out;
}

Effect effect_from_json(const json &j) {
    return parsing("effect", [&] {
        SystemModel model = model_from_json(j.at("model"));
        Eigen::VectorXd coeffs = read_reals(j.at("coeffs"));
        if (model.is_quantum() && j.contains("matrix")) {
            return restore_effect(model, coeffs, read_matrix(j.at("matrix"), model.dimension()));
        }
        return effect_from_covector(model, coeffs);
    });
}

json to_json(const BipartiteState &psi) {
    json out = {{"model_a", to_json(psi.model_a())}, {"model_b", to_json(psi.model_b())}};
    if (psi.is_quantum()) {
        out["amplitudes"] = complex_pairs(psi.amplitudes());
    } else {
        out["points"] = {psi.point(Side::A), psi.point(Side::B)};
    }
    return out;
}

BipartiteState bipartite_from_json(const json &j) {
    return parsing("bipartite state", [&] {
        SystemModel a = model_from_json(j.at("model_a"));
        SystemModel b = model_from_json(j.at("model_b"));
        if (a.is_quantum()) {
            return BipartiteState::quantum(a, b, read_pairs(j.at("amplitudes")));
        }
        const json &points = j.at("points");
        return BipartiteState::classical_product(a, points.at(0).get<int>(), b, points.at(1).get<int>());
    });
}

json to_json(const Ensemble &ens, const State *phi) {
    json members = json::array();
    for (const EnsembleMember &m : ens.members()) {
        json entry = {{"weight", m.weight}, {"pure", m.state.is_pure()}, {"state", to_json(m.state)}};
        if (phi != nullptr) {
            entry["tau"] = m.state.is_pure() ? tau(m.state, *phi) : mixed_tau(m.state, *phi);
        }
        members.push_back(std::move(entry));
    }
    return members;
}

json to_json(const ProbabilityRule &rule) {
    json out = {{"family", family_name(rule.family())}};
    if (rule.family() == RuleFamily::power) {
        out["alpha"] = rule.alpha();
    }
    if (rule.family() == RuleFamily::tabulated) {
        json samples = json::array();
        for (const auto &[p, v] : rule.samples()) {
            samples.push_back({p, v});
        }
        out["samples"] = std::move(samples);
    }
    return out;
}

ProbabilityRule rule_from_json(const json &j) {
    return parsing("rule", [&] {
        RuleFamily family = parse_family(j.at("family").get<std::string>());
        switch (family) {
            case RuleFamily::identity:
                return ProbabilityRule::identity();
            case RuleFamily::power:
                return ProbabilityRule::power(j.at("alpha").get<double>());
            case RuleFamily::piecewise_quadratic:
                return ProbabilityRule::piecewise_quadratic();
            case RuleFamily::tabulated: {
                std::vector<std::pair<double, double>> samples;
                for (const json &s : j.at("samples")) {
                    if (!s.is_array() || s.size() != 2) {
                        throw Error(ErrorCode::parse_error, "tabulated samples must be [p, phi_p] pairs");
                    }
                    samples.emplace_back(s.at(0).get<double>(), s.at(1).get<double>());
                }
                return ProbabilityRule::tabulated(std::move(samples));
            }
        }
        throw Error(ErrorCode::parse_error, "unhandled rule family");
    });
}

ProbabilityRule rule_from_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::parse_error, "cannot open rule file '" + path + "'");
    }
    json j = parsing("rule file", [&] {
        return json::parse(in);
    });
    try {
        return rule_from_json(j);
    } catch (const Error &e) {
        if (e.code() == ErrorCode::parse_error) {
            throw;
        }
        throw Error(ErrorCode::parse_error, e.what());
    }
}

json to_json(const ConstraintReport &r) {
    json segments = json::array();
    for (const CurvatureSegment &s : r.curvature) {
        segments.push_back({{"lo", s.lo}, {"hi", s.hi}, {"kind", curvature_name(s.kind)}});
    }
    json monotone = {{"pass", r.monotone()}, {"violations", r.monotonicity_violations}};
    if (!r.monotone()) {
        monotone["worst_pair"] = {r.worst_monotonicity_pair.first, r.worst_monotonicity_pair.second};
        monotone["worst_drop"] = r.worst_monotonicity_drop;
    }
    return {
        {"grid_n", r.grid_n},
        {"curvature_tol", r.curvature_tol},
        {"boundary", {{"pass", r.boundary_ok}, {"residual", r.boundary_residual}}},
        {"monotonicity", std::move(monotone)},
        {"normalization", {{"pass", r.normalization_ok()}, {"residual", r.normalization_residual}}},
        {"midpoint", {{"pass", r.midpoint_ok()}, {"residual", r.midpoint_residual}}},
        {"curvature", std::move(segments)},
        {"pass", r.passes()},
    };
}

json to_json(const SignalingReport &r) {
    const Scenario &s = r.scenario;
    return {
        {"scenario",
         {{"rule", to_json(s.rule)},
          {"target", to_json(s.target)},
          {"p1", s.p1},
          {"p2", s.p2},
          {"lambda", s.lambda},
          {"mode", mode_name(s.mode)},
          {"seed", s.seed}}},
        {"p_bar", r.p_bar},
        {"P1", r.prob1},
        {"P2", r.prob2},
        {"gap", r.gap},
        {"protocol1", to_json(r.protocol1, &s.target)},
        {"protocol2", to_json(r.protocol2, &s.target)},
        {"marginal_residual", r.marginal_residual},
    };
}

json to_json(const LpDiagnostics &d) {
    return {{"generators", d.generators},
            {"reduced_dimension", d.reduced_dimension},
            {"phase1_iterations", d.phase1_iterations},
            {"phase2_iterations", d.phase2_iterations}};
}

json to_json(const PaperRow &row) {
    return {{"name", row.name},         {"computed", row.computed}, {"exact", row.exact},
            {"published", row.published}, {"tol", row.tol},          {"pass", row.pass}};
}

json to_json(const DetectionEstimate &e) {
    return {{"runs", e.runs},
            {"seed", e.seed},
            {"freq1", e.freq1},
            {"freq2", e.freq2},
            {"gap_estimate", e.gap_estimate},
            {"analytic_gap", e.analytic_gap},
            {"sigma", e.sigma},
            {"z", e.z_score()}};
}

std::string sweep_csv_header() {
    return "p1,p2,lambda,P1,P2,gap";
}

std::string sweep_csv_row(const GapSample &g) {
    return fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}", g.p1, g.p2, g.lambda, g.prob1, g.prob2,
                       g.gap);
}

std::string format_double(double v) {
    return fmt::format("{}", v);
}

}  // namespace gptsim::io
