#include "cli.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "gptsim/error.h"
#include "gptsim/io.h"
#include "gptsim/signaling.h"
#include "gptsim/steering.h"
#include "gptsim/transition.h"

namespace gptsim::cli {
namespace {

using io::json;

enum class Format { pretty, json, csv };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Output {
    Format format = Format::pretty;
    std::string path;
};

struct RuleSource {
    std::string family;
    std::string file;
    double alpha = 1.0;
    CLI::Option *alpha_opt = nullptr;
};

void add_output_options(CLI::App *cmd, Output &o, const std::string &out_help = "Write the report to a file") {
    static const std::map<std::string, Format> formats{
        {"pretty", Format::pretty}, {"json", Format::json}, {"csv", Format::csv}};
    cmd->add_option("--format", o.format, "Output format: pretty, json or csv")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case))
        ->default_str("pretty");
    cmd->add_option("--out", o.path, out_help);
}

void add_rule_options(CLI::App *cmd, RuleSource &src) {
    CLI::Option *family = cmd->add_option("--family", src.family, "Built-in rule: identity, power, piecewise-quadratic")
                              ->check(CLI::IsMember({"identity", "power", "piecewise-quadratic"}));
    CLI::Option *file = cmd->add_option("--rule-file", src.file, "JSON rule definition");
    family->excludes(file);
    src.alpha_opt = cmd->add_option("--alpha", src.alpha, "Exponent of the power family");
}

ProbabilityRule resolve_rule(const RuleSource &src) {
    bool has_alpha = src.alpha_opt->count() > 0;
    if (src.family.empty() && src.file.empty()) {
        throw UsageError("a rule is required: pass --family or --rule-file");
    }
    if (!src.file.empty()) {
        if (has_alpha) {
            throw UsageError("--alpha cannot be combined with --rule-file");
        }
        return io::rule_from_file(src.file);
    }
    if (src.family == "power") {
        if (!has_alpha) {
            throw UsageError("--family power needs --alpha");
        }
        return ProbabilityRule::power(src.alpha);
    }
    if (has_alpha) {
        throw UsageError("--alpha only applies to --family power");
    }
    return src.family == "identity" ? ProbabilityRule::identity() : ProbabilityRule::piecewise_quadratic();
}

void emit(const Output &o, std::ostream &out, const std::string &text) {
    if (o.path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(o.path, std::ios::binary);
    if (!file) {
        throw UsageError("cannot open '" + o.path + "' for writing");
    }
    file << text;
    if (!file) {
        throw UsageError("failed writing '" + o.path + "'");
    }
}

// Human-readable number for pretty output; json and csv keep full precision.
std::string num(double v) {
    std::string s = fmt::format("{:.12g}", v);
    return s == "-0" ? "0" : s;
}

std::string status(bool pass) {
    return pass ? "PASS" : "FAIL";
}

std::string dump(const json &j) {
    return j.dump(2) + "\n";
}

SystemModel parse_model(const std::string &spec) {
    auto colon = spec.find(':');
    if (colon == std::string::npos) {
        throw UsageError("model must look like quantum:2 or classical:3");
    }
    std::string kind = spec.substr(0, colon);
    int dim = 0;
    try {
        size_t used = 0;
        dim = std::stoi(spec.substr(colon + 1), &used);
        if (used != spec.size() - colon - 1) {
            throw std::invalid_argument(spec);
        }
    } catch (const std::logic_error &) {
        throw UsageError("bad model dimension in '" + spec + "'");
    }
    if (kind == "quantum") {
        return SystemModel::quantum(dim);
    }
    if (kind == "classical") {
        return SystemModel::classical(dim);
    }
    throw UsageError("unknown model kind '" + kind + "'");
}

bool all_digits(const std::string &s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isdigit(c) != 0;
    });
}

json read_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot open '" + path + "'");
    }
    try {
        return json::parse(in);
    } catch (const json::exception &e) {
        throw Error(ErrorCode::parse_error, path + ": " + e.what());
    }
}

// Qubit names (0, 1, +, -, +i, -i), a computational index, or a JSON state file.
State parse_state(const std::string &spec, const SystemModel &model) {
    static const std::vector<std::string> names{"0", "1", "+", "-", "+i", "-i"};
    if (model == SystemModel::quantum(2) && std::find(names.begin(), names.end(), spec) != names.end()) {
        return pure_state(model, named_qubit_ket(spec));
    }
    if (all_digits(spec)) {
        return computational_state(model, std::stoi(spec));
    }
    return io::state_from_json(read_json_file(spec));
}

std::string bloch_text(const State &s) {
    if (s.model() != SystemModel::quantum(2)) {
        return s.model().describe();
    }
    Eigen::Vector3d r = bloch_vector(s);
    return fmt::format("bloch ({}, {}, {})", num(r.x()), num(r.y()), num(r.z()));
}

// rule-check

struct RuleCheckArgs {
    RuleSource rule;
    Output output;
    int grid = 4097;
    double tol = 1e-8;
};

int cmd_rule_check(const RuleCheckArgs &a, std::ostream &out) {
    ProbabilityRule rule = resolve_rule(a.rule);
    ConstraintReport r = check_constraints(rule, a.grid, a.tol);
    std::string text;
    switch (a.output.format) {
        case Format::json:
            text = dump({{"command", "rule-check"}, {"rule", io::to_json(rule)}, {"report", io::to_json(r)}});
            break;
        case Format::csv: {
            text = "check,status,value,lo,hi\n";
            text += fmt::format("boundary,{},{},0,1\n", status(r.boundary_ok), io::format_double(r.boundary_residual));
            text += fmt::format("monotonicity,{},{},0,1\n", status(r.monotone()), r.monotonicity_violations);
            text += fmt::format("normalization,{},{},0,1\n", status(r.normalization_ok()),
                                io::format_double(r.normalization_residual));
            text += fmt::format("midpoint,{},{},0.5,0.5\n", status(r.midpoint_ok()), io::format_double(r.midpoint_residual));
            for (const CurvatureSegment &s : r.curvature) {
                text += fmt::format("curvature,{},,{},{}\n", curvature_name(s.kind), io::format_double(s.lo), io::format_double(s.hi));
            }
            break;
        }
        case Format::pretty: {
            text = fmt::format("rule: {}\ngrid: {} points, curvature tol {}\n", rule.name(), r.grid_n,
                               num(r.curvature_tol));
            if (rule.clamped_samples() > 0) {
                text += fmt::format("note: {} sample values clamped into [0, 1]\n", rule.clamped_samples());
            }
            text += fmt::format("  boundary       {}  residual {}\n", status(r.boundary_ok), num(r.boundary_residual));
            text += fmt::format("  monotonicity   {}  violations {}", status(r.monotone()), r.monotonicity_violations);
            if (!r.monotone()) {
                text += fmt::format(", worst drop {} on [{}, {}]", num(r.worst_monotonicity_drop),
                                    num(r.worst_monotonicity_pair.first), num(r.worst_monotonicity_pair.second));
            }
            text += "\n";
            text += fmt::format("  normalization  {}  residual {}\n", status(r.normalization_ok()),
                                num(r.normalization_residual));
            text += fmt::format("  midpoint       {}  residual {}\n", status(r.midpoint_ok()), num(r.midpoint_residual));
            text += "curvature:\n";
            for (const CurvatureSegment &s : r.curvature) {
                text += fmt::format("  [{}, {}] {}\n", num(s.lo), num(s.hi), curvature_name(s.kind));
            }
            text += fmt::format("result: {}\n", status(r.passes()));
            break;
        }
    }
    emit(a.output, out, text);
    return r.passes() ? kExitPass : kExitCheckFailed;
}

// tau

struct TauArgs {
    Output output;
    std::string psi;
    std::string phi;
    std::string model = "quantum:2";
    std::string method = "both";
    int grid = 720;
    double tol = 5e-3;
    bool verbose = false;
};

int cmd_tau(const TauArgs &a, std::ostream &out) {
    SystemModel model = parse_model(a.model);
    State psi = parse_state(a.psi, model);
    State phi = parse_state(a.phi, model);
    bool want_closed = a.method != "lp";
    bool want_lp = a.method != "closed";

    std::optional<double> closed;
    if (want_closed) {
        closed = psi.is_pure() ? tau(psi, phi) : mixed_tau(psi, phi);
    }
    std::optional<LpTau> lp;
    if (want_lp) {
        std::vector<State> generators;
        if (psi.model().is_quantum()) {
            if (psi.model() != SystemModel::quantum(2)) {
                throw UsageError("the LP method supports qubits and classical models");
            }
            generators = great_circle_states(psi, phi, a.grid);
        }
        lp = tau_lp(psi, phi, generators);
    }
    std::optional<double> diff;
    if (closed && lp) {
        diff = std::abs(lp->value - *closed);
    }
    bool pass = !diff || *diff <= a.tol;

    std::string text;
    switch (a.output.format) {
        case Format::json: {
            json j = {{"command", "tau"}, {"model", io::to_json(psi.model())}, {"psi", io::to_json(psi)},
                      {"phi", io::to_json(phi)}};
            if (closed) {
                j["closed"] = *closed;
            }
            if (lp) {
                j["lp"] = {{"value", lp->value}, {"diagnostics", io::to_json(lp->diagnostics)}};
            }
            if (diff) {
                j["difference"] = *diff;
                j["tol"] = a.tol;
                j["pass"] = pass;
            }
            text = dump(j);
            break;
        }
        case Format::csv:
            text = "method,value\n";
            if (closed) {
                text += fmt::format("closed,{:.17g}\n", *closed);
            }
            if (lp) {
                text += fmt::format("lp,{:.17g}\n", lp->value);
            }
            break;
        case Format::pretty:
            text = fmt::format("psi: {}\nphi: {}\n", bloch_text(psi), bloch_text(phi));
            if (closed) {
                text += fmt::format("tau closed form: {}\n", num(*closed));
            }
            if (lp) {
                text += fmt::format("tau lp:          {}\n", num(lp->value));
                if (a.verbose) {
                    const LpDiagnostics &d = lp->diagnostics;
                    text += fmt::format("  generators {}, reduced dimension {}, iterations {} + {}\n", d.generators,
                                        d.reduced_dimension, d.phase1_iterations, d.phase2_iterations);
                }
            }
            if (diff) {
                text += fmt::format("difference: {} (tol {}) {}\n", num(*diff), num(a.tol), status(pass));
            }
            break;
    }
    emit(a.output, out, text);
    return pass ? kExitPass : kExitCheckFailed;
}

// steer

struct SteerArgs {
    Output output;
    std::string basis = "z";
    std::string state;
    std::string phi = "0";
};

Measurement basis_measurement(const SystemModel &model, const std::string &basis) {
    if (basis == "z") {
        return computational_basis_measurement(model);
    }
    if (model != SystemModel::quantum(2)) {
        throw UsageError("basis '" + basis + "' needs a qubit on side A");
    }
    std::array<Eigen::VectorXcd, 2> kets;
    if (basis == "x") {
        kets = {named_qubit_ket("+"), named_qubit_ket("-")};
    } else {
        kets = {named_qubit_ket("+i"), named_qubit_ket("-i")};
    }
    return projective_measurement(model, kets);
}

int cmd_steer(const SteerArgs &a, std::ostream &out) {
    BipartiteState psi = a.state.empty() ? maximally_entangled(2) : io::bipartite_from_json(read_json_file(a.state));
    Measurement alice = basis_measurement(psi.model_a(), a.basis);
    State phi = parse_state(a.phi, psi.model_b());
    Ensemble ens = steer(psi, alice);
    State bob = marginal(psi, Side::B);
    double residual = verify_no_signaling_marginal(psi, alice, computational_basis_measurement(psi.model_a()));

    std::string text;
    switch (a.output.format) {
        case Format::json:
            text = dump({{"command", "steer"},
                         {"basis", a.basis},
                         {"shared", io::to_json(psi)},
                         {"phi", io::to_json(phi)},
                         {"ensemble", io::to_json(ens, &phi)},
                         {"marginal", io::to_json(bob)},
                         {"marginal_residual", residual}});
            break;
        case Format::csv: {
            text = "outcome,weight,pure,tau";
            for (Eigen::Index k = 0; k < bob.coeffs().size(); k++) {
                text += fmt::format(",c{}", k);
            }
            text += "\n";
            for (size_t i = 0; i < ens.size(); i++) {
                const EnsembleMember &m = ens.members()[i];
                double t = m.state.is_pure() ? tau(m.state, phi) : mixed_tau(m.state, phi);
                text += fmt::format("{},{:.17g},{},{:.17g}", i, m.weight, m.state.is_pure() ? 1 : 0, t);
                for (double c : m.state.coeffs()) {
                    text += fmt::format(",{:.17g}", c);
                }
                text += "\n";
            }
            break;
        }
        case Format::pretty:
            text = fmt::format("shared: {} x {}, alice measures {}\n", psi.model_a().describe(),
                               psi.model_b().describe(), a.basis);
            for (size_t i = 0; i < ens.size(); i++) {
                const EnsembleMember &m = ens.members()[i];
                double t = m.state.is_pure() ? tau(m.state, phi) : mixed_tau(m.state, phi);
                text += fmt::format("  outcome {}: weight {}, {} state {}, tau {}\n", i, num(m.weight),
                                    m.state.is_pure() ? "pure" : "mixed", bloch_text(m.state), num(t));
            }
            text += fmt::format("bob marginal: {}\n", bloch_text(bob));
            text += fmt::format("marginal residual vs z: {}\n", num(residual));
            break;
    }
    emit(a.output, out, text);
    return kExitPass;
}

// gap

struct GapArgs {
    RuleSource rule;
    Output output;
    double p1 = 0;
    double p2 = 0;
    double lambda = 0.5;
    std::string mode = "trivial-average";
    std::uint64_t seed = 0;
    long samples = 0;
};

int cmd_gap(const GapArgs &a, std::ostream &out) {
    ProbabilityRule rule = resolve_rule(a.rule);
    SignalingReport r = run_scenario(make_scenario(rule, a.p1, a.p2, a.lambda, parse_mode(a.mode), a.seed));
    std::optional<DetectionEstimate> det;
    if (a.samples > 0) {
        det = simulate_detection(r.prob1, r.prob2, a.samples, a.seed);
    }

    std::string text;
    switch (a.output.format) {
        case Format::json: {
            json j = {{"command", "gap"}, {"seed", a.seed}, {"report", io::to_json(r)}};
            if (det) {
                j["detection"] = io::to_json(*det);
            }
            text = dump(j);
            break;
        }
        case Format::csv: {
            GapSample g{a.p1, a.p2, a.lambda, r.prob1, r.prob2, r.gap};
            text = fmt::format("# seed={}\n{}", a.seed, io::sweep_csv_header());
            text += det ? ",runs,gap_estimate,sigma\n" : "\n";
            text += io::sweep_csv_row(g);
            if (det) {
                text += fmt::format(",{},{:.17g},{:.17g}", det->runs, det->gap_estimate, det->sigma);
            }
            text += "\n";
            break;
        }
        case Format::pretty:
            text = fmt::format("# seed: {}\n", a.seed);
            text += fmt::format("rule: {}\n", rule.name());
            text += fmt::format("p1 {}, p2 {}, lambda {}, mode {}\n", num(a.p1), num(a.p2), num(a.lambda),
                                mode_name(r.scenario.mode));
            text += fmt::format("p_bar: {}\nP1: {}\nP2: {}\ngap: {}\n", num(r.p_bar), num(r.prob1), num(r.prob2),
                                num(r.gap));
            text += fmt::format("marginal residual: {}\n", num(r.marginal_residual));
            if (det) {
                text += fmt::format("detection over {} runs: estimate {}, sigma {}, z {}\n", det->runs,
                                    num(det->gap_estimate), num(det->sigma), num(det->z_score()));
            }
            break;
    }
    emit(a.output, out, text);
    return kExitPass;
}

// scan

struct ScanArgs {
    RuleSource rule;
    Output output;
    std::string sweep_path;
    int grid = 101;
    int refine = 40;
    std::uint64_t seed = 0;
    int samples = 0;
    double tol = 1e-10;
};

int cmd_scan(const ScanArgs &a, std::ostream &out) {
    ProbabilityRule rule = resolve_rule(a.rule);
    if (a.grid < 3) {
        throw UsageError("--grid must be at least 3");
    }
    std::ofstream sweep;
    std::function<void(const GapSample &)> sink;
    if (!a.sweep_path.empty()) {
        sweep.open(a.sweep_path, std::ios::binary);
        if (!sweep) {
            throw UsageError("cannot open '" + a.sweep_path + "' for writing");
        }
        sweep << io::sweep_csv_header() << '\n';
        sink = [&sweep](const GapSample &g) {
            sweep << io::sweep_csv_row(g) << '\n';
        };
    }
    SearchResult res = max_gap_search(rule, a.grid, a.refine, a.seed, sink);
    if (sweep.is_open()) {
        sweep.close();
        if (!sweep) {
            throw UsageError("failed writing '" + a.sweep_path + "'");
        }
    }
    std::optional<AffinityCertificate> cert;
    if (a.samples > 0) {
        cert = affinity_certificate(rule, a.samples, a.tol, a.seed);
    }
    const SignalingReport &w = res.witness;
    GapSample witness{w.scenario.p1, w.scenario.p2, w.scenario.lambda, w.prob1, w.prob2, w.gap};

    auto sample_json = [](const GapSample &g) {
        return json{{"p1", g.p1}, {"p2", g.p2}, {"lambda", g.lambda}, {"P1", g.prob1}, {"P2", g.prob2},
                    {"gap", g.gap}};
    };
    auto sample_text = [](const GapSample &g) {
        return fmt::format("p1 {}, p2 {}, lambda {}: gap {}", num(g.p1), num(g.p2), num(g.lambda), num(g.gap));
    };

    std::string text;
    switch (a.output.format) {
        case Format::json: {
            json j = {{"command", "scan"},
                      {"seed", a.seed},
                      {"rule", io::to_json(rule)},
                      {"grid", a.grid},
                      {"refine", a.refine},
                      {"evaluations", res.evaluations},
                      {"grid_best", sample_json(res.grid_best)},
                      {"refined", sample_json(res.refined)},
                      {"witness", io::to_json(w)}};
            if (cert) {
                j["certificate"] = {{"samples", cert->samples},
                                    {"tol", cert->tol},
                                    {"seed", cert->seed},
                                    {"max_abs_gap", cert->max_abs_gap},
                                    {"pass", cert->passed}};
            }
            text = dump(j);
            break;
        }
        case Format::csv:
            text = fmt::format("# seed={}\nstage,{}\n", a.seed, io::sweep_csv_header());
            text += "grid," + io::sweep_csv_row(res.grid_best) + "\n";
            text += "refined," + io::sweep_csv_row(res.refined) + "\n";
            text += "witness," + io::sweep_csv_row(witness) + "\n";
            break;
        case Format::pretty:
            text = fmt::format("# seed: {}\n", a.seed);
            text += fmt::format("rule: {}\n", rule.name());
            text += fmt::format("grid {}, refine {}, evaluations {}\n", a.grid, a.refine, res.evaluations);
            text += "grid best: " + sample_text(res.grid_best) + "\n";
            text += "refined:   " + sample_text(res.refined) + "\n";
            text += fmt::format("witness: P1 {}, P2 {}, gap {}\n", num(w.prob1), num(w.prob2), num(w.gap));
            if (cert) {
                text += fmt::format("affinity certificate: {} samples, max |gap| {}, tol {} {}\n", cert->samples,
                                    num(cert->max_abs_gap), num(cert->tol), status(cert->passed));
            }
            break;
    }
    emit(a.output, out, text);
    return !cert || cert->passed ? kExitPass : kExitCheckFailed;
}

// reproduce-paper

struct ReproduceArgs {
    Output output;
    double tol = 0;
    CLI::Option *tol_opt = nullptr;
};

int cmd_reproduce(const ReproduceArgs &a, std::ostream &out) {
    std::optional<double> tol;
    if (a.tol_opt->count() > 0) {
        if (!(a.tol > 0)) {
            throw UsageError("--tol must be positive");
        }
        tol = a.tol;
    }
    std::vector<PaperRow> rows = reproduce_paper(tol);
    bool all = std::all_of(rows.begin(), rows.end(), [](const PaperRow &r) {
        return r.pass;
    });

    std::string text;
    switch (a.output.format) {
        case Format::json: {
            json list = json::array();
            for (const PaperRow &r : rows) {
                list.push_back(io::to_json(r));
            }
            text = dump({{"command", "reproduce-paper"}, {"rows", list}, {"pass", all}});
            break;
        }
        case Format::csv:
            text = "name,computed,exact,published,tol,pass\n";
            for (const PaperRow &r : rows) {
                text += fmt::format("{},{:.17g},{:.17g},{:.{}f},{:.17g},{}\n", r.name, r.computed, r.exact,
                                    r.published, r.published_decimals, r.tol, r.pass ? 1 : 0);
            }
            break;
        case Format::pretty:
            text = fmt::format("{:<14}{:<22}{:<22}{:<16}{:<10}{}\n", "row", "computed", "exact", "published", "tol",
                               "status");
            for (const PaperRow &r : rows) {
                text += fmt::format("{:<14}{:<22}{:<22}{:<16}{:<10}{}\n", r.name, num(r.computed), num(r.exact),
                                    fmt::format("{:.{}f}", r.published, r.published_decimals), num(r.tol),
                                    status(r.pass));
            }
            text += fmt::format("result: {}\n", status(all));
            break;
    }
    emit(a.output, out, text);
    return all ? kExitPass : kExitCheckFailed;
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Probability-rule auditing and signaling experiments on qubit GPT models", "gptsim"};
    app.require_subcommand(1, 1);

    RuleCheckArgs rc;
    CLI::App *rule_check = app.add_subcommand("rule-check", "Audit a probability rule against the rule constraints");
    add_rule_options(rule_check, rc.rule);
    add_output_options(rule_check, rc.output);
    rule_check->add_option("--grid", rc.grid, "Grid points on [0, 1]")->capture_default_str()->check(
        CLI::Range(3, 100000000));
    rule_check->add_option("--tol", rc.tol, "Curvature threshold on second differences")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);

    TauArgs ta;
    CLI::App *tau_cmd = app.add_subcommand("tau", "Transition probability between two pure states");
    add_output_options(tau_cmd, ta.output);
    tau_cmd->add_option("--psi", ta.psi, "State: 0, 1, +, -, +i, -i, an index, or a JSON state file")->required();
    tau_cmd->add_option("--phi", ta.phi, "Target pure state, same forms as --psi")->required();
    tau_cmd->add_option("--model", ta.model, "quantum:d or classical:n")->capture_default_str();
    tau_cmd->add_option("--method", ta.method, "closed, lp or both")
        ->capture_default_str()
        ->check(CLI::IsMember({"closed", "lp", "both"}));
    tau_cmd->add_option("--grid", ta.grid, "Great-circle generator count for qubit LPs")->capture_default_str();
    tau_cmd->add_option("--tol", ta.tol, "Allowed LP vs closed-form difference")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    tau_cmd->add_flag("--verbose", ta.verbose, "Print LP diagnostics");

    SteerArgs sa;
    CLI::App *steer_cmd = app.add_subcommand("steer", "Steer Bob's system by measuring Alice's side");
    add_output_options(steer_cmd, sa.output);
    steer_cmd->add_option("--basis", sa.basis, "Alice's basis: z, x or y")
        ->capture_default_str()
        ->check(CLI::IsMember({"z", "x", "y"}));
    steer_cmd->add_option("--state", sa.state, "JSON bipartite state (default: qubit Bell state)");
    steer_cmd->add_option("--phi", sa.phi, "Reference state on Bob's side")->capture_default_str();

    GapArgs ga;
    CLI::App *gap = app.add_subcommand("gap", "Signaling gap between the two protocols");
    add_rule_options(gap, ga.rule);
    add_output_options(gap, ga.output);
    gap->add_option("--p1", ga.p1, "Transition probability of the first member")->required();
    gap->add_option("--p2", ga.p2, "Transition probability of the second member")->required();
    gap->add_option("--lambda", ga.lambda, "Weight of the first member")->capture_default_str();
    gap->add_option("--mode", ga.mode, "Protocol 2: trivial-average or steered-uniform")
        ->capture_default_str()
        ->check(CLI::IsMember({"trivial-average", "steered-uniform", "trivial", "steered"}));
    gap->add_option("--seed", ga.seed, "Seed for state preparation and detection")->capture_default_str();
    gap->add_option("--samples", ga.samples, "Simulated runs per protocol (0: none)")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);

    ScanArgs sc;
    CLI::App *scan = app.add_subcommand("scan", "Search for the largest signaling gap");
    add_rule_options(scan, sc.rule);
    add_output_options(scan, sc.output, "Write the full grid sweep as CSV");
    scan->add_option("--grid", sc.grid, "Grid points per axis")->capture_default_str();
    scan->add_option("--refine", sc.refine, "Coordinate search rounds")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    scan->add_option("--seed", sc.seed, "Seed for the witness and certificate")->capture_default_str();
    scan->add_option("--samples", sc.samples, "Random scenarios for the affinity certificate (0: skip)")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    scan->add_option("--tol", sc.tol, "Certificate bound on |gap|")->capture_default_str()->check(CLI::PositiveNumber);

    ReproduceArgs ra;
    CLI::App *reproduce = app.add_subcommand("reproduce-paper", "Recompute the reference example values");
    add_output_options(reproduce, ra.output);
    ra.tol_opt = reproduce->add_option("--tol", ra.tol, "Override every row's tolerance");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitPass : kExitUsage;
    }

    try {
        if (rule_check->parsed()) {
            return cmd_rule_check(rc, out);
        }
        if (tau_cmd->parsed()) {
            return cmd_tau(ta, out);
        }
        if (steer_cmd->parsed()) {
            return cmd_steer(sa, out);
        }
        if (gap->parsed()) {
            return cmd_gap(ga, out);
        }
        if (scan->parsed()) {
            sc.sweep_path = sc.output.path;
            sc.output.path.clear();
            return cmd_scan(sc, out);
        }
        return cmd_reproduce(ra, out);
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
    }
    return kExitUsage;
}

}  // namespace gptsim::cli
