#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "gptsim/core.h"
#include "gptsim/rules.h"
#include "gptsim/signaling.h"
#include "gptsim/transition.h"

namespace gptsim::io {

using json = nlohmann::json;

// Models: {"kind": "quantum", "d": 2} or {"kind": "classical", "n": 3}.
json to_json(const SystemModel &model);
SystemModel model_from_json(const json &j);

// States: {"model": ..., "coeffs": [...]} plus, for quantum states, the
// density matrix as row-major [re, im] pairs under "matrix". Decoding keeps
// both arrays bit-for-bit.
json to_json(const State &state);
State state_from_json(const json &j);

json to_json(const Effect &effect);
Effect effect_from_json(const json &j);

// Bipartite: {"model_a": ..., "model_b": ..., "amplitudes": [[re, im], ...]}
// or, for classical products, "points": [a, b].
json to_json(const BipartiteState &psi);
BipartiteState bipartite_from_json(const json &j);

json to_json(const Ensemble &ens, const State *phi = nullptr);

// Rules: {"family": "power", "alpha": 1.5},
// {"family": "tabulated", "samples": [[p, phi_p], ...]}.
json to_json(const ProbabilityRule &rule);
ProbabilityRule rule_from_json(const json &j);
ProbabilityRule rule_from_file(const std::string &path);

json to_json(const ConstraintReport &report);
json to_json(const SignalingReport &report);
json to_json(const LpDiagnostics &diag);
json to_json(const PaperRow &row);
json to_json(const DetectionEstimate &est);

/// "p1,p2,lambda,P1,P2,gap"
std::string sweep_csv_header();
/// One CSV line (no newline), 17 significant digits, '.' decimal separator.
std::string sweep_csv_row(const GapSample &sample);

/// Shortest exact decimal form of a double, independent of locale.
std::string format_double(double v);

}  // namespace gptsim::io
