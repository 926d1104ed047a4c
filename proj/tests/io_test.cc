#include "gptsim/io.h"

#include <locale>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "gptsim/steering.h"
#include "testing.h"

using namespace gptsim;
using gptsim::io::json;

namespace {

const SystemModel kQubit = SystemModel::quantum(2);

bool bit_equal(const Eigen::VectorXd &a, const Eigen::VectorXd &b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) == 0;
}

bool bit_equal(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b) {
    return a.rows() == b.rows() && a.cols() == b.cols() &&
           std::memcmp(a.data(), b.data(), sizeof(complex) * a.size()) == 0;
}

std::string temp_path(const std::string &name) {
    return ::testing::TempDir() + name;
}

}  // namespace

TEST(Json, model_format) {
    EXPECT_EQ(io::to_json(kQubit).dump(), R"({"d":2,"kind":"quantum"})");
    EXPECT_EQ(io::to_json(SystemModel::classical(3)).dump(), R"({"kind":"classical","n":3})");
    EXPECT_EQ(io::model_from_json(json::parse(R"({"kind":"classical","n":4})")), SystemModel::classical(4));
    EXPECT_GPT_ERROR(io::model_from_json(json::parse(R"({"kind":"boxworld","n":4})")), ErrorCode::parse_error);
    EXPECT_GPT_ERROR(io::model_from_json(json::parse(R"({"kind":"quantum"})")), ErrorCode::parse_error);
    EXPECT_GPT_ERROR(io::model_from_json(json::parse(R"({"kind":"quantum","d":"two"})")), ErrorCode::parse_error);
}

TEST(Json, state_layout) {
    State plus = pure_state(kQubit, named_qubit_ket("+"));
    json j = io::to_json(plus);
    EXPECT_EQ(j["model"]["kind"], "quantum");
    EXPECT_EQ(j["coeffs"].size(), 4u);
    ASSERT_EQ(j["matrix"].size(), 4u);
    EXPECT_NEAR(j["matrix"][1][0].get<double>(), 0.5, 1e-15);
    EXPECT_EQ(j["matrix"][1][1].get<double>(), 0.0);
}

TEST(Json, state_from_coeffs_only) {
    json j = json::parse(R"({"model":{"kind":"quantum","d":2},"coeffs":[0.7071067811865476,0,0,0]})");
    State s = io::state_from_json(j);
    EXPECT_FALSE(s.is_pure());
    json c = json::parse(R"({"model":{"kind":"classical","n":2},"coeffs":[0.25,0.75]})");
    EXPECT_EQ(io::state_from_json(c).coeffs()[1], 0.75);
    json bad = json::parse(R"({"model":{"kind":"classical","n":2},"coeffs":[0.25,0.5]})");
    EXPECT_GPT_ERROR(io::state_from_json(bad), ErrorCode::not_normalized);
    json garbage = json::parse(R"({"model":{"kind":"classical","n":2},"coeffs":"x"})");
    EXPECT_GPT_ERROR(io::state_from_json(garbage), ErrorCode::parse_error);
}

TEST(Json, rejects_inconsistent_matrix) {
    json j = io::to_json(pure_state(kQubit, named_qubit_ket("0")));
    j["matrix"][0][0] = 0.5;
    EXPECT_GPT_ERROR(io::state_from_json(j), ErrorCode::invalid_argument);
    j["matrix"] = json::array({json::array({1, 0})});
    EXPECT_GPT_ERROR(io::state_from_json(j), ErrorCode::parse_error);
}

TEST(Json, bipartite_roundtrip) {
    std::mt19937_64 rng(71);
    SystemModel q3 = SystemModel::quantum(3);
    BipartiteState psi = BipartiteState::quantum(kQubit, q3, gptsim::testing::random_ket(rng, 6));
    BipartiteState back = io::bipartite_from_json(json::parse(io::to_json(psi).dump()));
    EXPECT_EQ(back.model_a(), kQubit);
    EXPECT_EQ(back.model_b(), q3);
    EXPECT_TRUE(std::memcmp(back.amplitudes().data(), psi.amplitudes().data(), sizeof(complex) * 6) == 0);

    SystemModel c2 = SystemModel::classical(2);
    BipartiteState cp = BipartiteState::classical_product(c2, 1, c2, 0);
    json cj = io::to_json(cp);
    EXPECT_EQ(cj["points"], json::array({1, 0}));
    BipartiteState cback = io::bipartite_from_json(cj);
    EXPECT_EQ(cback.point(Side::A), 1);
    EXPECT_EQ(cback.point(Side::B), 0);
}

TEST(Json, rule_roundtrip) {
    for (const ProbabilityRule &r :
         {ProbabilityRule::identity(), ProbabilityRule::power(1.5), ProbabilityRule::piecewise_quadratic(),
          ProbabilityRule::tabulated({{0, 0}, {0.3, 0.1}, {1, 1}})}) {
        ProbabilityRule back = io::rule_from_json(io::to_json(r));
        EXPECT_EQ(back.name(), r.name());
        for (double p : {0.0, 0.2, 0.5, 0.77, 1.0}) {
            EXPECT_EQ(back(p), r(p));
        }
    }
    EXPECT_EQ(io::to_json(ProbabilityRule::power(1.5)).dump(), R"({"alpha":1.5,"family":"power"})");
    EXPECT_GPT_ERROR(io::rule_from_json(json::parse(R"({"family":"power"})")), ErrorCode::parse_error);
    EXPECT_GPT_ERROR(io::rule_from_json(json::parse(R"({"family":"cubic"})")), ErrorCode::parse_error);
    EXPECT_GPT_ERROR(io::rule_from_json(json::parse(R"({"family":"tabulated","samples":[[0,0,1]]})")),
                     ErrorCode::parse_error);
}

TEST(Json, rule_file) {
    std::string path = temp_path("rule_ok.json");
    std::ofstream(path) << R"({"family": "tabulated", "samples": [[0, 0], [0.5, 0.5], [1, 1]]})";
    EXPECT_EQ(io::rule_from_file(path).name(), "tabulated(n=3)");

    std::string broken = temp_path("rule_broken.json");
    std::ofstream(broken) << R"({"family": "power", "alpha": )";
    EXPECT_GPT_ERROR(io::rule_from_file(broken), ErrorCode::parse_error);

    std::string invalid = temp_path("rule_invalid.json");
    std::ofstream(invalid) << R"({"family": "power", "alpha": -2})";
    EXPECT_GPT_ERROR(io::rule_from_file(invalid), ErrorCode::parse_error);

    EXPECT_GPT_ERROR(io::rule_from_file(temp_path("does_not_exist.json")), ErrorCode::parse_error);
    std::remove(path.c_str());
    std::remove(broken.c_str());
    std::remove(invalid.c_str());
}

TEST(Json, constraint_report) {
    json j = io::to_json(check_constraints(ProbabilityRule::power(1.5)));
    EXPECT_FALSE(j["pass"].get<bool>());
    EXPECT_FALSE(j["normalization"]["pass"].get<bool>());
    EXPECT_TRUE(j["monotonicity"]["pass"].get<bool>());
    EXPECT_FALSE(j["monotonicity"].contains("worst_pair"));
    EXPECT_EQ(j["curvature"][0]["kind"], "convex");
    EXPECT_EQ(j["grid_n"], 4097);
}

TEST(Json, signaling_report) {
    SignalingReport r = run_scenario(make_scenario(ProbabilityRule::piecewise_quadratic(), 0.2, 0.4, 0.5));
    json j = io::to_json(r);
    EXPECT_NEAR(j["gap"].get<double>(), 0.02, 1e-9);
    EXPECT_EQ(j["scenario"]["mode"], "trivial-average");
    EXPECT_EQ(j["scenario"]["rule"]["family"], "piecewise-quadratic");
    EXPECT_EQ(j["protocol1"].size(), 2u);
    EXPECT_NEAR(j["protocol1"][0]["tau"].get<double>(), 0.2, 1e-9);
    EXPECT_FALSE(j["protocol2"][0]["pure"].get<bool>());
    EXPECT_NEAR(j["protocol2"][0]["tau"].get<double>(), 0.3, 1e-9);
}

TEST(Csv, sweep_rows) {
    EXPECT_EQ(io::sweep_csv_header(), "p1,p2,lambda,P1,P2,gap");
    GapSample g{0.1, 1.0, 0.5, 1.0 / 3, 0.25, 0.1 + 0.2};
    EXPECT_EQ(io::sweep_csv_row(g),
              "0.10000000000000001,1,0.5,0.33333333333333331,0.25,0.30000000000000004");
    EXPECT_EQ(io::format_double(0.1), "0.1");
    EXPECT_EQ(io::format_double(1e-300), "1e-300");
}

TEST(Csv, locale_independent) {
    struct comma_decimal : std::numpunct<char> {
        char do_decimal_point() const override {
            return ',';
        }
    };
    std::locale saved = std::locale::global(std::locale(std::locale::classic(), new comma_decimal));
    GapSample g{0.25, 0.5, 0.75, 0.1, 0.2, -0.1};
    std::string row = io::sweep_csv_row(g);
    std::string single = io::format_double(2.5);
    std::locale::global(saved);
    EXPECT_EQ(row, "0.25,0.5,0.75,0.10000000000000001,0.20000000000000001,-0.10000000000000001");
    EXPECT_EQ(single, "2.5");
}

// Properties.

TEST(JsonProperties, states_roundtrip_bit_exactly) {
    std::mt19937_64 rng(72);
    for (int trial = 0; trial < 300; trial++) {
        SystemModel m = trial % 4 == 3 ? SystemModel::classical(2 + trial % 5) : SystemModel::quantum(2 + trial % 4);
        State s = !m.is_quantum()         ? gptsim::testing::random_classical(rng, m)
                  : trial % 2 == 0 ? gptsim::testing::random_pure(rng, m)
                                   : gptsim::testing::random_mixed(rng, m);
        State back = io::state_from_json(json::parse(io::to_json(s).dump()));
        EXPECT_TRUE(bit_equal(back.coeffs(), s.coeffs())) << trial;
        EXPECT_TRUE(bit_equal(back.density(), s.density())) << trial;
        EXPECT_EQ(back.is_pure(), s.is_pure());
        EXPECT_EQ(back.model(), s.model());
    }
}

TEST(JsonProperties, effects_roundtrip_bit_exactly) {
    std::mt19937_64 rng(73);
    for (int trial = 0; trial < 200; trial++) {
        SystemModel m = trial % 4 == 3 ? SystemModel::classical(3) : SystemModel::quantum(2 + trial % 3);
        Effect e = gptsim::testing::random_effect(rng, m);
        Effect back = io::effect_from_json(json::parse(io::to_json(e).dump()));
        EXPECT_TRUE(bit_equal(back.covector(), e.covector())) << trial;
        EXPECT_TRUE(bit_equal(back.op(), e.op())) << trial;
    }
}

TEST(JsonProperties, steered_states_roundtrip) {
    // Conditional states from steering carry rounding noise; they must still
    // survive serialization unchanged.
    std::mt19937_64 rng(74);
    for (int trial = 0; trial < 50; trial++) {
        BipartiteState psi = BipartiteState::quantum(kQubit, kQubit, gptsim::testing::random_ket(rng, 4));
        Ensemble ens = steer(psi, computational_basis_measurement(kQubit));
        for (const EnsembleMember &m : ens.members()) {
            State back = io::state_from_json(json::parse(io::to_json(m.state).dump()));
            EXPECT_TRUE(bit_equal(back.coeffs(), m.state.coeffs()));
            EXPECT_TRUE(bit_equal(back.density(), m.state.density()));
        }
    }
}
