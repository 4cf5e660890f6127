#include "doctest.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "mermin/circuit.hpp"
#include "mermin/experiments.hpp"

using namespace mermin;

namespace {

Statevector conditioned_state(const Circuit& circuit, int q0_bit, int q4_bit) {
    Statevector state = circuit.final_state();
    project_qubit(state, 0, q0_bit);
    project_qubit(state, 4, q4_bit);
    return state;
}

double max_against_pattern(const Statevector& state,
                           const std::vector<std::size_t>& half_indices) {
    double worst = 0.0;
    for (std::size_t i = 0; i < state.dim(); ++i) {
        complex_t expected{0.0, 0.0};
        for (std::size_t idx : half_indices) {
            if (idx == i) expected = complex_t{0.5, 0.0};
        }
        worst = std::max(worst, std::abs(state.amplitudes[i] - expected));
    }
    return worst;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

} // namespace

TEST_CASE("conditioning on the assistants leaves the even/odd parity states") {
    // Indices with q0=1, q4=0 and even register parity...
    const std::vector<std::size_t> even_half = {1, 7, 11, 13};
    // ...and with q0=1, q4=1 and odd register parity.
    const std::vector<std::size_t> odd_half = {19, 21, 25, 31};
    for (int id = 1; id <= 3; ++id) {
        const Circuit circuit = build_experiment(experiment_id_from_int(id));
        CHECK(max_against_pattern(conditioned_state(circuit, 1, 0), even_half) < 1e-12);
        CHECK(max_against_pattern(conditioned_state(circuit, 1, 1), odd_half) < 1e-12);
    }
}

TEST_CASE("the assistant q0 reads 1 with certainty") {
    for (int id = 1; id <= 3; ++id) {
        const Circuit circuit = build_experiment(experiment_id_from_int(id));
        CHECK(std::abs(marginal_one(circuit.final_state(), 0) - 1.0) < 1e-12);
    }
}

TEST_CASE("the assistant q4 is an exact coin flip") {
    for (int id = 1; id <= 3; ++id) {
        const Circuit circuit = build_experiment(experiment_id_from_int(id));
        CHECK(std::abs(marginal_one(circuit.final_state(), 4) - 0.5) < 1e-12);
    }
}

TEST_CASE("the three builders produce identical output distributions") {
    const rvector_t p1 = probabilities(build_experiment(ExperimentId::One).final_state());
    const rvector_t p2 = probabilities(build_experiment(ExperimentId::Two).final_state());
    const rvector_t p3 = probabilities(build_experiment(ExperimentId::Three).final_state());
    for (std::size_t i = 0; i < p1.size(); ++i) {
        CHECK(std::abs(p1[i] - p2[i]) < 1e-12);
        CHECK(std::abs(p2[i] - p3[i]) < 1e-12);
    }
}

TEST_CASE("builders differ only in the q0-driven phase-gate target") {
    for (int id = 1; id <= 3; ++id) {
        const Circuit circuit = build_experiment(experiment_id_from_int(id));
        int q0_driven_target = -1;
        for (const auto& op : circuit.ops) {
            const auto* gate = std::get_if<GateOp>(&op);
            if (gate != nullptr && gate->kind == GateKind::ControlledPhase &&
                gate->control == 0) {
                q0_driven_target = gate->target;
            }
        }
        CHECK(q0_driven_target == id);
    }
}

TEST_CASE("expanded schedule reproduces the compact builder final state") {
    for (int id = 1; id <= 3; ++id) {
        const Statevector compact =
            build_experiment(experiment_id_from_int(id)).final_state();
        const Statevector expanded =
            build_transpiled_experiment(experiment_id_from_int(id)).final_state();
        for (std::size_t i = 0; i < compact.dim(); ++i) {
            CHECK(std::abs(compact.amplitudes[i] - expanded.amplitudes[i]) < 1e-12);
        }
    }
}

TEST_CASE("bundled expanded-schedule fixtures match the builders byte for byte") {
    const char* data_dir = MERMIN_DATA_DIR;
    for (int id = 1; id <= 3; ++id) {
        const std::string path = std::string(data_dir) + "/transpiled_experiment" +
                                 std::to_string(id) + ".json";
        const std::string fixture = slurp(path);
        const std::string built = circuit_to_json(
            build_transpiled_experiment(experiment_id_from_int(id)));
        CHECK(fixture == built);
        CHECK(selection_delay(load_circuit(path)) == 7);
    }
}

TEST_CASE("mediator toy circuit restores every non-mediator qubit") {
    const Circuit circuit = build_toy_circuit();
    CHECK(circuit.num_qubits == 6);
    const Statevector state = circuit.final_state();
    CHECK(std::abs(state.amplitudes[0] - complex_t{1.0, 0.0}) < 1e-12);
    for (std::size_t i = 1; i < state.dim(); ++i) {
        CHECK(std::abs(state.amplitudes[i]) < 1e-12);
    }
}

TEST_CASE("dropping the un-flip gates leaves q1, q2, q5 flipped") {
    const Statevector state = build_toy_circuit(false).final_state();
    // q1, q2, q5 set; mediator and the rest back at 0.
    const std::size_t flipped = (1u << 1) | (1u << 2) | (1u << 5);
    CHECK(std::abs(state.amplitudes[flipped] - complex_t{1.0, 0.0}) < 1e-12);
    CHECK(std::abs(state.amplitudes[0]) < 1e-12);
}

TEST_CASE("experiment ids outside 1..3 are rejected") {
    CHECK_THROWS_AS(experiment_id_from_int(0), std::invalid_argument);
    CHECK_THROWS_AS(experiment_id_from_int(4), std::invalid_argument);
}
