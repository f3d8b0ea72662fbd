#include <cmath>
#include <numbers>

#include "doctest.h"
#include "helpers.hpp"
#include "qtsp/gatesim.hpp"
#include "qtsp/rng.hpp"

using namespace qtsp;
using namespace qtsp::testing;

namespace {

using cd = std::complex<double>;

double max_amp_diff(const StateVector& a, const StateVector& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.amps().size(); ++i)
        m = std::max(m, std::abs(a.amps()[i] - b.amps()[i]));
    return m;
}

// scrambles the state with a fixed gate sequence so identities are checked
// away from |0...0>
void scramble(StateVector& s, std::uint64_t seed) {
    Rng rng(seed);
    for (int g = 0; g < 3 * s.num_qubits(); ++g) {
        int q = static_cast<int>(rng.below(s.num_qubits()));
        switch (rng.below(3)) {
            case 0: s.apply(GateSpec::h(q)); break;
            case 1: s.apply(GateSpec::ry(q, rng.uniform(0.0, 6.28))); break;
            default: s.apply(GateSpec::rz(q, rng.uniform(0.0, 6.28))); break;
        }
    }
}

}  // namespace

TEST_SUITE("gatesim") {

TEST_CASE("fresh states start at |0...0>") {
    StateVector one(1);
    CHECK(one.amp(0) == cd(1.0, 0.0));
    CHECK(one.amp(1) == cd(0.0, 0.0));
    StateVector three(3);
    CHECK(three.amp(0) == cd(1.0, 0.0));
    for (std::uint64_t i = 1; i < 8; ++i) CHECK(three.amp(i) == cd(0.0, 0.0));
    CHECK(three.norm() == 1.0);
    CHECK_THROWS_AS(StateVector(0), std::invalid_argument);
    CHECK_THROWS_AS(StateVector(23), std::invalid_argument);
}

TEST_CASE("hadamard splits |0> evenly") {
    StateVector s(1);
    s.apply(GateSpec::h(0));
    CHECK(std::abs(s.amp(0) - cd(1 / std::numbers::sqrt2, 0)) <= 1e-12);
    CHECK(std::abs(s.amp(1) - cd(1 / std::numbers::sqrt2, 0)) <= 1e-12);
}

TEST_CASE("ry pi flips |0> to |1> under the fixed sign convention") {
    StateVector s(1);
    s.apply(GateSpec::ry(0, std::numbers::pi));
    CHECK(std::abs(s.amp(0)) <= 1e-12);
    CHECK(std::abs(s.amp(1) - cd(1.0, 0.0)) <= 1e-12);
}

TEST_CASE("bitstrings print most-significant qubit first") {
    StateVector s(4);
    CHECK(s.bitstring(0b0001) == "0001");
    CHECK(s.bitstring(0b1000) == "1000");
}

TEST_CASE("involutions: H twice, CNOT twice, phase and its negative") {
    StateVector s(3);
    scramble(s, 5);
    StateVector reference = s;

    s.apply(GateSpec::h(1));
    s.apply(GateSpec::h(1));
    CHECK(max_amp_diff(s, reference) <= 1e-9);

    s.apply(GateSpec::cnot(0, 2));
    s.apply(GateSpec::cnot(0, 2));
    CHECK(max_amp_diff(s, reference) <= 1e-9);

    Rng rng(8);
    std::vector<double> phases(4), negated(4);
    for (int i = 0; i < 4; ++i) {
        phases[i] = rng.uniform(0.0, 6.0);
        negated[i] = -phases[i];
    }
    s.apply(GateSpec::diagonal_phase(1, 2, phases));
    s.apply(GateSpec::diagonal_phase(1, 2, negated));
    CHECK(max_amp_diff(s, reference) <= 1e-9);

    s.apply(GateSpec::cz(0, 1));
    s.apply(GateSpec::cz(0, 1));
    CHECK(max_amp_diff(s, reference) <= 1e-9);
}

TEST_CASE("controlled diagonal power equals repeated application") {
    Rng rng(3);
    std::vector<double> phases(8);
    for (auto& p : phases) p = rng.uniform(0.0, 1.0);

    StateVector a(5);
    scramble(a, 11);
    StateVector b = a;

    a.apply(GateSpec::controlled_diagonal_power(4, 0, 3, phases, 5));
    for (int rep = 0; rep < 5; ++rep)
        b.apply(GateSpec::controlled_diagonal_power(4, 0, 3, phases, 1));
    CHECK(max_amp_diff(a, b) <= 1e-9);
}

TEST_CASE("inverse qft recovers a dyadic phase load exactly") {
    // amplitudes e^{2 pi i k * 5/8}/sqrt(8) must collapse to |5>
    StateVector s(3);
    std::vector<double> phases(8);
    for (int k = 0; k < 8; ++k) phases[k] = 2.0 * std::numbers::pi * k * 5.0 / 8.0;
    for (int q = 0; q < 3; ++q) s.apply(GateSpec::h(q));
    s.apply(GateSpec::diagonal_phase(0, 3, phases));
    s.apply(GateSpec::inverse_qft(0, 3));
    CHECK(std::abs(std::abs(s.amp(5)) - 1.0) <= 1e-9);
    Histogram hist = measure(s, 64, 123);
    CHECK(hist.counts.at("101") == 64);
}

TEST_CASE("inverse qft matches the direct matrix at dimension 8") {
    StateVector s(3);
    scramble(s, 21);
    std::vector<cd> expected = naive_inverse_qft(s.amps());
    s.apply(GateSpec::inverse_qft(0, 3));
    for (int i = 0; i < 8; ++i) CHECK(std::abs(s.amps()[i] - expected[i]) <= 1e-9);
}

TEST_CASE("inverse qft acts only on its sub-register") {
    StateVector s(5);
    scramble(s, 33);
    // reference: transform axis k (qubits 1..3) group by group
    std::vector<cd> reference(s.amps().begin(), s.amps().end());
    for (int hi = 0; hi < 2; ++hi)
        for (int lo = 0; lo < 2; ++lo) {
            std::vector<cd> buf(8);
            for (int k = 0; k < 8; ++k) buf[k] = reference[(hi << 4) | (k << 1) | lo];
            buf = naive_inverse_qft(buf);
            for (int k = 0; k < 8; ++k) reference[(hi << 4) | (k << 1) | lo] = buf[k];
        }
    s.apply(GateSpec::inverse_qft(1, 3));
    for (int i = 0; i < 32; ++i) CHECK(std::abs(s.amps()[i] - reference[i]) <= 1e-9);
}

TEST_CASE("norm is preserved across long random gate sequences") {
    StateVector s(6);
    Rng rng(77);
    for (int g = 0; g < 1000; ++g) {
        int q = static_cast<int>(rng.below(6));
        switch (rng.below(6)) {
            case 0: s.apply(GateSpec::h(q)); break;
            case 1: s.apply(GateSpec::rx(q, rng.uniform(0.0, 6.28))); break;
            case 2: s.apply(GateSpec::ry(q, rng.uniform(0.0, 6.28))); break;
            case 3: s.apply(GateSpec::rz(q, rng.uniform(0.0, 6.28))); break;
            case 4: s.apply(GateSpec::cnot(q, (q + 1) % 6)); break;
            default: {
                std::vector<double> phases(4);
                for (auto& p : phases) p = rng.uniform(0.0, 6.28);
                s.apply(GateSpec::diagonal_phase(q % 5, 2, phases));
            }
        }
    }
    CHECK(std::abs(s.norm() - 1.0) <= 1e-9);
}

TEST_CASE("gate index validation") {
    StateVector s(3);
    CHECK_THROWS_AS(s.apply(GateSpec::h(3)), std::out_of_range);
    CHECK_THROWS_AS(s.apply(GateSpec::cnot(1, 1)), std::invalid_argument);
    CHECK_THROWS_AS(s.apply(GateSpec::diagonal_phase(2, 2, {0, 0, 0, 0})), std::out_of_range);
    CHECK_THROWS_AS(s.apply(GateSpec::diagonal_phase(0, 2, {0, 0})), std::invalid_argument);
    CHECK_THROWS_AS(s.apply(GateSpec::controlled_diagonal_power(1, 0, 2, {0, 0, 0, 0}, 2)),
                    std::invalid_argument);
}

TEST_CASE("measurement: pure states, uniformity bounds, determinism") {
    StateVector one = StateVector::basis(1, 1);
    Histogram h1 = measure(one, 100, 4);
    CHECK(h1.counts.at("1") == 100);
    CHECK(h1.shots == 100);

    StateVector uniform(2);
    uniform.apply(GateSpec::h(0));
    uniform.apply(GateSpec::h(1));
    Histogram h2 = measure(uniform, 8192, 0);
    std::int64_t total = 0;
    for (const auto& [key, count] : h2.counts) {
        CHECK(count >= 1850);
        CHECK(count <= 2250);
        total += count;
    }
    CHECK(total == 8192);

    Histogram again = measure(uniform, 8192, 0);
    CHECK(h2.counts == again.counts);
    CHECK_THROWS_AS(measure(uniform, 0, 0), std::invalid_argument);
}

}  // TEST_SUITE
