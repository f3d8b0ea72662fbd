#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qtsp {

// Gate description for the dense simulator. Diagonal unitaries are kept as
// phase vectors over a contiguous qubit sub-register, never as matrices.
struct GateSpec {
    enum class Kind {
        H,
        RX,
        RY,
        RZ,
        CNOT,
        CZ,
        DiagonalPhase,
        ControlledDiagonalPower,
        InverseQFT,
    };

    Kind kind = Kind::H;
    int qubit = -1;    // target of 1-qubit gates; control for CNOT/CZ/CDP
    int qubit2 = -1;   // target of CNOT/CZ
    double theta = 0.0;
    int range_start = 0;         // sub-register [range_start, range_start+range_width)
    int range_width = 0;
    std::vector<double> phases;  // 2^range_width entries, radians
    std::uint64_t power = 1;

    static GateSpec h(int q);
    static GateSpec rx(int q, double theta);
    static GateSpec ry(int q, double theta);
    static GateSpec rz(int q, double theta);
    static GateSpec cnot(int control, int target);
    static GateSpec cz(int control, int target);
    static GateSpec diagonal_phase(int range_start, int range_width, std::vector<double> phases);
    static GateSpec controlled_diagonal_power(int control, int range_start, int range_width,
                                              std::vector<double> phases, std::uint64_t power);
    static GateSpec inverse_qft(int range_start, int range_width);
};

// Dense 2^q statevector, q <= 22. Qubit 0 is the least significant bit of
// the basis index; bitstrings print most-significant qubit first.
class StateVector {
public:
    explicit StateVector(int num_qubits);
    static StateVector basis(int num_qubits, std::uint64_t index);

    int num_qubits() const { return num_qubits_; }
    std::uint64_t dim() const { return std::uint64_t{1} << num_qubits_; }
    const std::vector<std::complex<double>>& amps() const { return amps_; }
    std::complex<double> amp(std::uint64_t index) const { return amps_[index]; }

    void apply(const GateSpec& gate);

    double norm() const;
    std::string bitstring(std::uint64_t index) const;

private:
    int num_qubits_;
    std::vector<std::complex<double>> amps_;
};

struct Histogram {
    std::map<std::string, std::int64_t> counts;
    std::int64_t shots = 0;
};

// Seeded multinomial sampling from |amp|^2; deterministic per seed.
Histogram measure(const StateVector& state, std::int64_t shots, std::uint64_t seed);

}  // namespace qtsp
