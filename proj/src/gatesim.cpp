#include "qtsp/gatesim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qtsp/rng.hpp"

namespace qtsp {

GateSpec GateSpec::h(int q) {
    GateSpec g;
    g.kind = Kind::H;
    g.qubit = q;
    return g;
}
GateSpec GateSpec::rx(int q, double theta) {
    GateSpec g;
    g.kind = Kind::RX;
    g.qubit = q;
    g.theta = theta;
    return g;
}
GateSpec GateSpec::ry(int q, double theta) {
    GateSpec g;
    g.kind = Kind::RY;
    g.qubit = q;
    g.theta = theta;
    return g;
}
GateSpec GateSpec::rz(int q, double theta) {
    GateSpec g;
    g.kind = Kind::RZ;
    g.qubit = q;
    g.theta = theta;
    return g;
}
GateSpec GateSpec::cnot(int control, int target) {
    GateSpec g;
    g.kind = Kind::CNOT;
    g.qubit = control;
    g.qubit2 = target;
    return g;
}
GateSpec GateSpec::cz(int control, int target) {
    GateSpec g;
    g.kind = Kind::CZ;
    g.qubit = control;
    g.qubit2 = target;
    return g;
}
GateSpec GateSpec::diagonal_phase(int range_start, int range_width, std::vector<double> phases) {
    GateSpec g;
    g.kind = Kind::DiagonalPhase;
    g.range_start = range_start;
    g.range_width = range_width;
    g.phases = std::move(phases);
    return g;
}
GateSpec GateSpec::controlled_diagonal_power(int control, int range_start, int range_width,
                                             std::vector<double> phases, std::uint64_t power) {
    GateSpec g;
    g.kind = Kind::ControlledDiagonalPower;
    g.qubit = control;
    g.range_start = range_start;
    g.range_width = range_width;
    g.phases = std::move(phases);
    g.power = power;
    return g;
}
GateSpec GateSpec::inverse_qft(int range_start, int range_width) {
    GateSpec g;
    g.kind = Kind::InverseQFT;
    g.range_start = range_start;
    g.range_width = range_width;
    return g;
}

StateVector::StateVector(int num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits < 1 || num_qubits > 22)
        throw std::invalid_argument("qubit count must be in [1, 22]");
    amps_.assign(dim(), {0.0, 0.0});
    amps_[0] = 1.0;
}

StateVector StateVector::basis(int num_qubits, std::uint64_t index) {
    StateVector s(num_qubits);
    if (index >= s.dim()) throw std::out_of_range("basis index out of range");
    s.amps_[0] = 0.0;
    s.amps_[index] = 1.0;
    return s;
}

double StateVector::norm() const {
    double acc = 0.0;
    for (const auto& a : amps_) acc += std::norm(a);
    return std::sqrt(acc);
}

std::string StateVector::bitstring(std::uint64_t index) const {
    std::string s(num_qubits_, '0');
    for (int b = 0; b < num_qubits_; ++b)
        if (index & (std::uint64_t{1} << b)) s[num_qubits_ - 1 - b] = '1';
    return s;
}

namespace {

using cd = std::complex<double>;

void apply_1q(std::vector<cd>& amps, int q, cd m00, cd m01, cd m10, cd m11) {
    std::uint64_t bit = std::uint64_t{1} << q;
    std::uint64_t dim = amps.size();
    for (std::uint64_t i = 0; i < dim; ++i) {
        if (i & bit) continue;
        cd a0 = amps[i];
        cd a1 = amps[i | bit];
        amps[i] = m00 * a0 + m01 * a1;
        amps[i | bit] = m10 * a0 + m11 * a1;
    }
}

// In-place X_j = 2^{-w/2} * sum_k x_k e^{-2 pi i j k / 2^w} on a power-of-two
// buffer: iterative radix-2 with bit-reversal, engineering-sign DFT.
void inverse_qft_buffer(std::vector<cd>& a) {
    std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
        cd wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cd w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                cd u = a[i + k];
                cd v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (auto& x : a) x *= scale;
}

void check_range(int num_qubits, int start, int width) {
    if (width < 1 || start < 0 || start + width > num_qubits)
        throw std::out_of_range("sub-register out of range");
}

}  // namespace

void StateVector::apply(const GateSpec& gate) {
    auto check_qubit = [&](int q) {
        if (q < 0 || q >= num_qubits_) throw std::out_of_range("qubit index out of range");
    };
    const double inv_sqrt2 = std::numbers::sqrt2 / 2.0;

    switch (gate.kind) {
        case GateSpec::Kind::H: {
            check_qubit(gate.qubit);
            apply_1q(amps_, gate.qubit, inv_sqrt2, inv_sqrt2, inv_sqrt2, -inv_sqrt2);
            break;
        }
        case GateSpec::Kind::RX: {
            check_qubit(gate.qubit);
            double c = std::cos(gate.theta / 2.0), s = std::sin(gate.theta / 2.0);
            apply_1q(amps_, gate.qubit, c, cd(0, -s), cd(0, -s), c);
            break;
        }
        case GateSpec::Kind::RY: {
            check_qubit(gate.qubit);
            double c = std::cos(gate.theta / 2.0), s = std::sin(gate.theta / 2.0);
            apply_1q(amps_, gate.qubit, c, -s, s, c);
            break;
        }
        case GateSpec::Kind::RZ: {
            check_qubit(gate.qubit);
            cd e0 = std::polar(1.0, -gate.theta / 2.0), e1 = std::polar(1.0, gate.theta / 2.0);
            apply_1q(amps_, gate.qubit, e0, 0.0, 0.0, e1);
            break;
        }
        case GateSpec::Kind::CNOT: {
            check_qubit(gate.qubit);
            check_qubit(gate.qubit2);
            if (gate.qubit == gate.qubit2) throw std::invalid_argument("CNOT qubits collide");
            std::uint64_t cbit = std::uint64_t{1} << gate.qubit;
            std::uint64_t tbit = std::uint64_t{1} << gate.qubit2;
            for (std::uint64_t i = 0; i < dim(); ++i)
                if ((i & cbit) && !(i & tbit)) std::swap(amps_[i], amps_[i | tbit]);
            break;
        }
        case GateSpec::Kind::CZ: {
            check_qubit(gate.qubit);
            check_qubit(gate.qubit2);
            if (gate.qubit == gate.qubit2) throw std::invalid_argument("CZ qubits collide");
            std::uint64_t mask =
                (std::uint64_t{1} << gate.qubit) | (std::uint64_t{1} << gate.qubit2);
            for (std::uint64_t i = 0; i < dim(); ++i)
                if ((i & mask) == mask) amps_[i] = -amps_[i];
            break;
        }
        case GateSpec::Kind::DiagonalPhase:
        case GateSpec::Kind::ControlledDiagonalPower: {
            check_range(num_qubits_, gate.range_start, gate.range_width);
            std::uint64_t sub_dim = std::uint64_t{1} << gate.range_width;
            if (gate.phases.size() != sub_dim)
                throw std::invalid_argument("phase vector length must be 2^range_width");
            bool controlled = gate.kind == GateSpec::Kind::ControlledDiagonalPower;
            std::uint64_t cbit = 0;
            if (controlled) {
                check_qubit(gate.qubit);
                if (gate.qubit >= gate.range_start &&
                    gate.qubit < gate.range_start + gate.range_width)
                    throw std::invalid_argument("control qubit collides with the sub-register");
                cbit = std::uint64_t{1} << gate.qubit;
            }
            double power = controlled ? static_cast<double>(gate.power) : 1.0;
            std::vector<cd> mult(sub_dim);
            for (std::uint64_t k = 0; k < sub_dim; ++k)
                mult[k] = std::polar(1.0, power * gate.phases[k]);
            std::uint64_t sub_mask = (sub_dim - 1) << gate.range_start;
            for (std::uint64_t i = 0; i < dim(); ++i) {
                if (controlled && !(i & cbit)) continue;
                std::uint64_t k = (i & sub_mask) >> gate.range_start;
                amps_[i] *= mult[k];
            }
            break;
        }
        case GateSpec::Kind::InverseQFT: {
            check_range(num_qubits_, gate.range_start, gate.range_width);
            std::uint64_t sub_dim = std::uint64_t{1} << gate.range_width;
            std::uint64_t low_dim = std::uint64_t{1} << gate.range_start;
            std::uint64_t high_dim = dim() >> (gate.range_start + gate.range_width);
            std::vector<cd> buffer(sub_dim);
            for (std::uint64_t hi = 0; hi < high_dim; ++hi) {
                for (std::uint64_t lo = 0; lo < low_dim; ++lo) {
                    std::uint64_t base = (hi << (gate.range_start + gate.range_width)) | lo;
                    for (std::uint64_t k = 0; k < sub_dim; ++k)
                        buffer[k] = amps_[base | (k << gate.range_start)];
                    inverse_qft_buffer(buffer);
                    for (std::uint64_t k = 0; k < sub_dim; ++k)
                        amps_[base | (k << gate.range_start)] = buffer[k];
                }
            }
            break;
        }
    }
}

Histogram measure(const StateVector& state, std::int64_t shots, std::uint64_t seed) {
    if (shots < 1) throw std::invalid_argument("shots must be >= 1");
    const auto& amps = state.amps();
    std::vector<double> cumulative(amps.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        acc += std::norm(amps[i]);
        cumulative[i] = acc;
    }

    Rng rng(seed);
    Histogram hist;
    hist.shots = shots;
    for (std::int64_t s = 0; s < shots; ++s) {
        double r = rng.uniform() * acc;
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), r);
        std::uint64_t idx = it == cumulative.end() ? amps.size() - 1
                                                   : static_cast<std::uint64_t>(
                                                         std::distance(cumulative.begin(), it));
        ++hist.counts[state.bitstring(idx)];
    }
    return hist;
}

}  // namespace qtsp
