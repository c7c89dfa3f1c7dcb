// circuit.hpp — gate list representation, statevector gate semantics,
// unitary reconstruction, stats, and OpenQASM export
//
// Conventions: qubit q maps to bit q of the amplitude index (little endian);
// bitstrings print qubit n-1 first. Dense gates carry an explicit qubit list
// (qubits[0] is the least significant index bit of the gate matrix).

#pragma once

#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "heomlab/common.hpp"

namespace heomlab::circuit {

enum class GateKind { H, X, RZ, CNOT, Dense, GlobalPhase };

struct Gate {
    GateKind kind;
    std::vector<int> qubits;  // CNOT: {control, target}
    double angle{0.0};        // RZ angle or global phase
    Mat matrix;               // Dense: 2^k x 2^k over `qubits`

    static Gate h(int q) { return {GateKind::H, {q}, 0.0, {}}; }
    static Gate x(int q) { return {GateKind::X, {q}, 0.0, {}}; }
    static Gate rz(int q, double theta) { return {GateKind::RZ, {q}, theta, {}}; }
    static Gate cnot(int control, int target) { return {GateKind::CNOT, {control, target}, 0.0, {}}; }
    static Gate dense(std::vector<int> qs, Mat m) { return {GateKind::Dense, std::move(qs), 0.0, std::move(m)}; }
    static Gate global_phase(double phi) { return {GateKind::GlobalPhase, {}, phi, {}}; }
};

struct Circuit {
    int n_qubits{0};
    std::vector<Gate> gates;

    Circuit& add(Gate g) {
        gates.push_back(std::move(g));
        return *this;
    }
};

namespace detail {

inline void check_qubits(const Gate& g, int n_qubits) {
    for (int q : g.qubits)
        if (q < 0 || q >= n_qubits)
            throw std::invalid_argument("gate references qubit " + std::to_string(q) +
                                        " outside a " + std::to_string(n_qubits) + "-qubit register");
    if (g.kind == GateKind::CNOT && g.qubits[0] == g.qubits[1])
        throw std::invalid_argument("CNOT control equals target");
}

}  // namespace detail

// In-place action of one gate on a 2^n amplitude vector.
inline void apply_gate(Vec& state, const Gate& g, int n_qubits) {
    detail::check_qubits(g, n_qubits);
    const std::size_t N = static_cast<std::size_t>(state.size());
    switch (g.kind) {
        case GateKind::H: {
            const std::size_t bit = std::size_t{1} << g.qubits[0];
            const double s = M_SQRT1_2;
            for (std::size_t i = 0; i < N; ++i)
                if (!(i & bit)) {
                    const cplx a = state[i], b = state[i | bit];
                    state[i] = s * (a + b);
                    state[i | bit] = s * (a - b);
                }
            break;
        }
        case GateKind::X: {
            const std::size_t bit = std::size_t{1} << g.qubits[0];
            for (std::size_t i = 0; i < N; ++i)
                if (!(i & bit)) std::swap(state[i], state[i | bit]);
            break;
        }
        case GateKind::RZ: {
            const std::size_t bit = std::size_t{1} << g.qubits[0];
            const cplx lo = std::exp(cplx{0.0, -0.5 * g.angle});
            const cplx hi = std::exp(cplx{0.0, +0.5 * g.angle});
            for (std::size_t i = 0; i < N; ++i) state[i] *= (i & bit) ? hi : lo;
            break;
        }
        case GateKind::CNOT: {
            const std::size_t cbit = std::size_t{1} << g.qubits[0];
            const std::size_t tbit = std::size_t{1} << g.qubits[1];
            for (std::size_t i = 0; i < N; ++i)
                if ((i & cbit) && !(i & tbit)) std::swap(state[i], state[i | tbit]);
            break;
        }
        case GateKind::Dense: {
            const int k = static_cast<int>(g.qubits.size());
            const std::size_t span = std::size_t{1} << k;
            if (g.matrix.rows() != static_cast<Eigen::Index>(span) ||
                g.matrix.cols() != static_cast<Eigen::Index>(span))
                throw std::invalid_argument("dense gate matrix size does not match its qubit list");
            std::vector<std::size_t> bits(k);
            for (int b = 0; b < k; ++b) bits[b] = std::size_t{1} << g.qubits[b];
            std::size_t mask = 0;
            for (auto b : bits) mask |= b;
            Vec sub(span);
            for (std::size_t base = 0; base < N; ++base) {
                if (base & mask) continue;
                for (std::size_t s = 0; s < span; ++s) {
                    std::size_t idx = base;
                    for (int b = 0; b < k; ++b)
                        if (s & (std::size_t{1} << b)) idx |= bits[b];
                    sub[s] = state[idx];
                }
                for (std::size_t s = 0; s < span; ++s) {
                    std::size_t idx = base;
                    for (int b = 0; b < k; ++b)
                        if (s & (std::size_t{1} << b)) idx |= bits[b];
                    state[idx] = g.matrix.row(s) * sub;
                }
            }
            break;
        }
        case GateKind::GlobalPhase:
            state *= std::exp(cplx{0.0, g.angle});
            break;
    }
}

// Full 2^n x 2^n matrix of the gate list (small registers only).
inline Mat unitary(const Circuit& c) {
    const std::size_t N = std::size_t{1} << c.n_qubits;
    Mat U(N, N);
    for (std::size_t j = 0; j < N; ++j) {
        Vec col = Vec::Zero(N);
        col[j] = 1.0;
        for (const auto& g : c.gates) apply_gate(col, g, c.n_qubits);
        U.col(j) = col;
    }
    return U;
}

struct Stats {
    int depth{0};
    int two_qubit_count{0};
    int rotation_count{0};
    int gate_count{0};
};

// depth = longest path over qubit timelines; global phases occupy no qubit
inline Stats stats(const Circuit& c) {
    Stats st;
    std::vector<int> level(c.n_qubits, 0);
    for (const auto& g : c.gates) {
        if (g.kind == GateKind::GlobalPhase) continue;
        ++st.gate_count;
        if (g.kind == GateKind::CNOT || (g.kind == GateKind::Dense && g.qubits.size() == 2))
            ++st.two_qubit_count;
        if (g.kind == GateKind::RZ) ++st.rotation_count;
        int lv = 0;
        for (int q : g.qubits) lv = std::max(lv, level[q]);
        ++lv;
        for (int q : g.qubits) level[q] = lv;
        st.depth = std::max(st.depth, lv);
    }
    return st;
}

// OpenQASM 2.0; requires a compiled circuit (h/x/rz/cx only). The global
// phase has no QASM-2 representation and is recorded as a comment.
inline std::string to_qasm(const Circuit& c) {
    std::ostringstream os;
    os << "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
    os << "qreg q[" << c.n_qubits << "];\ncreg c[" << c.n_qubits << "];\n";
    double phase = 0.0;
    os << std::setprecision(17);
    for (const auto& g : c.gates) {
        switch (g.kind) {
            case GateKind::H: os << "h q[" << g.qubits[0] << "];\n"; break;
            case GateKind::X: os << "x q[" << g.qubits[0] << "];\n"; break;
            case GateKind::RZ: os << "rz(" << g.angle << ") q[" << g.qubits[0] << "];\n"; break;
            case GateKind::CNOT: os << "cx q[" << g.qubits[0] << "],q[" << g.qubits[1] << "];\n"; break;
            case GateKind::GlobalPhase: phase += g.angle; break;
            case GateKind::Dense:
                throw std::invalid_argument("to_qasm: dense gate present; compile the circuit first");
        }
    }
    if (phase != 0.0) os << "// global phase: " << phase << "\n";
    for (int q = 0; q < c.n_qubits; ++q) os << "measure q[" << q << "] -> c[" << q << "];\n";
    return os.str();
}

}  // namespace heomlab::circuit
