// walsh.hpp — Walsh–Fourier synthesis of diagonal unitaries as Gray-ordered
// CNOT / RZ ladders
//
// Bit conventions match the register layout: Walsh index j applies Z to qubit
// l iff bit l of j is set, and the transform pairing <j,k> uses the same
// little-endian bit order for both arguments.

#pragma once

#include <cmath>
#include <vector>

#include "heomlab/circuit.hpp"

namespace heomlab::walsh {

struct PhaseVector {
    std::vector<double> f;  // radians, length a power of two
};

struct WalshCoefficients {
    std::vector<double> a;  // same length as the phase vector
};

// f_k = arccos(s_k) for k < N/2, f_k = -arccos(s_{k-N/2}) otherwise, so that
// diag(e^{i f}) = Sigma_+ (+) Sigma_- with the ancilla as the top index bit.
inline PhaseVector phases_from_singulars(const std::vector<double>& sigma_tilde) {
    PhaseVector pv;
    const std::size_t half = sigma_tilde.size();
    pv.f.resize(2 * half);
    for (std::size_t k = 0; k < half; ++k) {
        double s = sigma_tilde[k];
        if (s < -1e-12 || s > 1.0 + 1e-12)
            throw std::invalid_argument("phases_from_singulars: normalized singular value " +
                                        std::to_string(s) + " outside [0, 1]");
        s = std::min(1.0, std::max(0.0, s));
        const double f = std::acos(s);
        pv.f[k] = f;
        pv.f[k + half] = -f;
    }
    return pv;
}

// a_j = (1/N) sum_k (-1)^{<j,k>} f_k via the in-place butterfly transform
inline WalshCoefficients walsh_transform(const PhaseVector& pv) {
    const std::size_t N = pv.f.size();
    if (N == 0 || (N & (N - 1)) != 0)
        throw std::invalid_argument("walsh_transform: length must be a power of two");
    WalshCoefficients wc;
    wc.a = pv.f;
    for (std::size_t h = 1; h < N; h <<= 1)
        for (std::size_t i = 0; i < N; i += h << 1)
            for (std::size_t j = i; j < i + h; ++j) {
                const double x = wc.a[j], y = wc.a[j + h];
                wc.a[j] = x + y;
                wc.a[j + h] = x - y;
            }
    for (auto& v : wc.a) v /= static_cast<double>(N);
    return wc;
}

namespace detail {

inline int top_bit(std::size_t j) {
    int b = -1;
    while (j) {
        ++b;
        j >>= 1;
    }
    return b;
}

// Emit the CNOT layer moving the parity network from mask `from` to `to`;
// each CNOT feeds the parity of one control bit into the block's target.
// Blocks sharing a target commute, so only the symmetric difference remains.
inline void transition(circuit::Circuit& qc, std::size_t from, std::size_t to) {
    if (from == to) return;
    const int t_from = top_bit(from), t_to = top_bit(to);
    if (from != 0 && to != 0 && t_from == t_to) {
        std::size_t diff = (from ^ to) & ~(std::size_t{1} << t_to);
        for (int b = 0; diff; ++b, diff >>= 1)
            if (diff & 1) qc.add(circuit::Gate::cnot(b, t_to));
        return;
    }
    if (from != 0) {  // unladder previous block
        std::size_t ctrl = from & ~(std::size_t{1} << t_from);
        for (int b = 0; ctrl; ++b, ctrl >>= 1)
            if (ctrl & 1) qc.add(circuit::Gate::cnot(b, t_from));
    }
    if (to != 0) {  // ladder next block
        std::size_t ctrl = to & ~(std::size_t{1} << t_to);
        for (int b = 0; ctrl; ++b, ctrl >>= 1)
            if (ctrl & 1) qc.add(circuit::Gate::cnot(b, t_to));
    }
}

}  // namespace detail

// U = prod_j exp(i a_j w_j): every retained j becomes a parity ladder onto its
// top set bit plus RZ(-2 a_j) (the exact identity RZ(-2a) = e^{iaZ}); visiting
// j along the reflected Gray sequence cancels shared ladder segments, giving
// 2^m - 2 CNOTs and 2^m - 1 rotations for dense coefficients on m qubits.
// a_0 becomes a global phase.
inline circuit::Circuit synthesize_diagonal(const WalshCoefficients& wc, int n_qubits,
                                            double drop_threshold = 1e-12) {
    const std::size_t N = wc.a.size();
    if (N != (std::size_t{1} << n_qubits))
        throw std::invalid_argument("synthesize_diagonal: coefficient count does not match qubit count");
    circuit::Circuit qc;
    qc.n_qubits = n_qubits;
    if (std::abs(wc.a[0]) > drop_threshold) qc.add(circuit::Gate::global_phase(wc.a[0]));

    std::size_t prev = 0;
    for (std::size_t i = 1; i < N; ++i) {
        const std::size_t j = i ^ (i >> 1);  // reflected Gray sequence over 1..N-1
        if (std::abs(wc.a[j]) <= drop_threshold) continue;
        detail::transition(qc, prev, j);
        qc.add(circuit::Gate::rz(detail::top_bit(j), -2.0 * wc.a[j]));
        prev = j;
    }
    detail::transition(qc, prev, 0);
    return qc;
}

}  // namespace heomlab::walsh
