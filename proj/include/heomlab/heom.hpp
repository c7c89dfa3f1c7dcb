// heom.hpp — twin-space HEOM engine: hierarchy indexing, sparse effective
// Liouvillian assembly, fixed-step RK4 evolution

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Sparse>

#include "heomlab/models.hpp"
#include "heomlab/units.hpp"

namespace heomlab::heom {

using NVec = std::vector<std::uint8_t>;

// Hierarchy index space. States are (p, q, nvec) with p, q system indices and
// nvec the effective-mode occupation; admissible when n_j <= cap_j and
// sum_j n_j <= depth_cap. Flattened offset = (p * sys_dim + q) * n_ados + a
// with ados enumerated in lexicographic nvec order.
struct HeomSpace {
    int sys_dim{0};
    int n_modes{0};
    std::vector<int> mode_caps;
    int depth_cap{0};
    std::vector<NVec> ados;              // sorted lexicographically
    std::vector<bath::Mode> modes;       // flattened (coupling-major, mode-minor)
    std::vector<int> mode_coupling;      // owning coupling index per mode

    std::size_t ado_count() const { return ados.size(); }
    std::size_t dim() const {
        return static_cast<std::size_t>(sys_dim) * sys_dim * ados.size();
    }

    std::size_t offset(int p, int q, std::size_t a) const {
        return (static_cast<std::size_t>(p) * sys_dim + q) * ados.size() + a;
    }

    // lexicographic rank of nvec; ados.size() when not admissible/present
    std::size_t ado_index(const NVec& n) const {
        auto it = std::lower_bound(ados.begin(), ados.end(), n);
        if (it == ados.end() || *it != n) return ados.size();
        return static_cast<std::size_t>(it - ados.begin());
    }

    std::size_t encode(int p, int q, const NVec& n) const {
        const std::size_t a = ado_index(n);
        if (p < 0 || p >= sys_dim || q < 0 || q >= sys_dim || a == ados.size())
            throw std::invalid_argument("HeomSpace::encode: state not admissible");
        return offset(p, q, a);
    }

    struct State {
        int p, q;
        NVec n;
    };
    State decode(std::size_t index) const {
        if (index >= dim()) throw std::invalid_argument("HeomSpace::decode: index out of range");
        const std::size_t a = index % ados.size();
        const std::size_t pq = index / ados.size();
        return {static_cast<int>(pq / sys_dim), static_cast<int>(pq % sys_dim), ados[a]};
    }
};

namespace detail {

inline void enumerate_rec(const std::vector<int>& caps, int depth_cap, int pos, int used,
                          NVec& cur, std::vector<NVec>& out, std::size_t cap) {
    if (out.size() > cap) return;  // caller reports the overflow
    if (pos == static_cast<int>(caps.size())) {
        out.push_back(cur);
        return;
    }
    const int hi = std::min(caps[pos], depth_cap - used);
    for (int n = 0; n <= hi; ++n) {
        cur[pos] = static_cast<std::uint8_t>(n);
        enumerate_rec(caps, depth_cap, pos + 1, used + n, cur, out, cap);
    }
    cur[pos] = 0;
}

}  // namespace detail

inline HeomSpace build_space(const models::SystemModel& model, const std::vector<int>& per_mode_caps,
                             int depth_cap, std::size_t state_cap = 5'000'000) {
    if (depth_cap < 1) throw std::invalid_argument("build_space: depth cap must be >= 1");
    HeomSpace sp;
    sp.sys_dim = model.dim;
    sp.depth_cap = depth_cap;
    for (std::size_t c = 0; c < model.couplings.size(); ++c)
        for (const auto& mode : model.couplings[c].bath.modes) {
            sp.modes.push_back(mode);
            sp.mode_coupling.push_back(static_cast<int>(c));
        }
    sp.n_modes = static_cast<int>(sp.modes.size());
    if (per_mode_caps.size() != sp.modes.size())
        throw std::invalid_argument("build_space: per-mode cap count does not match bath modes");
    sp.mode_caps = per_mode_caps;
    for (int cap : sp.mode_caps)
        if (cap < 0) throw std::invalid_argument("build_space: negative mode cap");

    NVec cur(sp.modes.size(), 0);
    std::vector<NVec> out;
    const std::size_t ado_cap = state_cap / (static_cast<std::size_t>(sp.sys_dim) * sp.sys_dim) + 1;
    detail::enumerate_rec(sp.mode_caps, depth_cap, 0, 0, cur, out, ado_cap);
    sp.ados = std::move(out);
    if (sp.dim() > state_cap)
        throw config_error("HEOM space of " + std::to_string(sp.dim()) +
                           " states exceeds the cap of " + std::to_string(state_cap));
    return sp;
}

inline HeomSpace build_space(const models::SystemModel& model, int L, int depth_cap,
                             std::size_t state_cap = 5'000'000) {
    if (L < 1) throw std::invalid_argument("build_space: per-mode cap must be >= 1");
    std::size_t n_modes = 0;
    for (const auto& c : model.couplings) n_modes += c.bath.modes.size();
    return build_space(model, std::vector<int>(n_modes, L), depth_cap, state_cap);
}

struct EffectiveLiouvillian {
    Eigen::SparseMatrix<cplx, Eigen::RowMajor> mat;  // effective Hamiltonian, energy units
    std::string model_label;
    int K{0};
    std::vector<int> mode_caps;
    int depth_cap{0};
};

// H_eff = hat(H_S) - tilde(H_S) - i sum v_k b+ b
//         + sum hat(A) (sqrt(r) b + d/sqrt(r) b+)
//         - sum tilde(A) (sqrt(r) b + d*/sqrt(r) b+)
// hat acts on p, tilde transposes onto q; ladder elements sqrt(n+1), sqrt(n).
inline EffectiveLiouvillian build_liouvillian(const models::SystemModel& model, const HeomSpace& sp) {
    if (model.dim != sp.sys_dim)
        throw std::invalid_argument("build_liouvillian: model dimension does not match space");
    std::size_t n_modes_model = 0;
    for (const auto& c : model.couplings) n_modes_model += c.bath.modes.size();
    if (static_cast<int>(n_modes_model) != sp.n_modes)
        throw std::invalid_argument("build_liouvillian: bath mode count does not match space");

    const int dim = sp.sys_dim;
    const std::size_t n_ado = sp.ado_count();
    const Mat& H = model.h_s;

    std::vector<Eigen::Triplet<cplx>> trip;
    trip.reserve(sp.dim() * (2 * dim + 4 * sp.n_modes / 2 + 1));

    NVec scratch;
    for (std::size_t a = 0; a < n_ado; ++a) {
        const NVec& n = sp.ados[a];
        double damp = 0.0;
        for (int g = 0; g < sp.n_modes; ++g) damp += n[g] * sp.modes[g].v;
        const cplx diag = -I * damp;
        for (int p = 0; p < dim; ++p)
            for (int q = 0; q < dim; ++q) {
                const auto col = sp.offset(p, q, a);
                trip.emplace_back(col, col, diag);
                for (int pp = 0; pp < dim; ++pp)
                    if (H(pp, p) != 0.0) trip.emplace_back(sp.offset(pp, q, a), col, H(pp, p));
                for (int qp = 0; qp < dim; ++qp)
                    if (H(q, qp) != 0.0) trip.emplace_back(sp.offset(p, qp, a), col, -H(q, qp));
            }

        for (int g = 0; g < sp.n_modes; ++g) {
            const auto& mode = sp.modes[g];
            if (mode.r <= 0.0) continue;  // zero-coupling mode: no ladder terms
            const double sr = std::sqrt(mode.r);
            const Mat& A = model.couplings[sp.mode_coupling[g]].op;

            auto emit = [&](std::size_t a2, cplx hat_f, cplx tilde_f) {
                for (int p = 0; p < dim; ++p)
                    for (int q = 0; q < dim; ++q) {
                        const auto col = sp.offset(p, q, a);
                        for (int pp = 0; pp < dim; ++pp)
                            if (A(pp, p) != 0.0)
                                trip.emplace_back(sp.offset(pp, q, a2), col, hat_f * A(pp, p));
                        for (int qp = 0; qp < dim; ++qp)
                            if (A(q, qp) != 0.0)
                                trip.emplace_back(sp.offset(p, qp, a2), col, -tilde_f * A(q, qp));
                    }
            };

            if (n[g] > 0) {  // annihilation lowers this mode
                scratch = n;
                --scratch[g];
                const std::size_t a2 = sp.ado_index(scratch);
                const double f = sr * std::sqrt(static_cast<double>(n[g]));
                emit(a2, cplx{f, 0.0}, cplx{f, 0.0});
            }
            scratch = n;  // creation raises it; dropped beyond truncation
            ++scratch[g];
            const std::size_t a2 = sp.ado_index(scratch);
            if (a2 != n_ado) {
                const double f = std::sqrt(static_cast<double>(n[g]) + 1.0);
                emit(a2, (mode.d / sr) * f, (std::conj(mode.d) / sr) * f);
            }
        }
    }

    EffectiveLiouvillian gen;
    gen.mat.resize(static_cast<Eigen::Index>(sp.dim()), static_cast<Eigen::Index>(sp.dim()));
    gen.mat.setFromTriplets(trip.begin(), trip.end());
    gen.mat.makeCompressed();
    gen.model_label = model.label;
    gen.K = model.couplings.empty() ? 0 : model.couplings.front().bath.K();
    gen.mode_caps = sp.mode_caps;
    gen.depth_cap = sp.depth_cap;
    return gen;
}

// |p q~ 0>
inline Vec basis_state(const HeomSpace& sp, int p, int q) {
    Vec psi = Vec::Zero(static_cast<Eigen::Index>(sp.dim()));
    psi[static_cast<Eigen::Index>(sp.encode(p, q, NVec(sp.n_modes, 0)))] = 1.0;
    return psi;
}

inline Vec initial_state(const models::SystemModel& model, const HeomSpace& sp) {
    Vec psi = Vec::Zero(static_cast<Eigen::Index>(sp.dim()));
    const std::size_t a0 = sp.ado_index(NVec(sp.n_modes, 0));
    for (int p = 0; p < sp.sys_dim; ++p)
        for (int q = 0; q < sp.sys_dim; ++q)
            psi[static_cast<Eigen::Index>(sp.offset(p, q, a0))] = model.rho0(p, q);
    return psi;
}

inline Mat reduced_density(const Vec& psi, const HeomSpace& sp) {
    Mat rho(sp.sys_dim, sp.sys_dim);
    const std::size_t a0 = sp.ado_index(NVec(sp.n_modes, 0));
    for (int p = 0; p < sp.sys_dim; ++p)
        for (int q = 0; q < sp.sys_dim; ++q)
            rho(p, q) = psi[static_cast<Eigen::Index>(sp.offset(p, q, a0))];
    return rho;
}

// Classic fixed-step RK4 on d|psi>/dt = -i wn_to_angfs H_eff |psi|, t in fs.
// Snapshots are taken at the requested grid times, which must be multiples of
// dt. The callback receives (grid index, time, state).
inline void evolve(const Vec& psi0, const EffectiveLiouvillian& gen,
                   const std::vector<double>& grid, double dt,
                   const std::function<void(std::size_t, double, const Vec&)>& on_snapshot) {
    if (!(dt > 0.0)) throw std::invalid_argument("evolve: dt must be positive");
    std::vector<long> grid_steps(grid.size());
    long max_step = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double s = grid[i] / dt;
        grid_steps[i] = std::lround(s);
        if (std::abs(s - static_cast<double>(grid_steps[i])) > 1e-6 || grid[i] < 0.0)
            throw std::invalid_argument("evolve: grid times must be non-negative multiples of dt");
        max_step = std::max(max_step, grid_steps[i]);
    }

    const Eigen::SparseMatrix<cplx, Eigen::RowMajor> A =
        (-I * units::wn_to_angfs) * gen.mat;

    Vec psi = psi0, k1(psi.size()), k2(psi.size()), k3(psi.size()), k4(psi.size()),
        tmp(psi.size());
    for (std::size_t i = 1; i < grid_steps.size(); ++i)
        if (grid_steps[i] <= grid_steps[i - 1])
            throw std::invalid_argument("evolve: grid times must be strictly increasing");

    std::size_t gi = 0;
    auto emit_at = [&](long step, double t) {
        while (gi < grid.size() && grid_steps[gi] == step) {
            on_snapshot(gi, t, psi);
            ++gi;
        }
    };
    emit_at(0, 0.0);
    for (long step = 0; step < max_step; ++step) {
        k1.noalias() = A * psi;
        tmp = psi + (0.5 * dt) * k1;
        k2.noalias() = A * tmp;
        tmp = psi + (0.5 * dt) * k2;
        k3.noalias() = A * tmp;
        tmp = psi + dt * k3;
        k4.noalias() = A * tmp;
        psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (step % 25 == 24 || step + 1 == max_step) {
            const double nrm = psi.norm();
            if (!(nrm < 1e3))
                throw divergence_error(
                    "HEOM evolution diverged (||Psi|| = " + std::to_string(nrm) + " at t = " +
                    std::to_string((step + 1) * dt) +
                    " fs); truncation (L, depth, dt) likely insufficient");
        }
        emit_at(step + 1, (step + 1) * dt);
    }
}

inline std::vector<Vec> evolve(const Vec& psi0, const EffectiveLiouvillian& gen,
                               const std::vector<double>& grid, double dt) {
    std::vector<Vec> snaps(grid.size());
    evolve(psi0, gen, grid, dt,
           [&](std::size_t i, double, const Vec& psi) { snaps[i] = psi; });
    return snaps;
}

}  // namespace heomlab::heom
