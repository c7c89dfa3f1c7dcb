// propagator.hpp — projection of the HEOM evolution onto a density-matrix
// subspace and the non-unitary propagator series G(t)

#pragma once

#include <atomic>
#include <future>
#include <thread>
#include <utility>

#include <Eigen/SVD>
#include <nlohmann/json.hpp>

#include "heomlab/heom.hpp"

namespace heomlab::prop {

struct HeomRunConfig {
    int L{4};
    int matsubara_cap{-1};  // cap for Matsubara modes (k > 1); -1 means L
    int depth{4};           // global depth cap D_h
    double dt{0.25};        // fs
    std::size_t state_cap{5'000'000};
    int threads{0};         // 0 = hardware concurrency
};

inline std::vector<int> mode_caps_for(const models::SystemModel& model, const HeomRunConfig& cfg) {
    std::vector<int> caps;
    for (const auto& c : model.couplings)
        for (int k = 0; k < c.bath.K(); ++k)
            caps.push_back(k == 0 || cfg.matsubara_cap < 0 ? cfg.L
                                                           : std::min(cfg.L, cfg.matsubara_cap));
    return caps;
}

// Ordered set S of (p, q) density-matrix index pairs, zero-padded to the next
// power of two; padded slots are inert identity rows/columns.
struct Subspace {
    std::vector<std::pair<int, int>> entries;

    int n_real() const { return static_cast<int>(entries.size()); }
    int n_qubits() const {
        int n = 0;
        while ((1 << n) < n_real()) ++n;
        return std::max(n, 1);
    }
    int size() const { return 1 << n_qubits(); }

    static Subspace of(std::vector<std::pair<int, int>> pairs) {
        if (pairs.empty()) throw std::invalid_argument("Subspace: empty entry list");
        for (std::size_t i = 0; i < pairs.size(); ++i)
            for (std::size_t j = i + 1; j < pairs.size(); ++j)
                if (pairs[i] == pairs[j]) throw std::invalid_argument("Subspace: duplicate pair");
        Subspace s;
        s.entries = std::move(pairs);
        return s;
    }

    // labels such as "DD", "DA" (triad) or "11", "66" (FMO); "p:q" with
    // 0-based indices works for any model
    static Subspace from_labels(const models::SystemModel& model,
                                const std::vector<std::string>& labels) {
        auto state_index = [&](const std::string& tok) {
            for (std::size_t i = 0; i < model.state_labels.size(); ++i)
                if (model.state_labels[i] == tok) return static_cast<int>(i);
            throw config_error("unknown state label '" + tok + "' for model " + model.label);
        };
        std::vector<std::pair<int, int>> pairs;
        for (const auto& lab : labels) {
            const auto colon = lab.find(':');
            if (colon != std::string::npos) {
                const int p = std::stoi(lab.substr(0, colon));
                const int q = std::stoi(lab.substr(colon + 1));
                if (p < 0 || p >= model.dim || q < 0 || q >= model.dim)
                    throw config_error("subspace pair '" + lab + "' out of range");
                pairs.emplace_back(p, q);
                continue;
            }
            bool matched = false;
            for (std::size_t cut = 1; cut < lab.size() && !matched; ++cut) {
                const std::string a = lab.substr(0, cut), b = lab.substr(cut);
                const auto& sl = model.state_labels;
                if (std::find(sl.begin(), sl.end(), a) != sl.end() &&
                    std::find(sl.begin(), sl.end(), b) != sl.end()) {
                    pairs.emplace_back(state_index(a), state_index(b));
                    matched = true;
                }
            }
            if (!matched) throw config_error("cannot parse subspace pair label '" + lab + "'");
        }
        return of(std::move(pairs));
    }

    std::vector<std::string> entry_labels(const models::SystemModel& model) const {
        std::vector<std::string> out;
        for (const auto& [p, q] : entries)
            out.push_back(model.state_labels[p] + model.state_labels[q]);
        for (int j = n_real(); j < size(); ++j) out.push_back("pad" + std::to_string(j));
        return out;
    }
};

struct PropagatorSeries {
    std::vector<double> times;        // fs, strictly increasing, times[0] = 0
    std::vector<Mat> mats;            // size x size per time
    std::vector<double> sigma0;       // largest singular value per time
    std::string model_label;
    std::vector<std::string> labels;  // per register slot, padded
    int n_real{0};
    int K{0};
    std::vector<int> mode_caps;
    int depth{0};
    double dt{0.0};
};

// |Phi(0)>_j = <p_j| rho0 |q_j>; rho0 weight outside S beyond 1e-12 is an error
inline Vec encode_initial(const Mat& rho0, const Subspace& S) {
    const int dim = static_cast<int>(rho0.rows());
    Mat mask = Mat::Zero(dim, dim);
    Vec phi = Vec::Zero(S.size());
    for (int j = 0; j < S.n_real(); ++j) {
        const auto [p, q] = S.entries[j];
        if (p >= dim || q >= dim) throw std::invalid_argument("encode_initial: pair out of range");
        phi[j] = rho0(p, q);
        mask(p, q) = 1.0;
    }
    for (int p = 0; p < dim; ++p)
        for (int q = 0; q < dim; ++q)
            if (mask(p, q) == 0.0 && std::abs(rho0(p, q)) > 1e-12)
                throw std::invalid_argument(
                    "encode_initial: initial state has weight outside the subspace at (" +
                    std::to_string(p) + "," + std::to_string(q) + ")");
    return phi;
}

// Column j of G(t_i) is the S-projection of the HEOM trajectory started from
// |p_j q~_j 0>; exactly n_real runs, independent and run on a worker pool.
inline PropagatorSeries compute_propagator_series(const models::SystemModel& model,
                                                  const Subspace& S,
                                                  const std::vector<double>& grid,
                                                  const HeomRunConfig& cfg) {
    if (grid.empty() || grid.front() != 0.0)
        throw std::invalid_argument("compute_propagator_series: grid must start at t = 0");
    const auto sp = heom::build_space(model, mode_caps_for(model, cfg), cfg.depth, cfg.state_cap);
    const auto gen = heom::build_liouvillian(model, sp);
    const std::size_t a0 = sp.ado_index(heom::NVec(sp.n_modes, 0));

    PropagatorSeries series;
    series.times = grid;
    series.mats.assign(grid.size(), Mat::Identity(S.size(), S.size()));
    series.model_label = model.label;
    series.labels = S.entry_labels(model);
    series.n_real = S.n_real();
    series.K = gen.K;
    series.mode_caps = sp.mode_caps;
    series.depth = cfg.depth;
    series.dt = cfg.dt;

    auto run_column = [&](int j) {
        const auto [p, q] = S.entries[j];
        heom::evolve(heom::basis_state(sp, p, q), gen, grid, cfg.dt,
                     [&](std::size_t i, double, const Vec& psi) {
                         for (int k = 0; k < S.n_real(); ++k) {
                             const auto [pk, qk] = S.entries[k];
                             series.mats[i](k, j) =
                                 psi[static_cast<Eigen::Index>(sp.offset(pk, qk, a0))];
                         }
                     });
    };

    const int hw = static_cast<int>(std::thread::hardware_concurrency());
    const int workers = std::max(1, std::min(cfg.threads > 0 ? cfg.threads : hw, S.n_real()));
    if (workers <= 1) {
        for (int j = 0; j < S.n_real(); ++j) run_column(j);
    } else {
        std::atomic<int> next{0};
        std::vector<std::future<void>> pool;
        for (int w = 0; w < workers; ++w)
            pool.push_back(std::async(std::launch::async, [&] {
                for (int j = next++; j < S.n_real(); j = next++) run_column(j);
            }));
        for (auto& f : pool) f.get();
    }

    series.sigma0.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        Eigen::JacobiSVD<Mat> svd(series.mats[i]);
        series.sigma0[i] = svd.singularValues()(0);
        if (!series.mats[i].allFinite())
            throw divergence_error("propagator matrix has non-finite entries at t = " +
                                   std::to_string(grid[i]));
    }
    return series;
}

inline Vec apply(const PropagatorSeries& series, std::size_t t_index, const Vec& phi0) {
    if (t_index >= series.mats.size())
        throw std::invalid_argument("propagator apply: time index out of range");
    return series.mats[t_index] * phi0;
}

inline nlohmann::json to_json(const PropagatorSeries& s) {
    nlohmann::json j;
    j["times"] = s.times;
    auto& mats = j["matrices"] = nlohmann::json::array();
    for (const auto& G : s.mats) {
        nlohmann::json m = nlohmann::json::array();
        for (Eigen::Index r = 0; r < G.rows(); ++r)
            for (Eigen::Index c = 0; c < G.cols(); ++c)
                m.push_back({G(r, c).real(), G(r, c).imag()});
        mats.push_back(std::move(m));
    }
    j["meta"] = {{"model", s.model_label}, {"labels", s.labels},   {"n_real", s.n_real},
                 {"K", s.K},               {"mode_caps", s.mode_caps}, {"depth", s.depth},
                 {"dt", s.dt},             {"sigma0", s.sigma0}};
    return j;
}

inline PropagatorSeries series_from_json(const nlohmann::json& j) {
    PropagatorSeries s;
    s.times = j.at("times").get<std::vector<double>>();
    for (const auto& m : j.at("matrices")) {
        const auto n = static_cast<Eigen::Index>(std::lround(std::sqrt(double(m.size()))));
        if (n * n != static_cast<Eigen::Index>(m.size()))
            throw io_error("propagator series: matrix entry count is not a square");
        Mat G(n, n);
        Eigen::Index k = 0;
        for (Eigen::Index r = 0; r < n; ++r)
            for (Eigen::Index c = 0; c < n; ++c, ++k)
                G(r, c) = cplx{m[k][0].get<double>(), m[k][1].get<double>()};
        s.mats.push_back(std::move(G));
    }
    const auto& meta = j.at("meta");
    s.model_label = meta.at("model").get<std::string>();
    s.labels = meta.at("labels").get<std::vector<std::string>>();
    s.n_real = meta.at("n_real").get<int>();
    s.K = meta.at("K").get<int>();
    s.mode_caps = meta.at("mode_caps").get<std::vector<int>>();
    s.depth = meta.at("depth").get<int>();
    s.dt = meta.at("dt").get<double>();
    s.sigma0 = meta.at("sigma0").get<std::vector<double>>();
    return s;
}

}  // namespace heomlab::prop
