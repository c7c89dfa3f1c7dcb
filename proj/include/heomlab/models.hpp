// models.hpp — concrete physical models: triad spin-boson presets, 7-site FMO,
// and the Marcus charge-transfer rate

#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "heomlab/bath.hpp"
#include "heomlab/common.hpp"
#include "heomlab/units.hpp"

namespace heomlab::models {

struct Coupling {
    Mat op;                       // Hermitian system operator A_m
    bath::BathDecomposition bath;
};

// Internal units: h_s and bath parameters in cm^-1 (dimensionless models embed
// their energies as E/wn_to_angfs so that fs-time evolution reproduces
// dimensionless time; see spin_boson_model).
struct SystemModel {
    int dim{0};
    Mat h_s;
    std::vector<Coupling> couplings;
    Mat rho0;
    std::string label;
    std::vector<std::string> state_labels;
};

struct TriadParams {
    double V_eV{0.0};
    double E0_eV{0.0};
    double eta_eV{0.0};
    double omega_c_wn{25.0};
    double T_K{300.0};
};

inline TriadParams triad_params(const std::string& conformation) {
    if (conformation == "bent") return {2.4e-2, 0.507, 0.2565, 25.0, 300.0};
    if (conformation == "linear") return {9.0e-3, 0.236, 0.318, 25.0, 300.0};
    throw config_error("unknown triad conformation '" + conformation + "' (expected bent|linear)");
}

struct FmoParams {
    double eta_wn{70.0};
    double omega_c_inv_fs{50.0};
    double T_K{300.0};
    int initial_site{1};  // external 1-based
};

inline void validate(const SystemModel& m) {
    auto herm_dev = [](const Mat& A) { return (A - A.adjoint()).cwiseAbs().maxCoeff(); };
    if (herm_dev(m.h_s) > 1e-12) throw std::invalid_argument(m.label + ": h_s not Hermitian");
    for (const auto& c : m.couplings)
        if (herm_dev(c.op) > 1e-12) throw std::invalid_argument(m.label + ": coupling operator not Hermitian");
    if (std::abs(m.rho0.trace() - cplx{1.0, 0.0}) > 1e-12)
        throw std::invalid_argument(m.label + ": Tr rho0 != 1");
    if (herm_dev(m.rho0) > 1e-12) throw std::invalid_argument(m.label + ": rho0 not Hermitian");
    Eigen::SelfAdjointEigenSolver<Mat> es(m.rho0);
    if (es.eigenvalues().minCoeff() < -1e-12)
        throw std::invalid_argument(m.label + ": rho0 not positive semidefinite");
}

// Generic spin-boson builder in internal units (h_s entries in cm^-1,
// sigma_z coupling). For dimensionless parameter sets pass
// energy / units::wn_to_angfs and beta * units::wn_to_angfs; fs times then
// play the role of dimensionless times.
inline SystemModel spin_boson_model(double V, double E0, double eta, double omega_c,
                                    double beta, int K, std::string label) {
    SystemModel m;
    m.dim = 2;
    m.h_s = Mat{{cplx(E0), cplx(V)}, {cplx(V), cplx(-E0)}};
    Mat sz = Mat{{cplx(1.0), cplx(0.0)}, {cplx(0.0), cplx(-1.0)}};
    m.couplings.push_back({sz, bath::debye_decompose({eta, omega_c}, beta, K)});
    m.rho0 = Mat::Zero(2, 2);
    m.rho0(0, 0) = 1.0;  // |D><D|
    m.label = std::move(label);
    m.state_labels = {"D", "A"};
    validate(m);
    return m;
}

inline SystemModel triad_model(const std::string& conformation, int K) {
    const TriadParams p = triad_params(conformation);
    return spin_boson_model(p.V_eV * units::ev_to_wn, p.E0_eV * units::ev_to_wn,
                            p.eta_eV * units::ev_to_wn, p.omega_c_wn,
                            units::beta_wn(p.T_K), K, "triad-" + conformation);
}

inline Mat fmo_site_hamiltonian() {
    Mat h(7, 7);
    h << 310.0, -97.9, 5.5, -5.8, 6.7, -12.1, -10.3,
        -97.9, 230.0, 30.1, 7.3, 2.0, 11.5, 4.8,
        5.5, 30.1, 0.0, -58.8, -1.5, -9.6, 4.7,
        -5.8, 7.3, -58.8, 180.0, -64.9, -17.4, -64.4,
        6.7, 2.0, -1.5, -64.9, 405.0, 89.0, -6.4,
        -12.1, 11.5, -9.6, -17.4, 89.0, 320.0, 31.7,
        -10.3, 4.8, 4.7, -64.4, -6.4, 31.7, 270.0;
    return h;
}

// 7-site Frenkel model; each site couples to an identical Debye bath through
// its projector |m><m|. Sites are 1..7 externally, 0..6 internally.
inline SystemModel fmo_model(int K, const FmoParams& p = {}) {
    SystemModel m;
    m.dim = 7;
    m.h_s = fmo_site_hamiltonian();
    const double omega_c = (1.0 / p.omega_c_inv_fs) / units::wn_to_angfs;  // cm^-1
    const auto dec = bath::debye_decompose({p.eta_wn, omega_c}, units::beta_wn(p.T_K), K);
    for (int site = 0; site < 7; ++site) {
        Mat A = Mat::Zero(7, 7);
        A(site, site) = 1.0;
        m.couplings.push_back({A, dec});
    }
    m.rho0 = Mat::Zero(7, 7);
    m.rho0(p.initial_site - 1, p.initial_site - 1) = 1.0;
    m.label = "fmo";
    for (int s = 1; s <= 7; ++s) m.state_labels.push_back(std::to_string(s));
    validate(m);
    return m;
}

inline SystemModel preset_model(const std::string& name, int K) {
    if (name == "triad-bent") return triad_model("bent", K);
    if (name == "triad-linear") return triad_model("linear", K);
    if (name == "fmo") return fmo_model(K);
    throw config_error("unknown model preset '" + name + "' (expected triad-bent|triad-linear|fmo)");
}

// k = (V^2/hbar) sqrt(pi/(lambda kT)) exp(-(E_DA - lambda)^2 / (4 lambda kT))
// with lambda = 2 eta and E_DA = 2 E0; result in s^-1.
inline double marcus_rate(const TriadParams& p) {
    const double V = p.V_eV * units::ev_to_wn;
    const double lambda = 2.0 * p.eta_eV * units::ev_to_wn;
    const double E_DA = 2.0 * p.E0_eV * units::ev_to_wn;
    if (!(lambda > 0.0)) throw std::invalid_argument("marcus_rate: lambda must be positive");
    if (!(p.T_K > 0.0)) throw std::invalid_argument("marcus_rate: T must be positive");
    const double kT = units::kT_wn(p.T_K);
    const double k_wn = V * V * std::sqrt(M_PI / (lambda * kT)) *
                        std::exp(-(E_DA - lambda) * (E_DA - lambda) / (4.0 * lambda * kT));
    return k_wn * units::rate_wn_to_per_s;
}

}  // namespace heomlab::models
