// bath.hpp — Debye spectral density and exponential decomposition of the
// reservoir correlation function
//
// Unit convention: energies, frequencies and inverse temperature are in one
// consistent energy unit (cm^-1 for the physical models); time arguments are
// reciprocal-energy times. Callers working in fs multiply by
// units::wn_to_angfs before calling (omega[rad/fs] = 2*pi*c * E[cm^-1]).

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/expint.hpp>

#include "heomlab/common.hpp"

namespace heomlab::bath {

// J(w) = eta * w * w_c / (w^2 + w_c^2)
struct SpectralDensity {
    double eta{0.0};
    double omega_c{1.0};

    double operator()(double omega) const {
        return eta * omega * omega_c / (omega * omega + omega_c * omega_c);
    }
};

struct Mode {
    cplx d{0.0, 0.0};  // amplitude
    double v{0.0};     // decay rate (> 0)
    double r{0.0};     // filtering scale |d|
};

struct BathDecomposition {
    double beta{1.0};
    std::vector<Mode> modes;

    int K() const { return static_cast<int>(modes.size()); }
};

// C(t) = sum_k d_k exp(-v_k t) with
//   v_1 = w_c,              d_1 = (eta w_c / 2) [cot(beta w_c / 2) - i]
//   v_k = 2 pi (k-1)/beta,  d_k = (2/beta) eta v_k w_c / (v_k^2 - w_c^2)   (k > 1)
inline BathDecomposition debye_decompose(const SpectralDensity& J, double beta, int K) {
    if (K < 1) throw std::invalid_argument("debye_decompose: K must be >= 1");
    if (!(beta > 0.0)) throw std::invalid_argument("debye_decompose: beta must be positive");
    if (!(J.omega_c > 0.0)) throw std::invalid_argument("debye_decompose: omega_c must be positive");
    if (J.eta < 0.0) throw std::invalid_argument("debye_decompose: eta must be non-negative");

    BathDecomposition dec;
    dec.beta = beta;
    dec.modes.resize(K);

    const double wc = J.omega_c;
    dec.modes[0].v = wc;
    dec.modes[0].d = 0.5 * J.eta * wc * cplx{1.0 / std::tan(0.5 * beta * wc), -1.0};
    for (int k = 1; k < K; ++k) {
        const double vk = 2.0 * M_PI * k / beta;
        if (std::abs(vk - wc) < 1e-10 * wc)
            throw std::invalid_argument(
                "debye_decompose: Matsubara frequency v_" + std::to_string(k + 1) +
                " resonant with omega_c (coefficient formula divides by v_k^2 - w_c^2)");
        dec.modes[k].v = vk;
        dec.modes[k].d = (2.0 / beta) * J.eta * vk * wc / (vk * vk - wc * wc);
    }
    for (auto& m : dec.modes) m.r = std::abs(m.d);
    return dec;
}

inline cplx correlation_closed_form(const BathDecomposition& dec, double t) {
    if (t < 0.0) throw std::invalid_argument("correlation_closed_form: t must be >= 0");
    cplx c{0.0, 0.0};
    for (const auto& m : dec.modes) c += m.d * std::exp(-m.v * t);
    return c;
}

namespace detail {

// e^z E1(z) and e^-z Ei(z); asymptotic series once e^z would overflow
inline double exp_e1_scaled(double z) {
    if (z < 600.0) return std::exp(z) * boost::math::expint(1, z);
    const double iz = 1.0 / z;
    return iz * (1.0 - iz * (1.0 - iz * (2.0 - iz * (6.0 - 24.0 * iz))));
}

inline double exp_ei_scaled(double z) {
    if (z < 600.0) return std::exp(-z) * boost::math::expint(z);
    const double iz = 1.0 / z;
    return iz * (1.0 + iz * (1.0 + iz * (2.0 + iz * (6.0 + 24.0 * iz))));
}

}  // namespace detail

// Oracle for debye_decompose:
//   C(t) = (1/pi) \int_0^inf J(w) [coth(beta w/2) cos(wt) - i sin(wt)] dw,  t > 0.
//
// Evaluated as thermal + zero-temperature parts. The thermal integrand
// J(w) (coth(beta w/2) - 1) cos(wt) decays like exp(-beta w) and is handled by
// adaptive Gauss-Kronrod on [0, 80/beta + 20 w_c] to relative tolerance 1e-11.
// The conditionally convergent zero-temperature part has closed forms
//   Re: (eta w_c / 2pi) [e^z E1(z) - e^-z Ei(z)],  Im: -(eta w_c / 2) e^-z,
// with z = w_c t, so no oscillatory truncation error enters. Achieved absolute
// tolerance is reported through achieved_tol; target is 1e-9 * eta * w_c.
inline cplx correlation_quadrature(const SpectralDensity& J, double beta, double t,
                                   double* achieved_tol = nullptr) {
    if (!(t > 0.0))
        throw std::invalid_argument("correlation_quadrature: t must be > 0 (Im C is discontinuous at t = 0)");
    if (!(beta > 0.0)) throw std::invalid_argument("correlation_quadrature: beta must be positive");

    const double wc = J.omega_c;
    const double upper = 80.0 / beta + 20.0 * wc;
    auto thermal = [&](double w) {
        if (w <= 0.0) return (2.0 / beta) * J.eta / wc;  // limit w->0
        return J(w) * (2.0 / std::expm1(beta * w)) * std::cos(w * t);
    };
    double err = 0.0;
    const double re_thermal = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                                  thermal, 0.0, upper, 15, 1e-11, &err) /
                              M_PI;

    const double z = wc * t;
    const double re0 = (J.eta * wc / (2.0 * M_PI)) *
                       (detail::exp_e1_scaled(z) - detail::exp_ei_scaled(z));
    const double im0 = -0.5 * J.eta * wc * std::exp(-z);

    const double achieved = err / M_PI + 1e-14 * std::abs(re_thermal);
    if (achieved_tol) *achieved_tol = achieved;
    const double target = 1e-9 * std::max(1.0, J.eta * wc);
    if (achieved > target)
        throw divergence_error("correlation_quadrature: did not converge, achieved abs tol " +
                               std::to_string(achieved));
    return cplx{re_thermal + re0, im0};
}

}  // namespace heomlab::bath
