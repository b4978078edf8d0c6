#pragma once

#include <complex>
#include <vector>

#include "esta/control.hpp"
#include "esta/modes.hpp"
#include "esta/units.hpp"

namespace esta {

// Composite Gauss-Legendre in time, panels aligned with the trajectory
// breakpoints (smoothing-window edges).
struct TimeQuadrature {
    int nodes_per_panel = 64;
};

struct EstaInputs {
    const ControlFunction* qc;    // smoothed auxiliary trajectory (modes ride on it)
    const ControlFunction* q0;    // STA trap trajectory, invert_q0(qc)
    const CorrectionBasis* basis;
    DimensionlessParams units;
    int n_modes = 4;              // N, truncation of the mode sums
    TimeQuadrature time_quadrature{};
};

struct EpsilonVector {
    std::vector<double> values;                          // L entries, sigma units
    std::vector<std::complex<double>> gn;                // N entries
    std::vector<std::vector<std::complex<double>>> kn;   // N x L
    double fidelity_estimate = 1.0;
    bool degenerate = false;  // gradient below threshold; values forced to zero
};

// G_n and K_n with generalized spatial integrands, shared by the standard
// eSTA computation and the delta-perturbed variants:
//   gn[n-1]      = int_0^{s_f} ds e^{i n s} <phi_n| g(u + q_c - q_0) |phi_0>
//   kn[n-1][l-1] = -int_0^{s_f} ds P_l e^{i n s} <phi_n| k(u + q_c - q_0) |phi_0>
// with s = omega0 t the radian time (hbar-scaled units throughout).
struct GnKn {
    std::vector<std::complex<double>> gn;
    std::vector<std::vector<std::complex<double>>> kn;
};
GnKn compute_gn_kn(const EstaInputs& in, const std::function<double(double)>& g_integrand,
                   const std::function<double(double)>& k_integrand);

// standard integrands for the unperturbed lattice against the harmonic reference
std::function<double(double)> lattice_minus_harmonic(const DimensionlessParams& units);
std::function<double(double)> lattice_gradient(const DimensionlessParams& units);

std::complex<double> compute_gn(int n, const EstaInputs& in);
std::complex<double> compute_kn(int n, int l, const EstaInputs& in);

// |G_n(q nodes) - G_n(2q nodes)|, the basis of the convergence warning
double gn_convergence_gap(int n, const EstaInputs& in);

// 1 - sum_n |G_n|^2
double estimate_fidelity_tdpt(const EstaInputs& in);
// gradient of the fidelity estimate with respect to epsilon: -2 sum_n Re(G_n K_n*)
std::vector<double> estimate_gradient_tdpt(const EstaInputs& in);

// parabola step from precomputed sums (also used on synthetic inputs)
EpsilonVector epsilon_from_gnkn(const GnKn& gk);
EpsilonVector compute_epsilon(const EstaInputs& in);

// Full pipeline for one trajectory family: smoothed q_c, inverted q_0,
// correction basis, epsilon, and the eSTA trajectory Q.
struct EstaTrajectory {
    ControlFunction qc;
    ControlFunction q0;
    CorrectionBasis basis;
    EpsilonVector epsilon;
    ControlFunction Q;
};

EstaTrajectory build_esta_trajectory(TrajectoryFamily family, double t_f,
                                     const DimensionlessParams& units, int L = 8, int N = 4);

}  // namespace esta
