#pragma once

#include <functional>

#include "esta/control.hpp"
#include "esta/dynamics.hpp"
#include "esta/units.hpp"

namespace esta {

enum class NoiseKind { position, amplitude };

const char* to_string(NoiseKind kind);

// Hermitian multiplication operator coupling the lattice to white noise.
// position:  H_1 = -sigma dV/dx = -U0 k0 sigma sin(2 k0 [x - Q(t)])
// amplitude: H_1 = V[x - Q(t)]
struct NoiseCoupling {
    NoiseKind kind;
    std::function<double(double x, double t)> op;  // scaled energy
};

NoiseCoupling coupling_operator(NoiseKind kind, const ControlFunction& trajectory,
                                const DimensionlessParams& units);
// the same operator as a function of w = x - Q(t)
std::function<double(double)> coupling_profile(NoiseKind kind, const DimensionlessParams& units);

// S_N = |dF/d(eta^2)| from the second-order master-equation perturbation,
// with Psi_0 forward- and Psi_T backward-propagated under the noiseless
// lattice Hamiltonian. Reported per tau (eta^2 carries units of time).
double noise_sensitivity(const ControlFunction& trajectory, NoiseKind kind,
                         const DimensionlessParams& units, const Grid& grid, const Numerics& num);

// Adiabatic-limit constant C = Var(H_1)/hbar^2 over the lattice ground
// state, reported per tau^2 (S_N -> t_f C as t_f -> infinity).
double adiabatic_constant_exact(NoiseKind kind, const DimensionlessParams& units, const Grid& grid,
                                const Numerics& num);
// same formula over a caller-supplied state centered at `center`
double adiabatic_constant_from_state(NoiseKind kind, const DimensionlessParams& units,
                                     const Wavefunction& psi, double center);
// closed forms from the harmonic ground-state approximation
double adiabatic_constant_approx(NoiseKind kind, const DimensionlessParams& units);

double noise_error_bound(double fidelity_at_zero, double s_n, double f_reference);

struct NoiseReport {
    double fidelity_at_zero;
    double s_n;
    double b_n;
    double f_reference;
};

NoiseReport assess_noise(const ControlFunction& trajectory, NoiseKind kind,
                         const DimensionlessParams& units, const Grid& grid, const Numerics& num,
                         double f_reference = 0.9);

}  // namespace esta
