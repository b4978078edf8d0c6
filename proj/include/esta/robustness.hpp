#pragma once

#include <functional>

#include "esta/control.hpp"
#include "esta/dynamics.hpp"
#include "esta/units.hpp"

namespace esta {

enum class ErrorKind { correlated, amplitude, wavenumber };

const char* to_string(ErrorKind kind);

// Deterministic miscalibration of the lattice, strength delta.
// correlated keeps the well frequency at omega0; amplitude and wavenumber
// give omega = omega0 sqrt(1 + delta).
struct SystematicError {
    ErrorKind kind;
    double delta = 0.0;
};

// V_err as a function of w = x - Q(t), scaled units.
std::function<double(double)> error_value(ErrorKind kind, double delta,
                                          const DimensionlessParams& units);
// dV_err/dw at the given delta
std::function<double(double)> error_gradient(ErrorKind kind, double delta,
                                             const DimensionlessParams& units);
// dV_err/d(delta) at delta = 0 (symbolic)
std::function<double(double)> delta_derivative(ErrorKind kind, const DimensionlessParams& units);
// d^2 V_err / (d delta dw) at delta = 0 (symbolic)
std::function<double(double)> delta_derivative_gradient(ErrorKind kind,
                                                        const DimensionlessParams& units);

PotentialModel error_potential(const SystematicError& error, const ControlFunction& trajectory,
                               const DimensionlessParams& units);

// Target-state convention under systematic error: ground state of the
// perturbed final-time potential (default) or of the unperturbed one.
enum class TargetConvention { perturbed, unperturbed };

double transport_fidelity_with_error(const ControlFunction& trajectory, ErrorKind kind,
                                     double delta, const DimensionlessParams& units,
                                     const Grid& grid, const Numerics& num,
                                     TargetConvention convention = TargetConvention::perturbed);

// |F(+h) - F(-h)| / (2h) from two full transport simulations
double sensitivity_fd(const ControlFunction& trajectory, ErrorKind kind,
                      const DimensionlessParams& units, const Grid& grid, const Numerics& num,
                      double h = 1e-3, TargetConvention convention = TargetConvention::perturbed);

// First-order time-dependent perturbation theory:
//   S = 2 | Im[ integral ds <Psi_T(s)| dH/d delta |Psi_0(s)> * conj(<Psi_T(t_f)|Psi_0(t_f)>) ] |
// with both states propagated under the error-free lattice.
double sensitivity_tdpt(const ControlFunction& trajectory, ErrorKind kind,
                        const DimensionlessParams& units, const Grid& grid, const Numerics& num);

// (F(0) - F_R)/S for F(0) > F_R, else 0; +infinity when S = 0 with F(0) > F_R
double error_bound(double fidelity_at_zero, double sensitivity, double f_reference);

struct RobustnessReport {
    double fidelity_at_zero;
    double sensitivity;  // per unit delta
    double bound;
    double f_reference;
};

RobustnessReport assess_robustness(const ControlFunction& trajectory, ErrorKind kind,
                                   const DimensionlessParams& units, const Grid& grid,
                                   const Numerics& num, double f_reference = 0.9);

}  // namespace esta
