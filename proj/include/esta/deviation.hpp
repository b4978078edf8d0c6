#pragma once

#include <vector>

#include "esta/correction.hpp"
#include "esta/robustness.hpp"

namespace esta {

enum class DerivativeMethod { finite_difference, analytic };

struct DeviationReport {
    double c_q;                               // sigma * tau
    double upper_bound;
    std::vector<double> d_epsilon_d_delta;    // L entries
    double sta_term_norm;                     // L1 norm of dq_0/d delta
};

// Generic delta-family hook: spatial integrands of the perturbed G_n / K_n
// at a given delta, plus their symbolic delta-derivatives at zero.
struct DeltaFamily {
    std::function<std::function<double(double)>(double delta)> g_integrand;   // V_err - V_0
    std::function<std::function<double(double)>(double delta)> k_integrand;   // dV_err/dw
    std::function<double(double)> g_delta_derivative;                         // dV/d delta
    std::function<double(double)> k_delta_derivative;                         // d2V/(d delta dw)
    std::function<double(double)> sta_term;                                   // dq_0/d delta (t)
};

DeltaFamily make_delta_family(ErrorKind kind, const ControlFunction& qc,
                              const DimensionlessParams& units);

// d epsilon_j / d delta at delta = 0.
// finite_difference: central difference of the parabola step over the
// delta-perturbed G_n, K_n (the reference route).
// analytic: differentiation of the epsilon formula term by term using the
// symbolic dV/d delta inside the quadratures.
std::vector<double> epsilon_delta_derivative(const EstaInputs& in, const DeltaFamily& family,
                                             DerivativeMethod method, double h = 1e-3);
std::vector<double> epsilon_delta_derivative(const EstaInputs& in, ErrorKind kind,
                                             DerivativeMethod method, double h = 1e-3);

// C_Q = integral over [0, t_f] of |dq_0/d delta + sum_j P_j(t) d eps_j/d delta|
DeviationReport control_deviation(const EstaInputs& in, ErrorKind kind,
                                  DerivativeMethod method = DerivativeMethod::finite_difference,
                                  double rel_tol = 1e-6);

double deviation_upper_bound(const EstaInputs& in, ErrorKind kind,
                             DerivativeMethod method = DerivativeMethod::finite_difference);

}  // namespace esta
