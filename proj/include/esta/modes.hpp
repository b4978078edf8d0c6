#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "esta/control.hpp"

namespace esta {

// Normalized harmonic eigenfunction phi_n(x) in scaled units (sigma = 1),
// via the stable normalized upward recurrence.
double hermite_eigenfunction(int n, double x);

// phi_n(x) * exp(+x^2/2): the exponentially weighted factor used with
// Gauss-Hermite quadrature (weight exp(-x^2)).
double hermite_weighted(int n, double x);

// Gauss-Hermite nodes/weights for weight exp(-x^2) (Golub-Welsch).
struct GaussHermite {
    std::vector<double> x;
    std::vector<double> w;
    explicit GaussHermite(int order);
};

// Lewis-Riesenfeld transport modes chi_n(x, t) riding on the auxiliary
// trajectory q_c: boosted, displaced harmonic eigenstates. Times in tau
// (omega0 = 2 pi), positions in sigma.
class TransportModeSet {
public:
    TransportModeSet(const ControlFunction& qc, int max_n, int quadrature_order = 80);

    int max_n() const { return max_n_; }
    int quadrature_order() const { return static_cast<int>(gh_.x.size()); }
    const ControlFunction& qc() const { return *qc_; }

    // <chi_n(t)| f(x) |chi_0(t)> for a bounded multiplication operator f;
    // the momentum-boost factors cancel, leaving
    // e^{i n omega0 t} * integral phi_n(u) f(u + q_c(t)) phi_0(u) du.
    std::complex<double> matrix_element(int n, const std::function<double(double)>& f,
                                        double t) const;

    // purely spatial part: integral phi_n(u) f(u + center) phi_0(u) du
    double spatial_overlap(int n, const std::function<double(double)>& f, double center) const;

    // |result(order) - result(1.5 * order)|, the convergence gap the
    // quadrature-order warning is based on
    double convergence_gap(int n, const std::function<double(double)>& f, double t) const;

private:
    const ControlFunction* qc_;
    int max_n_;
    GaussHermite gh_;
    std::vector<std::vector<double>> phi_;  // phi_[n][j] = weighted phi_n at node j
};

// Lewis-Riesenfeld phase theta_n(t): -(n + 1/2) omega0 t plus the kinetic
// integral of (1/2) m qdot_c^2 (adaptive quadrature), in units of hbar.
double lr_phase(int n, double t, const ControlFunction& qc);

}  // namespace esta
