#include "esta/robustness.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

#include "esta/constants.hpp"

namespace esta {

namespace {
constexpr double kTwoPi = 2.0 * constants::pi;
}

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::correlated: return "correlated";
        case ErrorKind::amplitude: return "amplitude";
        case ErrorKind::wavenumber: return "wavenumber";
    }
    return "?";
}

std::function<double(double)> error_value(ErrorKind kind, double delta,
                                          const DimensionlessParams& units) {
    const double u0 = units.u0, k = units.k_sigma;
    switch (kind) {
        case ErrorKind::correlated: {
            if (!(1.0 + delta > 0.0)) {
                throw std::invalid_argument("correlated error requires 1 + delta > 0");
            }
            const double root = std::sqrt(1.0 + delta);
            return [u0, k, delta, root](double w) {
                double s = std::sin(k * w / root);
                return u0 * (1.0 + delta) * s * s;
            };
        }
        case ErrorKind::amplitude:
            return [u0, k, delta](double w) {
                double s = std::sin(k * w);
                return u0 * (1.0 + delta) * s * s;
            };
        case ErrorKind::wavenumber: {
            const double root = std::sqrt(1.0 + delta);
            return [u0, k, root](double w) {
                double s = std::sin(k * root * w);
                return u0 * s * s;
            };
        }
    }
    throw std::invalid_argument("unknown error kind");
}

std::function<double(double)> error_gradient(ErrorKind kind, double delta,
                                             const DimensionlessParams& units) {
    const double u0 = units.u0, k = units.k_sigma;
    switch (kind) {
        case ErrorKind::correlated: {
            if (!(1.0 + delta > 0.0)) {
                throw std::invalid_argument("correlated error requires 1 + delta > 0");
            }
            const double root = std::sqrt(1.0 + delta);
            return [u0, k, root](double w) { return u0 * root * k * std::sin(2.0 * k * w / root); };
        }
        case ErrorKind::amplitude:
            return [u0, k, delta](double w) { return u0 * (1.0 + delta) * k * std::sin(2.0 * k * w); };
        case ErrorKind::wavenumber: {
            const double root = std::sqrt(1.0 + delta);
            return [u0, k, root](double w) { return u0 * root * k * std::sin(2.0 * k * root * w); };
        }
    }
    throw std::invalid_argument("unknown error kind");
}

std::function<double(double)> delta_derivative(ErrorKind kind, const DimensionlessParams& units) {
    const double u0 = units.u0, k = units.k_sigma;
    switch (kind) {
        case ErrorKind::correlated:
            return [u0, k](double w) {
                double s = std::sin(k * w);
                return u0 * s * s - 0.5 * u0 * k * w * std::sin(2.0 * k * w);
            };
        case ErrorKind::amplitude:
            return [u0, k](double w) {
                double s = std::sin(k * w);
                return u0 * s * s;
            };
        case ErrorKind::wavenumber:
            return [u0, k](double w) { return 0.5 * u0 * k * w * std::sin(2.0 * k * w); };
    }
    throw std::invalid_argument("unknown error kind");
}

std::function<double(double)> delta_derivative_gradient(ErrorKind kind,
                                                        const DimensionlessParams& units) {
    const double u0 = units.u0, k = units.k_sigma;
    switch (kind) {
        case ErrorKind::correlated:
            return [u0, k](double w) {
                return 0.5 * u0 * k * std::sin(2.0 * k * w) - u0 * k * k * w * std::cos(2.0 * k * w);
            };
        case ErrorKind::amplitude:
            return [u0, k](double w) { return u0 * k * std::sin(2.0 * k * w); };
        case ErrorKind::wavenumber:
            return [u0, k](double w) {
                return 0.5 * u0 * k * (std::sin(2.0 * k * w) + 2.0 * k * w * std::cos(2.0 * k * w));
            };
    }
    throw std::invalid_argument("unknown error kind");
}

PotentialModel error_potential(const SystematicError& error, const ControlFunction& trajectory,
                               const DimensionlessParams& units) {
    auto v = error_value(error.kind, error.delta, units);
    const ControlFunction* traj = &trajectory;
    return PotentialModel{[v, traj](double x, double t) { return v(x - traj->value(t)); }, traj};
}

double transport_fidelity_with_error(const ControlFunction& trajectory, ErrorKind kind,
                                     double delta, const DimensionlessParams& units,
                                     const Grid& grid, const Numerics& num,
                                     TargetConvention convention) {
    PotentialModel pot = error_potential(SystematicError{kind, delta}, trajectory, units);
    if (convention == TargetConvention::perturbed) {
        return simulate_transport(pot, trajectory, grid, num);
    }
    PotentialModel target = error_potential(SystematicError{kind, 0.0}, trajectory, units);
    return simulate_transport(pot, target, trajectory, grid, num);
}

double sensitivity_fd(const ControlFunction& trajectory, ErrorKind kind,
                      const DimensionlessParams& units, const Grid& grid, const Numerics& num,
                      double h, TargetConvention convention) {
    double fp = transport_fidelity_with_error(trajectory, kind, +h, units, grid, num, convention);
    double fm = transport_fidelity_with_error(trajectory, kind, -h, units, grid, num, convention);
    return std::abs(fp - fm) / (2.0 * h);
}

double sensitivity_tdpt(const ControlFunction& trajectory, ErrorKind kind,
                        const DimensionlessParams& units, const Grid& grid, const Numerics& num) {
    const double t_f = trajectory.t_f();
    PotentialModel pot = error_potential(SystematicError{kind, 0.0}, trajectory, units);
    Wavefunction psi0 = ground_state(pot, 0.0, trajectory.value(0.0), grid, num);
    Wavefunction target = ground_state(pot, t_f, trajectory.value(t_f), grid, num);

    auto dv = delta_derivative(kind, units);
    const ControlFunction* traj = &trajectory;

    std::vector<std::complex<double>> integrand;
    std::complex<double> overlap_final = 0.0;
    copropagate(pot, psi0, target, t_f, num,
                [&](double t, const Wavefunction& fwd, const Wavefunction& bwd) {
                    std::complex<double> z = 0.0;
                    const double q = traj->value(t);
                    for (int i = 0; i < fwd.grid.n; ++i) {
                        z += std::conj(bwd.amp[static_cast<std::size_t>(i)]) *
                             dv(fwd.grid.x(i) - q) * fwd.amp[static_cast<std::size_t>(i)];
                    }
                    integrand.push_back(z * fwd.grid.dx());
                    overlap_final = inner_product(bwd, fwd);
                });

    // trapezoid over radian time s = 2 pi t
    const double ds = kTwoPi * t_f / static_cast<double>(integrand.size() - 1);
    std::complex<double> z_total = 0.0;
    for (std::size_t i = 0; i < integrand.size(); ++i) {
        double w = (i == 0 || i + 1 == integrand.size()) ? 0.5 : 1.0;
        z_total += w * integrand[i];
    }
    z_total *= ds;
    return 2.0 * std::abs(std::imag(z_total * std::conj(overlap_final)));
}

double error_bound(double fidelity_at_zero, double sensitivity, double f_reference) {
    if (!(f_reference > 0.0 && f_reference < 1.0)) {
        throw std::invalid_argument("f_reference must lie in (0, 1)");
    }
    if (fidelity_at_zero <= f_reference) return 0.0;
    if (sensitivity == 0.0) return std::numeric_limits<double>::infinity();
    return (fidelity_at_zero - f_reference) / sensitivity;
}

RobustnessReport assess_robustness(const ControlFunction& trajectory, ErrorKind kind,
                                   const DimensionlessParams& units, const Grid& grid,
                                   const Numerics& num, double f_reference) {
    RobustnessReport r{};
    r.f_reference = f_reference;
    r.fidelity_at_zero =
        transport_fidelity_with_error(trajectory, kind, 0.0, units, grid, num);
    r.sensitivity = sensitivity_fd(trajectory, kind, units, grid, num);
    r.bound = error_bound(r.fidelity_at_zero, r.sensitivity, f_reference);
    return r;
}

}  // namespace esta
