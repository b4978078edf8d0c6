#include "esta/noise.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "esta/constants.hpp"
#include "esta/robustness.hpp"

namespace esta {

namespace {
constexpr double kTwoPi = 2.0 * constants::pi;
}

const char* to_string(NoiseKind kind) {
    switch (kind) {
        case NoiseKind::position: return "position";
        case NoiseKind::amplitude: return "amplitude";
    }
    return "?";
}

std::function<double(double)> coupling_profile(NoiseKind kind, const DimensionlessParams& units) {
    const double u0 = units.u0, k = units.k_sigma;
    switch (kind) {
        case NoiseKind::position:
            return [u0, k](double w) { return -u0 * k * std::sin(2.0 * k * w); };
        case NoiseKind::amplitude:
            return [u0, k](double w) {
                double s = std::sin(k * w);
                return u0 * s * s;
            };
    }
    throw std::invalid_argument("unknown noise kind");
}

NoiseCoupling coupling_operator(NoiseKind kind, const ControlFunction& trajectory,
                                const DimensionlessParams& units) {
    auto profile = coupling_profile(kind, units);
    const ControlFunction* traj = &trajectory;
    return NoiseCoupling{kind,
                         [profile, traj](double x, double t) { return profile(x - traj->value(t)); }};
}

double noise_sensitivity(const ControlFunction& trajectory, NoiseKind kind,
                         const DimensionlessParams& units, const Grid& grid, const Numerics& num) {
    const double t_f = trajectory.t_f();
    PotentialModel pot = lattice_potential(trajectory, units.u0, units.k_sigma);
    Wavefunction psi0 = ground_state(pot, 0.0, trajectory.value(0.0), grid, num);
    Wavefunction target = ground_state(pot, t_f, trajectory.value(t_f), grid, num);

    auto h1 = coupling_profile(kind, units);
    const ControlFunction* traj = &trajectory;

    std::vector<double> integrand;
    copropagate(pot, psi0, target, t_f, num,
                [&](double t, const Wavefunction& fwd, const Wavefunction& bwd) {
                    const double q = traj->value(t);
                    std::complex<double> m2 = 0.0, m1 = 0.0, ov = 0.0;
                    for (int i = 0; i < fwd.grid.n; ++i) {
                        const std::size_t j = static_cast<std::size_t>(i);
                        const double h = h1(fwd.grid.x(i) - q);
                        const std::complex<double> bt = std::conj(bwd.amp[j]);
                        m2 += bt * (h * h) * fwd.amp[j];
                        m1 += bt * h * fwd.amp[j];
                        ov += std::conj(fwd.amp[j]) * bwd.amp[j];
                    }
                    const double dx = fwd.grid.dx();
                    m2 *= dx;
                    m1 *= dx;
                    ov *= dx;
                    integrand.push_back(std::real(m2 * ov) - std::norm(m1));
                });

    const double dt = t_f / static_cast<double>(integrand.size() - 1);
    double total = 0.0;
    for (std::size_t i = 0; i < integrand.size(); ++i) {
        double w = (i == 0 || i + 1 == integrand.size()) ? 0.5 : 1.0;
        total += w * integrand[i];
    }
    total *= dt;
    // coupling enters the scaled evolution as 2 pi H_1 per tau
    return kTwoPi * kTwoPi * std::abs(total);
}

double adiabatic_constant_from_state(NoiseKind kind, const DimensionlessParams& units,
                                     const Wavefunction& psi, double center) {
    auto h1 = coupling_profile(kind, units);
    double m1 = 0.0, m2 = 0.0;
    for (int i = 0; i < psi.grid.n; ++i) {
        const double h = h1(psi.grid.x(i) - center);
        const double p = std::norm(psi.amp[static_cast<std::size_t>(i)]);
        m1 += p * h;
        m2 += p * h * h;
    }
    m1 *= psi.grid.dx();
    m2 *= psi.grid.dx();
    return kTwoPi * kTwoPi * std::abs(m2 - m1 * m1);
}

double adiabatic_constant_exact(NoiseKind kind, const DimensionlessParams& units, const Grid& grid,
                                const Numerics& num) {
    PotentialModel still{[&units](double x, double) {
                             double s = std::sin(units.k_sigma * x);
                             return units.u0 * s * s;
                         },
                         nullptr};
    Wavefunction psi = ground_state(still, 0.0, 0.0, grid, num);
    return adiabatic_constant_from_state(kind, units, psi, 0.0);
}

double adiabatic_constant_approx(NoiseKind kind, const DimensionlessParams& units) {
    const double w0 = units.omega0;  // 2 pi in tau units
    const double u = units.u0;
    switch (kind) {
        case NoiseKind::position:
            return (w0 * w0 * u / 4.0) * (1.0 - std::exp(-2.0 / u));
        case NoiseKind::amplitude: {
            double e = std::exp(1.0 / u) - 1.0;
            return (w0 * w0 * u * u / 8.0) * std::exp(-2.0 / u) * e * e;
        }
    }
    throw std::invalid_argument("unknown noise kind");
}

double noise_error_bound(double fidelity_at_zero, double s_n, double f_reference) {
    return error_bound(fidelity_at_zero, s_n, f_reference);
}

NoiseReport assess_noise(const ControlFunction& trajectory, NoiseKind kind,
                         const DimensionlessParams& units, const Grid& grid, const Numerics& num,
                         double f_reference) {
    NoiseReport r{};
    r.f_reference = f_reference;
    PotentialModel pot = lattice_potential(trajectory, units.u0, units.k_sigma);
    r.fidelity_at_zero = simulate_transport(pot, trajectory, grid, num);
    r.s_n = noise_sensitivity(trajectory, kind, units, grid, num);
    r.b_n = noise_error_bound(r.fidelity_at_zero, r.s_n, f_reference);
    return r;
}

}  // namespace esta
