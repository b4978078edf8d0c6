#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include "esta/control.hpp"

namespace esta {

// Uniform spatial grid, sigma units. Periodic boundary for the spectral
// kinetic step; n must be a power of two, >= 512.
struct Grid {
    double x_min;
    double x_max;
    int n;

    Grid(double x_min, double x_max, int n);
    double length() const { return x_max - x_min; }
    double dx() const { return length() / n; }
    double x(int i) const { return x_min + i * dx(); }
};

// Default lab-frame transport grid [-pad, d+pad].
Grid make_transport_grid(double d, double pad_sigma = 12.0, int n = 2048);

struct Wavefunction {
    Grid grid;
    std::vector<std::complex<double>> amp;
    double time = 0.0;

    explicit Wavefunction(const Grid& g) : grid(g), amp(static_cast<std::size_t>(g.n)) {}
    double norm() const;  // L2 with grid weight
    void normalize();
};

std::complex<double> inner_product(const Wavefunction& a, const Wavefunction& b);
double fidelity(const Wavefunction& a, const Wavefunction& b);

// Scaled potential energy (units of hbar*omega0) at position x (sigma) and
// time t (tau).
struct PotentialModel {
    std::function<double(double x, double t)> evaluate;
    const ControlFunction* trajectory = nullptr;
};

// Unperturbed lattice potential V(x - q(t)) for a given trajectory.
PotentialModel lattice_potential(const ControlFunction& trajectory, double u0, double k_sigma);
// Harmonic reference potential (x - q(t))^2 / 2.
PotentialModel harmonic_potential(const ControlFunction& trajectory);

struct Numerics {
    int grid_points = 2048;
    double grid_pad_sigma = 12.0;
    double dt_over_tau = 1.0 / 2000.0;
    double imag_time_tol = 1e-12;
    int order = 4;  // 2 = plain Strang step, 4 = Yoshida-composed Strang
};

// Split-operator propagator bound to one grid (owns FFT workspace).
// Real-time step: half potential kick, spectral kinetic drift, half kick,
// potential sampled at the step midpoint. Unitary per step by construction.
class SplitOperator {
public:
    explicit SplitOperator(const Grid& g);
    ~SplitOperator();
    SplitOperator(const SplitOperator&) = delete;
    SplitOperator& operator=(const SplitOperator&) = delete;

    // single Strang step from psi.time over dt (dt < 0 propagates backward)
    void step(Wavefunction& psi, const PotentialModel& pot, double dt) const;
    // fourth-order triple-jump composition of Strang steps
    void step4(Wavefunction& psi, const PotentialModel& pot, double dt) const;

    void propagate(Wavefunction& psi, const PotentialModel& pot, double t_end,
                   const Numerics& num) const;

    // scaled energy <T> + <V> at the snapshot time
    double energy(const Wavefunction& psi, const PotentialModel& pot, double t) const;

    // one imaginary-time kick-drift-kick step followed by renormalization
    void imaginary_step(Wavefunction& psi, const PotentialModel& pot, double t, double dtau) const;

    const Grid& grid() const { return grid_; }

private:
    struct Fft;
    Grid grid_;
    std::vector<double> k2_half_;  // k^2/2 on the FFT frequency layout
    std::unique_ptr<Fft> fft_;
};

// Ground state of the potential frozen at time t_snapshot, localized in the
// well at seed_center: imaginary-time split-operator evolution from the
// harmonic ground-state seed, annealed in the step size and iterated until
// the energy change per step falls below num.imag_time_tol.
// Throws std::runtime_error if the step cap is reached.
Wavefunction ground_state(const PotentialModel& pot, double t_snapshot, double seed_center,
                          const Grid& grid, const Numerics& num);

// Prepares the initial ground state (trap at q(0)), propagates under pot,
// and compares with the target ground state of the final-time potential.
// target_pot lets the caller choose the target-state convention under
// systematic errors; pass the same model for the default (perturbed) one.
double simulate_transport(const PotentialModel& pot, const PotentialModel& target_pot,
                          const ControlFunction& trajectory, const Grid& grid,
                          const Numerics& num);
double simulate_transport(const PotentialModel& pot, const ControlFunction& trajectory,
                          const Grid& grid, const Numerics& num);

// propagate a copy of psi0 from t = 0 to t_f and compare with target
double transport_fidelity(const PotentialModel& pot, const Wavefunction& psi0,
                          const Wavefunction& target, double t_f, const Numerics& num);

// propagate with a callback at every step boundary (t, psi)
void propagate_sampled(const SplitOperator& op, Wavefunction& psi, const PotentialModel& pot,
                       double t_end, const Numerics& num,
                       const std::function<void(double, const Wavefunction&)>& cb);

// |Psi_T(t)> = U(t, t_f) |Psi_T>: reverse-time propagation of the target,
// sampled every `stride` steps, returned in ascending time order.
std::vector<Wavefunction> backward_evolved_target(const PotentialModel& pot,
                                                  const Wavefunction& target, double t_f,
                                                  const Numerics& num, int stride);

// Streams (t, psi0(t), psiT(t)) on the propagation time grid: psiT is first
// propagated backward from t_f, then both states advance together.
void copropagate(const PotentialModel& pot, const Wavefunction& psi0, const Wavefunction& target,
                 double t_f, const Numerics& num,
                 const std::function<void(double, const Wavefunction&, const Wavefunction&)>& cb);

}  // namespace esta
