#include "esta/dynamics.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include "esta/constants.hpp"

namespace esta {

namespace {
constexpr double kTwoPi = 2.0 * constants::pi;

std::mutex& fftw_plan_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

Grid::Grid(double x_min_, double x_max_, int n_) : x_min(x_min_), x_max(x_max_), n(n_) {
    if (!(x_max > x_min)) throw std::invalid_argument("grid extent must be positive");
    if (n < 512) throw std::invalid_argument("grid needs at least 512 points");
    if ((n & (n - 1)) != 0) throw std::invalid_argument("grid size must be a power of two");
}

Grid make_transport_grid(double d, double pad_sigma, int n) {
    if (pad_sigma < 8.0) throw std::invalid_argument("grid padding must be >= 8 sigma");
    return Grid(-pad_sigma, d + pad_sigma, n);
}

double Wavefunction::norm() const {
    double s = 0.0;
    for (const auto& a : amp) s += std::norm(a);
    return std::sqrt(s * grid.dx());
}

void Wavefunction::normalize() {
    double n = norm();
    if (n == 0.0) throw std::runtime_error("cannot normalize zero wavefunction");
    for (auto& a : amp) a /= n;
}

std::complex<double> inner_product(const Wavefunction& a, const Wavefunction& b) {
    if (a.grid.n != b.grid.n) throw std::invalid_argument("wavefunctions on different grids");
    std::complex<double> s = 0.0;
    for (std::size_t i = 0; i < a.amp.size(); ++i) s += std::conj(a.amp[i]) * b.amp[i];
    return s * a.grid.dx();
}

double fidelity(const Wavefunction& a, const Wavefunction& b) {
    return std::norm(inner_product(a, b));
}

PotentialModel lattice_potential(const ControlFunction& trajectory, double u0, double k_sigma) {
    const ControlFunction* traj = &trajectory;
    return PotentialModel{
        [traj, u0, k_sigma](double x, double t) {
            double s = std::sin(k_sigma * (x - traj->value(t)));
            return u0 * s * s;
        },
        traj};
}

PotentialModel harmonic_potential(const ControlFunction& trajectory) {
    const ControlFunction* traj = &trajectory;
    return PotentialModel{
        [traj](double x, double t) {
            double w = x - traj->value(t);
            return 0.5 * w * w;
        },
        traj};
}

struct SplitOperator::Fft {
    int n;
    fftw_complex* buf;
    fftw_plan fwd;
    fftw_plan bwd;

    explicit Fft(int n_) : n(n_) {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        buf = fftw_alloc_complex(static_cast<std::size_t>(n));
        fwd = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~Fft() {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
        fftw_free(buf);
    }

    void forward(std::vector<std::complex<double>>& a) const {
        auto* p = reinterpret_cast<std::complex<double>*>(buf);
        std::copy(a.begin(), a.end(), p);
        fftw_execute(fwd);
        std::copy(p, p + n, a.begin());
    }
    void backward(std::vector<std::complex<double>>& a) const {
        auto* p = reinterpret_cast<std::complex<double>*>(buf);
        std::copy(a.begin(), a.end(), p);
        fftw_execute(bwd);
        double inv = 1.0 / n;
        for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i)] = p[i] * inv;
    }
};

SplitOperator::SplitOperator(const Grid& g) : grid_(g), fft_(std::make_unique<Fft>(g.n)) {
    k2_half_.resize(static_cast<std::size_t>(g.n));
    const double dk = kTwoPi / g.length();
    for (int j = 0; j < g.n; ++j) {
        int m = (j <= g.n / 2) ? j : j - g.n;
        double k = dk * m;
        k2_half_[static_cast<std::size_t>(j)] = 0.5 * k * k;
    }
}

SplitOperator::~SplitOperator() = default;

void SplitOperator::step(Wavefunction& psi, const PotentialModel& pot, double dt) const {
    const double t_mid = psi.time + 0.5 * dt;
    const double kick = kTwoPi * 0.5 * dt;   // i d/dt(tau) psi = 2 pi H psi
    const double drift = kTwoPi * dt;
    for (int i = 0; i < grid_.n; ++i) {
        psi.amp[static_cast<std::size_t>(i)] *=
            std::polar(1.0, -kick * pot.evaluate(grid_.x(i), t_mid));
    }
    fft_->forward(psi.amp);
    for (int j = 0; j < grid_.n; ++j) {
        psi.amp[static_cast<std::size_t>(j)] *=
            std::polar(1.0, -drift * k2_half_[static_cast<std::size_t>(j)]);
    }
    fft_->backward(psi.amp);
    for (int i = 0; i < grid_.n; ++i) {
        psi.amp[static_cast<std::size_t>(i)] *=
            std::polar(1.0, -kick * pot.evaluate(grid_.x(i), t_mid));
    }
    psi.time += dt;
}

void SplitOperator::step4(Wavefunction& psi, const PotentialModel& pot, double dt) const {
    static const double w1 = 1.0 / (2.0 - std::cbrt(2.0));
    static const double w0 = 1.0 - 2.0 * w1;
    step(psi, pot, w1 * dt);
    step(psi, pot, w0 * dt);
    step(psi, pot, w1 * dt);
}

void SplitOperator::propagate(Wavefunction& psi, const PotentialModel& pot, double t_end,
                              const Numerics& num) const {
    const double span = t_end - psi.time;
    if (span == 0.0) return;
    const long nsteps = std::max(1L, std::lround(std::abs(span) / num.dt_over_tau));
    const double dt = span / static_cast<double>(nsteps);
    for (long s = 0; s < nsteps; ++s) {
        if (num.order >= 4) {
            step4(psi, pot, dt);
        } else {
            step(psi, pot, dt);
        }
    }
    psi.time = t_end;  // absorb rounding
}

double SplitOperator::energy(const Wavefunction& psi, const PotentialModel& pot, double t) const {
    double v = 0.0;
    for (int i = 0; i < grid_.n; ++i) {
        v += std::norm(psi.amp[static_cast<std::size_t>(i)]) * pot.evaluate(grid_.x(i), t);
    }
    v *= grid_.dx();
    auto k = psi.amp;
    fft_->forward(k);
    double tkin = 0.0;
    for (int j = 0; j < grid_.n; ++j) {
        tkin += std::norm(k[static_cast<std::size_t>(j)]) * k2_half_[static_cast<std::size_t>(j)];
    }
    tkin *= grid_.dx() / grid_.n;
    return tkin + v;
}

void SplitOperator::imaginary_step(Wavefunction& psi, const PotentialModel& pot, double t,
                                   double dtau) const {
    const double kick = kTwoPi * 0.5 * dtau;
    const double drift = kTwoPi * dtau;
    for (int i = 0; i < grid_.n; ++i) {
        psi.amp[static_cast<std::size_t>(i)] *= std::exp(-kick * pot.evaluate(grid_.x(i), t));
    }
    fft_->forward(psi.amp);
    for (int j = 0; j < grid_.n; ++j) {
        psi.amp[static_cast<std::size_t>(j)] *= std::exp(-drift * k2_half_[static_cast<std::size_t>(j)]);
    }
    fft_->backward(psi.amp);
    for (int i = 0; i < grid_.n; ++i) {
        psi.amp[static_cast<std::size_t>(i)] *= std::exp(-kick * pot.evaluate(grid_.x(i), t));
    }
    psi.normalize();
}

Wavefunction ground_state(const PotentialModel& pot, double t_snapshot, double seed_center,
                          const Grid& grid, const Numerics& num) {
    SplitOperator op(grid);
    Wavefunction psi(grid);
    for (int i = 0; i < grid.n; ++i) {
        double u = grid.x(i) - seed_center;
        psi.amp[static_cast<std::size_t>(i)] = std::exp(-0.5 * u * u);
    }
    psi.normalize();

    // radian-time steps annealed toward zero Trotter bias
    const double stages[] = {0.2, 0.05, 0.01, 0.002};
    const int cap = 40000;
    double e_prev = op.energy(psi, pot, t_snapshot);
    for (double ds : stages) {
        const double dtau = ds / kTwoPi;
        const bool last = ds == 0.002;
        const double tol = last ? num.imag_time_tol : 1e-9;
        int it = 0;
        for (; it < cap; ++it) {
            op.imaginary_step(psi, pot, t_snapshot, dtau);
            double e = op.energy(psi, pot, t_snapshot);
            double de = std::abs(e - e_prev);
            e_prev = e;
            if (de < tol) break;
        }
        if (it == cap && last) {
            throw std::runtime_error("imaginary-time ground state did not converge");
        }
    }
    psi.time = t_snapshot;
    return psi;
}

double simulate_transport(const PotentialModel& pot, const PotentialModel& target_pot,
                          const ControlFunction& trajectory, const Grid& grid,
                          const Numerics& num) {
    const double t_f = trajectory.t_f();
    Wavefunction psi = ground_state(pot, 0.0, trajectory.value(0.0), grid, num);
    Wavefunction target =
        ground_state(target_pot, t_f, trajectory.value(t_f), grid, num);
    SplitOperator op(grid);
    psi.time = 0.0;
    op.propagate(psi, pot, t_f, num);
    return fidelity(target, psi);
}

double simulate_transport(const PotentialModel& pot, const ControlFunction& trajectory,
                          const Grid& grid, const Numerics& num) {
    return simulate_transport(pot, pot, trajectory, grid, num);
}

double transport_fidelity(const PotentialModel& pot, const Wavefunction& psi0,
                          const Wavefunction& target, double t_f, const Numerics& num) {
    SplitOperator op(psi0.grid);
    Wavefunction psi = psi0;
    psi.time = 0.0;
    op.propagate(psi, pot, t_f, num);
    return fidelity(target, psi);
}

void propagate_sampled(const SplitOperator& op, Wavefunction& psi, const PotentialModel& pot,
                       double t_end, const Numerics& num,
                       const std::function<void(double, const Wavefunction&)>& cb) {
    const double span = t_end - psi.time;
    const long nsteps = std::max(1L, std::lround(std::abs(span) / num.dt_over_tau));
    const double dt = span / static_cast<double>(nsteps);
    cb(psi.time, psi);
    for (long s = 0; s < nsteps; ++s) {
        if (num.order >= 4) {
            op.step4(psi, pot, dt);
        } else {
            op.step(psi, pot, dt);
        }
        cb(psi.time, psi);
    }
}

std::vector<Wavefunction> backward_evolved_target(const PotentialModel& pot,
                                                  const Wavefunction& target, double t_f,
                                                  const Numerics& num, int stride) {
    SplitOperator op(target.grid);
    Wavefunction psi = target;
    psi.time = t_f;
    std::vector<Wavefunction> out;
    long counter = 0;
    propagate_sampled(op, psi, pot, 0.0, num, [&](double, const Wavefunction& w) {
        if (counter % stride == 0) out.push_back(w);
        ++counter;
    });
    std::reverse(out.begin(), out.end());
    return out;
}

void copropagate(const PotentialModel& pot, const Wavefunction& psi0, const Wavefunction& target,
                 double t_f, const Numerics& num,
                 const std::function<void(double, const Wavefunction&, const Wavefunction&)>& cb) {
    SplitOperator op(psi0.grid);
    Wavefunction psi_t = target;
    psi_t.time = t_f;
    op.propagate(psi_t, pot, 0.0, num);  // U(0, t_f) |target>

    Wavefunction psi = psi0;
    psi.time = 0.0;
    const long nsteps = std::max(1L, std::lround(t_f / num.dt_over_tau));
    const double dt = t_f / static_cast<double>(nsteps);
    cb(0.0, psi, psi_t);
    for (long s = 0; s < nsteps; ++s) {
        if (num.order >= 4) {
            op.step4(psi, pot, dt);
            op.step4(psi_t, pot, dt);
        } else {
            op.step(psi, pot, dt);
            op.step(psi_t, pot, dt);
        }
        cb(psi.time, psi, psi_t);
    }
}

}  // namespace esta
