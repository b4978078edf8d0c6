#include "support/oracles.hpp"

#include <fftw3.h>

#include <cassert>
#include <stdexcept>

namespace oracle {

std::vector<double> integrate_auxiliary(const esta::ControlFunction& q0, double omega0,
                                        const std::vector<double>& sample_times, double dt_hint) {
    const double w2 = omega0 * omega0;
    auto accel = [&](double t, double q) { return -w2 * (q - q0.value(t)); };

    // integration checkpoints: breakpoints plus requested sample times
    std::vector<double> marks = q0.breakpoints();
    marks.insert(marks.end(), sample_times.begin(), sample_times.end());
    marks.push_back(0.0);
    std::sort(marks.begin(), marks.end());
    marks.erase(std::unique(marks.begin(), marks.end()), marks.end());

    std::vector<double> out;
    double q = q0.value(0.0), p = 0.0;  // starts at rest at the trap center
    double t = 0.0;
    for (double mark : marks) {
        if (mark < 0.0) continue;
        double span = mark - t;
        if (span > 0.0) {
            int steps = std::max(1, static_cast<int>(std::ceil(span / dt_hint)));
            double h = span / steps;
            for (int s = 0; s < steps; ++s) {
                double k1q = p, k1p = accel(t, q);
                double k2q = p + 0.5 * h * k1p, k2p = accel(t + 0.5 * h, q + 0.5 * h * k1q);
                double k3q = p + 0.5 * h * k2p, k3p = accel(t + 0.5 * h, q + 0.5 * h * k2q);
                double k4q = p + h * k3p, k4p = accel(t + h, q + h * k3q);
                q += h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
                p += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
                t += h;
            }
            t = mark;
        }
        if (std::binary_search(sample_times.begin(), sample_times.end(), mark)) out.push_back(q);
    }
    return out;
}

double fd_ground_energy(const esta::Grid& grid, const std::function<double(double)>& v,
                        double shift, double seed_center) {
    const int n = grid.n;
    const double dx = grid.dx();
    const double off = -0.5 / (dx * dx);       // off-diagonal
    std::vector<double> diag(n);
    for (int i = 0; i < n; ++i) diag[i] = 1.0 / (dx * dx) + v(grid.x(i)) - shift;

    std::vector<double> psi(n);
    for (int i = 0; i < n; ++i) {
        double u = grid.x(i) - seed_center;
        psi[i] = std::exp(-0.5 * u * u);
    }

    std::vector<double> c(n), d(n);
    auto thomas = [&](std::vector<double>& rhs) {
        c[0] = off / diag[0];
        d[0] = rhs[0] / diag[0];
        for (int i = 1; i < n; ++i) {
            double m = diag[i] - off * c[i - 1];
            c[i] = off / m;
            d[i] = (rhs[i] - off * d[i - 1]) / m;
        }
        rhs[n - 1] = d[n - 1];
        for (int i = n - 2; i >= 0; --i) rhs[i] = d[i] - c[i] * rhs[i + 1];
    };

    double energy = 0.0;
    for (int it = 0; it < 200; ++it) {
        thomas(psi);
        double norm = 0.0;
        for (double a : psi) norm += a * a;
        norm = std::sqrt(norm * dx);
        for (double& a : psi) a /= norm;
        // Rayleigh quotient of the tridiagonal H
        double e = 0.0;
        for (int i = 0; i < n; ++i) {
            double hpsi = (diag[i] + shift) * psi[i];
            if (i > 0) hpsi += off * psi[i - 1];
            if (i + 1 < n) hpsi += off * psi[i + 1];
            e += psi[i] * hpsi;
        }
        e *= dx;
        if (std::abs(e - energy) < 1e-13) return e;
        energy = e;
    }
    return energy;
}

namespace {
struct FftBuf {
    int n;
    fftw_complex* buf;
    fftw_plan fwd, bwd;
    explicit FftBuf(int n_) : n(n_) {
        buf = fftw_alloc_complex(static_cast<std::size_t>(n));
        fwd = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~FftBuf() {
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
        fftw_free(buf);
    }
    void forward(std::vector<std::complex<double>>& a) {
        auto* p = reinterpret_cast<std::complex<double>*>(buf);
        std::copy(a.begin(), a.end(), p);
        fftw_execute(fwd);
        std::copy(p, p + n, a.begin());
    }
    void backward(std::vector<std::complex<double>>& a) {
        auto* p = reinterpret_cast<std::complex<double>*>(buf);
        std::copy(a.begin(), a.end(), p);
        fftw_execute(bwd);
        double inv = 1.0 / n;
        for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i)] = p[i] * inv;
    }
};
}  // namespace

void crank_nicolson_propagate(esta::Wavefunction& psi, const esta::PotentialModel& pot,
                              double t_end, double dt) {
    const auto& g = psi.grid;
    const int n = g.n;
    FftBuf fft(n);

    std::vector<double> k2_half(static_cast<std::size_t>(n));
    const double dk = 2.0 * 3.14159265358979323846 / g.length();
    for (int j = 0; j < n; ++j) {
        int m = (j <= n / 2) ? j : j - n;
        k2_half[static_cast<std::size_t>(j)] = 0.5 * dk * m * dk * m;
    }

    const long nsteps = std::max(1L, std::lround((t_end - psi.time) / dt));
    const double h = (t_end - psi.time) / static_cast<double>(nsteps);
    const std::complex<double> ia(0.0, 2.0 * 3.14159265358979323846 * 0.5 * h);

    std::vector<double> vmid(static_cast<std::size_t>(n));
    std::vector<std::complex<double>> rhs(psi.amp.size()), cur(psi.amp.size()),
        tmp(psi.amp.size());

    for (long s = 0; s < nsteps; ++s) {
        const double tm = psi.time + 0.5 * h;
        for (int i = 0; i < n; ++i) vmid[static_cast<std::size_t>(i)] = pot.evaluate(g.x(i), tm);

        // rhs = (1 - i a H) psi
        tmp = psi.amp;
        fft.forward(tmp);
        for (int j = 0; j < n; ++j) tmp[static_cast<std::size_t>(j)] *= k2_half[static_cast<std::size_t>(j)];
        fft.backward(tmp);
        for (int i = 0; i < n; ++i) {
            rhs[static_cast<std::size_t>(i)] =
                psi.amp[static_cast<std::size_t>(i)] -
                ia * (tmp[static_cast<std::size_t>(i)] +
                      vmid[static_cast<std::size_t>(i)] * psi.amp[static_cast<std::size_t>(i)]);
        }

        // solve (1 + i a H) x = rhs by fixed point with kinetic preconditioner:
        // x <- M^-1 (rhs - i a V x), M = 1 + i a T (diagonal in k)
        cur = rhs;
        fft.forward(cur);
        for (int j = 0; j < n; ++j) {
            cur[static_cast<std::size_t>(j)] /= (1.0 + ia * k2_half[static_cast<std::size_t>(j)]);
        }
        fft.backward(cur);
        for (int it = 0; it < 60; ++it) {
            double change = 0.0;
            for (int i = 0; i < n; ++i) {
                tmp[static_cast<std::size_t>(i)] =
                    rhs[static_cast<std::size_t>(i)] -
                    ia * vmid[static_cast<std::size_t>(i)] * cur[static_cast<std::size_t>(i)];
            }
            fft.forward(tmp);
            for (int j = 0; j < n; ++j) {
                tmp[static_cast<std::size_t>(j)] /= (1.0 + ia * k2_half[static_cast<std::size_t>(j)]);
            }
            fft.backward(tmp);
            for (int i = 0; i < n; ++i) {
                change += std::norm(tmp[static_cast<std::size_t>(i)] - cur[static_cast<std::size_t>(i)]);
            }
            cur.swap(tmp);
            if (std::sqrt(change * g.dx()) < 1e-14) break;
        }
        psi.amp = cur;
        psi.time += h;
    }
    psi.time = t_end;
}

double noisy_transport_fidelity(const esta::PotentialModel& pot,
                                const std::function<double(double, double)>& h1,
                                const esta::Wavefunction& psi0, const esta::Wavefunction& target,
                                double t_f, double dt, double eta, unsigned long seed) {
    esta::SplitOperator op(psi0.grid);
    esta::Wavefunction psi = psi0;
    psi.time = 0.0;
    const long nsteps = std::max(1L, std::lround(t_f / dt));
    const double h = t_f / static_cast<double>(nsteps);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double xi = 0.0;
    esta::PotentialModel noisy{
        [&](double x, double t) { return pot.evaluate(x, t) + eta * xi * h1(x, t); },
        pot.trajectory};
    for (long s = 0; s < nsteps; ++s) {
        xi = gauss(rng) / std::sqrt(h);
        op.step(psi, noisy, h);
    }
    return esta::fidelity(target, psi);
}

MeanStderr mc_mean_fidelity(const esta::PotentialModel& pot,
                            const std::function<double(double, double)>& h1,
                            const esta::Wavefunction& psi0, const esta::Wavefunction& target,
                            double t_f, double dt, double eta2, int realizations,
                            unsigned long base_seed) {
    double sum = 0.0, sum2 = 0.0;
    const double eta = std::sqrt(eta2);
    for (int r = 0; r < realizations; ++r) {
        double f = noisy_transport_fidelity(pot, h1, psi0, target, t_f, dt, eta, base_seed + r);
        sum += f;
        sum2 += f * f;
    }
    double mean = sum / realizations;
    double var = std::max(0.0, sum2 / realizations - mean * mean);
    return MeanStderr{mean, std::sqrt(var / realizations)};
}

}  // namespace oracle
