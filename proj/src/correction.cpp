#include "esta/correction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "esta/constants.hpp"
#include "esta/quadrature.hpp"

namespace esta {

namespace {
constexpr double kTwoPi = 2.0 * constants::pi;

std::vector<double> time_panels(const ControlFunction& qc) {
    std::vector<double> pts = qc.breakpoints();
    pts.push_back(0.0);
    pts.push_back(qc.t_f());
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

GnKn accumulate_gn_kn(const EstaInputs& in, const std::function<double(double)>& g_integrand,
                      const std::function<double(double)>& k_integrand, int nodes_per_panel) {
    const int N = in.n_modes;
    const int L = in.basis->size();
    if (N < 1) throw std::invalid_argument("mode cutoff N must be >= 1");

    TransportModeSet modes(*in.qc, N);
    GaussLegendre gl(nodes_per_panel);
    const auto panels = time_panels(*in.qc);

    GnKn out;
    out.gn.assign(static_cast<std::size_t>(N), {0.0, 0.0});
    out.kn.assign(static_cast<std::size_t>(N),
                  std::vector<std::complex<double>>(static_cast<std::size_t>(L), {0.0, 0.0}));

    std::vector<double> pl(static_cast<std::size_t>(L));
    for (std::size_t p = 0; p + 1 < panels.size(); ++p) {
        const double a = panels[p], b = panels[p + 1];
        const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        for (std::size_t q = 0; q < gl.x.size(); ++q) {
            const double t = mid + half * gl.x[q];
            // ds = omega0 dt: integrals run over radian time
            const double w = gl.w[q] * half * kTwoPi;
            const double center = in.qc->value(t) - in.q0->value(t);
            for (int l = 1; l <= L; ++l) pl[static_cast<std::size_t>(l - 1)] = in.basis->eval(l, t);
            for (int n = 1; n <= N; ++n) {
                const std::complex<double> phase = std::polar(1.0, n * kTwoPi * t);
                const double mg = modes.spatial_overlap(n, g_integrand, center);
                const double mk = modes.spatial_overlap(n, k_integrand, center);
                out.gn[static_cast<std::size_t>(n - 1)] += w * phase * mg;
                for (int l = 1; l <= L; ++l) {
                    out.kn[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(l - 1)] -=
                        w * pl[static_cast<std::size_t>(l - 1)] * phase * mk;
                }
            }
        }
    }
    return out;
}
}  // namespace

GnKn compute_gn_kn(const EstaInputs& in, const std::function<double(double)>& g_integrand,
                   const std::function<double(double)>& k_integrand) {
    return accumulate_gn_kn(in, g_integrand, k_integrand, in.time_quadrature.nodes_per_panel);
}

std::function<double(double)> lattice_minus_harmonic(const DimensionlessParams& units) {
    const double u0 = units.u0, k = units.k_sigma;
    return [u0, k](double w) {
        double s = std::sin(k * w);
        return u0 * s * s - 0.5 * w * w;
    };
}

std::function<double(double)> lattice_gradient(const DimensionlessParams& units) {
    const double u0 = units.u0, k = units.k_sigma;
    return [u0, k](double w) { return u0 * k * std::sin(2.0 * k * w); };
}

std::complex<double> compute_gn(int n, const EstaInputs& in) {
    if (n < 1 || n > in.n_modes) throw std::invalid_argument("mode index out of range");
    GnKn gk = compute_gn_kn(in, lattice_minus_harmonic(in.units), lattice_gradient(in.units));
    return gk.gn[static_cast<std::size_t>(n - 1)];
}

std::complex<double> compute_kn(int n, int l, const EstaInputs& in) {
    if (n < 1 || n > in.n_modes) throw std::invalid_argument("mode index out of range");
    if (l < 1 || l > in.basis->size()) throw std::invalid_argument("basis index out of range");
    GnKn gk = compute_gn_kn(in, lattice_minus_harmonic(in.units), lattice_gradient(in.units));
    return gk.kn[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(l - 1)];
}

double gn_convergence_gap(int n, const EstaInputs& in) {
    auto dv = lattice_minus_harmonic(in.units);
    auto dvp = lattice_gradient(in.units);
    GnKn coarse = accumulate_gn_kn(in, dv, dvp, in.time_quadrature.nodes_per_panel);
    GnKn fine = accumulate_gn_kn(in, dv, dvp, 2 * in.time_quadrature.nodes_per_panel);
    return std::abs(std::abs(coarse.gn[static_cast<std::size_t>(n - 1)]) -
                    std::abs(fine.gn[static_cast<std::size_t>(n - 1)]));
}

double estimate_fidelity_tdpt(const EstaInputs& in) {
    GnKn gk = compute_gn_kn(in, lattice_minus_harmonic(in.units), lattice_gradient(in.units));
    double sum = 0.0;
    for (const auto& g : gk.gn) sum += std::norm(g);
    return 1.0 - sum;
}

std::vector<double> estimate_gradient_tdpt(const EstaInputs& in) {
    GnKn gk = compute_gn_kn(in, lattice_minus_harmonic(in.units), lattice_gradient(in.units));
    const int L = in.basis->size();
    std::vector<double> grad(static_cast<std::size_t>(L), 0.0);
    for (std::size_t n = 0; n < gk.gn.size(); ++n) {
        for (int l = 0; l < L; ++l) {
            grad[static_cast<std::size_t>(l)] -=
                2.0 * std::real(gk.gn[n] * std::conj(gk.kn[n][static_cast<std::size_t>(l)]));
        }
    }
    return grad;
}

EpsilonVector epsilon_from_gnkn(const GnKn& gk) {
    EpsilonVector out;
    out.gn = gk.gn;
    out.kn = gk.kn;
    const std::size_t L = gk.kn.empty() ? 0 : gk.kn[0].size();
    out.values.assign(L, 0.0);

    double gsum = 0.0;
    for (const auto& g : gk.gn) gsum += std::norm(g);
    out.fidelity_estimate = 1.0 - gsum;

    std::vector<double> v(L, 0.0);
    double vnorm2 = 0.0;
    for (std::size_t l = 0; l < L; ++l) {
        for (std::size_t n = 0; n < gk.gn.size(); ++n) {
            v[l] += std::real(std::conj(gk.gn[n]) * gk.kn[n][l]);
        }
        vnorm2 += v[l] * v[l];
    }
    if (vnorm2 < 1e-24) {
        out.degenerate = true;
        return out;
    }
    for (std::size_t l = 0; l < L; ++l) out.values[l] = -gsum * v[l] / vnorm2;
    return out;
}

EpsilonVector compute_epsilon(const EstaInputs& in) {
    GnKn gk = compute_gn_kn(in, lattice_minus_harmonic(in.units), lattice_gradient(in.units));
    return epsilon_from_gnkn(gk);
}

EstaTrajectory build_esta_trajectory(TrajectoryFamily family, double t_f,
                                     const DimensionlessParams& units, int L, int N) {
    ControlFunction qc = make_smoothed_qc(family, units.d, t_f);
    ControlFunction q0 = invert_q0(qc, units.omega0);
    CorrectionBasis basis(L, t_f);
    EstaInputs in{&qc, &q0, &basis, units, N};
    EpsilonVector eps = compute_epsilon(in);
    ControlFunction Q = esta_control(q0, basis, eps.values);
    return EstaTrajectory{std::move(qc), std::move(q0), std::move(basis), std::move(eps),
                          std::move(Q)};
}

}  // namespace esta
