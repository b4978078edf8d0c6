#include "esta/modes.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "esta/constants.hpp"
#include "esta/quadrature.hpp"

namespace esta {

namespace {
constexpr double kPi = constants::pi;

// normalized recurrence for phi_n(x) e^{x^2/2} = H_n(x) / sqrt(2^n n! sqrt(pi))
double weighted_recurrence(int n, double x) {
    double p0 = std::pow(kPi, -0.25);
    if (n == 0) return p0;
    double p1 = std::sqrt(2.0) * x * p0;
    for (int k = 1; k < n; ++k) {
        double p2 = std::sqrt(2.0 / (k + 1.0)) * x * p1 - std::sqrt(k / (k + 1.0)) * p0;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}
}  // namespace

double hermite_weighted(int n, double x) {
    if (n < 0) throw std::invalid_argument("mode index must be >= 0");
    return weighted_recurrence(n, x);
}

double hermite_eigenfunction(int n, double x) {
    if (n < 0) throw std::invalid_argument("mode index must be >= 0");
    // weighted recurrence keeps intermediate values bounded; the Gaussian is
    // applied once at the end
    return weighted_recurrence(n, x) * std::exp(-0.5 * x * x);
}

GaussHermite::GaussHermite(int order) {
    if (order < 1) throw std::invalid_argument("Gauss-Hermite order must be >= 1");
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(order, order);
    for (int k = 1; k < order; ++k) {
        double b = std::sqrt(k / 2.0);
        J(k - 1, k) = b;
        J(k, k - 1) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    x.resize(order);
    w.resize(order);
    const double mu0 = std::sqrt(kPi);  // integral of exp(-x^2)
    for (int i = 0; i < order; ++i) {
        x[i] = es.eigenvalues()(i);
        double v0 = es.eigenvectors()(0, i);
        w[i] = mu0 * v0 * v0;
    }
}

TransportModeSet::TransportModeSet(const ControlFunction& qc, int max_n, int quadrature_order)
    : qc_(&qc), max_n_(max_n), gh_(quadrature_order) {
    if (max_n < 0) throw std::invalid_argument("max_n must be >= 0");
    phi_.assign(static_cast<std::size_t>(max_n + 1),
                std::vector<double>(gh_.x.size()));
    for (int n = 0; n <= max_n; ++n) {
        for (std::size_t j = 0; j < gh_.x.size(); ++j) {
            phi_[static_cast<std::size_t>(n)][j] = hermite_weighted(n, gh_.x[j]);
        }
    }
}

double TransportModeSet::spatial_overlap(int n, const std::function<double(double)>& f,
                                         double center) const {
    if (n < 0 || n > max_n_) throw std::invalid_argument("mode index out of range");
    const auto& pn = phi_[static_cast<std::size_t>(n)];
    const auto& p0 = phi_[0];
    double acc = 0.0;
    for (std::size_t j = 0; j < gh_.x.size(); ++j) {
        acc += gh_.w[j] * pn[j] * p0[j] * f(gh_.x[j] + center);
    }
    return acc;
}

std::complex<double> TransportModeSet::matrix_element(int n, const std::function<double(double)>& f,
                                                      double t) const {
    double overlap = spatial_overlap(n, f, qc_->value(t));
    double phase = n * 2.0 * kPi * t;  // omega0 t with omega0 = 2 pi
    return std::polar(1.0, phase) * overlap;
}

double TransportModeSet::convergence_gap(int n, const std::function<double(double)>& f,
                                         double t) const {
    TransportModeSet finer(*qc_, max_n_, quadrature_order() * 3 / 2);
    return std::abs(finer.spatial_overlap(n, f, qc_->value(t)) -
                    spatial_overlap(n, f, qc_->value(t)));
}

double lr_phase(int n, double t, const ControlFunction& qc) {
    // theta_n = -(n+1/2) omega0 t + (1/hbar) int m qdot_c^2 / 2 dt'
    // scaled: omega0 = 2 pi per tau, kinetic term (1/(4 pi)) int qdot^2 dt
    auto kin = [&qc](double s) {
        double v = qc.d1(s);
        return v * v;
    };
    double kinetic = adaptive_simpson_split(kin, 0.0, t, qc.breakpoints(), 1e-12);
    return -(n + 0.5) * 2.0 * kPi * t + kinetic / (4.0 * kPi);
}

}  // namespace esta
