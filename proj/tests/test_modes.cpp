#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>
#include <random>

#include "esta/constants.hpp"
#include "esta/control.hpp"
#include "esta/modes.hpp"
#include "esta/units.hpp"
#include "support/oracles.hpp"

using namespace esta;

namespace {
const double kTwoPi = 2.0 * constants::pi;

DimensionlessParams paper_units() { return nondimensionalize(PhysicalParams{}); }
}  // namespace

TEST_CASE("hermite eigenfunctions are normalized up to n = 8") {
    for (int n = 0; n <= 8; ++n) {
        auto f = [n](double x) {
            double p = hermite_eigenfunction(n, x);
            return p * p;
        };
        CHECK(oracle::trapezoid(f, -15.0, 15.0, 20000) == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("ground state gaussian and odd-parity zero") {
    CHECK(hermite_eigenfunction(1, 0.0) == doctest::Approx(0.0).epsilon(1e-15));
    for (double x : {-1.7, -0.3, 0.0, 0.9, 2.4}) {
        double expected = std::pow(constants::pi, -0.25) * std::exp(-0.5 * x * x);
        CHECK(hermite_eigenfunction(0, x) == doctest::Approx(expected).epsilon(1e-13));
    }
}

TEST_CASE("large-argument evaluation underflows cleanly") {
    double v = hermite_eigenfunction(8, 30.0);
    CHECK(std::isfinite(v));
    CHECK(std::abs(v) < 1e-150);
}

TEST_CASE("gauss-hermite table integrates gaussian moments") {
    GaussHermite gh(40);
    double m0 = 0.0, m2 = 0.0;
    for (std::size_t j = 0; j < gh.x.size(); ++j) {
        m0 += gh.w[j];
        m2 += gh.w[j] * gh.x[j] * gh.x[j];
    }
    CHECK(m0 == doctest::Approx(std::sqrt(constants::pi)).epsilon(1e-13));
    CHECK(m2 == doctest::Approx(0.5 * std::sqrt(constants::pi)).epsilon(1e-13));
}

TEST_CASE("lr phase: trivial values") {
    ControlFunction qc = polynomial_qc(11.0, 1.0);
    CHECK(lr_phase(0, 0.0, qc) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(lr_phase(3, 0.0, qc) == doctest::Approx(0.0).epsilon(1e-14));
    for (double t : {0.3, 0.8}) {
        double diff = lr_phase(0, t, qc) - lr_phase(4, t, qc);
        CHECK(diff == doctest::Approx(4.0 * kTwoPi * t).epsilon(1e-12));
    }
    // static trajectory: pure -(n + 1/2) omega0 t
    std::vector<Segment> segs{{-std::numeric_limits<double>::infinity(),
                               std::numeric_limits<double>::infinity(),
                               [](double, int order) { return order == 0 ? 2.0 : 0.0; }}};
    ControlFunction still("qc_const", 1.0, 2.0, std::move(segs));
    CHECK(lr_phase(2, 0.7, still) == doctest::Approx(-2.5 * kTwoPi * 0.7).epsilon(1e-13));
}

TEST_CASE("matrix elements: orthonormality, ladder value, quadrature oracle") {
    DimensionlessParams u = paper_units();
    ControlFunction qc = make_smoothed_qc(TrajectoryFamily::quasi_opt, u.d, 1.0);
    TransportModeSet modes(qc, 6);

    std::mt19937 rng(5);
    std::uniform_real_distribution<double> ts(0.0, 1.0);
    for (int i = 0; i < 10; ++i) {
        double t = ts(rng);
        auto one = [](double) { return 1.0; };
        CHECK(std::abs(modes.matrix_element(0, one, t)) == doctest::Approx(1.0).epsilon(1e-12));
        for (int n = 1; n <= 4; ++n) {
            CHECK(std::abs(modes.matrix_element(n, one, t)) < 1e-10);
        }
    }

    // f = x - q_c picks out n = 1 with value sigma/sqrt(2) and phase e^{i omega0 t}
    for (double t : {0.21, 0.64}) {
        double qct = qc.value(t);
        auto f = [qct](double x) { return x - qct; };
        std::complex<double> me = modes.matrix_element(1, f, t);
        std::complex<double> expected = std::polar(1.0 / std::sqrt(2.0), kTwoPi * t);
        CHECK(std::abs(me - expected) < 1e-12);
    }

    // f = sin^2(k0 (x - q_c)), n = 2, against a dense-grid trapezoid oracle
    for (double t : {0.35, 0.9}) {
        double qct = qc.value(t);
        auto f = [qct, &u](double x) {
            double s = std::sin(u.k_sigma * (x - qct));
            return s * s;
        };
        std::complex<double> me = modes.matrix_element(2, f, t);
        auto integrand = [&](double x) {
            return hermite_eigenfunction(2, x - qct) * f(x) * hermite_eigenfunction(0, x - qct);
        };
        double spatial = oracle::trapezoid(integrand, qct - 14.0, qct + 14.0, 40000);
        std::complex<double> expected = std::polar(1.0, 2.0 * kTwoPi * t) * spatial;
        CHECK(std::abs(me - expected) < 1e-10);
    }
}

TEST_CASE("parity: even functions about q_c vanish for odd n") {
    DimensionlessParams u = paper_units();
    ControlFunction qc = polynomial_qc(u.d, 1.0);
    TransportModeSet modes(qc, 5);
    double t = 0.42;
    double qct = qc.value(t);
    auto even = [qct, &u](double x) {
        double s = std::sin(u.k_sigma * (x - qct));
        return u.u0 * s * s;
    };
    CHECK(std::abs(modes.matrix_element(1, even, t)) < 1e-12);
    CHECK(std::abs(modes.matrix_element(3, even, t)) < 1e-12);
    CHECK(std::abs(modes.matrix_element(5, even, t)) < 1e-12);
}

TEST_CASE("lattice coupling envelope decays with n") {
    DimensionlessParams u = paper_units();
    ControlFunction qc = make_smoothed_qc(TrajectoryFamily::quasi_opt, u.d, 1.0);
    ControlFunction q0 = invert_q0(qc, u.omega0);
    TransportModeSet modes(qc, 7);
    double t = 0.3;
    double shift = qc.value(t) - q0.value(t);
    auto dv = [&](double w) {
        double s = std::sin(u.k_sigma * (w + shift));
        return u.u0 * s * s - 0.5 * (w + shift) * (w + shift);
    };
    std::vector<double> mag;
    for (int n = 1; n <= 6; ++n) mag.push_back(std::abs(modes.spatial_overlap(n, dv, 0.0)));
    // parity-respecting envelope: the odd and even ladders each decay
    CHECK(mag[2] <= mag[0] * (1.0 + 1e-9));
    CHECK(mag[4] <= mag[2] * (1.0 + 1e-9));
    CHECK(mag[3] <= mag[1] * (1.0 + 1e-9));
    CHECK(mag[5] <= mag[3] * (1.0 + 1e-9));
}

TEST_CASE("quadrature order is converged at the default") {
    DimensionlessParams u = paper_units();
    ControlFunction qc = make_smoothed_qc(TrajectoryFamily::classical, u.d, 0.9);
    TransportModeSet modes(qc, 4);
    double t = 0.5;
    double qct = qc.value(t);
    auto f = [qct, &u](double x) {
        double s = std::sin(u.k_sigma * (x - qct));
        return u.u0 * s * s;
    };
    for (int n = 1; n <= 4; ++n) {
        CHECK(modes.convergence_gap(n, f, t) < 1e-8);
    }
}
