#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <random>

#include "esta/constants.hpp"
#include "esta/control.hpp"
#include "support/oracles.hpp"

using namespace esta;

namespace {
const double kOmega0 = 2.0 * constants::pi;
const double kD = 11.0;
const double kTf = 1.0;

ControlFunction constant_control(double value, double t_f) {
    std::vector<Segment> segs{{-std::numeric_limits<double>::infinity(),
                               std::numeric_limits<double>::infinity(),
                               [value](double, int order) { return order == 0 ? value : 0.0; }}};
    return ControlFunction("qc_const", t_f, value, std::move(segs));
}

void check_boundary_conditions(const ControlFunction& qc, double d, double t_f) {
    CHECK(std::abs(qc.eval(0.0, 0, Side::right)) < 1e-9);
    CHECK(std::abs(qc.eval(t_f, 0, Side::left) - d) < 1e-9);
    for (int n = 1; n <= 4; ++n) {
        CAPTURE(n);
        CHECK(std::abs(qc.eval(0.0, n, Side::right)) < 1e-9);
        CHECK(std::abs(qc.eval(t_f, n, Side::left)) < 1e-9);
    }
}
}  // namespace

TEST_CASE("polynomial qc: boundary values and symmetry") {
    ControlFunction qc = polynomial_qc(kD, kTf);
    CHECK(qc.value(0.0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(qc.value(kTf) == doctest::Approx(kD).epsilon(1e-14));
    CHECK(qc.value(kTf / 2.0) == doctest::Approx(kD / 2.0).epsilon(1e-14));
}

TEST_CASE("polynomial qc matches the 10x10 boundary-condition solve") {
    // oracle: degree-9 polynomial in s with p(0)=0, p(1)=1 and four vanishing
    // derivatives at each end
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(10, 10);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(10);
    int row = 0;
    for (int k = 0; k < 5; ++k, ++row) {  // at s = 0
        double fac = 1.0;
        for (int m = 0; m < k; ++m) fac *= (k - m);
        A(row, k) = fac;
        b(row) = 0.0;
    }
    for (int k = 0; k < 5; ++k, ++row) {  // at s = 1
        for (int j = k; j < 10; ++j) {
            double fac = 1.0;
            for (int m = 0; m < k; ++m) fac *= (j - m);
            A(row, j) = fac;
        }
        b(row) = k == 0 ? 1.0 : 0.0;
    }
    Eigen::VectorXd coeff = A.colPivHouseholderQr().solve(b);
    Eigen::VectorXd expected = Eigen::VectorXd::Zero(10);
    expected(5) = 126.0;
    expected(6) = -420.0;
    expected(7) = 540.0;
    expected(8) = -315.0;
    expected(9) = 70.0;
    for (int j = 0; j < 10; ++j) {
        CHECK(coeff(j) == doctest::Approx(expected(j)).epsilon(1e-9).scale(100.0));
    }
    // and the implementation agrees with the oracle polynomial pointwise
    ControlFunction qc = polynomial_qc(kD, kTf);
    for (double s : {0.1, 0.25, 0.5, 0.77, 0.99}) {
        double val = 0.0;
        for (int j = 0; j < 10; ++j) val += coeff(j) * std::pow(s, j);
        CHECK(qc.value(s * kTf) == doctest::Approx(kD * val).epsilon(1e-9));
    }
}

TEST_CASE("quasi-optimal qc: f_c endpoints and piecewise extension") {
    ControlFunction raw = quasi_optimal_qc_raw(kD, kTf);
    CHECK(raw.eval(0.0, 0, Side::right) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(raw.value(kTf / 2.0) == doctest::Approx(kD / 2.0).epsilon(1e-13));
    CHECK(raw.value(-0.3) == 0.0);
    CHECK(raw.value(kTf + 0.3) == kD);

    for (double t = 0.02; t < kTf / 2.0; t += 0.02) {
        CHECK(raw.value(t) + raw.value(kTf - t) == doctest::Approx(kD).epsilon(1e-12));
    }
    // smoothed version keeps the symmetry away from the asymmetric
    // domain-edge windows
    ControlFunction sm = quasi_optimal_qc(kD, kTf, default_smoothing(kTf));
    for (double t = kTf / 8.0; t < kTf / 2.0; t += 0.02) {
        CHECK(sm.value(t) + sm.value(kTf - t) == doctest::Approx(kD).epsilon(1e-10));
    }
}

TEST_CASE("quasi-optimal classical qc: midpoint continuity and curvature jump") {
    ControlFunction qc = quasi_optimal_classical_qc(kD, kTf);
    double mid = kTf / 2.0;
    CHECK(qc.eval(mid, 0, Side::left) == doctest::Approx(kD / 2.0).epsilon(1e-14));
    CHECK(qc.eval(mid, 0, Side::right) == doctest::Approx(kD / 2.0).epsilon(1e-14));
    CHECK(qc.eval(mid, 1, Side::left) == doctest::Approx(2.0 * kD / kTf).epsilon(1e-14));
    CHECK(qc.eval(mid, 1, Side::right) == doctest::Approx(2.0 * kD / kTf).epsilon(1e-14));
    CHECK(qc.eval(mid, 2, Side::left) == doctest::Approx(4.0 * kD / (kTf * kTf)).epsilon(1e-14));
    CHECK(qc.eval(mid, 2, Side::right) == doctest::Approx(-4.0 * kD / (kTf * kTf)).epsilon(1e-14));
    CHECK(qc.value(0.0) == 0.0);
    CHECK(qc.eval(kTf, 0, Side::left) == doctest::Approx(kD).epsilon(1e-14));
}

TEST_CASE("invert_q0: constant and classical branch") {
    ControlFunction c = constant_control(3.5, kTf);
    ControlFunction q0c = invert_q0(c, kOmega0);
    CHECK(q0c.value(0.4) == doctest::Approx(3.5).epsilon(1e-14));

    ControlFunction qc3 = quasi_optimal_classical_qc(kD, kTf);
    ControlFunction q03 = invert_q0(qc3, kOmega0);
    for (double t : {0.05, 0.2, 0.4}) {
        double expected = 2.0 * kD * (t * t / (kTf * kTf) + 2.0 / (kOmega0 * kOmega0 * kTf * kTf));
        CHECK(q03.value(t) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("auxiliary-ODE forward solve recovers qc for all three families") {
    std::vector<double> samples;
    for (int i = 0; i <= 200; ++i) samples.push_back(kTf * i / 200.0);
    for (int fam = 1; fam <= 3; ++fam) {
        CAPTURE(fam);
        ControlFunction qc = make_smoothed_qc(static_cast<TrajectoryFamily>(fam), kD, kTf);
        ControlFunction q0 = invert_q0(qc, kOmega0);
        auto trace = oracle::integrate_auxiliary(q0, kOmega0, samples, 1e-4 * kTf);
        REQUIRE(trace.size() == samples.size());
        double rms = 0.0;
        for (std::size_t i = 0; i < samples.size(); ++i) {
            double err = trace[i] - qc.value(samples[i]);
            rms += err * err;
        }
        rms = std::sqrt(rms / samples.size());
        CHECK(rms < 1e-8);
    }
}

TEST_CASE("smoothing a low-degree polynomial is the identity") {
    // cubic smoothstep: value/d1/d2 data at any window edge are reproduced by
    // the quintic interpolant exactly
    std::vector<Segment> segs{{-std::numeric_limits<double>::infinity(),
                               std::numeric_limits<double>::infinity(), [](double t, int order) {
                                   switch (order) {
                                       case 0: return kD * t * t * (3.0 - 2.0 * t);
                                       case 1: return kD * (6.0 * t - 6.0 * t * t);
                                       case 2: return kD * (6.0 - 12.0 * t);
                                       case 3: return -12.0 * kD;
                                       default: return 0.0;
                                   }
                               }}};
    ControlFunction cubic("qc_cubic", 1.0, kD, std::move(segs));
    SmoothingSpec spec{1.0 / 8.0, {0.5}};
    ControlFunction sm = smooth(cubic, spec);
    for (double t = 0.0; t <= 1.0; t += 0.01) {
        CHECK(sm.value(t) == doctest::Approx(cubic.value(t)).epsilon(1e-12));
    }
}

TEST_CASE("smoothed q03 is C1 at the midpoint where the raw branch jumps") {
    double tf = 1.2;
    ControlFunction raw_qc = quasi_optimal_classical_qc(kD, tf);
    ControlFunction raw_q0 = invert_q0(raw_qc, kOmega0);
    double jump = raw_q0.eval(tf / 2.0, 0, Side::right) - raw_q0.eval(tf / 2.0, 0, Side::left);
    CHECK(jump == doctest::Approx(-8.0 * kD / (kOmega0 * kOmega0 * tf * tf)).epsilon(1e-10));

    ControlFunction sm_qc = smooth(raw_qc, default_smoothing(tf));
    ControlFunction sm_q0 = invert_q0(sm_qc, kOmega0);
    CHECK(sm_q0.eval(tf / 2.0, 0, Side::left) ==
          doctest::Approx(sm_q0.eval(tf / 2.0, 0, Side::right)).epsilon(1e-12));
    CHECK(sm_q0.eval(tf / 2.0, 1, Side::left) ==
          doctest::Approx(sm_q0.eval(tf / 2.0, 1, Side::right)).epsilon(1e-10));
}

TEST_CASE("smoothing windows: length tf/8 at the discontinuities, overlap rejected") {
    double tf = 0.8;
    ControlFunction sm = make_smoothed_qc(TrajectoryFamily::classical, kD, tf);
    auto bps = sm.breakpoints();
    double t_T = tf / 8.0;
    auto has = [&](double t) {
        for (double b : bps) {
            if (std::abs(b - t) < 1e-12) return true;
        }
        return false;
    };
    CHECK(has(t_T));                   // end of the window at t = 0
    CHECK(has(tf / 2.0 - t_T / 2.0));  // central window edges
    CHECK(has(tf / 2.0 + t_T / 2.0));
    CHECK(has(tf - t_T / 2.0));        // start of the window at t = t_f

    SmoothingSpec overlapping{0.5, {0.3 * tf, 0.5 * tf}};
    CHECK_THROWS_AS(smooth(quasi_optimal_classical_qc(kD, tf), overlapping),
                    std::invalid_argument);
}

TEST_CASE("all ten boundary conditions hold for every family") {
    for (double tf : {0.8, 1.3}) {
        for (int fam = 1; fam <= 3; ++fam) {
            CAPTURE(fam);
            CAPTURE(tf);
            ControlFunction qc = make_smoothed_qc(static_cast<TrajectoryFamily>(fam), kD, tf);
            check_boundary_conditions(qc, kD, tf);
        }
    }
}

TEST_CASE("correction basis: cardinal values and endpoint flatness") {
    CorrectionBasis basis(8, kTf);
    CHECK(basis.degree() == 13);
    CHECK(basis.condition_number() < 1e10);
    for (int l = 1; l <= 8; ++l) {
        for (int k = 1; k <= 8; ++k) {
            double expect = (l == k) ? 1.0 : 0.0;
            CHECK(basis.eval(l, basis.node(k)) == doctest::Approx(expect).epsilon(1e-9).scale(1.0));
        }
        for (int order = 0; order <= 2; ++order) {
            CHECK(std::abs(basis.eval(l, 0.0, order)) < 1e-9);
            CHECK(std::abs(basis.eval(l, kTf, order)) < 1e-9);
        }
    }
}

TEST_CASE("cardinal interpolation returns random epsilon at the control points") {
    CorrectionBasis basis(8, 1.3);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    std::vector<double> eps(8);
    for (auto& e : eps) e = u(rng);
    for (int k = 1; k <= 8; ++k) {
        double dq = 0.0;
        for (int l = 1; l <= 8; ++l) {
            dq += eps[static_cast<std::size_t>(l - 1)] * basis.eval(l, basis.node(k));
        }
        CHECK(dq == doctest::Approx(eps[static_cast<std::size_t>(k - 1)]).epsilon(1e-10).scale(1.0));
    }
}

TEST_CASE("esta control: zero correction, node offsets, endpoint pinning") {
    ControlFunction qc = make_smoothed_qc(TrajectoryFamily::quasi_opt, kD, kTf);
    ControlFunction q0 = invert_q0(qc, kOmega0);
    CorrectionBasis basis(8, kTf);

    std::vector<double> zero(8, 0.0);
    ControlFunction q_same = esta_control(q0, basis, zero);
    for (double t = 0.0; t <= kTf; t += 0.05) {
        CHECK(q_same.value(t) == doctest::Approx(q0.value(t)).epsilon(1e-13));
    }

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-0.4, 0.4);
    std::vector<double> eps(8);
    for (auto& e : eps) e = u(rng);
    ControlFunction Q = esta_control(q0, basis, eps);
    for (int k = 1; k <= 8; ++k) {
        CHECK(Q.value(basis.node(k)) - q0.value(basis.node(k)) ==
              doctest::Approx(eps[static_cast<std::size_t>(k - 1)]).epsilon(1e-9).scale(1.0));
    }
    CHECK(Q.value(0.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(Q.eval(kTf, 0, Side::left) == doctest::Approx(kD).epsilon(1e-12));
}
