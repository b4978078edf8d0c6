#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "esta/constants.hpp"
#include "esta/units.hpp"

using namespace esta;

TEST_CASE("paper defaults give tau near 20 us") {
    NaturalUnits u = derive_units(PhysicalParams{});
    CHECK(u.tau * 1e6 == doctest::Approx(20.0).epsilon(0.03));
}

TEST_CASE("closed-form values for the paper parameters") {
    NaturalUnits u = derive_units(PhysicalParams{});
    CHECK(u.tau * 1e6 == doctest::Approx(20.41).epsilon(1e-3));
    CHECK(u.sigma * 1e9 == doctest::Approx(39.4).epsilon(2e-3));
    CHECK(u.wavenumber_k0 * u.sigma == doctest::Approx(0.2857).epsilon(1e-3));
    CHECK(u.u_tilde == doctest::Approx(std::sqrt(150.0) / 2.0).epsilon(1e-12));
}

TEST_CASE("alpha = 4 gives unit scaled depth") {
    PhysicalParams p;
    p.alpha = 4.0;
    CHECK(derive_units(p).u_tilde == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rejects non-positive inputs") {
    PhysicalParams p;
    p.mass_amu = 0.0;
    CHECK_THROWS_AS(derive_units(p), std::invalid_argument);
    p = PhysicalParams{};
    p.alpha = -1.0;
    CHECK_THROWS_AS(derive_units(p), std::invalid_argument);
    p = PhysicalParams{};
    p.wavelength_nm = -866.0;
    CHECK_THROWS_AS(derive_units(p), std::invalid_argument);
}

TEST_CASE("scaled problem: omega0 = 2 pi and d for one site") {
    PhysicalParams p;
    DimensionlessParams dp = nondimensionalize(p);
    CHECK(dp.omega0 == doctest::Approx(2.0 * constants::pi).epsilon(1e-15));
    CHECK(dp.d == doctest::Approx(11.0).epsilon(2e-3));
    CHECK(dp.u0 == doctest::Approx(6.1237).epsilon(1e-4));
}

TEST_CASE("identity 2 k0^2 sigma^2 = 1/u_tilde over random inputs") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> mass(1.0, 300.0), wl(300.0, 2000.0), al(1.0, 5000.0);
    for (int i = 0; i < 200; ++i) {
        PhysicalParams p;
        p.mass_amu = mass(rng);
        p.wavelength_nm = wl(rng);
        p.alpha = al(rng);
        NaturalUnits u = derive_units(p);
        double lhs = 2.0 * std::pow(u.wavenumber_k0 * u.sigma, 2);
        double rhs = 1.0 / u.u_tilde;
        CHECK(std::abs(lhs - rhs) / rhs < 1e-12);
    }
}

TEST_CASE("scale consistency: closed forms survive recomputation") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> mass(1.0, 300.0), wl(300.0, 2000.0), al(1.0, 5000.0);
    for (int i = 0; i < 50; ++i) {
        PhysicalParams p;
        p.mass_amu = mass(rng);
        p.wavelength_nm = wl(rng);
        p.alpha = al(rng);
        NaturalUnits u = derive_units(p);
        const double m = p.mass_amu * constants::atomic_mass_unit;
        const double lambda = p.wavelength_nm * 1e-9;
        double omega0 = std::sqrt(p.alpha) * 4.0 * constants::pi * constants::pi *
                        constants::hbar / (m * lambda * lambda);
        CHECK(u.omega0 == doctest::Approx(omega0).epsilon(1e-12));
        CHECK(u.tau == doctest::Approx(2.0 * constants::pi / omega0).epsilon(1e-12));
        CHECK(u.sigma ==
              doctest::Approx(std::sqrt(constants::hbar / (m * omega0))).epsilon(1e-12));
    }
}
