#include "esta/units.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "esta/constants.hpp"

namespace esta {

namespace {
void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument(std::string(name) + " must be strictly positive");
    }
}
}  // namespace

NaturalUnits derive_units(const PhysicalParams& params) {
    require_positive(params.mass_amu, "mass_amu");
    require_positive(params.wavelength_nm, "wavelength_nm");
    require_positive(params.alpha, "alpha");
    require_positive(params.distance_sites, "distance_sites");

    const double m = params.mass_amu * constants::atomic_mass_unit;
    const double lambda = params.wavelength_nm * 1e-9;

    NaturalUnits u{};
    u.wavenumber_k0 = 2.0 * constants::pi / lambda;
    u.recoil_energy = 2.0 * std::pow(constants::pi * constants::hbar, 2) / (m * lambda * lambda);
    u.lattice_depth_U0 = params.alpha * u.recoil_energy;
    u.omega0 = std::sqrt(2.0 * u.lattice_depth_U0 / m) * u.wavenumber_k0;
    u.tau = 2.0 * constants::pi / u.omega0;
    u.sigma = std::sqrt(constants::hbar / (m * u.omega0));
    u.u_tilde = u.lattice_depth_U0 / (constants::hbar * u.omega0);
    return u;
}

DimensionlessParams nondimensionalize(const PhysicalParams& params, const NaturalUnits& units) {
    DimensionlessParams p{};
    p.omega0 = 2.0 * constants::pi;
    p.d = params.distance_sites * (params.wavelength_nm * 1e-9 / 2.0) / units.sigma;
    p.u0 = units.u_tilde;
    p.k_sigma = units.wavenumber_k0 * units.sigma;
    return p;
}

DimensionlessParams nondimensionalize(const PhysicalParams& params) {
    return nondimensionalize(params, derive_units(params));
}

}  // namespace esta
