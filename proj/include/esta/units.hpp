#pragma once

namespace esta {

// Lab-frame inputs for the lattice transport problem.
struct PhysicalParams {
    double mass_amu = 133.0;       // atomic mass units
    double wavelength_nm = 866.0;  // lattice laser wavelength
    double alpha = 150.0;          // lattice depth in recoil energies
    double distance_sites = 1.0;   // transport distance in lattice sites (lambda/2 each)
};

// Derived scales, SI.
struct NaturalUnits {
    double omega0;            // trap frequency at a well bottom, rad/s
    double tau;               // 2 pi / omega0, s
    double sigma;             // sqrt(hbar / (m omega0)), m
    double recoil_energy;     // 2 (pi hbar)^2 / (m lambda^2), J
    double lattice_depth_U0;  // alpha * recoil_energy, J
    double wavenumber_k0;     // 2 pi / lambda, 1/m
    double u_tilde;           // U0 / (hbar omega0) = sqrt(alpha)/2
};

// Scaled problem: hbar = m = 1, lengths in sigma, times in tau (so omega0 = 2 pi).
struct DimensionlessParams {
    double omega0;    // 2 pi, rad per tau
    double d;         // transport distance in sigma
    double u0;        // lattice depth in hbar*omega0, = sqrt(alpha)/2
    double k_sigma;   // k0 * sigma = alpha^(-1/4)
};

// Throws std::invalid_argument naming the offending field on non-positive input.
NaturalUnits derive_units(const PhysicalParams& params);

DimensionlessParams nondimensionalize(const PhysicalParams& params, const NaturalUnits& units);
DimensionlessParams nondimensionalize(const PhysicalParams& params);

}  // namespace esta
