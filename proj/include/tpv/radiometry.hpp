#pragma once

#include "tpv/spectrum.hpp"

#include <vector>

namespace tpv {

struct BlackbodySource {
    double T_K = 0;
    double view_factor = 1.0;

    static BlackbodySource from_celsius(double T_C, double view_factor = 1.0);
    double celsius() const;
};

// W m^-2 um^-1
double planck_spectral_exitance(double lambda_um, double T_K);

// Exitance times view factor on the given grid.
Spectrum exitance_spectrum(const BlackbodySource& src, const std::vector<double>& grid);

// Fraction of blackbody emission below lambda*T (um K).
double blackbody_fraction(double lambdaT_um_K);

// Trapezoid of y over [lo, hi] on grid x; partial end intervals are interpolated.
double integrate_band(const std::vector<double>& x, const std::vector<double>& y, double lo, double hi);

// Unity weight on the supplied grid.
double band_power(const BlackbodySource& src, const std::vector<double>& grid, double lo, double hi);
// Weighted by a dimensionless spectrum, integrated on its grid.
double band_power(const BlackbodySource& src, const Spectrum& weight, double lo, double hi);

// On-grid trapezoid plus closed-form tails outside the grid; W/m^2.
double total_exitance(const BlackbodySource& src, const std::vector<double>& grid);

// photons s^-1 m^-2 absorbed below lambda_g
double photon_flux_above_gap(const BlackbodySource& src, const Spectrum& absorptance, double lambda_g_um);

double bandgap_wavelength(double E_g_eV);

}
