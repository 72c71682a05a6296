#include "tpv/radiometry.hpp"

#include "tpv/constants.hpp"
#include "tpv/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tpv {

namespace {

constexpr double c1 = 2 * phys::pi * phys::h * phys::c * phys::c;  // W m^2
constexpr double c2_um_K = phys::h * phys::c / phys::k_B * 1e6;

void check_source(const BlackbodySource& src) {
    if (!(src.T_K > 0)) throw DomainError("blackbody temperature must be above 0 K");
    if (!(src.view_factor >= 0 && src.view_factor <= 1))
        throw DomainError("view factor must lie in [0, 1]");
}

}

BlackbodySource BlackbodySource::from_celsius(double T_C, double view_factor) {
    BlackbodySource s{phys::to_kelvin(T_C), view_factor};
    check_source(s);
    return s;
}

double BlackbodySource::celsius() const { return phys::to_celsius(T_K); }

double planck_spectral_exitance(double lambda_um, double T_K) {
    if (!(lambda_um > 0) || !(T_K > 0))
        throw DomainError("planck: wavelength and temperature must be positive");
    double lam = lambda_um * 1e-6;
    double x = c2_um_K / (lambda_um * T_K);
    if (x > 700) return 0.0;
    double l5 = lam * lam * lam * lam * lam;
    return c1 / l5 / std::expm1(x) * 1e-6;
}

Spectrum exitance_spectrum(const BlackbodySource& src, const std::vector<double>& grid) {
    check_source(src);
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        v[i] = planck_spectral_exitance(grid[i], src.T_K) * src.view_factor;
    return Spectrum(grid, std::move(v));
}

double blackbody_fraction(double lambdaT) {
    if (!(lambdaT > 0)) return 0.0;
    double x = c2_um_K / lambdaT;
    if (x > 700) return 0.0;
    if (x < 0.5) {
        // 1 - F from the Bernoulli expansion of t^3/(e^t - 1)
        double x2 = x * x, x3 = x2 * x;
        double tail = x3 * (1.0 / 3 - x / 8 + x2 / 60 - x2 * x2 / 5040 + x2 * x2 * x2 / 272160 -
                            x2 * x2 * x2 * x2 / 13305600 + x2 * x2 * x2 * x2 * x2 / 622702080);
        return 1.0 - 15.0 / std::pow(phys::pi, 4) * tail;
    }
    double sum = 0;
    for (int n = 1; n < 100000; ++n) {
        double dn = n;
        double term = std::exp(-dn * x) / dn * (x * x * x + 3 * x * x / dn + 6 * x / (dn * dn) + 6 / (dn * dn * dn));
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return 15.0 / std::pow(phys::pi, 4) * sum;
}

double integrate_band(const std::vector<double>& x, const std::vector<double>& y, double lo, double hi) {
    if (x.size() != y.size()) throw DomainError("integrate_band: size mismatch");
    if (!(lo > 0) || !(hi > lo)) throw DomainError("integrate_band: need 0 < lo < hi");
    if (x.empty() || lo < x.front() || hi > x.back()) {
        std::ostringstream os;
        os << "band [" << lo << ", " << hi << "] um outside the wavelength grid";
        throw ResolutionError(os.str());
    }
    auto i0 = static_cast<std::size_t>(std::lower_bound(x.begin(), x.end(), lo) - x.begin());
    auto i1 = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), hi) - x.begin());
    if (i1 < i0 + 2) {
        std::ostringstream os;
        os << "band [" << lo << ", " << hi << "] um holds fewer than 2 grid nodes";
        throw ResolutionError(os.str());
    }
    --i1;  // last node <= hi
    double sum = 0;
    if (x[i0] > lo) {
        double t = (lo - x[i0 - 1]) / (x[i0] - x[i0 - 1]);
        double ylo = y[i0 - 1] + t * (y[i0] - y[i0 - 1]);
        sum += 0.5 * (ylo + y[i0]) * (x[i0] - lo);
    }
    for (std::size_t i = i0; i < i1; ++i)
        sum += 0.5 * (y[i] + y[i + 1]) * (x[i + 1] - x[i]);
    if (x[i1] < hi) {
        double t = (hi - x[i1]) / (x[i1 + 1] - x[i1]);
        double yhi = y[i1] + t * (y[i1 + 1] - y[i1]);
        sum += 0.5 * (y[i1] + yhi) * (hi - x[i1]);
    }
    return sum;
}

double band_power(const BlackbodySource& src, const std::vector<double>& grid, double lo, double hi) {
    auto e = exitance_spectrum(src, grid);
    return integrate_band(e.wavelengths(), e.values(), lo, hi);
}

double band_power(const BlackbodySource& src, const Spectrum& weight, double lo, double hi) {
    weight.require_fraction();
    auto e = exitance_spectrum(src, weight.wavelengths());
    std::vector<double> y(e.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = weight.values()[i] * e.values()[i];
    return integrate_band(e.wavelengths(), y, lo, hi);
}

double total_exitance(const BlackbodySource& src, const std::vector<double>& grid) {
    double on_grid = band_power(src, grid, grid.front(), grid.back());
    double full = phys::sigma * std::pow(src.T_K, 4) * src.view_factor;
    double below = blackbody_fraction(grid.front() * src.T_K);
    double above = 1.0 - blackbody_fraction(grid.back() * src.T_K);
    return on_grid + full * (below + above);
}

double photon_flux_above_gap(const BlackbodySource& src, const Spectrum& absorptance, double lambda_g_um) {
    absorptance.require_fraction();
    const auto& wl = absorptance.wavelengths();
    if (wl.empty() || lambda_g_um <= wl.front() || lambda_g_um > wl.back())
        throw ResolutionError("bandgap wavelength outside the wavelength grid");
    auto e = exitance_spectrum(src, wl);
    std::vector<double> y(wl.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        y[i] = absorptance.values()[i] * e.values()[i] * wl[i] * 1e-6 / (phys::h * phys::c);
    return integrate_band(wl, y, wl.front(), lambda_g_um);
}

double bandgap_wavelength(double E_g_eV) {
    if (!(E_g_eV > 0)) throw DomainError("bandgap must be positive");
    return 1.2398 / E_g_eV;
}

}
