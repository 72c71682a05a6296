#pragma once

#include <string>
#include <vector>

namespace tpv {

// Values sampled on an ascending wavelength grid (um). Immutable once built.
class Spectrum {
public:
    Spectrum() = default;
    Spectrum(std::vector<double> wavelengths_um, std::vector<double> values);

    static Spectrum constant(const std::vector<double>& wavelengths_um, double value);

    const std::vector<double>& wavelengths() const { return wl_; }
    const std::vector<double>& values() const { return v_; }
    std::size_t size() const { return wl_.size(); }
    bool empty() const { return wl_.empty(); }
    double lambda_min() const { return wl_.front(); }
    double lambda_max() const { return wl_.back(); }

    // linear interpolation, clamped outside the grid
    double at(double lambda_um) const;

    // throws DomainError unless every value lies in [0, 1] within tol
    void require_fraction(double tol = 1e-9) const;

private:
    std::vector<double> wl_;
    std::vector<double> v_;
};

struct GridSpec {
    double lambda_min_um = 0.3;
    double lambda_max_um = 20.0;
    std::size_t points = 2000;
};

std::vector<double> make_grid(const GridSpec& g);
// same bounds, (points - 1) * factor + 1 nodes
std::vector<double> refine_grid(const std::vector<double>& grid, std::size_t factor);

Spectrum read_spectrum_csv(const std::string& path);
void write_spectrum_csv(const std::string& path, const Spectrum& s, const std::string& value_name);

}
