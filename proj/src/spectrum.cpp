#include "tpv/spectrum.hpp"

#include "tpv/errors.hpp"
#include "tpv/numeric.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace tpv {

Spectrum::Spectrum(std::vector<double> wavelengths_um, std::vector<double> values)
    : wl_(std::move(wavelengths_um)), v_(std::move(values)) {
    if (wl_.size() != v_.size())
        throw DomainError("spectrum: wavelength and value counts differ");
    for (std::size_t i = 0; i < wl_.size(); ++i) {
        if (!(wl_[i] > 0)) throw DomainError("spectrum: wavelengths must be positive");
        if (i > 0 && !(wl_[i] > wl_[i - 1]))
            throw DomainError("spectrum: wavelengths must be strictly increasing");
    }
}

Spectrum Spectrum::constant(const std::vector<double>& wavelengths_um, double value) {
    return Spectrum(wavelengths_um, std::vector<double>(wavelengths_um.size(), value));
}

double Spectrum::at(double lambda_um) const {
    if (wl_.empty()) throw DomainError("spectrum: empty");
    return num::interp(wl_, v_, lambda_um);
}

void Spectrum::require_fraction(double tol) const {
    for (std::size_t i = 0; i < v_.size(); ++i) {
        if (!(v_[i] >= -tol && v_[i] <= 1 + tol)) {
            std::ostringstream os;
            os << "spectrum: value " << v_[i] << " at " << wl_[i] << " um outside [0, 1]";
            throw DomainError(os.str());
        }
    }
}

std::vector<double> make_grid(const GridSpec& g) {
    if (!(g.lambda_min_um > 0) || !(g.lambda_max_um > g.lambda_min_um))
        throw DomainError("grid: need 0 < lambda_min < lambda_max");
    if (g.points < 2) throw DomainError("grid: need at least 2 points");
    return num::logspace(g.lambda_min_um, g.lambda_max_um, g.points);
}

std::vector<double> refine_grid(const std::vector<double>& grid, std::size_t factor) {
    if (grid.size() < 2 || factor == 0) throw DomainError("refine_grid: bad input");
    std::vector<double> out;
    out.reserve((grid.size() - 1) * factor + 1);
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        double a = std::log(grid[i]), b = std::log(grid[i + 1]);
        out.push_back(grid[i]);
        for (std::size_t k = 1; k < factor; ++k)
            out.push_back(std::exp(a + (b - a) * static_cast<double>(k) / static_cast<double>(factor)));
    }
    out.push_back(grid.back());
    return out;
}

Spectrum read_spectrum_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open spectrum file " + path);
    std::string line;
    std::vector<double> wl, v;
    bool header = true;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (header) {
            header = false;
            continue;
        }
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected two columns");
        try {
            wl.push_back(std::stod(line.substr(0, comma)));
            v.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": bad number");
        }
    }
    return Spectrum(std::move(wl), std::move(v));
}

void write_spectrum_csv(const std::string& path, const Spectrum& s, const std::string& value_name) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    out << "wavelength_um," << value_name << "\n";
    char buf[64];
    for (std::size_t i = 0; i < s.size(); ++i) {
        auto r = std::to_chars(buf, buf + sizeof buf, s.wavelengths()[i]);
        out.write(buf, r.ptr - buf);
        out << ',';
        r = std::to_chars(buf, buf + sizeof buf, s.values()[i]);
        out.write(buf, r.ptr - buf);
        out << '\n';
    }
}

}
