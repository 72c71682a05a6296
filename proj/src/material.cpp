#include "tpv/material.hpp"

#include "tpv/constants.hpp"
#include "tpv/errors.hpp"
#include "tpv/numeric.hpp"
#include "tpv/tables.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace tpv {

ConstantMaterial::ConstantMaterial(std::string name, std::complex<double> n)
    : name_(std::move(name)), n_(n) {
    if (n.imag() < 0) throw DomainError(name_ + ": extinction must be non-negative");
}

TabulatedMaterial::TabulatedMaterial(std::string name, std::vector<double> wl_um, std::vector<double> n,
                                     std::vector<double> k)
    : name_(std::move(name)), wl_(std::move(wl_um)), n_(std::move(n)), k_(std::move(k)) {
    if (wl_.size() < 2 || wl_.size() != n_.size() || wl_.size() != k_.size())
        throw DomainError(name_ + ": table needs at least two complete rows");
    for (std::size_t i = 0; i < wl_.size(); ++i) {
        if (i > 0 && !(wl_[i] > wl_[i - 1]))
            throw DomainError(name_ + ": table wavelengths must be strictly increasing");
        if (k_[i] < 0) throw DomainError(name_ + ": negative extinction in table");
    }
}

std::shared_ptr<TabulatedMaterial> TabulatedMaterial::from_csv_text(const std::string& name,
                                                                    const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<double> wl, n, k;
    bool header = true;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (header) {
            header = false;
            continue;
        }
        std::istringstream row(line);
        std::string a, b, c;
        if (!std::getline(row, a, ',') || !std::getline(row, b, ',') || !std::getline(row, c))
            throw ConfigError(name + " table line " + std::to_string(lineno) + ": expected 3 columns");
        try {
            wl.push_back(std::stod(a));
            n.push_back(std::stod(b));
            k.push_back(std::stod(c));
        } catch (const std::exception&) {
            throw ConfigError(name + " table line " + std::to_string(lineno) + ": bad number");
        }
    }
    return std::make_shared<TabulatedMaterial>(name, std::move(wl), std::move(n), std::move(k));
}

std::shared_ptr<TabulatedMaterial> TabulatedMaterial::from_csv_file(const std::string& name,
                                                                    const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open material table " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_csv_text(name, ss.str());
}

std::complex<double> TabulatedMaterial::index(double lambda_um) const {
    return {num::interp(wl_, n_, lambda_um), num::interp(wl_, k_, lambda_um)};
}

FcaAbsorption fca_absorption(double lambda_um, const DrudeFcaParams& p) {
    if (!(lambda_um > 0)) throw DomainError("fca: wavelength must be positive");
    if (!(p.C > 0) || !(p.gamma > 0) || !(p.N >= 0))
        throw DomainError("fca: need C > 0, gamma > 0, N >= 0");
    double alpha = p.C * p.N * std::pow(lambda_um, p.gamma);
    double k = alpha * (lambda_um * 1e-4) / (4 * phys::pi);
    return {alpha, k};
}

FcaMaterial::FcaMaterial(MaterialPtr base, DrudeFcaParams p) : base_(std::move(base)), p_(p) {
    fca_absorption(1.0, p_);
}

std::complex<double> FcaMaterial::index(double lambda_um) const {
    auto n = base_->index(lambda_um);
    return {n.real(), n.imag() + fca_absorption(lambda_um, p_).k};
}

std::string FcaMaterial::name() const {
    std::ostringstream os;
    os << base_->name() << "+fca(N=" << p_.N << ")";
    return os.str();
}

LosslessAbove::LosslessAbove(MaterialPtr base, double cutoff_um) : base_(std::move(base)), cutoff_(cutoff_um) {}

std::complex<double> LosslessAbove::index(double lambda_um) const {
    auto n = base_->index(lambda_um);
    return lambda_um > cutoff_ ? std::complex<double>(n.real(), 0.0) : n;
}

std::string LosslessAbove::name() const { return base_->name() + "(lossless above cutoff)"; }

namespace materials {

MaterialPtr air() {
    static const MaterialPtr m = std::make_shared<ConstantMaterial>("air", 1.0);
    return m;
}

MaterialPtr silicon() {
    static const MaterialPtr m = TabulatedMaterial::from_csv_text("Si", tables::si_nk());
    return m;
}

MaterialPtr gold() {
    static const MaterialPtr m = TabulatedMaterial::from_csv_text("Au", tables::au_nk());
    return m;
}

MaterialPtr doped_silicon(const DrudeFcaParams& p) { return std::make_shared<FcaMaterial>(silicon(), p); }

}

}
