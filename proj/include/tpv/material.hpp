#pragma once

#include <complex>
#include <memory>
#include <string>
#include <vector>

namespace tpv {

// Complex refractive index n + ik as a function of wavelength (um).
class Material {
public:
    virtual ~Material() = default;
    virtual std::complex<double> index(double lambda_um) const = 0;
    virtual std::string name() const = 0;
};

using MaterialPtr = std::shared_ptr<const Material>;

class ConstantMaterial : public Material {
public:
    ConstantMaterial(std::string name, std::complex<double> n);
    std::complex<double> index(double) const override { return n_; }
    std::string name() const override { return name_; }

private:
    std::string name_;
    std::complex<double> n_;
};

// Linear interpolation of n and k, clamped outside the table.
class TabulatedMaterial : public Material {
public:
    TabulatedMaterial(std::string name, std::vector<double> wl_um, std::vector<double> n, std::vector<double> k);
    static std::shared_ptr<TabulatedMaterial> from_csv_text(const std::string& name, const std::string& text);
    static std::shared_ptr<TabulatedMaterial> from_csv_file(const std::string& name, const std::string& path);

    std::complex<double> index(double lambda_um) const override;
    std::string name() const override { return name_; }
    double lambda_min() const { return wl_.front(); }
    double lambda_max() const { return wl_.back(); }

private:
    std::string name_;
    std::vector<double> wl_, n_, k_;
};

struct DrudeFcaParams {
    double C = 2.0e-18;  // cm^-1 per cm^-3 per um^gamma
    double gamma = 2.0;
    double N = 1e16;     // cm^-3
};

struct FcaAbsorption {
    double alpha_per_cm;
    double k;
};

FcaAbsorption fca_absorption(double lambda_um, const DrudeFcaParams& p);

// Base index with free-carrier extinction added.
class FcaMaterial : public Material {
public:
    FcaMaterial(MaterialPtr base, DrudeFcaParams p);
    std::complex<double> index(double lambda_um) const override;
    std::string name() const override;
    const DrudeFcaParams& params() const { return p_; }

private:
    MaterialPtr base_;
    DrudeFcaParams p_;
};

// Base index with k forced to zero above a cutoff wavelength.
class LosslessAbove : public Material {
public:
    LosslessAbove(MaterialPtr base, double cutoff_um);
    std::complex<double> index(double lambda_um) const override;
    std::string name() const override;

private:
    MaterialPtr base_;
    double cutoff_;
};

namespace materials {
MaterialPtr air();
MaterialPtr silicon();
MaterialPtr gold();
MaterialPtr doped_silicon(const DrudeFcaParams& p);
}

}
