#pragma once

#include "tpv/material.hpp"
#include "tpv/radiometry.hpp"
#include "tpv/spectrum.hpp"

#include <limits>
#include <vector>

namespace tpv {

enum class Coherence { coherent, incoherent };

inline constexpr double semi_infinite = std::numeric_limits<double>::infinity();
inline constexpr double coherence_threshold_um = 10.0;

// Layers at or above the threshold are treated incoherently.
Coherence coherence_for(double thickness_um);

struct Layer {
    double thickness_um;
    MaterialPtr material;
    Coherence coherence;
};

struct Stack {
    std::vector<Layer> layers;  // first and last are the semi-infinite ambient and substrate

    void validate() const;
};

struct TmmResult {
    double R = 0;
    double T = 0;
    std::vector<double> A;  // per layer; terminal entries are 0

    double absorbed() const;
};

// Normal incidence from layers.front().
TmmResult tmm_solve(const Stack& stack, double lambda_um);

struct StackResponse {
    Spectrum R, T, A;
    std::vector<Spectrum> A_layer;
};

StackResponse stack_response(const Stack& stack, const std::vector<double>& grid);
Spectrum absorptance_spectrum(const Stack& stack, const std::vector<double>& grid);

// Blackbody-weighted reflectance over (lambda_g, lambda_max].
double r_oob(const Spectrum& reflectance, const BlackbodySource& src, double lambda_g_um);
double r_oob(const Stack& stack, const BlackbodySource& src, double lambda_g_um, const std::vector<double>& grid);

// In-band share of absorbed power.
double spectral_efficiency(const Spectrum& absorptance, const BlackbodySource& src, double lambda_g_um);
double spectral_efficiency(const Stack& stack, const BlackbodySource& src, double lambda_g_um,
                           const std::vector<double>& grid);

// Unweighted mean reflectance over a band (the FTIR window by default).
double band_mean_reflectance(const Spectrum& reflectance, double lo_um = 1.3, double hi_um = 15.4);

struct AirBridgeSpec {
    double t_si_um = 50.0;
    double gap_um = 600.0;
    double au_um = 1.0;
    DrudeFcaParams fca;
    MaterialPtr si_base;  // null: built-in table
    MaterialPtr au;       // null: built-in table
};

// air / doped Si absorber / air gap / Au / Si wafer
Stack make_airbridge_stack(const AirBridgeSpec& spec);

}
