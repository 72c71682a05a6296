#pragma once

#include <stdexcept>
#include <string>

namespace tpv {

struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// quadrature band not resolved by the wavelength grid
struct ResolutionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericalError : std::runtime_error {
    NumericalError(const std::string& what, int layer = -1)
        : std::runtime_error(what), layer(layer) {}
    int layer;
};

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ThermalRunawayError : std::runtime_error {
    ThermalRunawayError(const std::string& what, double prev_K, double last_K)
        : std::runtime_error(what), prev_K(prev_K), last_K(last_K) {}
    double prev_K;
    double last_K;
};

struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}
