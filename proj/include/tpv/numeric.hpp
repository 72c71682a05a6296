#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace tpv::num {

// Linear interpolation in a strictly ascending table, clamped at the ends.
double interp(std::span<const double> x, std::span<const double> y, double at);

std::vector<double> linspace(double lo, double hi, std::size_t n);
std::vector<double> logspace(double lo, double hi, std::size_t n);

struct Root {
    double x;
    double residual;
    int iterations;
};

// Safeguarded Newton/bisection on [lo, hi]; f(lo) and f(hi) must differ in sign.
// df may be empty, in which case pure bisection with secant steps is used.
Root bracketed_root(const std::function<double(double)>& f,
                    const std::function<double(double)>& df,
                    double lo, double hi, double ftol, int max_iter = 200);

// Maximum of a unimodal function on [lo, hi]. Ties go to the lower abscissa.
double golden_max(const std::function<double(double)>& f, double lo, double hi, double xtol);

std::size_t edit_distance(const std::string& a, const std::string& b);

}
