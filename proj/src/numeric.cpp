#include "tpv/numeric.hpp"

#include "tpv/errors.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <sstream>

namespace tpv::num {

double interp(std::span<const double> x, std::span<const double> y, double at) {
    if (x.empty() || x.size() != y.size())
        throw DomainError("interp: table size mismatch");
    if (at <= x.front()) return y.front();
    if (at >= x.back()) return y.back();
    auto it = std::upper_bound(x.begin(), x.end(), at);
    std::size_t i = static_cast<std::size_t>(it - x.begin());
    double t = (at - x[i - 1]) / (x[i] - x[i - 1]);
    return y[i - 1] + t * (y[i] - y[i - 1]);
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    if (n == 0) return {};
    if (n == 1) return {lo};
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    v.back() = hi;
    return v;
}

std::vector<double> logspace(double lo, double hi, std::size_t n) {
    if (lo <= 0 || hi <= 0) throw DomainError("logspace: bounds must be positive");
    if (n == 0) return {};
    if (n == 1) return {lo};
    std::vector<double> v(n);
    double a = std::log10(lo), b = std::log10(hi);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    v.front() = lo;
    v.back() = hi;
    return v;
}

Root bracketed_root(const std::function<double(double)>& f,
                    const std::function<double(double)>& df,
                    double lo, double hi, double ftol, int max_iter) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0) return {lo, 0, 0};
    if (fhi == 0) return {hi, 0, 0};
    if ((flo > 0) == (fhi > 0)) {
        std::ostringstream os;
        os << "root not bracketed: f(" << lo << ")=" << flo << ", f(" << hi << ")=" << fhi;
        throw SolverError(os.str());
    }
    double x = 0.5 * (lo + hi);
    for (int it = 1; it <= max_iter; ++it) {
        double fx = f(x);
        if (std::abs(fx) < ftol) return {x, fx, it};
        if ((fx > 0) == (flo > 0)) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
        double next;
        double d = df ? df(x) : 0.0;
        if (d != 0 && std::isfinite(d))
            next = x - fx / d;
        else
            next = lo - flo * (hi - lo) / (fhi - flo);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == x || hi - lo <= 4 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi))) {
            // bracket collapsed to adjacent doubles
            double best = std::abs(flo) < std::abs(fhi) ? lo : hi;
            double fb = std::abs(flo) < std::abs(fhi) ? flo : fhi;
            if (std::abs(fx) <= std::abs(fb)) return {x, fx, it};
            return {best, fb, it};
        }
        x = next;
    }
    std::ostringstream os;
    os.precision(17);
    os << "root finder did not converge in " << max_iter << " iterations; bracket ["
       << lo << ", " << hi << "], f = [" << flo << ", " << fhi << "]";
    throw SolverError(os.str());
}

double golden_max(const std::function<double(double)>& f, double lo, double hi, double xtol) {
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > xtol) {
        if (f1 >= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
    }
    double x = 0.5 * (a + b);
    // endpoints win only if strictly better
    double best = x, fb = f(x);
    double flo = f(lo);
    if (flo >= fb) {
        best = lo;
        fb = flo;
    }
    if (f(hi) > fb) best = hi;
    return best;
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

}
