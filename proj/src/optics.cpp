#include "tpv/optics.hpp"

#include "tpv/constants.hpp"
#include "tpv/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <sstream>

namespace tpv {

using cplx = std::complex<double>;

namespace {

using Mat2 = std::array<cplx, 4>;  // row-major

Mat2 mul(const Mat2& a, const Mat2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

Mat2 interface_matrix(cplx na, cplx nb) {
    cplx r = (na - nb) / (na + nb);
    cplx t = 2.0 * na / (na + nb);
    return {1.0 / t, r / t, r / t, 1.0 / t};
}

Mat2 propagation(cplx n, double d_um, double lambda_um) {
    cplx delta = 2 * phys::pi * n * d_um / lambda_um;
    // opaque films: cap the attenuation so the matrices stay finite
    if (delta.imag() > 35) delta = {delta.real(), 35.0};
    cplx e = std::exp(cplx(0, 1) * delta);
    return {1.0 / e, 0.0, 0.0, e};
}

struct Film {
    cplx n;
    double d;
};

struct OneWay {
    double R, T;
    std::vector<double> A;  // per film
};

OneWay coherent_pass(cplx na, const std::vector<Film>& films, cplx nb, double lam) {
    OneWay out;
    if (films.empty()) {
        if (nb.real() <= 0) {
            out.R = 1.0;
            out.T = 0.0;
            return out;
        }
        cplx r = (na - nb) / (na + nb);
        out.R = std::norm(r);
        out.T = 1.0 - out.R;
        return out;
    }
    std::vector<cplx> ns;
    ns.push_back(na);
    for (const auto& f : films) ns.push_back(f.n);
    ns.push_back(nb);

    Mat2 M = interface_matrix(ns[0], ns[1]);
    for (std::size_t m = 0; m < films.size(); ++m)
        M = mul(mul(M, propagation(films[m].n, films[m].d, lam)), interface_matrix(ns[m + 1], ns[m + 2]));
    cplx t = 1.0 / M[0];
    cplx r = M[2] / M[0];

    out.R = std::norm(r);
    out.T = std::norm(t) * nb.real() / na.real();
    double A_total = 1.0 - out.R - out.T;
    if (A_total < 0) {
        A_total = 0;
        out.T = 1.0 - out.R;
    }

    // field amplitudes at the start of each film, walking back from the exit
    std::vector<double> S(films.size() + 1);
    cplx v = t, w = 0.0;
    S[films.size()] = out.T;
    for (std::size_t m = films.size(); m-- > 0;) {
        Mat2 I = interface_matrix(ns[m + 1], ns[m + 2]);
        cplx ve = I[0] * v + I[1] * w, we = I[2] * v + I[3] * w;
        Mat2 P = propagation(films[m].n, films[m].d, lam);
        v = P[0] * ve;
        w = P[3] * we;
        cplx n = ns[m + 1];
        S[m] = (n * std::conj(v + w) * (v - w)).real() / na.real();
    }
    out.A.assign(films.size(), 0.0);
    double dsum = 0;
    for (std::size_t m = 0; m < films.size(); ++m) {
        out.A[m] = std::max(0.0, S[m] - S[m + 1]);
        dsum += out.A[m];
    }
    for (auto& a : out.A) a = dsum > 0 ? A_total * a / dsum : A_total / static_cast<double>(films.size());
    return out;
}

struct Boundary {
    OneWay fwd, bwd;
    std::vector<std::size_t> film_layers;
};

}

Coherence coherence_for(double thickness_um) {
    return thickness_um >= coherence_threshold_um ? Coherence::incoherent : Coherence::coherent;
}

void Stack::validate() const {
    if (layers.size() < 3) throw DomainError("stack needs ambient, at least one film and a substrate");
    if (!std::isinf(layers.front().thickness_um) || !std::isinf(layers.back().thickness_um))
        throw DomainError("first and last stack layers must be semi-infinite");
    for (std::size_t i = 0; i < layers.size(); ++i) {
        if (!layers[i].material) throw DomainError("stack layer " + std::to_string(i) + " has no material");
        if (i > 0 && i + 1 < layers.size() && !(layers[i].thickness_um > 0 && std::isfinite(layers[i].thickness_um)))
            throw DomainError("internal stack layer " + std::to_string(i) + " needs a finite positive thickness");
    }
}

double TmmResult::absorbed() const {
    double s = 0;
    for (double a : A) s += a;
    return s;
}

TmmResult tmm_solve(const Stack& stack, double lam) {
    stack.validate();
    if (!(lam > 0)) throw DomainError("tmm: wavelength must be positive");
    const auto& L = stack.layers;
    const std::size_t N = L.size();

    std::vector<cplx> n(N);
    for (std::size_t i = 0; i < N; ++i) {
        n[i] = L[i].material->index(lam);
        if (!std::isfinite(n[i].real()) || !std::isfinite(n[i].imag()))
            throw NumericalError("undefined refractive index in layer " + std::to_string(i), static_cast<int>(i));
        if (n[i].imag() < 0)
            throw DomainError("negative extinction in layer " + std::to_string(i));
    }

    // incoherent layers (terminals always count) split the stack into coherent groups
    std::vector<std::size_t> inc;
    for (std::size_t i = 0; i < N; ++i)
        if (i == 0 || i + 1 == N || L[i].coherence == Coherence::incoherent) inc.push_back(i);
    if (n[0].real() <= 0) throw NumericalError("incidence medium must have a positive real index", 0);

    const std::size_t K = inc.size() - 1;  // number of boundaries
    std::vector<Boundary> bd(K);
    for (std::size_t j = 0; j < K; ++j) {
        std::vector<Film> films, rev;
        for (std::size_t i = inc[j] + 1; i < inc[j + 1]; ++i) {
            films.push_back({n[i], L[i].thickness_um});
            bd[j].film_layers.push_back(i);
        }
        rev.assign(films.rbegin(), films.rend());
        cplx na = n[inc[j]], nb = n[inc[j + 1]];
        bd[j].fwd = coherent_pass(na, films, nb, lam);
        if (nb.real() > 0) {
            bd[j].bwd = coherent_pass(nb, rev, na, lam);
            std::reverse(bd[j].bwd.A.begin(), bd[j].bwd.A.end());
        } else {
            // nothing propagates back out of a purely reactive terminal
            bd[j].bwd = {1.0, 0.0, std::vector<double>(films.size(), 0.0)};
        }
        for (const auto* ow : {&bd[j].fwd, &bd[j].bwd}) {
            bool ok = std::isfinite(ow->R) && std::isfinite(ow->T);
            for (double a : ow->A) ok = ok && std::isfinite(a);
            if (!ok) {
                int where = films.empty() ? static_cast<int>(inc[j + 1]) : static_cast<int>(bd[j].film_layers.front());
                throw NumericalError("non-finite field propagation at layer " + std::to_string(where), where);
            }
        }
    }

    // single-pass intensity transmission of each incoherent layer; P[0] unused
    std::vector<double> P(K + 1, 1.0);
    for (std::size_t j = 1; j < K; ++j) {
        const std::size_t i = inc[j];
        double a = 4 * phys::pi * n[i].imag() / lam;  // per um
        P[j] = std::exp(-a * L[i].thickness_um);
    }

    // effective reflectance and transmittance looking down from the bottom of layer inc[j]
    std::vector<double> G(K), tau(K), D(K, 1.0);
    G[K - 1] = bd[K - 1].fwd.R;
    tau[K - 1] = bd[K - 1].fwd.T;
    for (std::size_t j = K - 1; j-- > 0;) {
        const auto& f = bd[j].fwd;
        const auto& b = bd[j].bwd;
        double loop = P[j + 1] * P[j + 1] * G[j + 1];
        D[j] = 1.0 - b.R * loop;
        G[j] = f.R + f.T * b.T * loop / D[j];
        tau[j] = f.T * P[j + 1] * tau[j + 1] / D[j];
    }

    TmmResult res;
    res.A.assign(N, 0.0);
    res.R = G[0];
    res.T = tau[0];

    // forward intensity at the top of each incoherent layer, unit incidence
    std::vector<double> F(K + 1, 0.0);
    F[0] = 1.0;
    for (std::size_t j = 0; j < K; ++j) {
        const auto& f = bd[j].fwd;
        const auto& b = bd[j].bwd;
        double down = F[j] * P[j];  // arriving at boundary j from above
        double up = 0;              // arriving at boundary j from below
        if (j + 1 < K) {
            F[j + 1] = down * f.T / D[j];
            up = F[j + 1] * P[j + 1] * P[j + 1] * G[j + 1];
        }
        for (std::size_t m = 0; m < bd[j].film_layers.size(); ++m)
            res.A[bd[j].film_layers[m]] = down * f.A[m] + up * b.A[m];
        if (j >= 1) {
            const std::size_t i = inc[j];
            res.A[i] = F[j] * (1.0 - P[j]) * (1.0 + P[j] * G[j]);
        }
    }
    for (std::size_t i = 0; i < N; ++i) {
        if (!std::isfinite(res.A[i]))
            throw NumericalError("non-finite absorption in layer " + std::to_string(i), static_cast<int>(i));
        if (res.A[i] < 0) res.A[i] = 0;
    }
    return res;
}

StackResponse stack_response(const Stack& stack, const std::vector<double>& grid) {
    const std::size_t M = grid.size();
    std::vector<double> R(M), T(M), A(M);
    std::vector<std::vector<double>> Al(stack.layers.size(), std::vector<double>(M));
    for (std::size_t k = 0; k < M; ++k) {
        auto r = tmm_solve(stack, grid[k]);
        R[k] = r.R;
        T[k] = r.T;
        A[k] = r.absorbed();
        for (std::size_t i = 0; i < r.A.size(); ++i) Al[i][k] = r.A[i];
    }
    StackResponse out{Spectrum(grid, std::move(R)), Spectrum(grid, std::move(T)), Spectrum(grid, std::move(A)), {}};
    for (auto& v : Al) out.A_layer.emplace_back(grid, std::move(v));
    return out;
}

Spectrum absorptance_spectrum(const Stack& stack, const std::vector<double>& grid) {
    return stack_response(stack, grid).A;
}

double r_oob(const Spectrum& reflectance, const BlackbodySource& src, double lambda_g_um) {
    const double hi = reflectance.lambda_max();
    double num = band_power(src, reflectance, lambda_g_um, hi);
    double den = band_power(src, reflectance.wavelengths(), lambda_g_um, hi);
    if (!(den > 0)) throw DomainError("r_oob: no out-of-band emission on the grid");
    return num / den;
}

double r_oob(const Stack& stack, const BlackbodySource& src, double lambda_g_um, const std::vector<double>& grid) {
    return r_oob(stack_response(stack, grid).R, src, lambda_g_um);
}

double spectral_efficiency(const Spectrum& absorptance, const BlackbodySource& src, double lambda_g_um) {
    double in = band_power(src, absorptance, absorptance.lambda_min(), lambda_g_um);
    double all = band_power(src, absorptance, absorptance.lambda_min(), absorptance.lambda_max());
    if (!(all > 0)) throw DomainError("spectral efficiency undefined: nothing is absorbed");
    return in / all;
}

double spectral_efficiency(const Stack& stack, const BlackbodySource& src, double lambda_g_um,
                           const std::vector<double>& grid) {
    return spectral_efficiency(absorptance_spectrum(stack, grid), src, lambda_g_um);
}

double band_mean_reflectance(const Spectrum& reflectance, double lo_um, double hi_um) {
    reflectance.require_fraction();
    return integrate_band(reflectance.wavelengths(), reflectance.values(), lo_um, hi_um) / (hi_um - lo_um);
}

Stack make_airbridge_stack(const AirBridgeSpec& s) {
    if (!(s.t_si_um > 0) || !(s.gap_um > 0) || !(s.au_um > 0))
        throw DomainError("air-bridge stack: thicknesses must be positive");
    MaterialPtr si = s.si_base ? s.si_base : materials::silicon();
    MaterialPtr au = s.au ? s.au : materials::gold();
    Stack st;
    st.layers = {
        {semi_infinite, materials::air(), Coherence::incoherent},
        {s.t_si_um, std::make_shared<FcaMaterial>(si, s.fca), coherence_for(s.t_si_um)},
        {s.gap_um, materials::air(), coherence_for(s.gap_um)},
        {s.au_um, au, coherence_for(s.au_um)},
        {semi_infinite, si, Coherence::incoherent},
    };
    return st;
}

}
