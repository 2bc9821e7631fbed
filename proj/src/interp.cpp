#include "bonnet/interp.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace bonnet {

namespace {

// Stencil start so that [k0, k0+3] brackets cell `cell` and stays in range.
inline int stencil_start(int cell, int n) {
    int k0 = cell - 1;
    if (k0 < 0) k0 = 0;
    if (k0 > n - 4) k0 = n - 4;
    return k0;
}

// Lagrange weights at x for 4 uniformly spaced nodes starting at t0.
inline std::array<double, 4> lagrange4(double x, double t0, double h) {
    std::array<double, 4> w;
    const double s = (x - t0) / h;
    w[0] = -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0;
    w[1] = s * (s - 2.0) * (s - 3.0) / 2.0;
    w[2] = -s * (s - 1.0) * (s - 3.0) / 2.0;
    w[3] = s * (s - 1.0) * (s - 2.0) / 6.0;
    return w;
}

}  // namespace

BicubicInterpolator::BicubicInterpolator(const ScalarField& f) : field_(f) {
    if (f.grid.nu < 4 || f.grid.nv < 4)
        throw DimensionError("BicubicInterpolator: need at least 4 nodes per axis");
}

bool BicubicInterpolator::in_domain(double u, double v) const {
    const Grid2D& g = field_.grid;
    const double tu = 1e-12 * (g.u_max - g.u_min);
    const double tv = 1e-12 * (g.v_max - g.v_min);
    return u >= g.u_min - tu && u <= g.u_max + tu && v >= g.v_min - tv &&
           v <= g.v_max + tv;
}

double BicubicInterpolator::operator()(double u, double v) const {
    const Grid2D& g = field_.grid;
    if (!in_domain(u, v))
        throw DomainError("BicubicInterpolator: query outside grid");
    const double hu = g.hu(), hv = g.hv();
    int ci = static_cast<int>(std::floor((u - g.u_min) / hu));
    int cj = static_cast<int>(std::floor((v - g.v_min) / hv));
    ci = std::clamp(ci, 0, g.nu - 2);
    cj = std::clamp(cj, 0, g.nv - 2);
    const int i0 = stencil_start(ci, g.nu);
    const int j0 = stencil_start(cj, g.nv);
    const auto wu = lagrange4(u, g.u(i0), hu);
    const auto wv = lagrange4(v, g.v(j0), hv);
    double acc = 0.0;
    for (int a = 0; a < 4; ++a) {
        double row = 0.0;
        for (int b = 0; b < 4; ++b)
            row += wv[b] * field_.at(i0 + a, j0 + b);
        acc += wu[a] * row;
    }
    return acc;
}

double inverse_monotone_interp(const std::vector<double>& s,
                               const std::vector<double>& u, double s_query) {
    const int n = static_cast<int>(s.size());
    if (n < 4 || u.size() != s.size())
        throw DimensionError("inverse_monotone_interp: need >= 4 samples");
    // Locate the bracketing cell (s strictly increasing).
    int lo = static_cast<int>(std::upper_bound(s.begin(), s.end(), s_query) -
                              s.begin()) - 1;
    lo = std::clamp(lo, 0, n - 2);
    const int k0 = stencil_start(lo, n);
    double acc = 0.0;
    for (int a = 0; a < 4; ++a) {
        double w = 1.0;
        for (int b = 0; b < 4; ++b) {
            if (a == b) continue;
            w *= (s_query - s[k0 + b]) / (s[k0 + a] - s[k0 + b]);
        }
        acc += w * u[k0 + a];
    }
    return acc;
}

}  // namespace bonnet
