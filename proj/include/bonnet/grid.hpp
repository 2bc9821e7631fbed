#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "bonnet/errors.hpp"

namespace bonnet {

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

// Uniform rectangular grid over [u_min,u_max] x [v_min,v_max].
// Node (i,j) sits at (u_min + i*hu, v_min + j*hv); storage is row-major
// in u, i.e. flat index = i*nv + j.
struct Grid2D {
    double u_min = 0.0, u_max = 1.0;
    double v_min = 0.0, v_max = 1.0;
    int nu = 3, nv = 3;

    Grid2D() = default;
    Grid2D(double umin, double umax, double vmin, double vmax, int nu_, int nv_)
        : u_min(umin), u_max(umax), v_min(vmin), v_max(vmax), nu(nu_), nv(nv_) {
        if (nu < 2 || nv < 2)
            throw DimensionError("Grid2D: need at least 2 nodes per axis");
        if (!(u_max > u_min) || !(v_max > v_min))
            throw DimensionError("Grid2D: empty parameter range");
    }

    double hu() const { return (u_max - u_min) / (nu - 1); }
    double hv() const { return (v_max - v_min) / (nv - 1); }
    double u(int i) const { return u_min + i * hu(); }
    double v(int j) const { return v_min + j * hv(); }
    int index(int i, int j) const { return i * nv + j; }
    std::size_t size() const { return static_cast<std::size_t>(nu) * nv; }

    bool operator==(const Grid2D& o) const {
        return u_min == o.u_min && u_max == o.u_max && v_min == o.v_min &&
               v_max == o.v_max && nu == o.nu && nv == o.nv;
    }
};

// Inclusive node-index window [i0,i1] x [j0,j1].
struct NodeWindow {
    int i0 = 0, i1 = 0, j0 = 0, j1 = 0;

    int count_u() const { return i1 - i0 + 1; }
    int count_v() const { return j1 - j0 + 1; }
    bool contains(int i, int j) const {
        return i >= i0 && i <= i1 && j >= j0 && j <= j1;
    }
};

inline NodeWindow full_window(const Grid2D& g) {
    return {0, g.nu - 1, 0, g.nv - 1};
}

// Interior nodes only; differential residuals are evaluated here so that
// boundary-closure error never enters a gate.
inline NodeWindow interior_window(const Grid2D& g) {
    return {1, g.nu - 2, 1, g.nv - 2};
}

struct ScalarField {
    Grid2D grid;
    std::vector<double> values;

    ScalarField() = default;
    explicit ScalarField(const Grid2D& g, double fill = 0.0)
        : grid(g), values(g.size(), fill) {}

    double& at(int i, int j) { return values[grid.index(i, j)]; }
    double at(int i, int j) const { return values[grid.index(i, j)]; }

    template <class F>
    static ScalarField sample(const Grid2D& g, F&& f) {
        ScalarField out(g);
        for (int i = 0; i < g.nu; ++i)
            for (int j = 0; j < g.nv; ++j)
                out.at(i, j) = f(g.u(i), g.v(j));
        return out;
    }

    bool all_finite() const {
        for (double x : values)
            if (!std::isfinite(x)) return false;
        return true;
    }
};

struct VectorField4 {
    Grid2D grid;
    std::vector<Vec4> values;

    VectorField4() = default;
    explicit VectorField4(const Grid2D& g)
        : grid(g), values(g.size(), Vec4::Zero()) {}

    Vec4& at(int i, int j) { return values[grid.index(i, j)]; }
    const Vec4& at(int i, int j) const { return values[grid.index(i, j)]; }

    template <class F>
    static VectorField4 sample(const Grid2D& g, F&& f) {
        VectorField4 out(g);
        for (int i = 0; i < g.nu; ++i)
            for (int j = 0; j < g.nv; ++j)
                out.at(i, j) = f(g.u(i), g.v(j));
        return out;
    }

    // One component as a scalar field.
    ScalarField component(int k) const {
        ScalarField out(grid);
        for (std::size_t n = 0; n < values.size(); ++n)
            out.values[n] = values[n][k];
        return out;
    }
};

double window_max_abs(const ScalarField& f, const NodeWindow& w);
double window_mean_abs(const ScalarField& f, const NodeWindow& w);
double window_min(const ScalarField& f, const NodeWindow& w);
inline double interior_max_abs(const ScalarField& f) {
    return window_max_abs(f, interior_window(f.grid));
}

void require_same_grid(const Grid2D& a, const Grid2D& b, const char* what);

}  // namespace bonnet
