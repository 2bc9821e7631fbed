#include "bonnet/fd.hpp"

namespace bonnet::fd {

namespace {

// Per-node stencils shared by the OpenMP and serial paths so the two
// produce bitwise-identical values.

inline double du_node(const ScalarField& f, int i, int j, double hu, int nu) {
    if (i == 0)
        return (-3.0 * f.at(0, j) + 4.0 * f.at(1, j) - f.at(2, j)) / (2.0 * hu);
    if (i == nu - 1)
        return (3.0 * f.at(nu - 1, j) - 4.0 * f.at(nu - 2, j) + f.at(nu - 3, j)) /
               (2.0 * hu);
    return (f.at(i + 1, j) - f.at(i - 1, j)) / (2.0 * hu);
}

inline double dv_node(const ScalarField& f, int i, int j, double hv, int nv) {
    if (j == 0)
        return (-3.0 * f.at(i, 0) + 4.0 * f.at(i, 1) - f.at(i, 2)) / (2.0 * hv);
    if (j == nv - 1)
        return (3.0 * f.at(i, nv - 1) - 4.0 * f.at(i, nv - 2) + f.at(i, nv - 3)) /
               (2.0 * hv);
    return (f.at(i, j + 1) - f.at(i, j - 1)) / (2.0 * hv);
}

inline double lap_node(const ScalarField& f, int i, int j, double ihu2,
                       double ihv2) {
    return (f.at(i + 1, j) - 2.0 * f.at(i, j) + f.at(i - 1, j)) * ihu2 +
           (f.at(i, j + 1) - 2.0 * f.at(i, j) + f.at(i, j - 1)) * ihv2;
}

void require_stencil(const Grid2D& g, const char* what) {
    if (g.nu < 3 || g.nv < 3)
        throw DimensionError(std::string(what) +
                             ": grid must have at least 3 nodes per axis");
}

}  // namespace

ScalarField partial_u(const ScalarField& f) {
    require_stencil(f.grid, "partial_u");
    const Grid2D& g = f.grid;
    const double hu = g.hu();
    ScalarField out(g);
#pragma omp parallel for
    for (int i = 0; i < g.nu; ++i)
        for (int j = 0; j < g.nv; ++j)
            out.at(i, j) = du_node(f, i, j, hu, g.nu);
    return out;
}

ScalarField partial_v(const ScalarField& f) {
    require_stencil(f.grid, "partial_v");
    const Grid2D& g = f.grid;
    const double hv = g.hv();
    ScalarField out(g);
#pragma omp parallel for
    for (int i = 0; i < g.nu; ++i)
        for (int j = 0; j < g.nv; ++j)
            out.at(i, j) = dv_node(f, i, j, hv, g.nv);
    return out;
}

ScalarField laplacian(const ScalarField& f) {
    require_stencil(f.grid, "laplacian");
    const Grid2D& g = f.grid;
    const double ihu2 = 1.0 / (g.hu() * g.hu());
    const double ihv2 = 1.0 / (g.hv() * g.hv());
    ScalarField out(g);
#pragma omp parallel for
    for (int i = 1; i < g.nu - 1; ++i)
        for (int j = 1; j < g.nv - 1; ++j)
            out.at(i, j) = lap_node(f, i, j, ihu2, ihv2);
    return out;
}

ScalarField second_u(const ScalarField& f) {
    const Grid2D& g = f.grid;
    if (g.nu < 4) throw DimensionError("second_u: need at least 4 nodes");
    const double ih2 = 1.0 / (g.hu() * g.hu());
    ScalarField out(g);
#pragma omp parallel for
    for (int i = 0; i < g.nu; ++i)
        for (int j = 0; j < g.nv; ++j) {
            if (i == 0)
                out.at(i, j) = (2.0 * f.at(0, j) - 5.0 * f.at(1, j) +
                                4.0 * f.at(2, j) - f.at(3, j)) * ih2;
            else if (i == g.nu - 1)
                out.at(i, j) = (2.0 * f.at(g.nu - 1, j) - 5.0 * f.at(g.nu - 2, j) +
                                4.0 * f.at(g.nu - 3, j) - f.at(g.nu - 4, j)) * ih2;
            else
                out.at(i, j) =
                    (f.at(i + 1, j) - 2.0 * f.at(i, j) + f.at(i - 1, j)) * ih2;
        }
    return out;
}

ScalarField second_v(const ScalarField& f) {
    const Grid2D& g = f.grid;
    if (g.nv < 4) throw DimensionError("second_v: need at least 4 nodes");
    const double ih2 = 1.0 / (g.hv() * g.hv());
    ScalarField out(g);
#pragma omp parallel for
    for (int i = 0; i < g.nu; ++i)
        for (int j = 0; j < g.nv; ++j) {
            if (j == 0)
                out.at(i, j) = (2.0 * f.at(i, 0) - 5.0 * f.at(i, 1) +
                                4.0 * f.at(i, 2) - f.at(i, 3)) * ih2;
            else if (j == g.nv - 1)
                out.at(i, j) = (2.0 * f.at(i, g.nv - 1) - 5.0 * f.at(i, g.nv - 2) +
                                4.0 * f.at(i, g.nv - 3) - f.at(i, g.nv - 4)) * ih2;
            else
                out.at(i, j) =
                    (f.at(i, j + 1) - 2.0 * f.at(i, j) + f.at(i, j - 1)) * ih2;
        }
    return out;
}

std::vector<double> integrate_along_u(const ScalarField& f, int v_index,
                                      int u0_index) {
    const Grid2D& g = f.grid;
    if (v_index < 0 || v_index >= g.nv || u0_index < 0 || u0_index >= g.nu)
        throw DimensionError("integrate_along_u: index out of bounds");
    const double hu = g.hu();
    std::vector<double> acc(g.nu, 0.0);
    for (int i = u0_index + 1; i < g.nu; ++i)
        acc[i] = acc[i - 1] + 0.5 * hu * (f.at(i - 1, v_index) + f.at(i, v_index));
    for (int i = u0_index - 1; i >= 0; --i)
        acc[i] = acc[i + 1] - 0.5 * hu * (f.at(i, v_index) + f.at(i + 1, v_index));
    return acc;
}

std::vector<double> integrate_along_v(const ScalarField& f, int u_index,
                                      int v0_index) {
    const Grid2D& g = f.grid;
    if (u_index < 0 || u_index >= g.nu || v0_index < 0 || v0_index >= g.nv)
        throw DimensionError("integrate_along_v: index out of bounds");
    const double hv = g.hv();
    std::vector<double> acc(g.nv, 0.0);
    for (int j = v0_index + 1; j < g.nv; ++j)
        acc[j] = acc[j - 1] + 0.5 * hv * (f.at(u_index, j - 1) + f.at(u_index, j));
    for (int j = v0_index - 1; j >= 0; --j)
        acc[j] = acc[j + 1] - 0.5 * hv * (f.at(u_index, j) + f.at(u_index, j + 1));
    return acc;
}

namespace serial {

ScalarField partial_u(const ScalarField& f) {
    require_stencil(f.grid, "partial_u");
    const Grid2D& g = f.grid;
    const double hu = g.hu();
    ScalarField out(g);
    for (int i = 0; i < g.nu; ++i)
        for (int j = 0; j < g.nv; ++j)
            out.at(i, j) = du_node(f, i, j, hu, g.nu);
    return out;
}

ScalarField partial_v(const ScalarField& f) {
    require_stencil(f.grid, "partial_v");
    const Grid2D& g = f.grid;
    const double hv = g.hv();
    ScalarField out(g);
    for (int i = 0; i < g.nu; ++i)
        for (int j = 0; j < g.nv; ++j)
            out.at(i, j) = dv_node(f, i, j, hv, g.nv);
    return out;
}

ScalarField laplacian(const ScalarField& f) {
    require_stencil(f.grid, "laplacian");
    const Grid2D& g = f.grid;
    const double ihu2 = 1.0 / (g.hu() * g.hu());
    const double ihv2 = 1.0 / (g.hv() * g.hv());
    ScalarField out(g);
    for (int i = 1; i < g.nu - 1; ++i)
        for (int j = 1; j < g.nv - 1; ++j)
            out.at(i, j) = lap_node(f, i, j, ihu2, ihv2);
    return out;
}

}  // namespace serial

}  // namespace bonnet::fd
