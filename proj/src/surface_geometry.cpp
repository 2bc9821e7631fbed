#include "bonnet/surface_geometry.hpp"

#include <cmath>
#include <sstream>

#include "bonnet/fd.hpp"
#include "bonnet/interp.hpp"

namespace bonnet::geometry {

namespace {

struct VectorDerivatives {
    VectorField4 du, dv, duu, duv, dvv;
};

VectorDerivatives differentiate(const VectorField4& l) {
    VectorDerivatives d{VectorField4(l.grid), VectorField4(l.grid),
                        VectorField4(l.grid), VectorField4(l.grid),
                        VectorField4(l.grid)};
    for (int c = 0; c < 4; ++c) {
        ScalarField comp = l.component(c);
        ScalarField cu = fd::partial_u(comp);
        ScalarField cv = fd::partial_v(comp);
        ScalarField cuu = fd::second_u(comp);
        ScalarField cuv = fd::partial_v(cu);
        ScalarField cvv = fd::second_v(comp);
        for (std::size_t k = 0; k < l.values.size(); ++k) {
            d.du.values[k][c] = cu.values[k];
            d.dv.values[k][c] = cv.values[k];
            d.duu.values[k][c] = cuu.values[k];
            d.duv.values[k][c] = cuv.values[k];
            d.dvv.values[k][c] = cvv.values[k];
        }
    }
    return d;
}

// Unit vector orthogonal to rows a, b, c; cofactor expansion of the
// formal determinant with the unknown in the last row.
Vec4 orthogonal_complement(const Vec4& a, const Vec4& b, const Vec4& c) {
    auto minor = [&](int drop) {
        int cols[3], m = 0;
        for (int k = 0; k < 4; ++k)
            if (k != drop) cols[m++] = k;
        return a[cols[0]] * (b[cols[1]] * c[cols[2]] - b[cols[2]] * c[cols[1]]) -
               a[cols[1]] * (b[cols[0]] * c[cols[2]] - b[cols[2]] * c[cols[0]]) +
               a[cols[2]] * (b[cols[0]] * c[cols[1]] - b[cols[1]] * c[cols[0]]);
    };
    Vec4 d;
    d[0] = -minor(0);
    d[1] = minor(1);
    d[2] = -minor(2);
    d[3] = minor(3);
    return d;
}

}  // namespace

SurfaceInvariants fundamental_forms(const SurfaceS3& s) {
    const Grid2D& g = s.grid;
    VectorDerivatives d = differentiate(s.l);

    SurfaceInvariants inv;
    inv.grid = g;
    inv.E = ScalarField(g);
    inv.F = ScalarField(g);
    inv.G = ScalarField(g);
    inv.e = ScalarField(g);
    inv.f = ScalarField(g);
    inv.g = ScalarField(g);

    const bool have_normal = s.N.has_value();
    for (int i = 0; i < g.nu; ++i)
        for (int j = 0; j < g.nv; ++j) {
            const Vec4& lu = d.du.at(i, j);
            const Vec4& lv = d.dv.at(i, j);
            const double E = lu.dot(lu);
            const double F = lu.dot(lv);
            const double G = lv.dot(lv);
            if (E * G - F * F < 1e-20) {
                std::ostringstream msg;
                msg << "fundamental_forms: {l_u, l_v} rank-deficient at node ("
                    << i << "," << j << ")";
                throw RegularityError(msg.str());
            }
            Vec4 N;
            if (have_normal) {
                N = s.N->at(i, j);
            } else {
                const Vec4 X = lu / std::sqrt(E);
                // Remove the l_u component so the completion is taken
                // against an orthogonal pair even when F != 0.
                Vec4 Yv = lv - F / E * lu;
                const Vec4 Y = Yv / Yv.norm();
                N = -orthogonal_complement(X, Y, s.l.at(i, j));
                N /= N.norm();
            }
            inv.E.at(i, j) = E;
            inv.F.at(i, j) = F;
            inv.G.at(i, j) = G;
            inv.e.at(i, j) = d.duu.at(i, j).dot(N);
            inv.f.at(i, j) = d.duv.at(i, j).dot(N);
            inv.g.at(i, j) = d.dvv.at(i, j).dot(N);
        }
    return inv;
}

SurfaceInvariants invariants(const SurfaceS3& s, const InvariantOptions& opts) {
    SurfaceInvariants inv = fundamental_forms(s);
    const Grid2D& g = s.grid;
    const NodeWindow w = opts.window ? *opts.window : interior_window(g);

    double worst_net = 0.0;
    for (int i = w.i0; i <= w.i1; ++i)
        for (int j = w.j0; j <= w.j1; ++j) {
            const double fF = std::abs(inv.F.at(i, j)) /
                              std::sqrt(inv.E.at(i, j) * inv.G.at(i, j));
            const double ff = std::abs(inv.f.at(i, j)) /
                              std::sqrt(std::abs(inv.e.at(i, j) * inv.g.at(i, j)) +
                                        1e-12);
            worst_net = std::max(worst_net, std::max(fF, ff));
        }
    if (worst_net > opts.principal_net_tol) {
        std::ostringstream msg;
        msg << "invariants: parameters are not a principal net (defect "
            << worst_net << " > " << opts.principal_net_tol
            << "); reparameterize to principal parameters first";
        throw DomainError(msg.str());
    }

    inv.nu1 = ScalarField(g);
    inv.nu2 = ScalarField(g);
    for (std::size_t k = 0; k < inv.E.values.size(); ++k) {
        inv.nu1.values[k] = inv.e.values[k] / inv.E.values[k];
        inv.nu2.values[k] = inv.g.values[k] / inv.G.values[k];
    }

    if (opts.orient_for_ordering) {
        double mean_gap = 0.0;
        long cnt = 0;
        for (int i = w.i0; i <= w.i1; ++i)
            for (int j = w.j0; j <= w.j1; ++j) {
                mean_gap += inv.nu1.at(i, j) - inv.nu2.at(i, j);
                ++cnt;
            }
        if (cnt > 0 && mean_gap / cnt < 0.0) {
            for (std::size_t k = 0; k < inv.e.values.size(); ++k) {
                inv.e.values[k] = -inv.e.values[k];
                inv.f.values[k] = -inv.f.values[k];
                inv.g.values[k] = -inv.g.values[k];
                inv.nu1.values[k] = -inv.nu1.values[k];
                inv.nu2.values[k] = -inv.nu2.values[k];
            }
            inv.normal_flipped = true;
        }
    }

    ScalarField E_v = fd::partial_v(inv.E);
    ScalarField G_u = fd::partial_u(inv.G);
    inv.gamma1 = ScalarField(g);
    inv.gamma2 = ScalarField(g);
    inv.mean_curvature = ScalarField(g);
    inv.gauss_curvature = ScalarField(g);
    for (std::size_t k = 0; k < inv.E.values.size(); ++k) {
        const double E = inv.E.values[k], G = inv.G.values[k];
        inv.gamma1.values[k] = -E_v.values[k] / (2.0 * E * std::sqrt(G));
        inv.gamma2.values[k] = G_u.values[k] / (2.0 * G * std::sqrt(E));
        inv.mean_curvature.values[k] =
            0.5 * (inv.nu1.values[k] + inv.nu2.values[k]);
        inv.gauss_curvature.values[k] =
            1.0 + inv.nu1.values[k] * inv.nu2.values[k];
    }
    return inv;
}

std::pair<ScalarField, ScalarField> codazzi_residual(const SurfaceInvariants& inv,
                                                     const NodeWindow& window,
                                                     double umbilic_tol) {
    const Grid2D& g = inv.grid;
    for (int i = window.i0; i <= window.i1; ++i)
        for (int j = window.j0; j <= window.j1; ++j)
            if (std::abs(inv.nu1.at(i, j) - inv.nu2.at(i, j)) < umbilic_tol) {
                std::ostringstream msg;
                msg << "codazzi_residual: umbilic node (" << i << "," << j
                    << ") inside the window";
                throw DomainError(msg.str(), i, j);
            }

    ScalarField nu1_v = fd::partial_v(inv.nu1);
    ScalarField nu2_u = fd::partial_u(inv.nu2);
    ScalarField r1(g), r2(g);
    const NodeWindow w = interior_window(g);
#pragma omp parallel for
    for (int i = w.i0; i <= w.i1; ++i)
        for (int j = w.j0; j <= w.j1; ++j) {
            const double gap = inv.nu1.at(i, j) - inv.nu2.at(i, j);
            r1.at(i, j) = inv.gamma1.at(i, j) -
                          nu1_v.at(i, j) / (std::sqrt(inv.G.at(i, j)) * gap);
            r2.at(i, j) = inv.gamma2.at(i, j) -
                          nu2_u.at(i, j) / (std::sqrt(inv.E.at(i, j)) * gap);
        }
    return {std::move(r1), std::move(r2)};
}

ScalarField gauss_residual(const SurfaceInvariants& inv) {
    const Grid2D& g = inv.grid;
    ScalarField g1_v = fd::partial_v(inv.gamma1);
    ScalarField g2_u = fd::partial_u(inv.gamma2);
    ScalarField out(g);
    const NodeWindow w = interior_window(g);
#pragma omp parallel for
    for (int i = w.i0; i <= w.i1; ++i)
        for (int j = w.j0; j <= w.j1; ++j) {
            const double s1 = inv.gamma1.at(i, j), s2 = inv.gamma2.at(i, j);
            out.at(i, j) = g1_v.at(i, j) / std::sqrt(inv.G.at(i, j)) -
                           g2_u.at(i, j) / std::sqrt(inv.E.at(i, j)) -
                           (s1 * s1 + s2 * s2) -
                           (1.0 + inv.nu1.at(i, j) * inv.nu2.at(i, j));
        }
    return out;
}

ScalarField gauss_curvature_intrinsic(const SurfaceInvariants& inv) {
    const Grid2D& g = inv.grid;
    ScalarField G_u = fd::partial_u(inv.G);
    ScalarField E_v = fd::partial_v(inv.E);
    ScalarField a(g), b(g);
    for (std::size_t k = 0; k < a.values.size(); ++k) {
        const double rootEG = std::sqrt(inv.E.values[k] * inv.G.values[k]);
        a.values[k] = G_u.values[k] / rootEG;
        b.values[k] = E_v.values[k] / rootEG;
    }
    ScalarField a_u = fd::partial_u(a);
    ScalarField b_v = fd::partial_v(b);
    ScalarField out(g);
    for (std::size_t k = 0; k < out.values.size(); ++k) {
        const double rootEG = std::sqrt(inv.E.values[k] * inv.G.values[k]);
        out.values[k] = -(a_u.values[k] + b_v.values[k]) / (2.0 * rootEG);
    }
    return out;
}

SurfaceS3 canonical_reparameterize(const SurfaceS3& s,
                                   const SurfaceInvariants& inv, int origin_i,
                                   int origin_j,
                                   const ReparameterizeOptions& opts) {
    const Grid2D& g = s.grid;
    const NodeWindow w = interior_window(g);

    double worst_minimal = 0.0;
    for (int i = w.i0; i <= w.i1; ++i)
        for (int j = w.j0; j <= w.j1; ++j)
            worst_minimal = std::max(
                worst_minimal, std::abs(inv.nu1.at(i, j) + inv.nu2.at(i, j)));
    if (worst_minimal > opts.minimal_tol) {
        std::ostringstream msg;
        msg << "canonical_reparameterize: surface is not minimal (max |nu1+nu2| = "
            << worst_minimal << ")";
        throw DomainError(msg.str());
    }

    // Positive normal-curvature magnitude; the integrands sqrt(nu E) and
    // sqrt(nu G) must separate into functions of u and v alone.
    ScalarField su(g), sv(g);
    for (std::size_t k = 0; k < su.values.size(); ++k) {
        const double nu_pos =
            0.5 * std::abs(inv.nu1.values[k] - inv.nu2.values[k]);
        su.values[k] = std::sqrt(nu_pos * inv.E.values[k]);
        sv.values[k] = std::sqrt(nu_pos * inv.G.values[k]);
    }
    double scale = 0.0, var_u = 0.0, var_v = 0.0;
    for (int i = w.i0; i <= w.i1; ++i)
        for (int j = w.j0; j <= w.j1; ++j) {
            scale = std::max(scale, std::max(su.at(i, j), sv.at(i, j)));
            var_u = std::max(var_u, std::abs(su.at(i, j) - su.at(i, origin_j)));
            var_v = std::max(var_v, std::abs(sv.at(i, j) - sv.at(origin_i, j)));
        }
    if (std::max(var_u, var_v) > opts.separability_tol * scale) {
        std::ostringstream msg;
        msg << "canonical_reparameterize: integrands do not separate "
               "(variation "
            << std::max(var_u, var_v) / scale << " relative)";
        throw DomainError(msg.str());
    }

    std::vector<double> ubar = fd::integrate_along_u(su, origin_j, origin_i);
    std::vector<double> vbar = fd::integrate_along_v(sv, origin_i, origin_j);
    std::vector<double> u_nodes(g.nu), v_nodes(g.nv);
    for (int i = 0; i < g.nu; ++i) u_nodes[i] = g.u(i);
    for (int j = 0; j < g.nv; ++j) v_nodes[j] = g.v(j);

    Grid2D out_grid(ubar.front(), ubar.back(), vbar.front(), vbar.back(), g.nu,
                    g.nv);

    // Back-map the new uniform nodes, then resample the position field.
    std::vector<double> u_of(g.nu), v_of(g.nv);
    for (int a = 0; a < g.nu; ++a) {
        const double q = out_grid.u(a);
        u_of[a] = std::clamp(inverse_monotone_interp(ubar, u_nodes, q), g.u_min,
                             g.u_max);
    }
    for (int b = 0; b < g.nv; ++b) {
        const double q = out_grid.v(b);
        v_of[b] = std::clamp(inverse_monotone_interp(vbar, v_nodes, q), g.v_min,
                             g.v_max);
    }

    SurfaceS3 out;
    out.grid = out_grid;
    out.l = VectorField4(out_grid);
    for (int c = 0; c < 4; ++c) {
        BicubicInterpolator interp(s.l.component(c));
        for (int a = 0; a < g.nu; ++a)
            for (int b = 0; b < g.nv; ++b)
                out.l.at(a, b)[c] = interp(u_of[a], v_of[b]);
    }
    for (auto& val : out.l.values) val /= val.norm();
    return out;
}

}  // namespace bonnet::geometry
