#include <doctest.h>

#include <cmath>

#include "bonnet/surface_geometry.hpp"
#include "oracles.hpp"

using namespace bonnet;
using namespace bonnet::geometry;

namespace {

SurfaceS3 clifford_surface(const Grid2D& g, bool with_normal) {
    SurfaceS3 s;
    s.grid = g;
    s.l = VectorField4::sample(g, oracles::clifford_l);
    if (with_normal) s.N = VectorField4::sample(g, oracles::clifford_N);
    return s;
}

}  // namespace

TEST_CASE("flat-torus chart: fundamental forms against the hand values") {
    Grid2D g(0, 1.5, 0, 1.5, 101, 101);
    SurfaceS3 s = clifford_surface(g, true);
    SurfaceInvariants inv = fundamental_forms(s);
    const NodeWindow w = interior_window(g);
    double wE = 0, wF = 0, wG = 0, we = 0, wf = 0, wg = 0;
    for (int i = w.i0; i <= w.i1; ++i)
        for (int j = w.j0; j <= w.j1; ++j) {
            wE = std::max(wE, std::abs(inv.E.at(i, j) - 0.5));
            wF = std::max(wF, std::abs(inv.F.at(i, j)));
            wG = std::max(wG, std::abs(inv.G.at(i, j) - 0.5));
            we = std::max(we, std::abs(inv.e.at(i, j) + 0.5));
            wf = std::max(wf, std::abs(inv.f.at(i, j)));
            wg = std::max(wg, std::abs(inv.g.at(i, j) - 0.5));
        }
    CHECK(wE < 1e-3);
    CHECK(wF < 1e-6);
    CHECK(wG < 1e-3);
    CHECK(we < 1e-3);
    CHECK(wf < 1e-6);
    CHECK(wg < 1e-3);
}

TEST_CASE("flat-torus chart: invariants nu1=-1, nu2=+1, K=0, H=0") {
    Grid2D g(0, 1.5, 0, 1.5, 101, 101);
    SurfaceInvariants inv = invariants(clifford_surface(g, true));
    const NodeWindow w = interior_window(g);
    double w1 = 0, w2 = 0, wK = 0, wH = 0, wg1 = 0, wg2 = 0;
    for (int i = w.i0; i <= w.i1; ++i)
        for (int j = w.j0; j <= w.j1; ++j) {
            w1 = std::max(w1, std::abs(inv.nu1.at(i, j) + 1.0));
            w2 = std::max(w2, std::abs(inv.nu2.at(i, j) - 1.0));
            wK = std::max(wK, std::abs(inv.gauss_curvature.at(i, j)));
            wH = std::max(wH, std::abs(inv.mean_curvature.at(i, j)));
            wg1 = std::max(wg1, std::abs(inv.gamma1.at(i, j)));
            wg2 = std::max(wg2, std::abs(inv.gamma2.at(i, j)));
        }
    CHECK(w1 < 5e-3);
    CHECK(w2 < 5e-3);
    CHECK(wK < 5e-3);
    CHECK(wH < 5e-3);
    CHECK(wg1 < 5e-3);
    CHECK(wg2 < 5e-3);
    CHECK(!inv.normal_flipped);
}

TEST_CASE("orientation pass flips the ordering when requested") {
    Grid2D g(0, 1.5, 0, 1.5, 65, 65);
    InvariantOptions opts;
    opts.orient_for_ordering = true;
    SurfaceInvariants inv = invariants(clifford_surface(g, true), opts);
    CHECK(inv.normal_flipped);
    CHECK(inv.nu1.at(32, 32) == doctest::Approx(1.0).epsilon(1e-2));
    CHECK(inv.nu2.at(32, 32) == doctest::Approx(-1.0).epsilon(1e-2));
}

TEST_CASE("recomputed normal follows the right-handed completion") {
    Grid2D g(0, 1.5, 0, 1.5, 65, 65);
    SurfaceInvariants inv = invariants(clifford_surface(g, false));
    // With the orientation-fixed completion the normal is the negative of
    // the chart normal used above, so the curvature signs swap.
    CHECK(inv.nu1.at(32, 32) == doctest::Approx(1.0).epsilon(1e-2));
    CHECK(inv.nu2.at(32, 32) == doctest::Approx(-1.0).epsilon(1e-2));
}

TEST_CASE("great sphere is totally geodesic: e = f = g = 0") {
    Grid2D g(-0.6, 0.6, 0.0, 1.2, 65, 65);
    SurfaceS3 s;
    s.grid = g;
    s.l = VectorField4::sample(g, oracles::great_sphere_l);
    s.N = VectorField4::sample(g, [](double, double) {
        return Vec4(0, 0, 0, 1);
    });
    SurfaceInvariants inv = fundamental_forms(s);
    CHECK(window_max_abs(inv.e, full_window(g)) < 1e-12);
    CHECK(window_max_abs(inv.f, full_window(g)) < 1e-12);
    CHECK(window_max_abs(inv.g, full_window(g)) < 1e-12);
}

TEST_CASE("great sphere satisfies the curvature identity via gamma2 = -tan u") {
    Grid2D g(-0.6, 0.6, 0.0, 1.2, 129, 129);
    SurfaceS3 s;
    s.grid = g;
    s.l = VectorField4::sample(g, oracles::great_sphere_l);
    s.N = VectorField4::sample(g, [](double, double) {
        return Vec4(0, 0, 0, 1);
    });
    SurfaceInvariants inv = invariants(s);
    // Keep clear of the one-sided boundary closures, which compound when
    // differentiating gamma a second time.
    const NodeWindow w{3, g.nu - 4, 3, g.nv - 4};
    double worst_g2 = 0.0;
    for (int i = w.i0; i <= w.i1; ++i)
        for (int j = w.j0; j <= w.j1; ++j)
            worst_g2 = std::max(
                worst_g2, std::abs(inv.gamma2.at(i, j) + std::tan(g.u(i))));
    CHECK(worst_g2 < 2e-3);
    CHECK(window_max_abs(gauss_residual(inv), w) < 2e-3);
}

TEST_CASE("codazzi residual on the flat torus is free of 0/0") {
    Grid2D g(0, 1.5, 0, 1.5, 65, 65);
    SurfaceInvariants inv = invariants(clifford_surface(g, true));
    NodeWindow w{10, 50, 10, 50};
    auto [r1, r2] = codazzi_residual(inv, w);
    CHECK(window_max_abs(r1, w) < 5e-3);
    CHECK(window_max_abs(r2, w) < 5e-3);
}

TEST_CASE("codazzi residual rejects umbilic windows") {
    Grid2D g(-0.6, 0.6, 0.0, 1.2, 33, 33);
    SurfaceS3 s;
    s.grid = g;
    s.l = VectorField4::sample(g, oracles::great_sphere_l);
    s.N = VectorField4::sample(g, [](double, double) {
        return Vec4(0, 0, 0, 1);
    });
    SurfaceInvariants inv = invariants(s);  // nu1 = nu2 = 0 everywhere
    CHECK_THROWS_AS(codazzi_residual(inv, NodeWindow{5, 20, 5, 20}), DomainError);
}

TEST_CASE("invariants are equivariant under rigid rotations") {
    Grid2D g(0, 1.5, 0, 1.5, 49, 49);
    SurfaceS3 s = clifford_surface(g, true);
    Mat4 Q = oracles::random_so4(23);
    SurfaceS3 rotated;
    rotated.grid = g;
    rotated.l = VectorField4(g);
    VectorField4 Nrot(g);
    for (std::size_t k = 0; k < s.l.values.size(); ++k) {
        rotated.l.values[k] = Q * s.l.values[k];
        Nrot.values[k] = Q * s.N->values[k];
    }
    rotated.N = std::move(Nrot);

    SurfaceInvariants a = invariants(s);
    SurfaceInvariants b = invariants(rotated);
    double worst = 0.0;
    for (std::size_t k = 0; k < a.E.values.size(); ++k) {
        worst = std::max(worst, std::abs(a.E.values[k] - b.E.values[k]));
        worst = std::max(worst, std::abs(a.e.values[k] - b.e.values[k]));
        worst = std::max(worst, std::abs(a.nu1.values[k] - b.nu1.values[k]));
        worst = std::max(worst, std::abs(a.gamma1.values[k] - b.gamma1.values[k]));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("perturbed normal breaks the structure equations loudly") {
    Grid2D g(0, 1.5, 0, 1.5, 65, 65);
    SurfaceS3 s = clifford_surface(g, true);
    SurfaceInvariants clean = invariants(s);
    NodeWindow w{10, 50, 10, 50};
    auto [c1, c2] = codazzi_residual(clean, w);
    const double clean_gauss = window_max_abs(gauss_residual(clean), w);
    const double clean_codazzi =
        std::max(window_max_abs(c1, w), window_max_abs(c2, w));

    // Tilt the normal toward the tangent X-direction by a smooth angle.
    SurfaceS3 broken = s;
    for (int i = 0; i < g.nu; ++i)
        for (int j = 0; j < g.nv; ++j) {
            const double ang =
                0.4 * std::sin(2.0 * g.u(i) + 1.0) * std::cos(g.v(j));
            const Vec4 X(-std::sin(g.u(i)), std::cos(g.u(i)), 0.0, 0.0);
            Vec4 tilted = std::cos(ang) * s.N->at(i, j) + std::sin(ang) * X;
            broken.N->at(i, j) = tilted;
        }
    SurfaceInvariants dirty = fundamental_forms(broken);
    dirty.nu1 = ScalarField(g);
    dirty.nu2 = ScalarField(g);
    for (std::size_t k = 0; k < dirty.E.values.size(); ++k) {
        dirty.nu1.values[k] = dirty.e.values[k] / dirty.E.values[k];
        dirty.nu2.values[k] = dirty.g.values[k] / dirty.G.values[k];
    }
    // gamma fields are metric-only; keep the clean ones so only the
    // normal perturbation matters.
    dirty.gamma1 = clean.gamma1;
    dirty.gamma2 = clean.gamma2;
    dirty.grid = g;
    auto [d1, d2] = codazzi_residual(dirty, w);
    const double dirty_codazzi =
        std::max(window_max_abs(d1, w), window_max_abs(d2, w));
    const double dirty_gauss = window_max_abs(gauss_residual(dirty), w);
    CHECK(dirty_codazzi > 100.0 * std::max(clean_codazzi, 1e-6));
    CHECK(dirty_gauss > 100.0 * std::max(clean_gauss, 1e-6));
}

TEST_CASE("intrinsic curvature agrees with 1 + nu1 nu2") {
    Grid2D g(-0.6, 0.6, 0.0, 1.2, 101, 101);
    SurfaceS3 s;
    s.grid = g;
    s.l = VectorField4::sample(g, oracles::great_sphere_l);
    s.N = VectorField4::sample(g, [](double, double) {
        return Vec4(0, 0, 0, 1);
    });
    SurfaceInvariants inv = invariants(s);
    ScalarField Kint = gauss_curvature_intrinsic(inv);
    NodeWindow w{10, 90, 10, 90};
    double worst = 0.0;
    for (int i = w.i0; i <= w.i1; ++i)
        for (int j = w.j0; j <= w.j1; ++j)
            worst = std::max(worst, std::abs(Kint.at(i, j) -
                                             inv.gauss_curvature.at(i, j)));
    CHECK(worst < 5e-3);
}

TEST_CASE("parameter rescaling scales E fourfold but leaves nu1 unchanged") {
    Grid2D g(0, 1.5, 0, 1.5, 65, 65);
    SurfaceInvariants base = invariants(clifford_surface(g, true));

    Grid2D half(0, 0.75, 0, 1.5, 65, 65);
    SurfaceS3 stretched;
    stretched.grid = half;
    stretched.l = VectorField4::sample(half, [](double u, double v) {
        return oracles::clifford_l(2.0 * u, v);
    });
    stretched.N = VectorField4::sample(half, [](double u, double v) {
        return oracles::clifford_N(2.0 * u, v);
    });
    SurfaceInvariants scaled = invariants(stretched);
    CHECK(scaled.E.at(32, 32) ==
          doctest::Approx(4.0 * base.E.at(32, 32)).epsilon(1e-2));
    CHECK(scaled.nu1.at(32, 32) ==
          doctest::Approx(base.nu1.at(32, 32)).epsilon(1e-2));
}

TEST_CASE("geodesic curvatures are invariant under affine reparameterization") {
    // gamma2 = -tan(u) for the great-sphere chart; sampling l(2u, v) must
    // reproduce -tan(2u) at the compressed parameters.
    Grid2D g(-0.3, 0.3, 0.0, 1.2, 129, 129);
    SurfaceS3 s;
    s.grid = g;
    s.l = VectorField4::sample(g, [](double u, double v) {
        return oracles::great_sphere_l(2.0 * u, v);
    });
    s.N = VectorField4::sample(g, [](double, double) {
        return Vec4(0, 0, 0, 1);
    });
    SurfaceInvariants inv = invariants(s);
    const NodeWindow w{3, g.nu - 4, 3, g.nv - 4};
    double worst = 0.0;
    for (int i = w.i0; i <= w.i1; ++i)
        for (int j = w.j0; j <= w.j1; ++j)
            worst = std::max(worst, std::abs(inv.gamma2.at(i, j) +
                                             std::tan(2.0 * g.u(i))));
    CHECK(worst < 5e-3);
}

TEST_CASE("already-canonical chart reparameterizes to itself") {
    Grid2D g(0, 0.4, 0, 0.4, 161, 161);
    SurfaceS3 s;
    s.grid = g;
    s.l = VectorField4::sample(g, oracles::clifford_canonical_l);
    SurfaceInvariants inv = invariants(s);
    SurfaceS3 out = canonical_reparameterize(s, inv, 0, 0);
    CHECK(std::abs(out.grid.u_max - out.grid.u_min - 0.4) < 1e-3);
    double worst = 0.0;
    for (int i = 0; i < g.nu; ++i)
        for (int j = 0; j < g.nv; ++j)
            worst = std::max(
                worst,
                (out.l.at(i, j) -
                 oracles::clifford_canonical_l(out.grid.u(i), out.grid.v(j)))
                    .norm());
    CHECK(worst < 1e-6);
}

TEST_CASE("pre-stretched canonical chart is recovered up to an offset") {
    // Same surface sampled as l(2u, v): the canonical map must undo the
    // factor two in u.
    Grid2D g(0, 0.45, 0, 0.9, 81, 81);
    SurfaceS3 s;
    s.grid = g;
    s.l = VectorField4::sample(g, [](double u, double v) {
        return oracles::clifford_canonical_l(2.0 * u, v);
    });
    SurfaceInvariants inv = invariants(s);
    SurfaceS3 out = canonical_reparameterize(s, inv, 0, 0);
    CHECK(std::abs(out.grid.u_max - out.grid.u_min - 0.9) < 5e-3);
    double worst = 0.0;
    for (int i = 0; i < out.grid.nu; ++i)
        for (int j = 0; j < out.grid.nv; ++j)
            worst = std::max(
                worst,
                (out.l.at(i, j) -
                 oracles::clifford_canonical_l(out.grid.u(i), out.grid.v(j)))
                    .norm());
    CHECK(worst < 1e-4);
}

TEST_CASE("reparameterization rejects non-minimal input") {
    // Small sphere in the 3-sphere: umbilic with nonzero mean curvature.
    Grid2D g(-0.5, 0.5, 0.0, 1.0, 49, 49);
    const double a = 0.8, b = 0.6;
    SurfaceS3 s;
    s.grid = g;
    s.l = VectorField4::sample(g, [&](double u, double v) {
        return Vec4(a * std::cos(u) * std::cos(v), a * std::cos(u) * std::sin(v),
                    a * std::sin(u), b);
    });
    SurfaceInvariants inv = invariants(s);
    CHECK_THROWS_WITH_AS(canonical_reparameterize(s, inv, 24, 24),
                         doctest::Contains("not minimal"), DomainError);
}
