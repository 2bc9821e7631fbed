#include <doctest.h>

#include <cmath>

#include "bonnet/frame.hpp"
#include "bonnet/hypersurface.hpp"
#include "bonnet/sinh_poisson.hpp"
#include "oracles.hpp"

using namespace bonnet;
using namespace bonnet::hyper;

namespace {

VecX zero_w(int n) { return VecX::Zero(n - 2); }

// The two dominant eigenvalues by magnitude, as (larger, smaller) values.
std::pair<double, double> nonzero_pair(const ShapeSpectrum& s, double tau) {
    std::vector<double> vals(s.eigenvalues.data(),
                             s.eigenvalues.data() + s.eigenvalues.size());
    std::sort(vals.begin(), vals.end(),
              [](double a, double b) { return std::abs(a) > std::abs(b); });
    REQUIRE(std::abs(vals[1]) > tau);
    return {std::max(vals[0], vals[1]), std::min(vals[0], vals[1])};
}

}  // namespace

TEST_CASE("a hyperplane classifies as flat") {
    HyperMap m;
    m.n = 3;
    m.eval = [](double u, double v, const VecX& w) {
        VecX out(4);
        out << u, v, w[0], 1.0;
        return out;
    };
    ShapeSpectrum s = shape_spectrum(m, 0.2, -0.3, zero_w(3));
    CHECK(s.classification == Classification::flat);
    CHECK(s.eigenvalues.cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("catenoid cylinder: spectrum {sech^2 u, -sech^2 u, 0}") {
    Construction c = build_minimal_from_r3_surface(catenoid_chart(), 3);
    const double u = 0.3, v = 0.4;
    ShapeSpectrum s = shape_spectrum(c.map, u, v, zero_w(3));
    const double kappa = 1.0 / (std::cosh(u) * std::cosh(u));
    CHECK(s.classification == Classification::type_two);
    CHECK(s.eigenvalues[0] == doctest::Approx(-kappa).epsilon(1e-6));
    CHECK(std::abs(s.eigenvalues[1]) < 1e-8);
    CHECK(s.eigenvalues[2] == doctest::Approx(kappa).epsilon(1e-6));
    CHECK(std::abs(s.trace) < 1e-8);

    // Translating along the ruling leaves the product geometry unchanged.
    VecX w(1);
    w << 0.4;
    ShapeSpectrum s2 = shape_spectrum(c.map, u, v, w);
    CHECK(s2.eigenvalues[0] == doctest::Approx(s.eigenvalues[0]).epsilon(1e-8));
    CHECK(s2.eigenvalues[2] == doctest::Approx(s.eigenvalues[2]).epsilon(1e-8));
}

TEST_CASE("helicoid-based hypersurface in R^5 keeps two zero directions") {
    Construction c = build_minimal_from_r3_surface(helicoid_chart(), 4);
    const double u = 0.25, v = -0.2;
    ShapeSpectrum s = shape_spectrum(c.map, u, v, zero_w(4));
    const double kappa = 1.0 / (std::cosh(u) * std::cosh(u));
    CHECK(s.classification == Classification::type_two);
    CHECK(s.type_number == 2);
    auto [hi, lo] = nonzero_pair(s, 1e-5);
    CHECK(hi == doctest::Approx(kappa).epsilon(1e-5));
    CHECK(lo == doctest::Approx(-kappa).epsilon(1e-5));
    CHECK(std::abs(s.eigenvalues[1]) < 1e-8);
    CHECK(std::abs(s.eigenvalues[2]) < 1e-8);
}

TEST_CASE("plane product is flat and therefore outside type number two") {
    Construction c = build_minimal_from_r3_surface(plane_chart(), 3);
    ShapeSpectrum s = shape_spectrum(c.map, 0.1, 0.2, zero_w(3));
    CHECK(s.classification == Classification::flat);
    CHECK(s.type_number == 0);
}

TEST_CASE("non-minimal chart is rejected with its mean curvature") {
    R3Chart sphere;
    sphere.name = "round-sphere";
    sphere.domain = Grid2D(-0.5, 0.5, -0.5, 0.5, 17, 17);
    sphere.z = [](double u, double v) {
        return Eigen::Vector3d(std::cos(u) * std::cos(v),
                               std::cos(u) * std::sin(v), std::sin(u));
    };
    CHECK_THROWS_WITH_AS(build_minimal_from_r3_surface(sphere, 3),
                         doctest::Contains("not minimal"), DomainError);
}

TEST_CASE("sphere ruling with alpha = 0 is the cylinder over the sphere") {
    Construction c = build_biumbilical_from_sphere(2.0, 0.0, 3);
    ShapeSpectrum s = shape_spectrum(c.map, 0.3, -0.2, zero_w(3));
    CHECK(s.classification == Classification::bi_umbilical);
    auto [hi, lo] = nonzero_pair(s, 1e-5);
    CHECK(std::abs(hi - lo) < 1e-7);
    CHECK(std::abs(std::abs(hi) - 0.5) < 1e-6);  // 1/radius
}

TEST_CASE("rotated sphere ruling: |nu| = cos(alpha)/radius, and w moves it") {
    const double radius = 2.0, alpha = 0.5;
    Construction c = build_biumbilical_from_sphere(radius, alpha, 4);
    ShapeSpectrum s = shape_spectrum(c.map, 0.2, 0.3, zero_w(4));
    CHECK(s.classification == Classification::bi_umbilical);
    auto [hi, lo] = nonzero_pair(s, 1e-5);
    CHECK(std::abs(hi - lo) < 1e-7);
    CHECK(std::abs(std::abs(hi) - std::cos(alpha) / radius) < 1e-6);

    // Along the rotated ruling the curvature follows cos(a)/(r - w sin(a)).
    VecX w = zero_w(4);
    w[0] = 0.15;
    ShapeSpectrum sw = shape_spectrum(c.map, 0.2, 0.3, w);
    auto [hi2, lo2] = nonzero_pair(sw, 1e-5);
    const double expect = std::cos(alpha) / (radius - 0.15 * std::sin(alpha));
    CHECK(std::abs(std::abs(hi2) - expect) < 1e-6);
    CHECK(std::abs(hi2 - lo2) < 1e-7);
}

TEST_CASE("the w=0 leaf of the sphere ruling fits its generating sphere") {
    const double radius = 1.7, alpha = 0.4;
    Construction c = build_biumbilical_from_sphere(radius, alpha, 4);
    std::vector<VecX> pts;
    for (double u = -0.7; u <= 0.7; u += 0.1)
        for (double v = -0.7; v <= 0.7; v += 0.1)
            pts.push_back(c.base(u, v));
    SphereFit fit = fit_sphere(pts);
    CHECK(fit.rms_residual < 1e-10);
    CHECK(fit.radius == doctest::Approx(radius).epsilon(1e-8));

    // Measured curvature and measured ruling rate recombine to the radius.
    ShapeSpectrum s = shape_spectrum(c.map, 0.1, -0.3, zero_w(4));
    ConnectionScalars cs = connection_scalars(c.map, 0.1, -0.3, zero_w(4));
    auto [hi, lo] = nonzero_pair(s, 1e-5);
    const double nu = std::abs(hi);
    const double c2 = cs.lambda.squaredNorm();
    CHECK(1.0 / std::sqrt(c2 + nu * nu) == doctest::Approx(radius).epsilon(0.01));
    (void)lo;
}

TEST_CASE("product constructions have vanishing connection scalars") {
    Construction c = build_minimal_from_r3_surface(catenoid_chart(), 4);
    ConnectionScalars cs = connection_scalars(c.map, 0.35, 0.2, zero_w(4));
    CHECK(cs.lambda.cwiseAbs().maxCoeff() < 1e-5);
    CHECK(cs.mu.cwiseAbs().maxCoeff() < 1e-5);
    CHECK(cs.sigma.cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("bi-umbilical construction has lambda = mu") {
    Construction c = build_biumbilical_from_sphere(1.5, 0.6, 4);
    ConnectionScalars cs = connection_scalars(c.map, 0.2, 0.1, zero_w(4));
    for (int a = 0; a < cs.lambda.size(); ++a)
        CHECK(std::abs(cs.lambda[a] - cs.mu[a]) < 1e-5);
    CHECK(cs.sigma.cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("flat-torus cone: spectrum, radial lambda, involutivity") {
    Construction c = build_minimal_from_s3_surface(clifford_chart(), 3);
    ShapeSpectrum s = shape_spectrum(c.map, 0.3, 0.5, zero_w(3));
    CHECK(s.classification == Classification::type_two);
    CHECK(s.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(std::abs(s.eigenvalues[1]) < 1e-8);
    CHECK(s.eigenvalues[2] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(s.trace) < 1e-6);

    ConnectionScalars cs = connection_scalars(c.map, 0.3, 0.5, zero_w(3));
    CHECK(cs.sigma.cwiseAbs().maxCoeff() < 1e-5);
    // Radial ruling: lambda^2 sums to 1/radius^2 = 1.
    CHECK(cs.lambda.squaredNorm() == doctest::Approx(1.0).epsilon(1e-3));

    // Collapse point of the radial ruling.
    VecX w = zero_w(3);
    w[0] = -1.0;
    CHECK_THROWS_AS(shape_spectrum(c.map, 0.3, 0.5, w), RegularityError);
}

TEST_CASE("discrete surface source classifies type two at relaxed tolerance") {
    Grid2D g(-0.9, 0.9, -0.9, 0.9, 101, 101);
    geometry::SurfaceS3 s;
    s.grid = g;
    s.l = VectorField4::sample(g, oracles::clifford_l);
    S3Chart chart = chart_from_surface(s);
    Construction c = build_minimal_from_s3_surface(chart, 3, 1e-3);
    SpectrumOptions opts;
    opts.tau_spec = 1e-3;
    ShapeSpectrum sp = shape_spectrum(c.map, 0.1, 0.2, zero_w(3), opts);
    CHECK(sp.classification == Classification::type_two);
    CHECK(std::abs(sp.trace) < 1e-3);
}

TEST_CASE("envelope with constant support distance returns the sphere") {
    Grid2D g(-0.7, 0.7, -0.7, 0.7, 33, 33);
    HypersurfaceChart chart;
    chart.n = 3;
    chart.grid = g;
    chart.l.assign(g.size(), VecX::Zero(4));
    chart.basis.assign(1, std::vector<VecX>(g.size(), VecX::Zero(4)));
    chart.r = ScalarField(g, 1.0);
    for (int i = 0; i < g.nu; ++i)
        for (int j = 0; j < g.nv; ++j) {
            const double u = g.u(i), v = g.v(j);
            const double d = 1.0 + u * u + v * v;
            VecX l(4);
            l << 2 * u / d, 2 * v / d, (u * u + v * v - 1) / d, 0.0;
            chart.l[g.index(i, j)] = l;
            VecX b(4);
            b << 0, 0, 0, 1;
            chart.basis[0][g.index(i, j)] = b;
        }
    chart.compute_metric();

    VecX w0 = VecX::Zero(1);
    for (int i : {3, 16, 29})
        for (int j : {4, 16, 28}) {
            VecX X = envelope_point(chart, i, j, w0);
            CHECK((X - chart.l[g.index(i, j)]).norm() < 1e-12);
        }

    // Ruling coordinates move the point along the basis direction only.
    VecX w1 = VecX::Zero(1);
    w1[0] = 0.7;
    VecX X0 = envelope_point(chart, 16, 16, w0);
    VecX X1 = envelope_point(chart, 16, 16, w1);
    VecX diff = X1 - X0;
    CHECK(std::abs(diff[3] - 0.7) < 1e-14);
    CHECK(diff.head(3).norm() < 1e-14);
}

TEST_CASE("envelope with F = 0 matches the reduced formula") {
    // Conformal sphere chart (F vanishes identically) with a varying
    // support distance; the general envelope formula must agree with
    //   r l + (r_u/E) l_u + (r_v/G) l_v + w b.
    Grid2D g(-0.5, 0.5, -0.5, 0.5, 41, 41);
    HypersurfaceChart chart;
    chart.n = 3;
    chart.grid = g;
    chart.l.assign(g.size(), VecX::Zero(4));
    chart.basis.assign(1, std::vector<VecX>(g.size(), VecX::Zero(4)));
    chart.r = ScalarField::sample(g, [](double u, double v) {
        return 1.0 + 0.2 * u - 0.1 * v * v;
    });
    for (int i = 0; i < g.nu; ++i)
        for (int j = 0; j < g.nv; ++j) {
            const double u = g.u(i), v = g.v(j);
            const double d = 1.0 + u * u + v * v;
            VecX l(4);
            l << 2 * u / d, 2 * v / d, (u * u + v * v - 1) / d, 0.0;
            chart.l[g.index(i, j)] = l;
            chart.basis[0][g.index(i, j)] = Vec4(0, 0, 0, 1);
        }
    chart.compute_metric();
    // The chart is conformal, so the measured F is pure stencil error;
    // zero it exactly to probe the algebraic reduction of the formula.
    CHECK(window_max_abs(chart.F, interior_window(g)) < 1e-3);
    chart.F = ScalarField(g, 0.0);
    for (std::size_t k = 0; k < chart.W2.values.size(); ++k)
        chart.W2.values[k] = chart.E.values[k] * chart.G.values[k];

    VecX w(1);
    w[0] = 0.3;
    for (int i : {5, 20, 35})
        for (int j : {8, 20, 33}) {
            VecX general = envelope_point(chart, i, j, w);
            // Reduced formula, assembled independently with node stencils.
            const double h = g.hu();
            const double ru =
                (chart.r.at(i + 1, j) - chart.r.at(i - 1, j)) / (2 * h);
            const double rv =
                (chart.r.at(i, j + 1) - chart.r.at(i, j - 1)) / (2 * h);
            VecX lu = VecX::Zero(4), lv = VecX::Zero(4);
            for (int c = 0; c < 4; ++c) {
                lu[c] = (chart.l[g.index(i + 1, j)][c] -
                         chart.l[g.index(i - 1, j)][c]) / (2 * h);
                lv[c] = (chart.l[g.index(i, j + 1)][c] -
                         chart.l[g.index(i, j - 1)][c]) / (2 * h);
            }
            VecX reduced = chart.r.at(i, j) * chart.l_at(i, j) +
                           (ru / chart.E.at(i, j)) * lu +
                           (rv / chart.G.at(i, j)) * lv +
                           w[0] * chart.basis[0][g.index(i, j)];
            // F is not literally zero, so allow its tiny contribution.
            CHECK((general - reduced).norm() < 1e-9);
        }
}

TEST_CASE("reconstructed surface generates a type-two minimal hypersurface") {
    // Full pipeline source: solve, reconstruct, interpolate, rule.
    Grid2D g(0, 1, 0, 1, 65, 65);
    ScalarField boundary = ScalarField::sample(g, [](double u, double v) {
        return 0.1 * (std::sin(M_PI * u) + std::sin(M_PI * v));
    });
    auto sol = sinh_poisson::solve(boundary, ScalarField(g, 0.0));
    auto ncf = sinh_poisson::NormalCurvatureField::from_log(sol.f);
    auto recon = frame::reconstruct_surface(ncf, Mat4::Identity());

    S3Chart chart = chart_from_surface(recon.surface);
    Construction c = build_minimal_from_s3_surface(chart, 4, 1e-3);
    SpectrumOptions opts;
    opts.tau_spec = 1e-3;
    ShapeSpectrum sp = shape_spectrum(c.map, 0.5, 0.5, zero_w(4), opts);
    CHECK(sp.classification == Classification::type_two);
    CHECK(std::abs(sp.trace) < 1e-3);

    // The w = 0 leaf sits on the unit sphere of R^4: its fit confirms the
    // generating surface is spherical-minimal rather than flat-minimal.
    std::vector<VecX> pts;
    for (double u = 0.2; u <= 0.81; u += 0.1)
        for (double v = 0.2; v <= 0.81; v += 0.1)
            pts.push_back(c.base(u, v));
    SphereFit fit = fit_sphere(pts);
    CHECK(fit.radius == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(fit.center.norm() < 1e-4);
}

TEST_CASE("degenerate l-metric is rejected by the envelope") {
    Grid2D g(0, 1, 0, 1, 9, 9);
    HypersurfaceChart chart;
    chart.n = 3;
    chart.grid = g;
    VecX l(4);
    l << 1, 0, 0, 0;
    chart.l.assign(g.size(), l);  // constant normal: W^2 = 0
    chart.basis.assign(1, std::vector<VecX>(g.size(), VecX::Zero(4)));
    chart.r = ScalarField(g, 1.0);
    chart.compute_metric();
    CHECK_THROWS_AS(envelope_point(chart, 4, 4, VecX::Zero(1)), DomainError);
}

TEST_CASE("tangent hyperplane is constant along every generator") {
    Construction bi = build_biumbilical_from_sphere(1.5, 0.5, 4);
    Construction mini = build_minimal_from_s3_surface(clifford_chart(), 3);
    for (const Construction* c : {&bi, &mini}) {
        ShapeSpectrum s0 = shape_spectrum(c->map, 0.2, 0.3, zero_w(c->map.n));
        SpectrumOptions opts;
        opts.reference_normal = &s0.normal;
        for (double wv : {-0.2, 0.1, 0.3}) {
            VecX w = zero_w(c->map.n);
            w[0] = wv;
            ShapeSpectrum sw = shape_spectrum(c->map, 0.2, 0.3, w, opts);
            CHECK((sw.normal - s0.normal).norm() < 1e-6);
        }
    }
}

TEST_CASE("chart ruling basis is orthonormal and orthogonal to the normal") {
    Construction bi = build_biumbilical_from_sphere(1.5, 0.5, 5);
    Construction mini = build_minimal_from_s3_surface(clifford_chart(), 4);
    Grid2D g(-0.6, 0.6, -0.6, 0.6, 17, 17);
    for (const Construction* c : {&bi, &mini}) {
        HypersurfaceChart chart = extract_chart(*c, g);
        const int nb = static_cast<int>(chart.basis.size());
        double worst = 0.0;
        for (int i = 0; i < g.nu; ++i)
            for (int j = 0; j < g.nv; ++j) {
                const int k = g.index(i, j);
                for (int a = 0; a < nb; ++a) {
                    worst = std::max(worst,
                                     std::abs(chart.basis[a][k].norm() - 1.0));
                    worst = std::max(worst,
                                     std::abs(chart.basis[a][k].dot(chart.l[k])));
                    for (int b = a + 1; b < nb; ++b)
                        worst = std::max(worst, std::abs(chart.basis[a][k].dot(
                                                    chart.basis[b][k])));
                }
            }
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("bi-umbilical chart satisfies its four-equation system") {
    Construction c = build_biumbilical_from_sphere(1.5, 0.5, 4);
    Grid2D g(-0.8, 0.8, -0.8, 0.8, 65, 65);
    VecX shift(5);
    shift << 0.3, -0.2, 0.5, 0.1, -0.4;
    HypersurfaceChart chart = extract_chart(c, g, &shift);
    BiumbilicalResiduals res = biumbilical_system_residual(chart);
    const double h = g.hu();
    const NodeWindow w{2, g.nu - 3, 2, g.nv - 3};
    CHECK(res.conformality_defect < 1e-3);
    CHECK(window_max_abs(res.vec_wave, w) < 20 * h * h);
    CHECK(window_max_abs(res.vec_mixed, w) < 20 * h * h);
    CHECK(window_max_abs(res.scalar_wave, w) < 20 * h * h);
    CHECK(window_max_abs(res.scalar_mixed, w) < 20 * h * h);
}

TEST_CASE("random chart data fails the bi-umbilical system loudly") {
    Grid2D g(-0.8, 0.8, -0.8, 0.8, 49, 49);
    HypersurfaceChart chart;
    chart.n = 3;
    chart.grid = g;
    chart.l.assign(g.size(), VecX::Zero(4));
    chart.basis.assign(1, std::vector<VecX>(g.size(), VecX::Zero(4)));
    chart.r = ScalarField::sample(g, [](double u, double v) {
        return 0.5 + 0.3 * std::sin(2 * u) * std::cos(v);
    });
    for (int i = 0; i < g.nu; ++i)
        for (int j = 0; j < g.nv; ++j) {
            const double u = g.u(i), v = g.v(j);
            VecX l(4);
            l << std::sin(u + 0.3 * v), std::cos(u - v), std::sin(0.7 * v + 1),
                std::cos(2 * u);
            chart.l[g.index(i, j)] = l / l.norm();
        }
    chart.compute_metric();
    SystemResidualOptions opts;
    opts.enforce_conformality = false;
    BiumbilicalResiduals res = biumbilical_system_residual(chart, opts);
    const NodeWindow w = interior_window(g);
    CHECK(window_max_abs(res.vec_wave, w) > 0.1);
    // The gauge actually is violated; enforcement reports it.
    CHECK_THROWS_AS(biumbilical_system_residual(chart), ConformalityError);
}

TEST_CASE("constant support distance satisfies the scalar equations exactly") {
    Construction c = build_biumbilical_from_sphere(1.2, 0.3, 3);
    Grid2D g(-0.6, 0.6, -0.6, 0.6, 33, 33);
    HypersurfaceChart chart = extract_chart(c, g);  // r = const here
    BiumbilicalResiduals res = biumbilical_system_residual(chart);
    const NodeWindow w = interior_window(g);
    CHECK(window_max_abs(res.scalar_wave, w) < 1e-12);
    CHECK(window_max_abs(res.scalar_mixed, w) < 1e-12);

    chart.r = ScalarField(g, 0.0);  // literal zero support distance
    BiumbilicalResiduals res0 = biumbilical_system_residual(chart);
    CHECK(window_max_abs(res0.scalar_wave, w) == 0.0);
    CHECK(window_max_abs(res0.scalar_mixed, w) == 0.0);
}

TEST_CASE("minimal charts satisfy the minimal system at stencil order") {
    Grid2D g(-0.8, 0.8, -0.8, 0.8, 65, 65);
    const double h = g.hu();
    const NodeWindow w{2, g.nu - 3, 2, g.nv - 3};

    VecX shift4(4);
    shift4 << 0.2, -0.1, 0.3, 0.4;
    Construction cs3 = build_minimal_from_s3_surface(clifford_chart(), 3);
    HypersurfaceChart chart3 = extract_chart(cs3, g, &shift4);
    MinimalResiduals r3 = minimal_system_residual(chart3);
    CHECK(r3.conformality_defect < 1e-3);
    CHECK(window_max_abs(r3.vec_field, w) < 20 * h * h);
    CHECK(window_max_abs(r3.scalar, w) < 20 * h * h);

    // With literal zero support distance the second equation is exact.
    HypersurfaceChart chart0 = extract_chart(cs3, g);
    chart0.r = ScalarField(g, 0.0);
    MinimalResiduals rz = minimal_system_residual(chart0);
    CHECK(window_max_abs(rz.scalar, w) == 0.0);

    // The catenoid normal field is conformal to the sphere as well.
    VecX shift5(5);
    shift5 << 0.1, 0.2, -0.3, 0.0, 0.25;
    Construction cr3 = build_minimal_from_r3_surface(catenoid_chart(), 4);
    HypersurfaceChart chart4 = extract_chart(cr3, g, &shift5);
    MinimalResiduals r4 = minimal_system_residual(chart4);
    CHECK(r4.conformality_defect < 1e-3);
    CHECK(window_max_abs(r4.vec_field, w) < 20 * h * h);
    CHECK(window_max_abs(r4.scalar, w) < 20 * h * h);
}

TEST_CASE("round-sphere chart with constant E violates the minimal system") {
    // Hand computation: l = (cos u cos v, cos u sin v, sin u, 0) with E = 1
    // leaves l_uu + l_vv + 2E l = (0, 0, sin u, 0).
    Grid2D g(-0.6, 0.6, 0.2, 1.0, 65, 65);
    HypersurfaceChart chart;
    chart.n = 3;
    chart.grid = g;
    chart.l.assign(g.size(), VecX::Zero(4));
    chart.basis.assign(1, std::vector<VecX>(g.size(), VecX::Zero(4)));
    chart.r = ScalarField(g, 0.0);
    for (int i = 0; i < g.nu; ++i)
        for (int j = 0; j < g.nv; ++j) {
            const double u = g.u(i), v = g.v(j);
            VecX l(4);
            l << std::cos(u) * std::cos(v), std::cos(u) * std::sin(v),
                std::sin(u), 0.0;
            chart.l[g.index(i, j)] = l;
        }
    chart.compute_metric();
    SystemResidualOptions opts;
    opts.enforce_conformality = false;
    MinimalResiduals res = minimal_system_residual(chart, opts);
    const NodeWindow w = interior_window(g);
    double worst = 0.0;
    for (int i = w.i0; i <= w.i1; ++i)
        for (int j = w.j0; j <= w.j1; ++j)
            worst = std::max(worst, std::abs(res.vec_field.at(i, j) -
                                             std::abs(std::sin(g.u(i)))));
    CHECK(worst < 5e-3);
}

TEST_CASE("sphere fit recovers a known sphere in R^5") {
    std::vector<VecX> pts;
    VecX center(5);
    center << 0.3, -0.7, 0.2, 1.1, -0.4;
    const double R = 2.3;
    std::mt19937 rng(99);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int k = 0; k < 200; ++k) {
        VecX dir(5);
        for (int c = 0; c < 5; ++c) dir[c] = gauss(rng);
        pts.push_back(center + R * dir / dir.norm());
    }
    SphereFit fit = fit_sphere(pts);
    CHECK((fit.center - center).norm() < 1e-10);
    CHECK(fit.radius == doctest::Approx(R).epsilon(1e-10));
    CHECK(fit.rms_residual < 1e-10);
}
