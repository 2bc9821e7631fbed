#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "bonnet/grid.hpp"
#include "bonnet/surface.hpp"

// Type-number-two hypersurfaces in R^{n+1}: ruled constructions over
// spheres and minimal surfaces, envelope charts (hyperplane normal l and
// support distance r), pointwise shape-operator spectra, connection
// scalars, and the residuals of the characterizing PDE systems.
namespace bonnet::hyper {

using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

// Parametric hypersurface map (u, v, w^1..w^{n-2}) -> R^{n+1}.
struct HyperMap {
    int n = 3;
    std::function<VecX(double, double, const VecX&)> eval;
};

enum class Classification { flat, type_one, type_two, bi_umbilical, other };
const char* to_string(Classification c);

struct SpectrumOptions {
    double fd_step = 1e-2;   // 4th-order stencils keep truncation ~1e-9
    double tau_spec = 1e-5;  // |eigenvalue| threshold for "nonzero"
    double rank_tol = 1e-6;  // sigma_min/sigma_max regularity floor
    const VecX* reference_normal = nullptr;  // align the normal sign
};

struct ShapeSpectrum {
    VecX eigenvalues;  // ascending, n entries
    MatX directions;   // ambient unit tangent directions (columns)
    VecX normal;       // ambient unit normal
    double trace = 0.0;
    int type_number = 0;
    Classification classification = Classification::flat;
};

// Metric, second form and generalized eigenproblem by 4th-order finite
// differences of the map. Throws RegularityError when the Jacobian is
// rank-deficient at the point.
ShapeSpectrum shape_spectrum(const HyperMap& m, double u, double v,
                             const VecX& w, const SpectrumOptions& opts = {});

struct ConnectionScalars {
    double gamma1 = 0.0, gamma2 = 0.0;
    VecX lambda;  // e_i(nu1)/nu1
    VecX mu;      // e_i(nu2)/nu2
    VecX sigma;   // g(D_{e_i} X, Y)
};

// Directional derivatives of the eigen-data along the null directions.
// Eigen-directions at displaced points are gauge-aligned to the base
// point, which keeps the finite differences stable also for the
// bi-umbilical (equal-pair) case.
ConnectionScalars connection_scalars(const HyperMap& m, double u, double v,
                                     const VecX& w,
                                     const SpectrumOptions& opts = {},
                                     double eps = 1e-3);

// A ruled construction together with its generating data.
struct Construction {
    HyperMap map;
    std::function<VecX(double, double)> base;    // z(u,v): the w = 0 surface
    std::function<VecX(double, double)> normal;  // predicted unit normal
    std::function<VecX(double, double, int)> basis;  // b_alpha(u,v)
    Grid2D domain;  // recommended parameter window
    std::string kind;
};

// Sphere of the given radius in a fixed R^3, ruled by the alpha-rotated
// frame; bi-umbilical with |nu| = cos(alpha)/radius at w = 0.
Construction build_biumbilical_from_sphere(double radius, double alpha, int n);

// Minimal chart in a fixed R^3 subset of R^{n+1}, ruled by the constant
// orthogonal complement. Throws DomainError when the chart is not
// minimal (measured mean curvature reported).
struct R3Chart {
    std::function<Eigen::Vector3d(double, double)> z;
    Grid2D domain;
    std::string name;
};
R3Chart catenoid_chart();
R3Chart helicoid_chart();
R3Chart plane_chart();
Construction build_minimal_from_r3_surface(const R3Chart& chart, int n,
                                           double minimal_tol = 1e-8);

// Minimal chart on a 3-sphere of radius r inside a fixed R^4 subset of
// R^{n+1}. The ruling planes are spanned by the radial direction z/r and
// the constant complement of R^4.
struct S3Chart {
    std::function<Eigen::Vector4d(double, double)> z;
    double radius = 1.0;
    Grid2D domain;
    std::string name;
};
S3Chart clifford_chart();
// Bicubic interpolation of a discrete surface; accuracy is limited by
// the source grid spacing.
S3Chart chart_from_surface(const geometry::SurfaceS3& s);
Construction build_minimal_from_s3_surface(const S3Chart& chart, int n,
                                           double minimal_tol = 1e-6);

// Envelope chart: hyperplane normal field l, support distance r, ruling
// basis, and the l-metric.
struct HypersurfaceChart {
    int n = 3;
    Grid2D grid;
    std::vector<VecX> l;                    // per node, size n+1
    ScalarField r;
    std::vector<std::vector<VecX>> basis;   // [alpha][node]
    ScalarField E, F, G, W2;

    VecX& l_at(int i, int j) { return l[grid.index(i, j)]; }
    const VecX& l_at(int i, int j) const { return l[grid.index(i, j)]; }
    void compute_metric();
};

// Sample chart data (normal, support distance, ruling basis) from a
// construction; `translation` shifts the hypersurface so the support
// distance becomes nontrivial.
HypersurfaceChart extract_chart(const Construction& c, const Grid2D& grid,
                                const VecX* translation = nullptr);

// Envelope evaluation at node (i,j) with ruling coordinates w:
//   X = r l + ((G r_u - F r_v)/W^2) l_u + ((E r_v - F r_u)/W^2) l_v
//       + sum_a w^a b_a.
// Throws DomainError when W^2 degenerates at the node.
VecX envelope_point(const HypersurfaceChart& chart, int i, int j, const VecX& w,
                    double w2_tol = 1e-12);

struct SystemResidualOptions {
    double conformality_tol = 1e-3;  // relative defect allowed
    bool enforce_conformality = true;
};

// Residual norms of the four-equation system characterizing bi-umbilical
// charts. Throws ConformalityError (carrying the measured defect) when
// l_u^2 = l_v^2, l_u.l_v = 0 fails and enforcement is on.
struct BiumbilicalResiduals {
    ScalarField vec_wave;     // |l_uu - l_vv - (E_u/E) l_u + (E_v/E) l_v|
    ScalarField vec_mixed;    // |2 l_uv - (E_v/E) l_u - (E_u/E) l_v|
    ScalarField scalar_wave;  // same two equations for r
    ScalarField scalar_mixed;
    double conformality_defect = 0.0;
};
BiumbilicalResiduals biumbilical_system_residual(
    const HypersurfaceChart& chart, const SystemResidualOptions& opts = {});

// Residual norms of the minimality system
//   l_uu + l_vv + 2E l = 0,   r_uu + r_vv + 2E r = 0.
struct MinimalResiduals {
    ScalarField vec_field;   // |l_uu + l_vv + 2E l|
    ScalarField scalar;      // |r_uu + r_vv + 2E r|
    double conformality_defect = 0.0;
};
MinimalResiduals minimal_system_residual(const HypersurfaceChart& chart,
                                         const SystemResidualOptions& opts = {});

// Algebraic least-squares sphere fit.
struct SphereFit {
    VecX center;
    double radius = 0.0;
    double rms_residual = 0.0;
};
SphereFit fit_sphere(const std::vector<VecX>& points);

}  // namespace bonnet::hyper
