#pragma once

#include <optional>
#include <utility>

#include "bonnet/grid.hpp"
#include "bonnet/surface.hpp"

// Measurement side of the pipeline: fundamental forms and invariants of
// a discrete surface in the 3-sphere, the Codazzi/Gauss residuals that
// certify it, and canonical-parameter reparameterization.
namespace bonnet::geometry {

struct InvariantOptions {
    double principal_net_tol = 1e-4;
    // When set, flip the normal (negating e, f, g and both curvatures)
    // if nu1 - nu2 < 0 in the mean over the window, so the ordering
    // nu1 - nu2 > 0 holds. The flip is recorded in the result.
    bool orient_for_ordering = false;
    std::optional<NodeWindow> window;  // evaluation window; default interior
};

// E = l_u.l_u, F = l_u.l_v, G = l_v.l_v; e = l_uu.N, f = l_uv.N,
// g = l_vv.N. A supplied normal is used as-is; otherwise N is the unit
// orthogonal completion of {l, l_u, l_v} signed so det(X,Y,N,l) = +1.
SurfaceInvariants fundamental_forms(const SurfaceS3& s);

// Fills nu1 = e/E, nu2 = g/G, gamma1 = -E_v/(2E sqrt(G)),
// gamma2 = G_u/(2G sqrt(E)), mean and Gauss curvature. Throws
// DomainError when the principal-net tolerance is violated.
SurfaceInvariants invariants(const SurfaceS3& s, const InvariantOptions& opts = {});

// Residuals gamma1 - (nu1)_v/(sqrt(G)(nu1-nu2)) and
// gamma2 - (nu2)_u/(sqrt(E)(nu1-nu2)) on interior nodes. Throws when an
// umbilic node (|nu1-nu2| < umbilic_tol) lies inside the window.
std::pair<ScalarField, ScalarField> codazzi_residual(
    const SurfaceInvariants& inv, const NodeWindow& window,
    double umbilic_tol = 1e-8);

// (gamma1)_v/sqrt(G) - (gamma2)_u/sqrt(E) - (gamma1^2+gamma2^2)
//   - (1 + nu1 nu2), interior nodes.
ScalarField gauss_residual(const SurfaceInvariants& inv);

// Intrinsic Gauss curvature from the metric alone (orthogonal-net
// Liouville form); cross-checks gauss_curvature = 1 + nu1 nu2.
ScalarField gauss_curvature_intrinsic(const SurfaceInvariants& inv);

struct ReparameterizeOptions {
    double minimal_tol = 1e-3;       // max |nu1 + nu2| allowed
    double separability_tol = 1e-2;  // relative v-variation of sqrt(nu E)
};

// Resample the surface onto canonical principal parameters: new
// coordinates are the cumulative integrals of sqrt(nu E) du and
// sqrt(nu G) dv from the origin node; output satisfies E = G = 1/nu up
// to discretization error.
SurfaceS3 canonical_reparameterize(const SurfaceS3& s,
                                   const SurfaceInvariants& inv, int origin_i,
                                   int origin_j,
                                   const ReparameterizeOptions& opts = {});

}  // namespace bonnet::geometry
