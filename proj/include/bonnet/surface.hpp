#pragma once

#include <optional>

#include "bonnet/grid.hpp"

namespace bonnet::geometry {

// Discrete surface on the unit 3-sphere: position field l with |l| = 1
// per node, optional unit normal N (tangent to the sphere, orthogonal to
// the surface). When N is absent the measurement routines rebuild it by
// orthogonal completion.
struct SurfaceS3 {
    Grid2D grid;
    VectorField4 l;
    std::optional<VectorField4> N;
};

// First/second fundamental form coefficients and the four invariants of
// a principal-parameter surface, plus mean and Gauss curvature.
struct SurfaceInvariants {
    Grid2D grid;
    ScalarField E, F, G;
    ScalarField e, f, g;
    ScalarField nu1, nu2;
    ScalarField gamma1, gamma2;
    ScalarField mean_curvature, gauss_curvature;
    // Set when the ordering pass re-oriented the normal so that
    // nu1 - nu2 > 0 on the evaluation window.
    bool normal_flipped = false;
};

}  // namespace bonnet::geometry
