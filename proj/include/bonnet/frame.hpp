#pragma once

#include <optional>
#include <vector>

#include "bonnet/grid.hpp"
#include "bonnet/sinh_poisson.hpp"
#include "bonnet/surface.hpp"

// Moving-frame transport: assemble the skew-symmetric connection
// matrices of the frame system, check its integrability, and integrate
// the frame over the grid to recover the surface position field.
//
// The frame is stored as a 4x4 matrix with rows (X, Y, N, l); both
// coordinate directions evolve it linearly,
//     d/du F = A F,     d/dv F = B F,
// and integrability is the zero-curvature condition
//     B_u - A_v = [A, B].
namespace bonnet::frame {

// The four invariant fields of a strongly regular surface.
struct InvariantData {
    ScalarField nu1, nu2, gamma1, gamma2;
};

struct CoefficientMatrices {
    Grid2D grid;
    std::vector<Mat4> A, B;

    Mat4& A_at(int i, int j) { return A[grid.index(i, j)]; }
    const Mat4& A_at(int i, int j) const { return A[grid.index(i, j)]; }
    Mat4& B_at(int i, int j) { return B[grid.index(i, j)]; }
    const Mat4& B_at(int i, int j) const { return B[grid.index(i, j)]; }
};

// Canonical-parameter specialization: nu1 = nu, nu2 = -nu,
// gamma1 = (sqrt nu)_v, gamma2 = -(sqrt nu)_u, sqrt(E) = sqrt(G) =
// 1/sqrt(nu). Constant nu is accepted (gamma = 0); such data is not
// strongly regular but integrates to the standard torus test fixture.
CoefficientMatrices build_matrices_canonical(
    const sinh_poisson::NormalCurvatureField& nu);

// General form: sqrt(E) = (nu2)_u / (gamma2 (nu1 - nu2)), sqrt(G) =
// (nu1)_v / (gamma1 (nu1 - nu2)). Throws DomainError naming the failing
// node when nu1 - nu2 <= 0 or a sign condition gamma1*(nu1)_v > 0,
// gamma2*(nu2)_u > 0 fails on the checked window.
CoefficientMatrices build_matrices_general(
    const InvariantData& inv,
    std::optional<NodeWindow> check_window = std::nullopt);

// Frobenius norm of B_u - A_v - (AB - BA) per interior node (matrix
// derivatives by central differences); boundary entries zero.
ScalarField compatibility_residual(const CoefficientMatrices& m);

// Term-by-term residuals of the two scalar integrability conditions that
// the zero-curvature equation encodes, as a secondary diagnostic.
struct ConditionResiduals {
    ScalarField log_ratio_u;   // (ln((nu1)_v/gamma1))_u - (nu1)_u/(nu1-nu2)
    ScalarField log_ratio_v;   // (ln((nu2)_u/gamma2))_v + (nu2)_v/(nu1-nu2)
    ScalarField gauss_form;    // curvature-form identity residual
};
ConditionResiduals theorem_condition_residuals(const InvariantData& inv);

struct FrameField {
    Grid2D grid;
    std::vector<Mat4> frames;

    Mat4& at(int i, int j) { return frames[grid.index(i, j)]; }
    const Mat4& at(int i, int j) const { return frames[grid.index(i, j)]; }

    Vec4 X(int i, int j) const { return at(i, j).row(0).transpose(); }
    Vec4 Y(int i, int j) const { return at(i, j).row(1).transpose(); }
    Vec4 N(int i, int j) const { return at(i, j).row(2).transpose(); }
    Vec4 l(int i, int j) const { return at(i, j).row(3).transpose(); }
};

enum class SweepOrder { u_row_then_v_columns, v_column_then_u_rows };

struct IntegrationOptions {
    // Initial node; -1 means grid center.
    int i0 = -1, j0 = -1;
    SweepOrder order = SweepOrder::u_row_then_v_columns;
    // One-step orthonormality drift allowed before projection.
    double max_step_drift = 1e-3;
};

struct IntegrationStats {
    double max_drift_before_projection = 0.0;
    double max_gram_deviation = 0.0;   // after projection, over all nodes
    double max_det_deviation = 0.0;
    double max_unit_l_deviation = 0.0;
};

// Classical RK4 transport with step = grid spacing and SO(4)
// re-projection (modified Gram-Schmidt on rows) after every step. The
// frame at the initial node equals `initial` exactly.
FrameField integrate_frame(const CoefficientMatrices& m, const Mat4& initial,
                           const IntegrationOptions& opts = {},
                           IntegrationStats* stats = nullptr);

struct ReconstructOptions {
    // Gates scale as multiplier * max(hu,hv)^2.
    double gate_multiplier = 10.0;
    std::optional<NodeWindow> window;  // default: margin-maximizing scan
    IntegrationOptions integration;
};

struct ReconstructionResult {
    FrameField frames;
    geometry::SurfaceS3 surface;
    NodeWindow window;
    double window_margin = 0.0;
    bool strongly_regular = false;
    double pde_residual_max = 0.0;       // over the window
    double compatibility_max = 0.0;      // over the window
    IntegrationStats stats;
};

// Full pipeline: gate the PDE residual and the compatibility residual on
// the certified window, then build canonical matrices and integrate.
// Constant-nu inputs pass with strongly_regular = false.
ReconstructionResult reconstruct_surface(
    const sinh_poisson::NormalCurvatureField& nu, const Mat4& initial,
    const ReconstructOptions& opts = {});

}  // namespace bonnet::frame
