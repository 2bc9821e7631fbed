#pragma once

#include <optional>
#include <vector>

#include "bonnet/grid.hpp"

// The natural PDE of the reconstruction pipeline. Internally everything
// works with f = ln(nu): positivity of nu is then structural, and the
// equation takes the sinh-Poisson form  lap(f) + 4 sinh(f) = 0.
namespace bonnet::sinh_poisson {

// Positive normal-curvature field with its strong-regularity margin
// min |nu_u * nu_v| over interior nodes (0 means not strongly regular).
struct NormalCurvatureField {
    ScalarField nu;
    double strong_regularity_margin = 0.0;

    static NormalCurvatureField from_values(ScalarField nu_values);
    static NormalCurvatureField from_log(const ScalarField& f);

    ScalarField log() const;  // ln(nu), nodewise
};

// lap(ln nu) - 2(1 - nu^2)/nu on interior nodes; boundary entries zero.
ScalarField residual(const NormalCurvatureField& ncf);

// lap(f) + 4 sinh(f); algebraically identical to residual(exp(f)).
ScalarField residual_f_form(const ScalarField& f);

// min |nu_u * nu_v| over the interior of the window.
double certify_strong_regularity(const NormalCurvatureField& ncf,
                                 const NodeWindow& window);

// Scan size x size node windows (interior offsets) and return the one
// with the largest strong-regularity margin.
struct CertifiedWindow {
    NodeWindow window;
    double margin = 0.0;
};
CertifiedWindow find_certified_window(const NormalCurvatureField& ncf,
                                      int size_u, int size_v);

struct NewtonOptions {
    double tol = 1e-8;          // max interior |residual| target
    int max_iters = 25;
    double min_step = 9.5367431640625e-7;  // 2^-20
    double armijo_c = 1e-4;
};

struct IterationRecord {
    int iter;
    double residual_inf;
    double step;
};

struct NewtonResult {
    ScalarField f;
    bool converged = false;
    double residual_inf = 0.0;
    std::vector<IterationRecord> history;
};

// Damped Newton on the 5-point discretization of lap(f) + 4 sinh(f) = 0
// with Dirichlet data. `boundary` supplies f on the grid edge (interior
// entries ignored); `initial_guess` supplies the interior start.
// Throws ConvergenceError when max_iters is exhausted (the message
// carries the residual history); the best iterate is still returned
// through the exception-free overload below when throw_on_failure=false.
NewtonResult solve(const ScalarField& boundary, const ScalarField& initial_guess,
                   const NewtonOptions& opts = {}, bool throw_on_failure = true);

}  // namespace bonnet::sinh_poisson
