#include "bonnet/frame.hpp"

#include <cmath>
#include <sstream>

#include "bonnet/fd.hpp"

namespace bonnet::frame {

namespace {

// Connection matrices of the frame system. Row order (X, Y, N, l):
//   u-direction                          v-direction
//   X_u = sE*(g1*Y + n1*N + l)           X_v = sG*g2*Y
//   Y_u = -sE*g1*X                       Y_v = sG*(-g2*X + n2*N + l)
//   N_u = -sE*n1*X                       N_v = -sG*n2*Y
//   l_u = -sE*X                          l_v = -sG*Y
inline Mat4 make_A(double sE, double g1, double n1) {
    Mat4 A = Mat4::Zero();
    A(0, 1) = sE * g1;
    A(0, 2) = sE * n1;
    A(0, 3) = sE;
    A(1, 0) = -A(0, 1);
    A(2, 0) = -A(0, 2);
    A(3, 0) = -A(0, 3);
    return A;
}

inline Mat4 make_B(double sG, double g2, double n2) {
    Mat4 B = Mat4::Zero();
    B(0, 1) = sG * g2;
    B(1, 2) = sG * n2;
    B(1, 3) = sG;
    B(1, 0) = -B(0, 1);
    B(2, 1) = -B(1, 2);
    B(3, 1) = -B(1, 3);
    return B;
}

}  // namespace

CoefficientMatrices build_matrices_canonical(
    const sinh_poisson::NormalCurvatureField& ncf) {
    const Grid2D& g = ncf.nu.grid;
    ScalarField sq(g);
    for (std::size_t k = 0; k < sq.values.size(); ++k) {
        if (!(ncf.nu.values[k] > 0.0))
            throw DomainError("build_matrices_canonical: nu must be positive");
        sq.values[k] = std::sqrt(ncf.nu.values[k]);
    }
    ScalarField gamma1 = fd::partial_v(sq);
    ScalarField gamma2 = fd::partial_u(sq);  // negated below

    CoefficientMatrices m;
    m.grid = g;
    m.A.resize(g.size());
    m.B.resize(g.size());
#pragma omp parallel for
    for (int i = 0; i < g.nu; ++i)
        for (int j = 0; j < g.nv; ++j) {
            const double nu = ncf.nu.at(i, j);
            const double sE = 1.0 / sq.at(i, j);  // sqrt(E) = sqrt(G) = 1/sqrt(nu)
            m.A_at(i, j) = make_A(sE, gamma1.at(i, j), nu);
            m.B_at(i, j) = make_B(sE, -gamma2.at(i, j), -nu);
        }
    return m;
}

CoefficientMatrices build_matrices_general(const InvariantData& inv,
                                           std::optional<NodeWindow> check_window) {
    const Grid2D& g = inv.nu1.grid;
    require_same_grid(g, inv.nu2.grid, "build_matrices_general");
    require_same_grid(g, inv.gamma1.grid, "build_matrices_general");
    require_same_grid(g, inv.gamma2.grid, "build_matrices_general");

    ScalarField nu1_v = fd::partial_v(inv.nu1);
    ScalarField nu2_u = fd::partial_u(inv.nu2);

    const NodeWindow check = check_window ? *check_window : full_window(g);
    for (int i = check.i0; i <= check.i1; ++i)
        for (int j = check.j0; j <= check.j1; ++j) {
            const double d = inv.nu1.at(i, j) - inv.nu2.at(i, j);
            if (!(d > 0.0)) {
                std::ostringstream msg;
                msg << "build_matrices_general: nu1 - nu2 = " << d
                    << " violates condition 1 (nu1 - nu2 > 0)";
                throw DomainError(msg.str(), i, j);
            }
            if (!(inv.gamma1.at(i, j) * nu1_v.at(i, j) > 0.0)) {
                std::ostringstream msg;
                msg << "build_matrices_general: gamma1*(nu1)_v = "
                    << inv.gamma1.at(i, j) * nu1_v.at(i, j)
                    << " violates condition 1 (gamma1*(nu1)_v > 0)";
                throw DomainError(msg.str(), i, j);
            }
            if (!(inv.gamma2.at(i, j) * nu2_u.at(i, j) > 0.0)) {
                std::ostringstream msg;
                msg << "build_matrices_general: gamma2*(nu2)_u = "
                    << inv.gamma2.at(i, j) * nu2_u.at(i, j)
                    << " violates condition 1 (gamma2*(nu2)_u > 0)";
                throw DomainError(msg.str(), i, j);
            }
        }

    CoefficientMatrices m;
    m.grid = g;
    m.A.resize(g.size());
    m.B.resize(g.size());
#pragma omp parallel for
    for (int i = 0; i < g.nu; ++i)
        for (int j = 0; j < g.nv; ++j) {
            const double d = inv.nu1.at(i, j) - inv.nu2.at(i, j);
            const double sE = nu2_u.at(i, j) / (inv.gamma2.at(i, j) * d);
            const double sG = nu1_v.at(i, j) / (inv.gamma1.at(i, j) * d);
            m.A_at(i, j) = make_A(sE, inv.gamma1.at(i, j), inv.nu1.at(i, j));
            m.B_at(i, j) = make_B(sG, inv.gamma2.at(i, j), inv.nu2.at(i, j));
        }
    return m;
}

ScalarField compatibility_residual(const CoefficientMatrices& m) {
    const Grid2D& g = m.grid;
    if (g.nu < 3 || g.nv < 3)
        throw DimensionError("compatibility_residual: grid too small");
    const double ihu = 1.0 / (2.0 * g.hu());
    const double ihv = 1.0 / (2.0 * g.hv());
    ScalarField out(g);
#pragma omp parallel for
    for (int i = 1; i < g.nu - 1; ++i)
        for (int j = 1; j < g.nv - 1; ++j) {
            const Mat4 Bu = (m.B_at(i + 1, j) - m.B_at(i - 1, j)) * ihu;
            const Mat4 Av = (m.A_at(i, j + 1) - m.A_at(i, j - 1)) * ihv;
            const Mat4& A = m.A_at(i, j);
            const Mat4& B = m.B_at(i, j);
            out.at(i, j) = (Bu - Av - (A * B - B * A)).norm();
        }
    return out;
}

ConditionResiduals theorem_condition_residuals(const InvariantData& inv) {
    const Grid2D& g = inv.nu1.grid;
    ScalarField nu1_u = fd::partial_u(inv.nu1);
    ScalarField nu1_v = fd::partial_v(inv.nu1);
    ScalarField nu2_u = fd::partial_u(inv.nu2);
    ScalarField nu2_v = fd::partial_v(inv.nu2);

    ScalarField log_ru(g), log_rv(g);
    ScalarField g1sq(g), g2sq(g);
    for (std::size_t k = 0; k < log_ru.values.size(); ++k) {
        log_ru.values[k] = std::log(std::abs(nu1_v.values[k] / inv.gamma1.values[k]));
        log_rv.values[k] = std::log(std::abs(nu2_u.values[k] / inv.gamma2.values[k]));
        g1sq.values[k] = inv.gamma1.values[k] * inv.gamma1.values[k];
        g2sq.values[k] = inv.gamma2.values[k] * inv.gamma2.values[k];
    }
    ScalarField lhs_u = fd::partial_u(log_ru);
    ScalarField lhs_v = fd::partial_v(log_rv);
    ScalarField g1sq_v = fd::partial_v(g1sq);
    ScalarField g2sq_u = fd::partial_u(g2sq);

    ConditionResiduals out{ScalarField(g), ScalarField(g), ScalarField(g)};
    const NodeWindow w = interior_window(g);
    for (int i = w.i0; i <= w.i1; ++i)
        for (int j = w.j0; j <= w.j1; ++j) {
            const double d = inv.nu1.at(i, j) - inv.nu2.at(i, j);
            out.log_ratio_u.at(i, j) = lhs_u.at(i, j) - nu1_u.at(i, j) / d;
            out.log_ratio_v.at(i, j) = lhs_v.at(i, j) + nu2_v.at(i, j) / d;
            const double s1 = g1sq.at(i, j), s2 = g2sq.at(i, j);
            out.gauss_form.at(i, j) =
                0.5 * d * (g1sq_v.at(i, j) / nu1_v.at(i, j) -
                           g2sq_u.at(i, j) / nu2_u.at(i, j)) -
                (s1 + s2) - (1.0 + inv.nu1.at(i, j) * inv.nu2.at(i, j));
        }
    return out;
}

namespace {

inline Mat4 project_so4(const Mat4& F) {
    Mat4 R = F;
    for (int r = 0; r < 4; ++r) {
        Eigen::RowVector4d row = R.row(r);
        for (int s = 0; s < r; ++s)
            row -= row.dot(R.row(s)) * R.row(s);
        R.row(r) = row / row.norm();
    }
    return R;
}

inline double gram_deviation(const Mat4& F) {
    return (F * F.transpose() - Mat4::Identity()).cwiseAbs().maxCoeff();
}

// One RK4 step of F' = M(t) F from node matrix M0 to node matrix M1 over
// signed step h; M at the midpoint is the average of the endpoint values.
inline Mat4 rk4_step(const Mat4& F, const Mat4& M0, const Mat4& M1, double h) {
    const Mat4 Mh = 0.5 * (M0 + M1);
    const Mat4 k1 = M0 * F;
    const Mat4 k2 = Mh * (F + (0.5 * h) * k1);
    const Mat4 k3 = Mh * (F + (0.5 * h) * k2);
    const Mat4 k4 = M1 * (F + h * k3);
    return F + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

struct SweepTracker {
    double max_drift = 0.0;
    double limit;
    explicit SweepTracker(double lim) : limit(lim) {}
};

}  // namespace

FrameField integrate_frame(const CoefficientMatrices& m, const Mat4& initial,
                           const IntegrationOptions& opts,
                           IntegrationStats* stats) {
    const Grid2D& g = m.grid;
    const int i0 = opts.i0 >= 0 ? opts.i0 : g.nu / 2;
    const int j0 = opts.j0 >= 0 ? opts.j0 : g.nv / 2;
    if (i0 >= g.nu || j0 >= g.nv)
        throw DimensionError("integrate_frame: initial node outside grid");

    if (gram_deviation(initial) > 1e-10)
        throw DomainError("integrate_frame: initial frame is not orthonormal");
    if (initial.determinant() < 0.0)
        throw DomainError("integrate_frame: initial frame is not right-oriented");

    FrameField field;
    field.grid = g;
    field.frames.assign(g.size(), Mat4::Zero());
    field.at(i0, j0) = initial;

    const double hu = g.hu(), hv = g.hv();
    double global_drift = 0.0;

    // Walks one line of nodes, stepping with the matrices of `pick`.
    auto sweep = [&](int from, int to, auto node_of, auto mat_of, double h,
                     double& drift_acc) {
        const int dir = to >= from ? 1 : -1;
        for (int k = from; k != to; k += dir) {
            auto [ci, cj] = node_of(k);
            auto [ni, nj] = node_of(k + dir);
            Mat4 next = rk4_step(field.at(ci, cj), mat_of(ci, cj), mat_of(ni, nj),
                                 dir * h);
            const double drift = gram_deviation(next);
            if (drift > opts.max_step_drift) {
                std::ostringstream msg;
                msg << "integrate_frame: orthonormality drift " << drift
                    << " exceeded budget in one step";
                throw StepFailureError(msg.str(), ni, nj);
            }
            drift_acc = std::max(drift_acc, drift);
            field.at(ni, nj) = project_so4(next);
        }
    };

    auto a_of = [&](int i, int j) -> const Mat4& { return m.A_at(i, j); };
    auto b_of = [&](int i, int j) -> const Mat4& { return m.B_at(i, j); };

    if (opts.order == SweepOrder::u_row_then_v_columns) {
        auto row_node = [&](int i) { return std::pair<int, int>(i, j0); };
        sweep(i0, g.nu - 1, row_node, a_of, hu, global_drift);
        sweep(i0, 0, row_node, a_of, hu, global_drift);
        // Column sweeps own disjoint state; run them in parallel.
        std::vector<double> drifts(g.nu, 0.0);
        std::exception_ptr fail;
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < g.nu; ++i) {
            try {
                auto col_node = [&, i](int j) { return std::pair<int, int>(i, j); };
                sweep(j0, g.nv - 1, col_node, b_of, hv, drifts[i]);
                sweep(j0, 0, col_node, b_of, hv, drifts[i]);
            } catch (...) {
#pragma omp critical
                if (!fail) fail = std::current_exception();
            }
        }
        if (fail) std::rethrow_exception(fail);
        for (double d : drifts) global_drift = std::max(global_drift, d);
    } else {
        auto col_node = [&](int j) { return std::pair<int, int>(i0, j); };
        sweep(j0, g.nv - 1, col_node, b_of, hv, global_drift);
        sweep(j0, 0, col_node, b_of, hv, global_drift);
        std::vector<double> drifts(g.nv, 0.0);
        std::exception_ptr fail;
#pragma omp parallel for schedule(dynamic)
        for (int j = 0; j < g.nv; ++j) {
            try {
                auto row_node = [&, j](int i) { return std::pair<int, int>(i, j); };
                sweep(i0, g.nu - 1, row_node, a_of, hu, drifts[j]);
                sweep(i0, 0, row_node, a_of, hu, drifts[j]);
            } catch (...) {
#pragma omp critical
                if (!fail) fail = std::current_exception();
            }
        }
        if (fail) std::rethrow_exception(fail);
        for (double d : drifts) global_drift = std::max(global_drift, d);
    }

    if (stats) {
        stats->max_drift_before_projection = global_drift;
        double gram = 0.0, det = 0.0, unit = 0.0;
#pragma omp parallel for reduction(max : gram, det, unit)
        for (int i = 0; i < g.nu; ++i)
            for (int j = 0; j < g.nv; ++j) {
                const Mat4& F = field.at(i, j);
                gram = std::max(gram, gram_deviation(F));
                det = std::max(det, std::abs(F.determinant() - 1.0));
                unit = std::max(unit, std::abs(F.row(3).norm() - 1.0));
            }
        stats->max_gram_deviation = gram;
        stats->max_det_deviation = det;
        stats->max_unit_l_deviation = unit;
    }
    return field;
}

ReconstructionResult reconstruct_surface(
    const sinh_poisson::NormalCurvatureField& nu, const Mat4& initial,
    const ReconstructOptions& opts) {
    const Grid2D& g = nu.nu.grid;
    const double h = std::max(g.hu(), g.hv());
    const double gate = opts.gate_multiplier * h * h;

    ReconstructionResult result;
    if (opts.window) {
        result.window = *opts.window;
        result.window_margin = sinh_poisson::certify_strong_regularity(nu, result.window);
    } else {
        auto found = sinh_poisson::find_certified_window(nu, g.nu / 3, g.nv / 3);
        result.window = found.window;
        result.window_margin = found.margin;
    }
    result.strongly_regular = result.window_margin > 0.0;

    ScalarField pde = sinh_poisson::residual(nu);
    result.pde_residual_max = window_max_abs(pde, result.window);
    if (result.pde_residual_max > gate) {
        std::ostringstream msg;
        msg << "reconstruct_surface: PDE residual " << result.pde_residual_max
            << " exceeds gate " << gate << " on the certified window";
        throw DomainError(msg.str());
    }

    CoefficientMatrices m = build_matrices_canonical(nu);
    ScalarField compat = compatibility_residual(m);
    result.compatibility_max = window_max_abs(compat, result.window);
    if (result.compatibility_max > gate) {
        std::ostringstream msg;
        msg << "reconstruct_surface: compatibility residual "
            << result.compatibility_max << " exceeds gate " << gate;
        throw DomainError(msg.str());
    }

    result.frames = integrate_frame(m, initial, opts.integration, &result.stats);

    geometry::SurfaceS3 s;
    s.grid = g;
    s.l = VectorField4(g);
    VectorField4 N(g);
    for (int i = 0; i < g.nu; ++i)
        for (int j = 0; j < g.nv; ++j) {
            s.l.at(i, j) = result.frames.l(i, j);
            N.at(i, j) = result.frames.N(i, j);
        }
    s.N = std::move(N);
    result.surface = std::move(s);
    return result;
}

}  // namespace bonnet::frame
