#include "bonnet/sinh_poisson.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>
#include <sstream>

#include "bonnet/fd.hpp"

namespace bonnet::sinh_poisson {

namespace {

double compute_margin(const ScalarField& nu) {
    if (nu.grid.nu < 3 || nu.grid.nv < 3) return 0.0;
    ScalarField nu_u = fd::partial_u(nu);
    ScalarField nu_v = fd::partial_v(nu);
    const NodeWindow w = interior_window(nu.grid);
    double margin = std::numeric_limits<double>::infinity();
    for (int i = w.i0; i <= w.i1; ++i)
        for (int j = w.j0; j <= w.j1; ++j)
            margin = std::min(margin, std::abs(nu_u.at(i, j) * nu_v.at(i, j)));
    return std::isfinite(margin) ? margin : 0.0;
}

void require_positive(const ScalarField& nu) {
    const Grid2D& g = nu.grid;
    for (int i = 0; i < g.nu; ++i)
        for (int j = 0; j < g.nv; ++j)
            if (!(nu.at(i, j) > 0.0))
                throw DomainError("normal curvature must be positive, got " +
                                      std::to_string(nu.at(i, j)) + " at node",
                                  i, j);
}

}  // namespace

NormalCurvatureField NormalCurvatureField::from_values(ScalarField nu_values) {
    require_positive(nu_values);
    if (!nu_values.all_finite())
        throw DomainError("normal curvature field has non-finite entries");
    NormalCurvatureField out;
    out.nu = std::move(nu_values);
    out.strong_regularity_margin = compute_margin(out.nu);
    return out;
}

NormalCurvatureField NormalCurvatureField::from_log(const ScalarField& f) {
    ScalarField nu(f.grid);
    for (std::size_t n = 0; n < f.values.size(); ++n)
        nu.values[n] = std::exp(f.values[n]);
    return from_values(std::move(nu));
}

ScalarField NormalCurvatureField::log() const {
    ScalarField f(nu.grid);
    for (std::size_t n = 0; n < nu.values.size(); ++n)
        f.values[n] = std::log(nu.values[n]);
    return f;
}

ScalarField residual(const NormalCurvatureField& ncf) {
    require_positive(ncf.nu);
    ScalarField lap = fd::laplacian(ncf.log());
    const Grid2D& g = ncf.nu.grid;
    ScalarField out(g);
    const NodeWindow w = interior_window(g);
#pragma omp parallel for
    for (int i = w.i0; i <= w.i1; ++i)
        for (int j = w.j0; j <= w.j1; ++j) {
            const double nu = ncf.nu.at(i, j);
            out.at(i, j) = lap.at(i, j) - 2.0 * (1.0 - nu * nu) / nu;
        }
    return out;
}

ScalarField residual_f_form(const ScalarField& f) {
    ScalarField lap = fd::laplacian(f);
    const Grid2D& g = f.grid;
    ScalarField out(g);
    const NodeWindow w = interior_window(g);
#pragma omp parallel for
    for (int i = w.i0; i <= w.i1; ++i)
        for (int j = w.j0; j <= w.j1; ++j)
            out.at(i, j) = lap.at(i, j) + 4.0 * std::sinh(f.at(i, j));
    return out;
}

double certify_strong_regularity(const NormalCurvatureField& ncf,
                                 const NodeWindow& window) {
    ScalarField nu_u = fd::partial_u(ncf.nu);
    ScalarField nu_v = fd::partial_v(ncf.nu);
    double margin = std::numeric_limits<double>::infinity();
    for (int i = window.i0; i <= window.i1; ++i)
        for (int j = window.j0; j <= window.j1; ++j)
            margin = std::min(margin, std::abs(nu_u.at(i, j) * nu_v.at(i, j)));
    return std::isfinite(margin) ? margin : 0.0;
}

CertifiedWindow find_certified_window(const NormalCurvatureField& ncf,
                                      int size_u, int size_v) {
    const Grid2D& g = ncf.nu.grid;
    size_u = std::min(size_u, g.nu - 2);
    size_v = std::min(size_v, g.nv - 2);
    ScalarField nu_u = fd::partial_u(ncf.nu);
    ScalarField nu_v = fd::partial_v(ncf.nu);
    ScalarField prod(g);
    for (std::size_t n = 0; n < prod.values.size(); ++n)
        prod.values[n] = std::abs(nu_u.values[n] * nu_v.values[n]);

    CertifiedWindow best;
    best.margin = -1.0;
    // Stay clear of the first interior ring: one-sided boundary closures
    // contaminate composed derivatives there. Fall back for tiny grids.
    int lo_i = 3, lo_j = 3;
    if (lo_i + size_u - 1 > g.nu - 4) lo_i = 1;
    if (lo_j + size_v - 1 > g.nv - 4) lo_j = 1;
    const int hi_i = lo_i == 3 ? g.nu - 4 : g.nu - 2;
    const int hi_j = lo_j == 3 ? g.nv - 4 : g.nv - 2;
    // Coarse offset stride keeps the scan cheap; margins vary smoothly.
    const int stride_u = std::max(1, (g.nu - size_u) / 24);
    const int stride_v = std::max(1, (g.nv - size_v) / 24);
    for (int i0 = lo_i; i0 + size_u - 1 <= hi_i; i0 += stride_u)
        for (int j0 = lo_j; j0 + size_v - 1 <= hi_j; j0 += stride_v) {
            NodeWindow w{i0, i0 + size_u - 1, j0, j0 + size_v - 1};
            const double m = window_min(prod, w);
            if (m > best.margin) {
                best.margin = m;
                best.window = w;
            }
        }
    if (best.margin < 0.0) best.margin = 0.0;
    return best;
}

namespace {

// Interior residual of the f-form equation as a flat vector, plus its inf norm.
void interior_residual(const ScalarField& f, Eigen::VectorXd& r, double& rinf) {
    const Grid2D& g = f.grid;
    const double ihu2 = 1.0 / (g.hu() * g.hu());
    const double ihv2 = 1.0 / (g.hv() * g.hv());
    const int mu = g.nu - 2, mv = g.nv - 2;
    r.resize(static_cast<Eigen::Index>(mu) * mv);
    double m = 0.0;
#pragma omp parallel for reduction(max : m)
    for (int i = 1; i <= mu; ++i)
        for (int j = 1; j <= mv; ++j) {
            const double lap =
                (f.at(i + 1, j) - 2.0 * f.at(i, j) + f.at(i - 1, j)) * ihu2 +
                (f.at(i, j + 1) - 2.0 * f.at(i, j) + f.at(i, j - 1)) * ihv2;
            const double val = lap + 4.0 * std::sinh(f.at(i, j));
            r[(i - 1) * mv + (j - 1)] = val;
            m = std::max(m, std::abs(val));
        }
    rinf = m;
}

}  // namespace

NewtonResult solve(const ScalarField& boundary, const ScalarField& initial_guess,
                   const NewtonOptions& opts, bool throw_on_failure) {
    const Grid2D& g = boundary.grid;
    require_same_grid(g, initial_guess.grid, "sinh_poisson::solve");
    if (g.nu < 3 || g.nv < 3)
        throw DimensionError("sinh_poisson::solve: grid too small");
    if (!(opts.tol > 0.0)) throw DomainError("sinh_poisson::solve: tol must be > 0");
    if (!boundary.all_finite() || !initial_guess.all_finite())
        throw DomainError("sinh_poisson::solve: non-finite input");

    const int mu = g.nu - 2, mv = g.nv - 2;
    const int m = mu * mv;
    const double ihu2 = 1.0 / (g.hu() * g.hu());
    const double ihv2 = 1.0 / (g.hv() * g.hv());

    // Current iterate: boundary row/column fixed, interior from the guess.
    ScalarField f = initial_guess;
    for (int i = 0; i < g.nu; ++i) {
        f.at(i, 0) = boundary.at(i, 0);
        f.at(i, g.nv - 1) = boundary.at(i, g.nv - 1);
    }
    for (int j = 0; j < g.nv; ++j) {
        f.at(0, j) = boundary.at(0, j);
        f.at(g.nu - 1, j) = boundary.at(g.nu - 1, j);
    }

    NewtonResult result;
    Eigen::VectorXd r;
    double rinf = 0.0;
    interior_residual(f, r, rinf);
    result.history.push_back({0, rinf, 0.0});

    Eigen::SparseMatrix<double> J(m, m);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(m) * 5);

    int iter = 0;
    while (rinf >= opts.tol && iter < opts.max_iters) {
        ++iter;
        // Jacobian of the discrete operator: 5-point Laplacian plus the
        // diagonal 4 cosh(f).
        trip.clear();
        for (int i = 1; i <= mu; ++i)
            for (int j = 1; j <= mv; ++j) {
                const int row = (i - 1) * mv + (j - 1);
                trip.emplace_back(row, row,
                                  -2.0 * (ihu2 + ihv2) + 4.0 * std::cosh(f.at(i, j)));
                if (i > 1) trip.emplace_back(row, row - mv, ihu2);
                if (i < mu) trip.emplace_back(row, row + mv, ihu2);
                if (j > 1) trip.emplace_back(row, row - 1, ihv2);
                if (j < mv) trip.emplace_back(row, row + 1, ihv2);
            }
        J.setFromTriplets(trip.begin(), trip.end());

        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(J);
        if (lu.info() != Eigen::Success)
            throw Error("sinh_poisson::solve: Jacobian factorization failed");
        Eigen::VectorXd delta = lu.solve(-r);
        if (lu.info() != Eigen::Success)
            throw Error("sinh_poisson::solve: Jacobian solve failed");

        // Armijo backtracking on the residual 2-norm, halving steps.
        const double r2 = r.norm();
        double step = 1.0;
        ScalarField f_trial = f;
        Eigen::VectorXd r_trial;
        double rinf_trial = 0.0;
        while (true) {
            for (int i = 1; i <= mu; ++i)
                for (int j = 1; j <= mv; ++j)
                    f_trial.at(i, j) =
                        f.at(i, j) + step * delta[(i - 1) * mv + (j - 1)];
            interior_residual(f_trial, r_trial, rinf_trial);
            if (r_trial.norm() <= (1.0 - opts.armijo_c * step) * r2) break;
            step *= 0.5;
            if (step < opts.min_step) {
                std::ostringstream msg;
                msg << "sinh_poisson::solve: line search stalled at iteration "
                    << iter << " (residual " << rinf << ")";
                if (throw_on_failure) throw ConvergenceError(msg.str());
                result.f = f;
                result.residual_inf = rinf;
                return result;
            }
        }
        f = f_trial;
        r.swap(r_trial);
        rinf = rinf_trial;
        result.history.push_back({iter, rinf, step});
    }

    result.f = f;
    result.residual_inf = rinf;
    result.converged = rinf < opts.tol;
    if (!result.converged && throw_on_failure) {
        std::ostringstream msg;
        msg << "sinh_poisson::solve: no convergence after " << iter
            << " iterations; residual history:";
        for (const auto& h : result.history)
            msg << " " << h.residual_inf;
        throw ConvergenceError(msg.str());
    }
    return result;
}

}  // namespace bonnet::sinh_poisson
