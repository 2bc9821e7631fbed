#include "bonnet/associated_family.hpp"

#include <cmath>
#include <sstream>

#include "bonnet/interp.hpp"
#include "bonnet/surface_geometry.hpp"

namespace bonnet::family {

sinh_poisson::NormalCurvatureField rotate_solution(
    const sinh_poisson::NormalCurvatureField& nu, double t,
    const RotationDisc& disc, int nodes_u, int nodes_v) {
    const Grid2D& g = nu.nu.grid;
    if (disc.center_u - disc.radius < g.u_min ||
        disc.center_u + disc.radius > g.u_max ||
        disc.center_v - disc.radius < g.v_min ||
        disc.center_v + disc.radius > g.v_max) {
        std::ostringstream msg;
        msg << "rotate_solution: disc of radius " << disc.radius
            << " exceeds the source grid";
        throw DomainError(msg.str());
    }

    const double half = disc.radius / std::sqrt(2.0);
    Grid2D out_grid(disc.center_u - half, disc.center_u + half,
                    disc.center_v - half, disc.center_v + half, nodes_u,
                    nodes_v);

    BicubicInterpolator interp(nu.nu);
    ScalarField out(out_grid);
    for (int i = 0; i < nodes_u; ++i)
        for (int j = 0; j < nodes_v; ++j) {
            auto [ru, rv] = rotate_point(disc, t, out_grid.u(i), out_grid.v(j));
            out.at(i, j) = interp(ru, rv);
        }
    return sinh_poisson::NormalCurvatureField::from_values(std::move(out));
}

std::vector<FamilyMember> build_family(
    const sinh_poisson::NormalCurvatureField& nu, const std::vector<double>& ts,
    const FamilyOptions& opts) {
    const int nodes = opts.member_nodes | 1;  // center must be a node
    std::vector<FamilyMember> members;
    members.reserve(ts.size());
    for (double t : ts) {
        FamilyMember m;
        m.t = t;
        try {
            m.nu_t = rotate_solution(nu, t, opts.disc, nodes, nodes);
            // The sampled field is only piecewise-smooth across source
            // cells; a short Newton relaxation on the member grid removes
            // the interpolation kinks from the discrete residual while
            // moving values by no more than the interpolation error scale.
            sinh_poisson::NewtonOptions nopts;
            nopts.tol = 1e-10;
            nopts.max_iters = 8;
            ScalarField f_t = m.nu_t.log();
            auto refined = sinh_poisson::solve(f_t, f_t, nopts, false);
            if (refined.converged)
                m.nu_t = sinh_poisson::NormalCurvatureField::from_log(refined.f);
            frame::ReconstructOptions ropts;
            ropts.gate_multiplier = opts.gate_multiplier;
            ropts.integration.i0 = nodes / 2;
            ropts.integration.j0 = nodes / 2;
            m.recon = frame::reconstruct_surface(m.nu_t, opts.initial_frame, ropts);
            m.built = true;
        } catch (const Error& err) {
            m.failure = err.what();
        }
        members.push_back(std::move(m));
    }
    return members;
}

IsometryReport verify_isometry(const ScalarField& base_E,
                               const ScalarField& base_G,
                               const FamilyMember& member,
                               const RotationDisc& disc, double gate) {
    IsometryReport rep;
    rep.t = member.t;
    rep.gate = gate;
    if (!member.built) return rep;

    geometry::SurfaceInvariants inv =
        geometry::fundamental_forms(member.recon.surface);
    BicubicInterpolator interp_E(base_E);
    BicubicInterpolator interp_G(base_G);

    const Grid2D& g = inv.grid;
    const NodeWindow w = interior_window(g);
    for (int i = w.i0; i <= w.i1; ++i)
        for (int j = w.j0; j <= w.j1; ++j) {
            auto [ru, rv] = rotate_point(disc, member.t, g.u(i), g.v(j));
            rep.max_E_dev = std::max(
                rep.max_E_dev, std::abs(inv.E.at(i, j) - interp_E(ru, rv)));
            rep.max_G_dev = std::max(
                rep.max_G_dev, std::abs(inv.G.at(i, j) - interp_G(ru, rv)));
            rep.max_F = std::max(rep.max_F, std::abs(inv.F.at(i, j)));
            rep.max_E_vs_inv_nu = std::max(
                rep.max_E_vs_inv_nu,
                std::abs(inv.E.at(i, j) - 1.0 / member.nu_t.nu.at(i, j)));
        }
    rep.pass = rep.max_E_dev < gate && rep.max_G_dev < gate &&
               rep.max_F < gate && rep.max_E_vs_inv_nu < gate;
    return rep;
}

}  // namespace bonnet::family
