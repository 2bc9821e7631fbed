// Command-line front end for the surface-reconstruction toolkit:
// solve the sinh-Poisson equation, reconstruct surfaces from solutions,
// verify measured invariants, build associated families, construct and
// classify ruled hypersurfaces, and export meshes.

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "bonnet/associated_family.hpp"
#include "bonnet/fd.hpp"
#include "bonnet/frame.hpp"
#include "bonnet/hypersurface.hpp"
#include "bonnet/io_json.hpp"
#include "bonnet/mesh_export.hpp"
#include "bonnet/report.hpp"
#include "bonnet/sinh_poisson.hpp"
#include "bonnet/surface_geometry.hpp"

using namespace bonnet;

namespace {

Grid2D parse_grid(const std::string& spec) {
    double a[4];
    int n[2];
    if (std::sscanf(spec.c_str(), "%lf,%lf,%lf,%lf,%d,%d", &a[0], &a[1], &a[2],
                    &a[3], &n[0], &n[1]) != 6)
        throw ConfigError("grid spec must be u_min,u_max,v_min,v_max,nu,nv");
    return Grid2D(a[0], a[1], a[2], a[3], n[0], n[1]);
}

// Named boundary/guess profiles, or a field file.
ScalarField parse_field_arg(const std::string& arg, const Grid2D* grid) {
    auto needs_grid = [&]() -> const Grid2D& {
        if (!grid) throw ConfigError("--grid is required with a named profile");
        return *grid;
    };
    if (arg == "zero") return ScalarField(needs_grid(), 0.0);
    if (arg.rfind("const:", 0) == 0)
        return ScalarField(needs_grid(), std::stod(arg.substr(6)));
    if (arg.rfind("sinprod:", 0) == 0) {
        const double a = std::stod(arg.substr(8));
        return ScalarField::sample(needs_grid(), [a](double u, double v) {
            return a * std::sin(M_PI * u) * std::sin(M_PI * v);
        });
    }
    if (arg.rfind("sinsum:", 0) == 0) {
        const double a = std::stod(arg.substr(7));
        return ScalarField::sample(needs_grid(), [a](double u, double v) {
            return a * (std::sin(M_PI * u) + std::sin(M_PI * v));
        });
    }
    if (arg.rfind("cosprod:", 0) == 0) {
        const double a = std::stod(arg.substr(8));
        return ScalarField::sample(needs_grid(), [a](double u, double v) {
            return a * std::cos(M_PI * u) * std::cos(M_PI * v);
        });
    }
    ScalarField f = io::load_field(arg);
    if (grid && !(f.grid == *grid))
        throw ConfigError("field file grid does not match --grid: " + arg);
    return f;
}

Mat4 parse_frame(const std::string& arg) {
    if (arg == "identity") return Mat4::Identity();
    Mat4 F;
    std::stringstream ss(arg);
    for (int k = 0; k < 16; ++k) {
        std::string tok;
        if (!std::getline(ss, tok, ','))
            throw ConfigError("--frame0 must be 'identity' or 16 comma values");
        F(k / 4, k % 4) = std::stod(tok);
    }
    return F;
}

NodeWindow parse_window(const std::string& arg, const Grid2D& g) {
    if (arg == "auto") return interior_window(g);  // caller treats specially
    NodeWindow w;
    if (std::sscanf(arg.c_str(), "%d,%d,%d,%d", &w.i0, &w.i1, &w.j0, &w.j1) != 4)
        throw ConfigError("--window must be 'auto' or i0,i1,j0,j1");
    return w;
}

void write_history_csv(const std::vector<sinh_poisson::IterationRecord>& hist,
                       const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    out << "iter,residual_inf,step_size\n";
    for (const auto& h : hist)
        out << h.iter << "," << report::fmt_double(h.residual_inf) << ","
            << report::fmt_double(h.step) << "\n";
}

int cmd_solve(const std::string& grid_spec, const std::string& boundary_arg,
              const std::string& guess_arg, double tol, int max_iters,
              const std::string& out, const std::string& history) {
    std::optional<Grid2D> grid;
    if (!grid_spec.empty()) grid = parse_grid(grid_spec);
    ScalarField boundary = parse_field_arg(boundary_arg, grid ? &*grid : nullptr);
    if (!grid) grid = boundary.grid;
    ScalarField guess = guess_arg.empty()
                            ? ScalarField(*grid, 0.0)
                            : parse_field_arg(guess_arg, &*grid);

    sinh_poisson::NewtonOptions opts;
    opts.tol = tol;
    opts.max_iters = max_iters;
    auto result = sinh_poisson::solve(boundary, guess, opts, false);
    if (!history.empty()) write_history_csv(result.history, history);
    if (!result.converged) {
        std::cerr << "solve-sinh-poisson: no convergence (residual "
                  << result.residual_inf << ")\n";
        return 1;
    }

    auto ncf = sinh_poisson::NormalCurvatureField::from_log(result.f);
    io::save_field(ncf.nu, out);
    std::cout << "converged: residual_inf="
              << report::fmt_double(result.residual_inf)
              << " iters=" << result.history.back().iter
              << " margin=" << report::fmt_double(ncf.strong_regularity_margin)
              << "\n";
    return 0;
}

int cmd_reconstruct(const std::string& nu_path, const std::string& frame_arg,
                    const std::string& window_arg, double gate_multiplier,
                    const std::string& out, const std::string& report_path) {
    ScalarField nu_values = io::load_field(nu_path);
    auto ncf = sinh_poisson::NormalCurvatureField::from_values(nu_values);

    frame::ReconstructOptions opts;
    opts.gate_multiplier = gate_multiplier;
    if (window_arg != "auto")
        opts.window = parse_window(window_arg, nu_values.grid);

    frame::ReconstructionResult r =
        frame::reconstruct_surface(ncf, parse_frame(frame_arg), opts);

    io::ordered_json extra;
    extra["window"] = {{"i0", r.window.i0},
                       {"i1", r.window.i1},
                       {"j0", r.window.j0},
                       {"j1", r.window.j1}};
    extra["strongly_regular"] = r.strongly_regular;
    extra["window_margin"] = r.window_margin;
    extra["pde_residual_max"] = r.pde_residual_max;
    extra["compatibility_max"] = r.compatibility_max;
    extra["max_gram_deviation"] = r.stats.max_gram_deviation;
    io::save_surface(r.surface, out, extra);

    const double h = std::max(nu_values.grid.hu(), nu_values.grid.hv());
    report::VerificationReport rep("reconstruct");
    rep.provenance("nu", nu_path);
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(report::fnv1a_file(nu_path)));
    rep.provenance("nu_fnv1a", hash);
    rep.provenance("gate_multiplier", gate_multiplier);
    rep.add("pde_residual", r.pde_residual_max, r.pde_residual_max,
            gate_multiplier * h * h);
    rep.add("compatibility", r.compatibility_max, r.compatibility_max,
            gate_multiplier * h * h);
    rep.add("gram_deviation", r.stats.max_gram_deviation,
            r.stats.max_gram_deviation, 1e-9);
    rep.add("unit_position", r.stats.max_unit_l_deviation,
            r.stats.max_unit_l_deviation, 1e-9);
    rep.add("orientation_det", r.stats.max_det_deviation,
            r.stats.max_det_deviation, 1e-9);
    rep.note("window_margin", r.window_margin, r.window_margin);
    rep.note("drift_before_projection", r.stats.max_drift_before_projection,
             r.stats.max_drift_before_projection);

    // Term-by-term integrability diagnostics on the canonical data.
    {
        ScalarField sq(nu_values.grid);
        for (std::size_t k = 0; k < sq.values.size(); ++k)
            sq.values[k] = std::sqrt(nu_values.values[k]);
        frame::InvariantData inv;
        inv.nu1 = nu_values;
        inv.nu2 = nu_values;
        for (double& x : inv.nu2.values) x = -x;
        inv.gamma1 = fd::partial_v(sq);
        inv.gamma2 = fd::partial_u(sq);
        for (double& x : inv.gamma2.values) x = -x;
        frame::ConditionResiduals cond = frame::theorem_condition_residuals(inv);
        rep.note("condition_log_ratio_u", window_max_abs(cond.log_ratio_u, r.window),
                 window_mean_abs(cond.log_ratio_u, r.window));
        rep.note("condition_log_ratio_v", window_max_abs(cond.log_ratio_v, r.window),
                 window_mean_abs(cond.log_ratio_v, r.window));
        rep.note("condition_gauss_form", window_max_abs(cond.gauss_form, r.window),
                 window_mean_abs(cond.gauss_form, r.window));
    }
    rep.print();
    if (!report_path.empty()) rep.write_json(report_path);
    return rep.overall_pass() ? 0 : 1;
}

int cmd_verify(const std::string& in, const std::string& csv_path,
               const std::string& json_path, double gate_multiplier) {
    geometry::SurfaceS3 s = io::load_surface(in);
    const Grid2D& g = s.grid;
    const double h = std::max(g.hu(), g.hv());
    const double hgate = gate_multiplier * h * h;
    // Residual norms stay clear of the one-sided closure ring, whose
    // composed-derivative error carries a larger constant.
    NodeWindow w = interior_window(g);
    if (g.nu > 8 && g.nv > 8) w = NodeWindow{3, g.nu - 4, 3, g.nv - 4};

    report::VerificationReport rep("verify-surface");
    rep.provenance("input", in);
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(report::fnv1a_file(in)));
    rep.provenance("input_fnv1a", hash);
    rep.provenance("gate_multiplier", gate_multiplier);

    // Position and normal consistency.
    double unit_dev = 0.0, ortho_dev = 0.0;
    std::vector<ScalarField> comps;
    for (int c = 0; c < 4; ++c) comps.push_back(s.l.component(c));
    std::vector<ScalarField> du, dv;
    for (int c = 0; c < 4; ++c) {
        du.push_back(fd::partial_u(comps[c]));
        dv.push_back(fd::partial_v(comps[c]));
    }
    for (int i = 0; i < g.nu; ++i)
        for (int j = 0; j < g.nv; ++j) {
            unit_dev = std::max(unit_dev, std::abs(s.l.at(i, j).norm() - 1.0));
            if (s.N) {
                Vec4 lu, lv;
                for (int c = 0; c < 4; ++c) {
                    lu[c] = du[c].at(i, j);
                    lv[c] = dv[c].at(i, j);
                }
                const Vec4& N = s.N->at(i, j);
                ortho_dev = std::max(ortho_dev, std::abs(N.norm() - 1.0));
                ortho_dev = std::max(ortho_dev, std::abs(N.dot(s.l.at(i, j))));
                ortho_dev = std::max(ortho_dev,
                                     std::abs(N.dot(lu)) / std::max(1.0, lu.norm()));
                ortho_dev = std::max(ortho_dev,
                                     std::abs(N.dot(lv)) / std::max(1.0, lv.norm()));
            }
        }
    rep.add("unit_position", unit_dev, unit_dev, 1e-6);
    // The tangents entering this check are finite-differenced, so the
    // achievable orthogonality is O(h^2) even for an exact normal field.
    if (s.N) rep.add("normal_orthogonality", ortho_dev, ortho_dev, hgate);

    geometry::SurfaceInvariants inv = geometry::invariants(s);
    auto gated_field = [&](const char* name, const ScalarField& f, double gate) {
        rep.add(name, window_max_abs(f, w), window_mean_abs(f, w), gate);
    };

    try {
        auto [c1, c2] = geometry::codazzi_residual(inv, w);
        gated_field("codazzi_gamma1", c1, hgate);
        gated_field("codazzi_gamma2", c2, hgate);
    } catch (const DomainError&) {
        rep.note("codazzi_skipped_umbilic", 1.0, 1.0);
    }
    gated_field("gauss_identity", geometry::gauss_residual(inv), hgate);

    ScalarField kint = geometry::gauss_curvature_intrinsic(inv);
    ScalarField kdev(g);
    for (std::size_t k = 0; k < kdev.values.size(); ++k)
        kdev.values[k] = kint.values[k] - inv.gauss_curvature.values[k];
    gated_field("curvature_two_routes", kdev, hgate);

    ScalarField minimality(g);
    for (std::size_t k = 0; k < minimality.values.size(); ++k)
        minimality.values[k] = inv.nu1.values[k] + inv.nu2.values[k];
    rep.note("mean_curvature", window_max_abs(minimality, w) / 2.0,
             window_mean_abs(minimality, w) / 2.0);

    rep.print();
    if (!csv_path.empty()) rep.write_csv(csv_path);
    if (!json_path.empty()) rep.write_json(json_path);
    return rep.overall_pass() ? 0 : 1;
}

int cmd_family(const std::string& nu_path, int angles, const std::string& out_dir,
               double disc_radius, int member_nodes, double gate_multiplier) {
    ScalarField nu_values = io::load_field(nu_path);
    auto ncf = sinh_poisson::NormalCurvatureField::from_values(nu_values);
    const Grid2D& g = nu_values.grid;

    family::FamilyOptions opts;
    opts.disc.center_u = 0.5 * (g.u_min + g.u_max);
    opts.disc.center_v = 0.5 * (g.v_min + g.v_max);
    opts.disc.radius = disc_radius;
    opts.member_nodes = member_nodes;
    opts.gate_multiplier = gate_multiplier;

    std::vector<double> ts;
    for (int k = 0; k < angles; ++k) ts.push_back(2.0 * M_PI * k / angles);

    std::filesystem::create_directories(out_dir);

    frame::ReconstructOptions base_opts;
    base_opts.gate_multiplier = gate_multiplier;
    auto base = frame::reconstruct_surface(ncf, opts.initial_frame, base_opts);
    geometry::SurfaceInvariants base_inv =
        geometry::fundamental_forms(base.surface);
    io::save_surface(base.surface, out_dir + "/base.json");

    auto members = family::build_family(ncf, ts, opts);

    std::ofstream csv(out_dir + "/isometry_report.csv", std::ios::binary);
    csv << "t,built,max_E_dev,max_G_dev,max_F,max_E_vs_inv_nu,pass\n";
    bool all_pass = true;
    for (std::size_t k = 0; k < members.size(); ++k) {
        const auto& m = members[k];
        if (m.built) {
            const Grid2D& mg = m.nu_t.nu.grid;
            const double gate = gate_multiplier * mg.hu() * mg.hu();
            auto rep = family::verify_isometry(base_inv.E, base_inv.G, m,
                                               opts.disc, gate);
            csv << report::fmt_double(m.t) << ",1,"
                << report::fmt_double(rep.max_E_dev) << ","
                << report::fmt_double(rep.max_G_dev) << ","
                << report::fmt_double(rep.max_F) << ","
                << report::fmt_double(rep.max_E_vs_inv_nu) << ","
                << (rep.pass ? 1 : 0) << "\n";
            all_pass = all_pass && rep.pass;
            char name[64];
            std::snprintf(name, sizeof(name), "/member_%02zu.json", k);
            io::save_surface(m.recon.surface, out_dir + name);
        } else {
            csv << report::fmt_double(m.t) << ",0,,,,,0\n";
            std::cerr << "member t=" << m.t << " failed: " << m.failure << "\n";
            all_pass = false;
        }
    }
    std::cout << (all_pass ? "family complete: all members isometric\n"
                           : "family incomplete or isometry gate failed\n");
    return all_pass ? 0 : 1;
}

hyper::Construction rebuild_construction(const io::ChartFile& cf) {
    const auto& p = cf.params;
    if (cf.kind == "biumbilical")
        return hyper::build_biumbilical_from_sphere(p.at("radius").get<double>(),
                                                    p.at("alpha").get<double>(),
                                                    cf.chart.n);
    if (cf.kind == "minimal-r3") {
        const std::string name = p.at("surface").get<std::string>();
        hyper::R3Chart chart;
        if (name == "catenoid") chart = hyper::catenoid_chart();
        else if (name == "helicoid") chart = hyper::helicoid_chart();
        else if (name == "plane") chart = hyper::plane_chart();
        else throw ConfigError("unknown r3 surface: " + name);
        return hyper::build_minimal_from_r3_surface(chart, cf.chart.n);
    }
    if (cf.kind == "minimal-s3") {
        const std::string name = p.at("surface").get<std::string>();
        if (name == "discrete") {
            if (!cf.source_surface)
                throw ConfigError("chart lacks its embedded source surface");
            return hyper::build_minimal_from_s3_surface(
                hyper::chart_from_surface(*cf.source_surface), cf.chart.n, 1e-3);
        }
        if (name == "clifford")
            return hyper::build_minimal_from_s3_surface(hyper::clifford_chart(),
                                                        cf.chart.n);
        throw ConfigError("unknown s3 surface: " + name);
    }
    throw ConfigError("unknown hypersurface kind: " + cf.kind);
}

int cmd_build_hyper(const std::string& kind, int n, const std::string& surface_name,
                    double radius, double alpha, const std::string& input,
                    const std::string& out, int grid_nodes) {
    hyper::Construction c;
    io::ordered_json params;
    std::optional<geometry::SurfaceS3> source;
    if (kind == "biumbilical") {
        c = hyper::build_biumbilical_from_sphere(radius, alpha, n);
        params["radius"] = radius;
        params["alpha"] = alpha;
    } else if (kind == "minimal-r3") {
        hyper::R3Chart chart;
        if (surface_name == "catenoid") chart = hyper::catenoid_chart();
        else if (surface_name == "helicoid") chart = hyper::helicoid_chart();
        else if (surface_name == "plane") chart = hyper::plane_chart();
        else throw ConfigError("--surface must be catenoid|helicoid|plane");
        c = hyper::build_minimal_from_r3_surface(chart, n);
        params["surface"] = surface_name;
    } else if (kind == "minimal-s3") {
        if (!input.empty()) {
            source = io::load_surface(input);
            c = hyper::build_minimal_from_s3_surface(
                hyper::chart_from_surface(*source), n, 1e-3);
            params["surface"] = "discrete";
        } else {
            c = hyper::build_minimal_from_s3_surface(hyper::clifford_chart(), n);
            params["surface"] = "clifford";
        }
    } else {
        throw ConfigError("--kind must be biumbilical|minimal-r3|minimal-s3");
    }

    Grid2D grid = c.domain;
    if (grid_nodes > 0)
        grid = Grid2D(grid.u_min, grid.u_max, grid.v_min, grid.v_max, grid_nodes,
                      grid_nodes);
    hyper::HypersurfaceChart chart = hyper::extract_chart(c, grid);
    io::save_chart(chart, kind, params, out, source ? &*source : nullptr);
    std::cout << "wrote chart (" << kind << ", n=" << n << ") to " << out << "\n";
    return 0;
}

int cmd_classify(const std::string& in, int samples, const std::string& csv_path,
                 double w_scale, unsigned seed, double tau) {
    io::ChartFile cf = io::load_chart(in);
    hyper::Construction c = rebuild_construction(cf);
    const int n = c.map.n;

    hyper::SpectrumOptions opts;
    opts.tau_spec = tau;

    std::mt19937 rng(seed);
    const Grid2D& d = c.domain;
    const double mu = 0.15 * (d.u_max - d.u_min);
    const double mv = 0.15 * (d.v_max - d.v_min);
    std::uniform_real_distribution<double> du(d.u_min + mu, d.u_max - mu);
    std::uniform_real_distribution<double> dv(d.v_min + mv, d.v_max - mv);
    std::uniform_real_distribution<double> dw(-w_scale, w_scale);

    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv) throw ConfigError("cannot write " + csv_path);
    csv << "u,v,w_norm";
    for (int k = 1; k <= n; ++k) csv << ",lambda_" << k;
    csv << ",type_number,classification\n";

    for (int s = 0; s < samples; ++s) {
        const double u = du(rng), v = dv(rng);
        hyper::VecX w(n - 2);
        for (int a = 0; a < n - 2; ++a) w[a] = dw(rng);
        hyper::ShapeSpectrum sp = hyper::shape_spectrum(c.map, u, v, w, opts);
        csv << report::fmt_double(u) << "," << report::fmt_double(v) << ","
            << report::fmt_double(w.norm());
        for (int k = 0; k < n; ++k)
            csv << "," << report::fmt_double(sp.eigenvalues[k]);
        csv << "," << sp.type_number << "," << hyper::to_string(sp.classification)
            << "\n";
    }
    std::cout << "classified " << samples << " sample points -> " << csv_path
              << "\n";
    return 0;
}

int cmd_export(const std::string& in, const std::string& projection,
               const std::string& out) {
    geometry::SurfaceS3 s = io::load_surface(in);
    mesh::Projection proj;
    if (projection == "stereographic") proj = mesh::Projection::stereographic;
    else if (projection == "drop-coordinate" || projection == "drop")
        proj = mesh::Projection::drop_coordinate;
    else throw ConfigError("--projection must be stereographic|drop-coordinate");
    mesh::export_obj(s.l, proj, out);
    std::cout << "wrote mesh to " << out << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
#ifdef _OPENMP
    if (const char* t = std::getenv("BONNET_THREADS")) {
        const int nt = std::atoi(t);
        if (nt > 0) omp_set_num_threads(nt);
    }
#endif

    CLI::App app{"Minimal-surface reconstruction and type-number-two "
                 "hypersurface toolkit"};
    app.require_subcommand(1);

    // solve-sinh-poisson
    std::string grid_spec, boundary_arg, guess_arg, out_path, history_path;
    double tol = 1e-8;
    int max_iters = 25;
    auto* solve = app.add_subcommand("solve-sinh-poisson",
                                     "Solve lap(f) + 4 sinh(f) = 0 with "
                                     "Dirichlet data; writes the nu field");
    solve->add_option("--grid", grid_spec, "u_min,u_max,v_min,v_max,nu,nv");
    solve->add_option("--boundary", boundary_arg,
                      "field file or zero|const:c|sinprod:a|sinsum:a|cosprod:a")
        ->required();
    solve->add_option("--guess", guess_arg, "initial guess (same forms)");
    solve->add_option("--tol", tol, "residual tolerance");
    solve->add_option("--max-iters", max_iters, "Newton iteration cap");
    solve->add_option("--out", out_path, "output nu field JSON")->required();
    solve->add_option("--history", history_path, "residual history CSV");

    // reconstruct
    std::string nu_path, frame_arg = "identity", window_arg = "auto",
                report_path;
    double gate_multiplier = 10.0;
    auto* rec = app.add_subcommand("reconstruct",
                                   "Integrate the moving frame of a gated nu "
                                   "field; writes surface JSON");
    rec->add_option("--nu", nu_path, "nu field JSON")->required();
    rec->add_option("--frame0", frame_arg, "'identity' or 16 comma values");
    rec->add_option("--window", window_arg, "'auto' or i0,i1,j0,j1");
    rec->add_option("--gate-multiplier", gate_multiplier,
                    "residual gates = multiplier * h^2");
    rec->add_option("--out", out_path, "output surface JSON")->required();
    rec->add_option("--report", report_path, "verification report JSON");

    // verify-surface
    std::string verify_in, verify_csv, verify_json;
    double verify_gate = 20.0;
    auto* ver = app.add_subcommand("verify-surface",
                                   "Measure invariants and structure-equation "
                                   "residuals; exit 1 on gate failure");
    ver->add_option("--in", verify_in, "surface JSON")->required();
    ver->add_option("--report", verify_csv, "report CSV")->required();
    ver->add_option("--json", verify_json, "report JSON");
    ver->add_option("--gate-multiplier", verify_gate,
                    "residual gates = multiplier * h^2");

    // associated-family
    std::string fam_nu, fam_out;
    int fam_angles = 8, fam_nodes = 65;
    double fam_radius = 0.45, fam_gate = 20.0;
    auto* fam = app.add_subcommand("associated-family",
                                   "Reconstruct the rotated-argument family "
                                   "and verify pairwise isometry");
    fam->add_option("--nu", fam_nu, "nu field JSON")->required();
    fam->add_option("--angles", fam_angles, "number of equally spaced angles");
    fam->add_option("--out", fam_out, "output directory")->required();
    fam->add_option("--disc-radius", fam_radius, "rotation disc radius");
    fam->add_option("--member-nodes", fam_nodes, "grid nodes per member");
    fam->add_option("--gate-multiplier", fam_gate, "isometry gate multiplier");

    // build-hypersurface
    std::string hs_kind, hs_surface = "catenoid", hs_input, hs_out;
    int hs_n = 3, hs_nodes = 0;
    double hs_radius = 1.0, hs_alpha = 0.0;
    auto* hs = app.add_subcommand("build-hypersurface",
                                  "Sample the envelope chart of a ruled "
                                  "construction");
    hs->add_option("--kind", hs_kind, "biumbilical|minimal-r3|minimal-s3")
        ->required();
    hs->add_option("--n", hs_n, "hypersurface dimension (>= 3)")->required();
    hs->add_option("--surface", hs_surface,
                   "catenoid|helicoid|plane (r3) or clifford (s3)");
    hs->add_option("--input", hs_input, "discrete surface JSON (minimal-s3)");
    hs->add_option("--radius", hs_radius, "sphere radius (biumbilical)");
    hs->add_option("--alpha", hs_alpha, "ruling rotation angle (biumbilical)");
    hs->add_option("--grid-nodes", hs_nodes, "chart grid nodes per axis");
    hs->add_option("--out", hs_out, "output chart JSON")->required();

    // classify
    std::string cl_in, cl_csv;
    int cl_samples = 100;
    double cl_wscale = 0.1, cl_tau = 1e-5;
    unsigned cl_seed = 1234;
    auto* cl = app.add_subcommand("classify",
                                  "Sample shape-operator spectra of a chart's "
                                  "construction");
    cl->add_option("--in", cl_in, "chart JSON")->required();
    cl->add_option("--samples", cl_samples, "number of sample points");
    cl->add_option("--report", cl_csv, "spectrum CSV")->required();
    cl->add_option("--w-scale", cl_wscale, "ruling coordinate range");
    cl->add_option("--seed", cl_seed, "sampling seed");
    cl->add_option("--tau", cl_tau, "spectral tolerance");

    // export
    std::string ex_in, ex_proj = "stereographic", ex_out;
    auto* ex = app.add_subcommand("export", "Write a Wavefront OBJ mesh");
    ex->add_option("--in", ex_in, "surface JSON")->required();
    ex->add_option("--projection", ex_proj, "stereographic|drop-coordinate");
    ex->add_option("--out", ex_out, "output OBJ path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed())
            return cmd_solve(grid_spec, boundary_arg, guess_arg, tol, max_iters,
                             out_path, history_path);
        if (rec->parsed())
            return cmd_reconstruct(nu_path, frame_arg, window_arg,
                                   gate_multiplier, out_path, report_path);
        if (ver->parsed())
            return cmd_verify(verify_in, verify_csv, verify_json, verify_gate);
        if (fam->parsed())
            return cmd_family(fam_nu, fam_angles, fam_out, fam_radius, fam_nodes,
                              fam_gate);
        if (hs->parsed())
            return cmd_build_hyper(hs_kind, hs_n, hs_surface, hs_radius, hs_alpha,
                                   hs_input, hs_out, hs_nodes);
        if (cl->parsed())
            return cmd_classify(cl_in, cl_samples, cl_csv, cl_wscale, cl_seed,
                                cl_tau);
        if (ex->parsed()) return cmd_export(ex_in, ex_proj, ex_out);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
