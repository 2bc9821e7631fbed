#include "bonnet/hypersurface.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <memory>
#include <sstream>

#include "bonnet/fd.hpp"
#include "bonnet/interp.hpp"

namespace bonnet::hyper {

const char* to_string(Classification c) {
    switch (c) {
        case Classification::flat: return "flat";
        case Classification::type_one: return "type_one";
        case Classification::type_two: return "type_two";
        case Classification::bi_umbilical: return "bi_umbilical";
        case Classification::other: return "other";
    }
    return "unknown";
}

namespace {

VecX eval_at(const HyperMap& m, const VecX& p) {
    return m.eval(p[0], p[1], p.segment(2, m.n - 2));
}

// 4th-order first derivative with respect to parameter k.
VecX d1(const HyperMap& m, const VecX& p, int k, double h) {
    VecX p2 = p, p1 = p, m1 = p, m2 = p;
    p2[k] += 2 * h;
    p1[k] += h;
    m1[k] -= h;
    m2[k] -= 2 * h;
    return (-eval_at(m, p2) + 8.0 * eval_at(m, p1) - 8.0 * eval_at(m, m1) +
            eval_at(m, m2)) / (12.0 * h);
}

// 4th-order pure second derivative.
VecX d2_diag(const HyperMap& m, const VecX& p, int k, double h) {
    VecX p2 = p, p1 = p, m1 = p, m2 = p;
    p2[k] += 2 * h;
    p1[k] += h;
    m1[k] -= h;
    m2[k] -= 2 * h;
    return (-eval_at(m, p2) + 16.0 * eval_at(m, p1) - 30.0 * eval_at(m, p) +
            16.0 * eval_at(m, m1) - eval_at(m, m2)) / (12.0 * h * h);
}

// Mixed derivative: outer 4th-order difference of the inner one.
VecX d2_mixed(const HyperMap& m, const VecX& p, int k, int l, double h) {
    auto inner = [&](double shift) {
        VecX q = p;
        q[k] += shift;
        return d1(m, q, l, h);
    };
    return (-inner(2 * h) + 8.0 * inner(h) - 8.0 * inner(-h) + inner(-2 * h)) /
           (12.0 * h);
}

Classification classify(const VecX& eigenvalues, double tau, int n) {
    std::vector<double> nonzero;
    for (int k = 0; k < n; ++k)
        if (std::abs(eigenvalues[k]) > tau) nonzero.push_back(eigenvalues[k]);
    switch (nonzero.size()) {
        case 0: return Classification::flat;
        case 1: return Classification::type_one;
        case 2:
            return std::abs(nonzero[0] - nonzero[1]) < tau
                       ? Classification::bi_umbilical
                       : Classification::type_two;
        default: return Classification::other;
    }
}

}  // namespace

ShapeSpectrum shape_spectrum(const HyperMap& m, double u, double v,
                             const VecX& w, const SpectrumOptions& opts) {
    const int n = m.n;
    const int dim = n + 1;
    if (w.size() != n - 2)
        throw DimensionError("shape_spectrum: ruling coordinate size mismatch");
    VecX p(n);
    p[0] = u;
    p[1] = v;
    p.segment(2, n - 2) = w;
    const double h = opts.fd_step;

    MatX J(dim, n);
    for (int k = 0; k < n; ++k) J.col(k) = d1(m, p, k, h);

    Eigen::JacobiSVD<MatX> svd(J, Eigen::ComputeFullU);
    const auto& sv = svd.singularValues();
    if (!(sv[n - 1] > opts.rank_tol * sv[0])) {
        std::ostringstream msg;
        msg << "shape_spectrum: Jacobian rank-deficient at (u,v)=(" << u << ","
            << v << "), |w|=" << w.norm() << " (sigma ratio "
            << sv[n - 1] / sv[0] << ")";
        throw RegularityError(msg.str());
    }

    VecX normal = svd.matrixU().col(n);
    if (opts.reference_normal) {
        if (normal.dot(*opts.reference_normal) < 0.0) normal = -normal;
    } else {
        int imax = 0;
        for (int k = 1; k < dim; ++k)
            if (std::abs(normal[k]) > std::abs(normal[imax])) imax = k;
        if (normal[imax] < 0.0) normal = -normal;
    }

    MatX metric = J.transpose() * J;
    MatX H(n, n);
    for (int k = 0; k < n; ++k) {
        H(k, k) = normal.dot(d2_diag(m, p, k, h));
        for (int l = k + 1; l < n; ++l)
            H(k, l) = H(l, k) = normal.dot(d2_mixed(m, p, k, l, h));
    }

    Eigen::GeneralizedSelfAdjointEigenSolver<MatX> es(H, metric);
    if (es.info() != Eigen::Success)
        throw Error("shape_spectrum: eigenproblem failed");

    ShapeSpectrum out;
    out.eigenvalues = es.eigenvalues();
    out.normal = normal;
    out.directions = MatX(dim, n);
    for (int k = 0; k < n; ++k) {
        VecX amb = J * es.eigenvectors().col(k);
        out.directions.col(k) = amb / amb.norm();
    }
    out.trace = out.eigenvalues.sum();
    out.type_number = 0;
    for (int k = 0; k < n; ++k)
        if (std::abs(out.eigenvalues[k]) > opts.tau_spec) ++out.type_number;
    out.classification = classify(out.eigenvalues, opts.tau_spec, n);
    return out;
}

namespace {

struct EigenSplit {
    int p1 = 0, p2 = 0;        // indices of the two largest |eigenvalue|
    std::vector<int> nulls;    // remaining indices, ascending eigenvalue
};

EigenSplit split_spectrum(const ShapeSpectrum& s, int n) {
    std::vector<int> order(n);
    for (int k = 0; k < n; ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return std::abs(s.eigenvalues[a]) > std::abs(s.eigenvalues[b]);
    });
    EigenSplit out;
    out.p1 = order[0];
    out.p2 = order[1];
    if (s.eigenvalues[out.p1] < s.eigenvalues[out.p2]) std::swap(out.p1, out.p2);
    out.nulls.assign(order.begin() + 2, order.end());
    std::sort(out.nulls.begin(), out.nulls.end());
    return out;
}

// Project the reference pair directions onto the displaced eigenplane and
// re-orthonormalize; keeps the gauge continuous through degenerate pairs.
void aligned_pair(const ShapeSpectrum& disp, const EigenSplit& dsplit,
                  const VecX& X_ref, const VecX& Y_ref, VecX& X_out,
                  VecX& Y_out) {
    MatX P(disp.directions.rows(), 2);
    P.col(0) = disp.directions.col(dsplit.p1);
    P.col(1) = disp.directions.col(dsplit.p2);
    VecX x = P * (P.transpose() * X_ref);
    x /= x.norm();
    VecX y = P * (P.transpose() * Y_ref);
    y -= y.dot(x) * x;
    y /= y.norm();
    X_out = x;
    Y_out = y;
}

}  // namespace

ConnectionScalars connection_scalars(const HyperMap& m, double u, double v,
                                     const VecX& w, const SpectrumOptions& opts,
                                     double eps) {
    const int n = m.n;
    ShapeSpectrum base = shape_spectrum(m, u, v, w, opts);
    EigenSplit split = split_spectrum(base, n);

    const double nu1 = base.eigenvalues[split.p1];
    const double nu2 = base.eigenvalues[split.p2];
    double max_null = 0.0;
    for (int k : split.nulls)
        max_null = std::max(max_null, std::abs(base.eigenvalues[k]));
    const double min_pair = std::min(std::abs(nu1), std::abs(nu2));
    if (!(min_pair > opts.tau_spec) || !(min_pair > 5.0 * max_null)) {
        std::ostringstream msg;
        msg << "connection_scalars: eigenvalue split unstable (pair min "
            << min_pair << ", null max " << max_null << ")";
        throw RegularityError(msg.str());
    }

    const VecX X0 = base.directions.col(split.p1);
    const VecX Y0 = base.directions.col(split.p2);

    VecX p(n);
    p[0] = u;
    p[1] = v;
    p.segment(2, n - 2) = w;

    // Rebuild the parameter eigenvectors from the generalized problem.
    // shape_spectrum returns only ambient directions; recover parameter
    // displacements by least squares against the Jacobian.
    MatX J(n + 1, n);
    for (int k = 0; k < n; ++k) J.col(k) = d1(m, p, k, opts.fd_step);
    auto param_dir = [&](const VecX& ambient) {
        return J.colPivHouseholderQr().solve(ambient).eval();
    };

    SpectrumOptions dopts = opts;
    dopts.reference_normal = &base.normal;

    auto eval_displaced = [&](const VecX& step, ShapeSpectrum& sp, VecX& Xd,
                              VecX& Yd, double& dnu1, double& dnu2) {
        VecX q = p + step;
        sp = shape_spectrum(m, q[0], q[1], q.segment(2, n - 2), dopts);
        EigenSplit dsplit = split_spectrum(sp, n);
        aligned_pair(sp, dsplit, X0, Y0, Xd, Yd);
        dnu1 = sp.eigenvalues[dsplit.p1];
        dnu2 = sp.eigenvalues[dsplit.p2];
    };

    ConnectionScalars out;
    out.lambda = VecX::Zero(n - 2);
    out.mu = VecX::Zero(n - 2);
    out.sigma = VecX::Zero(n - 2);

    ShapeSpectrum sp;
    VecX Xp, Yp, Xm, Ym;
    double nu1p, nu2p, nu1m, nu2m;

    for (int a = 0; a < n - 2; ++a) {
        const VecX dir = param_dir(base.directions.col(split.nulls[a]));
        eval_displaced(eps * dir, sp, Xp, Yp, nu1p, nu2p);
        eval_displaced(-eps * dir, sp, Xm, Ym, nu1m, nu2m);
        out.lambda[a] = (nu1p - nu1m) / (2.0 * eps * nu1);
        out.mu[a] = (nu2p - nu2m) / (2.0 * eps * nu2);
        out.sigma[a] = ((Xp - Xm) / (2.0 * eps)).dot(Y0);
    }

    {
        const VecX dirX = param_dir(X0);
        eval_displaced(eps * dirX, sp, Xp, Yp, nu1p, nu2p);
        eval_displaced(-eps * dirX, sp, Xm, Ym, nu1m, nu2m);
        out.gamma1 = ((Xp - Xm) / (2.0 * eps)).dot(Y0);
    }
    {
        const VecX dirY = param_dir(Y0);
        eval_displaced(eps * dirY, sp, Xp, Yp, nu1p, nu2p);
        eval_displaced(-eps * dirY, sp, Xm, Ym, nu1m, nu2m);
        out.gamma2 = -((Yp - Ym) / (2.0 * eps)).dot(X0);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Constructions
// ---------------------------------------------------------------------------

namespace {

// Conformal chart of the unit 2-sphere (inverse stereographic).
Eigen::Vector3d stereo_sphere(double u, double v) {
    const double d = 1.0 + u * u + v * v;
    return Eigen::Vector3d(2.0 * u / d, 2.0 * v / d, (u * u + v * v - 1.0) / d);
}

VecX embed(const Eigen::Vector3d& x, int dim) {
    VecX out = VecX::Zero(dim);
    out.head<3>() = x;
    return out;
}

VecX embed4(const Eigen::Vector4d& x, int dim) {
    VecX out = VecX::Zero(dim);
    out.head<4>() = x;
    return out;
}

// Mean curvature of an R^3 chart by 4th-order differences.
double mean_curvature_r3(const std::function<Eigen::Vector3d(double, double)>& z,
                         double u, double v, double h = 1e-2) {
    auto d1u = [&](double uu, double vv) {
        return ((-z(uu + 2 * h, vv) + 8.0 * z(uu + h, vv) - 8.0 * z(uu - h, vv) +
                 z(uu - 2 * h, vv)) / (12.0 * h)).eval();
    };
    auto d1v = [&](double uu, double vv) {
        return ((-z(uu, vv + 2 * h) + 8.0 * z(uu, vv + h) - 8.0 * z(uu, vv - h) +
                 z(uu, vv - 2 * h)) / (12.0 * h)).eval();
    };
    Eigen::Vector3d zu = d1u(u, v), zv = d1v(u, v);
    Eigen::Vector3d zuu = (-z(u + 2 * h, v) + 16.0 * z(u + h, v) -
                           30.0 * z(u, v) + 16.0 * z(u - h, v) -
                           z(u - 2 * h, v)) / (12.0 * h * h);
    Eigen::Vector3d zvv = (-z(u, v + 2 * h) + 16.0 * z(u, v + h) -
                           30.0 * z(u, v) + 16.0 * z(u, v - h) -
                           z(u, v - 2 * h)) / (12.0 * h * h);
    Eigen::Vector3d zuv = (-d1u(u, v + 2 * h) + 8.0 * d1u(u, v + h) -
                           8.0 * d1u(u, v - h) + d1u(u, v - 2 * h)) / (12.0 * h);
    Eigen::Vector3d N = zu.cross(zv).normalized();
    const double E = zu.dot(zu), F = zu.dot(zv), G = zv.dot(zv);
    const double e = zuu.dot(N), f = zuv.dot(N), g = zvv.dot(N);
    return (e * G - 2.0 * f * F + g * E) / (2.0 * (E * G - F * F));
}

Vec4 complement4(const Vec4& a, const Vec4& b, const Vec4& c) {
    auto minor = [&](int drop) {
        int cols[3], m = 0;
        for (int k = 0; k < 4; ++k)
            if (k != drop) cols[m++] = k;
        return a[cols[0]] * (b[cols[1]] * c[cols[2]] - b[cols[2]] * c[cols[1]]) -
               a[cols[1]] * (b[cols[0]] * c[cols[2]] - b[cols[2]] * c[cols[0]]) +
               a[cols[2]] * (b[cols[0]] * c[cols[1]] - b[cols[1]] * c[cols[0]]);
    };
    Vec4 d;
    d[0] = -minor(0);
    d[1] = minor(1);
    d[2] = -minor(2);
    d[3] = minor(3);
    return d;
}

// Mean curvature of a chart on the 3-sphere, measured against the
// in-sphere normal.
double mean_curvature_s3(const std::function<Eigen::Vector4d(double, double)>& z,
                         double u, double v, double h = 1e-2) {
    auto d1u = [&](double uu, double vv) {
        return ((-z(uu + 2 * h, vv) + 8.0 * z(uu + h, vv) - 8.0 * z(uu - h, vv) +
                 z(uu - 2 * h, vv)) / (12.0 * h)).eval();
    };
    auto d1v = [&](double uu, double vv) {
        return ((-z(uu, vv + 2 * h) + 8.0 * z(uu, vv + h) - 8.0 * z(uu, vv - h) +
                 z(uu, vv - 2 * h)) / (12.0 * h)).eval();
    };
    Eigen::Vector4d zu = d1u(u, v), zv = d1v(u, v);
    Eigen::Vector4d zuu = (-z(u + 2 * h, v) + 16.0 * z(u + h, v) -
                           30.0 * z(u, v) + 16.0 * z(u - h, v) -
                           z(u - 2 * h, v)) / (12.0 * h * h);
    Eigen::Vector4d zvv = (-z(u, v + 2 * h) + 16.0 * z(u, v + h) -
                           30.0 * z(u, v) + 16.0 * z(u, v - h) -
                           z(u, v - 2 * h)) / (12.0 * h * h);
    Eigen::Vector4d zuv = (-d1u(u, v + 2 * h) + 8.0 * d1u(u, v + h) -
                           8.0 * d1u(u, v - h) + d1u(u, v - 2 * h)) / (12.0 * h);
    Eigen::Vector4d N = complement4(zu, zv, z(u, v)).normalized();
    const double E = zu.dot(zu), F = zu.dot(zv), G = zv.dot(zv);
    const double e = zuu.dot(N), f = zuv.dot(N), g = zvv.dot(N);
    return (e * G - 2.0 * f * F + g * E) / (2.0 * (E * G - F * F));
}

}  // namespace

Construction build_biumbilical_from_sphere(double radius, double alpha, int n) {
    if (n < 3) throw DomainError("build_biumbilical_from_sphere: need n >= 3");
    if (!(radius > 0.0))
        throw DomainError("build_biumbilical_from_sphere: radius must be > 0");
    const int dim = n + 1;
    const double ca = std::cos(alpha), sa = std::sin(alpha);

    auto omega = [](double u, double v) { return stereo_sphere(u, v); };
    auto e1 = [=](double u, double v) {
        VecX out = embed(-sa * omega(u, v), dim);
        out[3] += ca;
        return out;
    };

    Construction c;
    c.kind = "biumbilical";
    c.domain = Grid2D(-0.8, 0.8, -0.8, 0.8, 65, 65);
    c.base = [=](double u, double v) { return embed(radius * omega(u, v), dim); };
    c.normal = [=](double u, double v) {
        VecX out = embed(ca * omega(u, v), dim);
        out[3] += sa;
        return out;
    };
    c.basis = [=](double u, double v, int a) {
        if (a == 0) return e1(u, v);
        VecX out = VecX::Zero(dim);
        out[3 + a] = 1.0;  // constant directions beyond the rotated one
        return out;
    };
    c.map.n = n;
    c.map.eval = [=, base = c.base, basis = c.basis](double u, double v,
                                                     const VecX& w) {
        VecX out = base(u, v);
        for (int a = 0; a < n - 2; ++a) out += w[a] * basis(u, v, a);
        return out;
    };
    return c;
}

R3Chart catenoid_chart() {
    R3Chart c;
    c.name = "catenoid";
    c.domain = Grid2D(-0.8, 0.8, -0.8, 0.8, 65, 65);
    c.z = [](double u, double v) {
        return Eigen::Vector3d(std::cosh(u) * std::cos(v),
                               std::cosh(u) * std::sin(v), u);
    };
    return c;
}

R3Chart helicoid_chart() {
    R3Chart c;
    c.name = "helicoid";
    c.domain = Grid2D(-0.8, 0.8, -0.8, 0.8, 65, 65);
    c.z = [](double u, double v) {
        return Eigen::Vector3d(std::sinh(u) * std::sin(v),
                               -std::sinh(u) * std::cos(v), v);
    };
    return c;
}

R3Chart plane_chart() {
    R3Chart c;
    c.name = "plane";
    c.domain = Grid2D(-1.0, 1.0, -1.0, 1.0, 33, 33);
    c.z = [](double u, double v) { return Eigen::Vector3d(u, v, 0.0); };
    return c;
}

Construction build_minimal_from_r3_surface(const R3Chart& chart, int n,
                                           double minimal_tol) {
    if (n < 3) throw DomainError("build_minimal_from_r3_surface: need n >= 3");
    const int dim = n + 1;

    double worst_H = 0.0;
    for (int i = 1; i < 6; ++i)
        for (int j = 1; j < 6; ++j) {
            const double u =
                chart.domain.u_min +
                i * (chart.domain.u_max - chart.domain.u_min) / 6.0;
            const double v =
                chart.domain.v_min +
                j * (chart.domain.v_max - chart.domain.v_min) / 6.0;
            worst_H = std::max(worst_H, std::abs(mean_curvature_r3(chart.z, u, v)));
        }
    if (worst_H > minimal_tol) {
        std::ostringstream msg;
        msg << "build_minimal_from_r3_surface: chart '" << chart.name
            << "' is not minimal (max |H| = " << worst_H << ")";
        throw DomainError(msg.str());
    }

    Construction c;
    c.kind = "minimal-r3";
    c.domain = chart.domain;
    c.base = [z = chart.z, dim](double u, double v) { return embed(z(u, v), dim); };
    c.normal = [z = chart.z, dim](double u, double v) {
        const double h = 1e-4;
        Eigen::Vector3d zu = (z(u + h, v) - z(u - h, v)) / (2.0 * h);
        Eigen::Vector3d zv = (z(u, v + h) - z(u, v - h)) / (2.0 * h);
        return embed(zu.cross(zv).normalized(), dim);
    };
    c.basis = [dim](double, double, int a) {
        VecX out = VecX::Zero(dim);
        out[3 + a] = 1.0;
        return out;
    };
    c.map.n = n;
    c.map.eval = [base = c.base, n](double u, double v, const VecX& w) {
        VecX out = base(u, v);
        for (int a = 0; a < n - 2; ++a) out[3 + a] += w[a];
        return out;
    };
    return c;
}

S3Chart clifford_chart() {
    S3Chart c;
    c.name = "clifford";
    c.radius = 1.0;
    c.domain = Grid2D(-0.9, 0.9, -0.9, 0.9, 65, 65);
    const double s = 1.0 / std::sqrt(2.0);
    c.z = [s](double u, double v) {
        return Eigen::Vector4d(s * std::cos(u), s * std::sin(u), s * std::cos(v),
                               s * std::sin(v));
    };
    return c;
}

S3Chart chart_from_surface(const geometry::SurfaceS3& s) {
    S3Chart c;
    c.name = "discrete";
    c.radius = 1.0;
    // Inset the recommended domain so finite-difference probes of the
    // chart never leave the interpolation grid.
    const double mu = 0.05 * (s.grid.u_max - s.grid.u_min);
    const double mv = 0.05 * (s.grid.v_max - s.grid.v_min);
    c.domain = Grid2D(s.grid.u_min + mu, s.grid.u_max - mu, s.grid.v_min + mv,
                      s.grid.v_max - mv, s.grid.nu, s.grid.nv);
    auto interps = std::make_shared<std::vector<BicubicInterpolator>>();
    for (int k = 0; k < 4; ++k)
        interps->emplace_back(s.l.component(k));
    c.z = [interps](double u, double v) {
        Eigen::Vector4d out;
        for (int k = 0; k < 4; ++k) out[k] = (*interps)[static_cast<size_t>(k)](u, v);
        return (out / out.norm()).eval();
    };
    return c;
}

Construction build_minimal_from_s3_surface(const S3Chart& chart, int n,
                                           double minimal_tol) {
    if (n < 3) throw DomainError("build_minimal_from_s3_surface: need n >= 3");
    const int dim = n + 1;

    const double margin_u = 0.1 * (chart.domain.u_max - chart.domain.u_min);
    const double margin_v = 0.1 * (chart.domain.v_max - chart.domain.v_min);
    double worst_H = 0.0;
    for (int i = 0; i <= 4; ++i)
        for (int j = 0; j <= 4; ++j) {
            const double u = chart.domain.u_min + margin_u +
                             i * (chart.domain.u_max - chart.domain.u_min -
                                  2 * margin_u) / 4.0;
            const double v = chart.domain.v_min + margin_v +
                             j * (chart.domain.v_max - chart.domain.v_min -
                                  2 * margin_v) / 4.0;
            worst_H = std::max(worst_H, std::abs(mean_curvature_s3(chart.z, u, v)));
        }
    if (worst_H > minimal_tol) {
        std::ostringstream msg;
        msg << "build_minimal_from_s3_surface: chart '" << chart.name
            << "' is not minimal in the sphere (max |H| = " << worst_H << ")";
        throw DomainError(msg.str());
    }

    Construction c;
    c.kind = "minimal-s3";
    c.domain = chart.domain;
    const double r = chart.radius;
    c.base = [z = chart.z, dim](double u, double v) {
        return embed4(z(u, v), dim);
    };
    c.normal = [z = chart.z, dim](double u, double v) {
        const double h = 1e-4;
        Eigen::Vector4d zu = (z(u + h, v) - z(u - h, v)) / (2.0 * h);
        Eigen::Vector4d zv = (z(u, v + h) - z(u, v - h)) / (2.0 * h);
        return embed4(complement4(zu, zv, z(u, v)).normalized(), dim);
    };
    // The complement of span{z_u, z_v, N} inside R^4 is the radial line,
    // so the first ruling direction is z/r; the rest are constants.
    c.basis = [z = chart.z, r, dim](double u, double v, int a) {
        if (a == 0) return (embed4(z(u, v), dim) / r).eval();
        VecX out = VecX::Zero(dim);
        out[4 + a - 1] = 1.0;
        return out;
    };
    c.map.n = n;
    c.map.eval = [base = c.base, basis = c.basis, n](double u, double v,
                                                     const VecX& w) {
        VecX out = base(u, v);
        for (int a = 0; a < n - 2; ++a) out += w[a] * basis(u, v, a);
        return out;
    };
    return c;
}

// ---------------------------------------------------------------------------
// Envelope charts
// ---------------------------------------------------------------------------

void HypersurfaceChart::compute_metric() {
    const int dim = n + 1;
    E = ScalarField(grid);
    F = ScalarField(grid);
    G = ScalarField(grid);
    W2 = ScalarField(grid);
    std::vector<ScalarField> du(dim), dv(dim);
    for (int c = 0; c < dim; ++c) {
        ScalarField comp(grid);
        for (std::size_t k = 0; k < l.size(); ++k) comp.values[k] = l[k][c];
        du[c] = fd::partial_u(comp);
        dv[c] = fd::partial_v(comp);
    }
    for (std::size_t k = 0; k < l.size(); ++k) {
        double EE = 0.0, FF = 0.0, GG = 0.0;
        for (int c = 0; c < dim; ++c) {
            EE += du[c].values[k] * du[c].values[k];
            FF += du[c].values[k] * dv[c].values[k];
            GG += dv[c].values[k] * dv[c].values[k];
        }
        E.values[k] = EE;
        F.values[k] = FF;
        G.values[k] = GG;
        W2.values[k] = EE * GG - FF * FF;
    }
}

HypersurfaceChart extract_chart(const Construction& c, const Grid2D& grid,
                                const VecX* translation) {
    HypersurfaceChart chart;
    chart.n = c.map.n;
    chart.grid = grid;
    const int dim = chart.n + 1;
    chart.l.assign(grid.size(), VecX::Zero(dim));
    chart.r = ScalarField(grid);
    chart.basis.assign(chart.n - 2, std::vector<VecX>(grid.size(), VecX::Zero(dim)));

    for (int i = 0; i < grid.nu; ++i)
        for (int j = 0; j < grid.nv; ++j) {
            const double u = grid.u(i), v = grid.v(j);
            VecX nrm = c.normal(u, v);
            nrm /= nrm.norm();
            VecX z = c.base(u, v);
            if (translation) z += *translation;
            chart.l[grid.index(i, j)] = nrm;
            chart.r.at(i, j) = z.dot(nrm);
            for (int a = 0; a < chart.n - 2; ++a)
                chart.basis[a][grid.index(i, j)] = c.basis(u, v, a);
        }
    chart.compute_metric();
    return chart;
}

namespace {

double node_du(const ScalarField& f, int i, int j) {
    const Grid2D& g = f.grid;
    const double h = g.hu();
    if (i == 0)
        return (-3.0 * f.at(0, j) + 4.0 * f.at(1, j) - f.at(2, j)) / (2.0 * h);
    if (i == g.nu - 1)
        return (3.0 * f.at(i, j) - 4.0 * f.at(i - 1, j) + f.at(i - 2, j)) /
               (2.0 * h);
    return (f.at(i + 1, j) - f.at(i - 1, j)) / (2.0 * h);
}

double node_dv(const ScalarField& f, int i, int j) {
    const Grid2D& g = f.grid;
    const double h = g.hv();
    if (j == 0)
        return (-3.0 * f.at(i, 0) + 4.0 * f.at(i, 1) - f.at(i, 2)) / (2.0 * h);
    if (j == g.nv - 1)
        return (3.0 * f.at(i, j) - 4.0 * f.at(i, j - 1) + f.at(i, j - 2)) /
               (2.0 * h);
    return (f.at(i, j + 1) - f.at(i, j - 1)) / (2.0 * h);
}

}  // namespace

VecX envelope_point(const HypersurfaceChart& chart, int i, int j, const VecX& w,
                    double w2_tol) {
    const Grid2D& g = chart.grid;
    const int dim = chart.n + 1;
    if (w.size() != chart.n - 2)
        throw DimensionError("envelope_point: ruling coordinate size mismatch");
    const double W2 = chart.W2.at(i, j);
    if (!(W2 > w2_tol))
        throw DomainError("envelope_point: degenerate envelope (W^2 <= tol)", i, j);

    const double ru = node_du(chart.r, i, j);
    const double rv = node_dv(chart.r, i, j);
    const double E = chart.E.at(i, j), F = chart.F.at(i, j), G = chart.G.at(i, j);

    VecX lu = VecX::Zero(dim), lv = VecX::Zero(dim);
    {
        ScalarField comp(g);
        for (int c = 0; c < dim; ++c) {
            for (std::size_t k = 0; k < chart.l.size(); ++k)
                comp.values[k] = chart.l[k][c];
            lu[c] = node_du(comp, i, j);
            lv[c] = node_dv(comp, i, j);
        }
    }

    VecX X = chart.r.at(i, j) * chart.l_at(i, j) +
             ((G * ru - F * rv) / W2) * lu + ((E * rv - F * ru) / W2) * lv;
    for (int a = 0; a < chart.n - 2; ++a)
        X += w[a] * chart.basis[a][g.index(i, j)];
    return X;
}

namespace {

struct ChartDerivatives {
    std::vector<ScalarField> lu, lv, luu, luv, lvv;  // per component
};

ChartDerivatives differentiate_chart(const HypersurfaceChart& chart) {
    const int dim = chart.n + 1;
    ChartDerivatives d;
    d.lu.resize(dim);
    d.lv.resize(dim);
    d.luu.resize(dim);
    d.luv.resize(dim);
    d.lvv.resize(dim);
    for (int c = 0; c < dim; ++c) {
        ScalarField comp(chart.grid);
        for (std::size_t k = 0; k < chart.l.size(); ++k)
            comp.values[k] = chart.l[k][c];
        d.lu[c] = fd::partial_u(comp);
        d.lv[c] = fd::partial_v(comp);
        d.luu[c] = fd::second_u(comp);
        d.luv[c] = fd::partial_v(d.lu[c]);
        d.lvv[c] = fd::second_v(comp);
    }
    return d;
}

double conformality_defect(const HypersurfaceChart& chart) {
    const NodeWindow w = interior_window(chart.grid);
    double scale = 0.0, defect = 0.0;
    for (int i = w.i0; i <= w.i1; ++i)
        for (int j = w.j0; j <= w.j1; ++j) {
            scale = std::max(scale, chart.E.at(i, j));
            defect = std::max(defect,
                              std::abs(chart.E.at(i, j) - chart.G.at(i, j)));
            defect = std::max(defect, std::abs(chart.F.at(i, j)));
        }
    return scale > 0.0 ? defect / scale : 0.0;
}

}  // namespace

BiumbilicalResiduals biumbilical_system_residual(
    const HypersurfaceChart& chart, const SystemResidualOptions& opts) {
    const double defect = conformality_defect(chart);
    if (opts.enforce_conformality && defect > opts.conformality_tol) {
        std::ostringstream msg;
        msg << "biumbilical_system_residual: chart violates the conformal "
               "gauge (relative defect "
            << defect << ")";
        throw ConformalityError(msg.str(), defect);
    }

    const Grid2D& g = chart.grid;
    const int dim = chart.n + 1;
    ChartDerivatives d = differentiate_chart(chart);
    ScalarField E_u = fd::partial_u(chart.E);
    ScalarField E_v = fd::partial_v(chart.E);
    ScalarField r_u = fd::partial_u(chart.r);
    ScalarField r_v = fd::partial_v(chart.r);
    ScalarField r_uu = fd::second_u(chart.r);
    ScalarField r_uv = fd::partial_v(r_u);
    ScalarField r_vv = fd::second_v(chart.r);

    BiumbilicalResiduals out{ScalarField(g), ScalarField(g), ScalarField(g),
                             ScalarField(g), defect};
    const NodeWindow w = interior_window(g);
#pragma omp parallel for
    for (int i = w.i0; i <= w.i1; ++i)
        for (int j = w.j0; j <= w.j1; ++j) {
            const double E = chart.E.at(i, j);
            const double au = E_u.at(i, j) / E;
            const double av = E_v.at(i, j) / E;
            double wave = 0.0, mixed = 0.0;
            for (int c = 0; c < dim; ++c) {
                const double lu = d.lu[c].at(i, j), lv = d.lv[c].at(i, j);
                const double r1 = d.luu[c].at(i, j) - d.lvv[c].at(i, j) -
                                  au * lu + av * lv;
                const double r2 = 2.0 * d.luv[c].at(i, j) - av * lu - au * lv;
                wave += r1 * r1;
                mixed += r2 * r2;
            }
            out.vec_wave.at(i, j) = std::sqrt(wave);
            out.vec_mixed.at(i, j) = std::sqrt(mixed);
            out.scalar_wave.at(i, j) =
                std::abs(r_uu.at(i, j) - r_vv.at(i, j) - au * r_u.at(i, j) +
                         av * r_v.at(i, j));
            out.scalar_mixed.at(i, j) =
                std::abs(2.0 * r_uv.at(i, j) - av * r_u.at(i, j) -
                         au * r_v.at(i, j));
        }
    return out;
}

MinimalResiduals minimal_system_residual(const HypersurfaceChart& chart,
                                         const SystemResidualOptions& opts) {
    const double defect = conformality_defect(chart);
    if (opts.enforce_conformality && defect > opts.conformality_tol) {
        std::ostringstream msg;
        msg << "minimal_system_residual: chart violates the conformal gauge "
               "(relative defect "
            << defect << ")";
        throw ConformalityError(msg.str(), defect);
    }

    const Grid2D& g = chart.grid;
    const int dim = chart.n + 1;
    ChartDerivatives d = differentiate_chart(chart);
    ScalarField r_uu = fd::second_u(chart.r);
    ScalarField r_vv = fd::second_v(chart.r);

    MinimalResiduals out{ScalarField(g), ScalarField(g), defect};
    const NodeWindow w = interior_window(g);
#pragma omp parallel for
    for (int i = w.i0; i <= w.i1; ++i)
        for (int j = w.j0; j <= w.j1; ++j) {
            const double E = chart.E.at(i, j);
            double acc = 0.0;
            for (int c = 0; c < dim; ++c) {
                const double rc = d.luu[c].at(i, j) + d.lvv[c].at(i, j) +
                                  2.0 * E * chart.l[g.index(i, j)][c];
                acc += rc * rc;
            }
            out.vec_field.at(i, j) = std::sqrt(acc);
            out.scalar.at(i, j) = std::abs(r_uu.at(i, j) + r_vv.at(i, j) +
                                           2.0 * E * chart.r.at(i, j));
        }
    return out;
}

SphereFit fit_sphere(const std::vector<VecX>& points) {
    if (points.size() < 5)
        throw DimensionError("fit_sphere: need at least 5 points");
    const int dim = static_cast<int>(points.front().size());
    MatX A(points.size(), dim + 1);
    VecX b(points.size());
    for (std::size_t k = 0; k < points.size(); ++k) {
        A.row(k).head(dim) = 2.0 * points[k].transpose();
        A(k, dim) = -1.0;
        b[k] = points[k].squaredNorm();
    }
    VecX sol = A.colPivHouseholderQr().solve(b);
    SphereFit fit;
    fit.center = sol.head(dim);
    const double rho = sol[dim];
    fit.radius = std::sqrt(std::max(0.0, fit.center.squaredNorm() - rho));
    double acc = 0.0;
    for (const auto& p : points) {
        const double dev = (p - fit.center).norm() - fit.radius;
        acc += dev * dev;
    }
    fit.rms_residual = std::sqrt(acc / points.size());
    return fit;
}

}  // namespace bonnet::hyper
