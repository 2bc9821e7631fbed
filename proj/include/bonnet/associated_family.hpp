#pragma once

#include <string>
#include <vector>

#include "bonnet/frame.hpp"
#include "bonnet/sinh_poisson.hpp"

// Associated-family construction: rotating the arguments of a solution
// field produces a one-parameter family of solutions, and each member
// reconstructs to a surface isometric to the base.
namespace bonnet::family {

struct RotationDisc {
    double center_u = 0.5, center_v = 0.5;
    double radius = 0.45;
};

// Rotated parameter point: c + R(t) (p - c).
inline std::pair<double, double> rotate_point(const RotationDisc& d, double t,
                                              double u, double v) {
    const double du = u - d.center_u, dv = v - d.center_v;
    const double ct = std::cos(t), st = std::sin(t);
    return {d.center_u + ct * du - st * dv, d.center_v + st * du + ct * dv};
}

// Sample nu at rotated arguments onto the axis-aligned square inscribed
// in the disc (bicubic interpolation). Throws DomainError when the disc
// does not fit inside the source grid.
sinh_poisson::NormalCurvatureField rotate_solution(
    const sinh_poisson::NormalCurvatureField& nu, double t,
    const RotationDisc& disc, int nodes_u, int nodes_v);

struct FamilyMember {
    double t = 0.0;
    sinh_poisson::NormalCurvatureField nu_t;
    frame::ReconstructionResult recon;
    bool built = false;
    std::string failure;
};

struct FamilyOptions {
    RotationDisc disc;
    int member_nodes = 65;       // forced odd so the center is a node
    double gate_multiplier = 20.0;
    Mat4 initial_frame = Mat4::Identity();
};

// Reconstruct one member per angle with a shared initial frame at the
// disc center. Gate failures are recorded per member; survivors build.
std::vector<FamilyMember> build_family(
    const sinh_poisson::NormalCurvatureField& nu, const std::vector<double>& ts,
    const FamilyOptions& opts = {});

struct IsometryReport {
    double t = 0.0;
    double max_E_dev = 0.0;        // |E_t - E o R_t|
    double max_G_dev = 0.0;
    double max_F = 0.0;
    double max_E_vs_inv_nu = 0.0;  // |E_t - 1/nu_t|
    double gate = 0.0;
    bool pass = false;
};

// Compare the member metric with the rotated base metric. base_E/base_G
// are measured on the base grid (covering the disc); gate is absolute.
IsometryReport verify_isometry(const ScalarField& base_E,
                               const ScalarField& base_G,
                               const FamilyMember& member,
                               const RotationDisc& disc, double gate);

}  // namespace bonnet::family
