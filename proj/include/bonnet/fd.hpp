#pragma once

#include <vector>

#include "bonnet/grid.hpp"

// Finite-difference calculus on uniform grids. Second-order central
// stencils at interior nodes, second-order one-sided closures at the
// boundary. The OpenMP kernels in fd:: are the production path; the
// fd::serial:: twins compute node-for-node identical results and are
// kept as the reference implementation for tests and benchmarks.
namespace bonnet::fd {

ScalarField partial_u(const ScalarField& f);
ScalarField partial_v(const ScalarField& f);

// 5-point Laplacian at interior nodes; boundary entries are zero and
// excluded from every residual norm (see interior_window).
ScalarField laplacian(const ScalarField& f);

// Pure second derivatives, central inside with 4-point one-sided
// closures at the edges (second order, exact on quadratics).
ScalarField second_u(const ScalarField& f);
ScalarField second_v(const ScalarField& f);

// Cumulative trapezoid antiderivative along row v_index, zero at u0_index.
std::vector<double> integrate_along_u(const ScalarField& f, int v_index,
                                      int u0_index);
// Same along column u_index, zero at v0_index.
std::vector<double> integrate_along_v(const ScalarField& f, int u_index,
                                      int v0_index);

namespace serial {
ScalarField partial_u(const ScalarField& f);
ScalarField partial_v(const ScalarField& f);
ScalarField laplacian(const ScalarField& f);
}  // namespace serial

}  // namespace bonnet::fd
