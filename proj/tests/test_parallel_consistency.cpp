#include <doctest.h>

#include "bonnet/fd.hpp"
#include "oracles.hpp"

using namespace bonnet;

// The OpenMP kernels and their serial references share the per-node
// stencils, so results must agree bitwise.

TEST_CASE("parallel and serial derivative kernels agree bitwise") {
    Grid2D g(0, 1, -0.5, 0.5, 67, 53);
    ScalarField f = oracles::random_smooth_field(g, 7);

    ScalarField du_p = fd::partial_u(f);
    ScalarField du_s = fd::serial::partial_u(f);
    ScalarField dv_p = fd::partial_v(f);
    ScalarField dv_s = fd::serial::partial_v(f);
    ScalarField lap_p = fd::laplacian(f);
    ScalarField lap_s = fd::serial::laplacian(f);

    for (std::size_t k = 0; k < f.values.size(); ++k) {
        CHECK(du_p.values[k] == du_s.values[k]);
        CHECK(dv_p.values[k] == dv_s.values[k]);
        CHECK(lap_p.values[k] == lap_s.values[k]);
    }
}
