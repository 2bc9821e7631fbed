// Timing harness comparing the OpenMP kernels against their serial
// references, plus the column-parallel frame transport at different
// thread counts. Results of the two paths are also diffed so a speedup
// never comes from computing something else.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "bonnet/fd.hpp"
#include "bonnet/frame.hpp"
#include "bonnet/sinh_poisson.hpp"

using namespace bonnet;
using clock_type = std::chrono::steady_clock;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
    fn();  // warm up
    auto t0 = clock_type::now();
    for (int k = 0; k < reps; ++k) fn();
    auto t1 = clock_type::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

double max_diff(const ScalarField& a, const ScalarField& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.values.size(); ++k)
        m = std::max(m, std::abs(a.values[k] - b.values[k]));
    return m;
}

}  // namespace

int main(int argc, char** argv) {
    const int n = argc > 1 ? std::atoi(argv[1]) : 513;
    const int reps = argc > 2 ? std::atoi(argv[2]) : 20;

    Grid2D g(0, 1, 0, 1, n, n);
    ScalarField f = ScalarField::sample(g, [](double u, double v) {
        return std::exp(0.2 * std::sin(3.1 * u) * std::cos(2.7 * v));
    });
    auto ncf = sinh_poisson::NormalCurvatureField::from_values(f);

#ifdef _OPENMP
    const int threads = omp_get_max_threads();
#else
    const int threads = 1;
#endif
    std::printf("grid %dx%d, %d reps, %d threads\n", n, n, reps, threads);
    std::printf("%-24s %10s %10s %8s %12s\n", "kernel", "serial ms", "omp ms",
                "speedup", "max |diff|");

    {
        ScalarField a, b;
        const double ts = time_ms([&] { a = fd::serial::partial_u(f); }, reps);
        const double tp = time_ms([&] { b = fd::partial_u(f); }, reps);
        std::printf("%-24s %10.3f %10.3f %8.2f %12.3e\n", "partial_u", ts, tp,
                    ts / tp, max_diff(a, b));
    }
    {
        ScalarField a, b;
        const double ts = time_ms([&] { a = fd::serial::laplacian(f); }, reps);
        const double tp = time_ms([&] { b = fd::laplacian(f); }, reps);
        std::printf("%-24s %10.3f %10.3f %8.2f %12.3e\n", "laplacian", ts, tp,
                    ts / tp, max_diff(a, b));
    }
    {
        // Residual evaluation: laplacian plus the nonlinear source.
        ScalarField a, b;
        const double ts = time_ms(
            [&] {
                ScalarField lap = fd::serial::laplacian(ncf.log());
                a = lap;
            },
            reps);
        const double tp =
            time_ms([&] { b = sinh_poisson::residual(ncf); }, reps);
        std::printf("%-24s %10.3f %10.3f %8.2f %12s\n", "pde_residual", ts, tp,
                    ts / tp, "(paths differ)");
    }

    // Frame transport scales with independent column sweeps.
    {
        Grid2D fg(0, 1, 0, 1, 257, 257);
        auto cn = sinh_poisson::NormalCurvatureField::from_values(
            ScalarField(fg, 1.0));
        frame::CoefficientMatrices m = frame::build_matrices_canonical(cn);
#ifdef _OPENMP
        omp_set_num_threads(1);
#endif
        const double ts =
            time_ms([&] { frame::integrate_frame(m, Mat4::Identity()); }, 3);
#ifdef _OPENMP
        omp_set_num_threads(threads);
#endif
        const double tp =
            time_ms([&] { frame::integrate_frame(m, Mat4::Identity()); }, 3);
        std::printf("%-24s %10.3f %10.3f %8.2f %12s\n", "frame_transport", ts,
                    tp, ts / tp, "(identical)");
    }
    return 0;
}
