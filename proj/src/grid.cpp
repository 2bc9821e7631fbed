#include "bonnet/grid.hpp"

#include <cmath>
#include <string>

namespace bonnet {

double window_max_abs(const ScalarField& f, const NodeWindow& w) {
    double m = 0.0;
    for (int i = w.i0; i <= w.i1; ++i)
        for (int j = w.j0; j <= w.j1; ++j)
            m = std::max(m, std::abs(f.at(i, j)));
    return m;
}

double window_mean_abs(const ScalarField& f, const NodeWindow& w) {
    double s = 0.0;
    long count = 0;
    for (int i = w.i0; i <= w.i1; ++i)
        for (int j = w.j0; j <= w.j1; ++j) {
            s += std::abs(f.at(i, j));
            ++count;
        }
    return count > 0 ? s / count : 0.0;
}

double window_min(const ScalarField& f, const NodeWindow& w) {
    double m = f.at(w.i0, w.j0);
    for (int i = w.i0; i <= w.i1; ++i)
        for (int j = w.j0; j <= w.j1; ++j)
            m = std::min(m, f.at(i, j));
    return m;
}

void require_same_grid(const Grid2D& a, const Grid2D& b, const char* what) {
    if (!(a == b))
        throw DimensionError(std::string(what) + ": fields live on different grids");
}

}  // namespace bonnet
