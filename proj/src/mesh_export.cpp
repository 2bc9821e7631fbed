#include "bonnet/mesh_export.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace bonnet::mesh {

void export_obj(const VectorField4& l, Projection projection,
                const std::string& path) {
    const Grid2D& g = l.grid;

    if (projection == Projection::stereographic) {
        for (const auto& v : l.values)
            if (std::abs(1.0 + v[3]) < 1e-6)
                throw ProjectionError(
                    "export_obj: vertex at the stereographic pole (0,0,0,-1); "
                    "use drop-coordinate or rotate the surface");
    }

    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("export_obj: cannot write " + path);

    char buf[128];
    for (int i = 0; i < g.nu; ++i)
        for (int j = 0; j < g.nv; ++j) {
            const Vec4& x = l.at(i, j);
            double p[3];
            if (projection == Projection::stereographic) {
                const double s = 1.0 / (1.0 + x[3]);
                p[0] = x[0] * s;
                p[1] = x[1] * s;
                p[2] = x[2] * s;
            } else {
                p[0] = x[0];
                p[1] = x[1];
                p[2] = x[2];
            }
            std::snprintf(buf, sizeof(buf), "v %.17g %.17g %.17g\n", p[0], p[1],
                          p[2]);
            out << buf;
        }

    // Quad faces in grid order, 1-based indices.
    for (int i = 0; i + 1 < g.nu; ++i)
        for (int j = 0; j + 1 < g.nv; ++j) {
            const int a = g.index(i, j) + 1;
            const int b = g.index(i + 1, j) + 1;
            const int c = g.index(i + 1, j + 1) + 1;
            const int d = g.index(i, j + 1) + 1;
            std::snprintf(buf, sizeof(buf), "f %d %d %d %d\n", a, b, c, d);
            out << buf;
        }
}

}  // namespace bonnet::mesh
