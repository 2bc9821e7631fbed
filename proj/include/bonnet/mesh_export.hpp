#pragma once

#include <string>

#include "bonnet/grid.hpp"

namespace bonnet::mesh {

enum class Projection { stereographic, drop_coordinate };

// Wavefront OBJ with grid-ordered vertices and quad faces. The
// stereographic projection maps from the pole (0,0,0,-1); nodes closer
// than 1e-6 to the pole raise ProjectionError suggesting the alternative.
// Output bytes are deterministic for identical input.
void export_obj(const VectorField4& l, Projection projection,
                const std::string& path);

}  // namespace bonnet::mesh
