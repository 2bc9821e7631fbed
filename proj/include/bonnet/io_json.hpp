#pragma once

#include <json.hpp>
#include <string>

#include "bonnet/grid.hpp"
#include "bonnet/hypersurface.hpp"
#include "bonnet/surface.hpp"

// JSON/CSV serialization. All numeric output goes through nlohmann's
// shortest-roundtrip formatting, so identical data produces identical
// bytes.
namespace bonnet::io {

using ordered_json = nlohmann::ordered_json;

ordered_json grid_to_json(const Grid2D& g);
Grid2D grid_from_json(const ordered_json& j);

// {"grid": {...}, "values": [...]} with values row-major in u.
void save_field(const ScalarField& f, const std::string& path);
ScalarField load_field(const std::string& path);

// CSV with header u,v,value.
void save_field_csv(const ScalarField& f, const std::string& path);

void save_surface(const geometry::SurfaceS3& s, const std::string& path,
                  const ordered_json& extra = ordered_json::object());
geometry::SurfaceS3 load_surface(const std::string& path);

struct ChartFile {
    hyper::HypersurfaceChart chart;
    std::string kind;
    ordered_json params;
    // Present when the construction was generated from a discrete
    // surface; classify rebuilds the interpolated chart from it.
    std::optional<geometry::SurfaceS3> source_surface;
};
void save_chart(const hyper::HypersurfaceChart& chart, const std::string& kind,
                const ordered_json& params, const std::string& path,
                const geometry::SurfaceS3* source_surface = nullptr);
ChartFile load_chart(const std::string& path);

ordered_json read_json_file(const std::string& path);
void write_json_file(const ordered_json& j, const std::string& path);

}  // namespace bonnet::io
