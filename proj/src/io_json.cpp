#include "bonnet/io_json.hpp"

#include <cstdio>
#include <fstream>

namespace bonnet::io {

ordered_json grid_to_json(const Grid2D& g) {
    return ordered_json{{"u_min", g.u_min}, {"u_max", g.u_max},
                        {"v_min", g.v_min}, {"v_max", g.v_max},
                        {"nu", g.nu},       {"nv", g.nv}};
}

Grid2D grid_from_json(const ordered_json& j) {
    try {
        return Grid2D(j.at("u_min").get<double>(), j.at("u_max").get<double>(),
                      j.at("v_min").get<double>(), j.at("v_max").get<double>(),
                      j.at("nu").get<int>(), j.at("nv").get<int>());
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed grid block: ") + e.what());
    }
}

ordered_json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

void write_json_file(const ordered_json& j, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    out << j.dump(2) << "\n";
}

void save_field(const ScalarField& f, const std::string& path) {
    ordered_json j;
    j["grid"] = grid_to_json(f.grid);
    j["values"] = f.values;
    write_json_file(j, path);
}

ScalarField load_field(const std::string& path) {
    ordered_json j = read_json_file(path);
    ScalarField f(grid_from_json(j.at("grid")));
    try {
        f.values = j.at("values").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("malformed values in " + path + ": " + e.what());
    }
    if (f.values.size() != f.grid.size())
        throw ConfigError("field length does not match grid in " + path);
    if (!f.all_finite())
        throw ConfigError("field contains non-finite entries in " + path);
    return f;
}

void save_field_csv(const ScalarField& f, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    out << "u,v,value\n";
    char buf[96];
    const Grid2D& g = f.grid;
    for (int i = 0; i < g.nu; ++i)
        for (int j = 0; j < g.nv; ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", g.u(i), g.v(j),
                          f.at(i, j));
            out << buf;
        }
}

namespace {

ordered_json vector_field_to_json(const VectorField4& f) {
    ordered_json arr = ordered_json::array();
    for (const auto& v : f.values)
        arr.push_back({v[0], v[1], v[2], v[3]});
    return arr;
}

VectorField4 vector_field_from_json(const ordered_json& arr, const Grid2D& g,
                                    const std::string& what) {
    if (arr.size() != g.size())
        throw ConfigError(what + ": length does not match grid");
    VectorField4 f(g);
    for (std::size_t k = 0; k < f.values.size(); ++k) {
        const auto& row = arr.at(k);
        if (row.size() != 4) throw ConfigError(what + ": expected 4 components");
        for (int c = 0; c < 4; ++c) f.values[k][c] = row.at(c).get<double>();
        if (!f.values[k].allFinite())
            throw ConfigError(what + ": non-finite entry");
    }
    return f;
}

}  // namespace

void save_surface(const geometry::SurfaceS3& s, const std::string& path,
                  const ordered_json& extra) {
    ordered_json j;
    j["grid"] = grid_to_json(s.grid);
    j["l"] = vector_field_to_json(s.l);
    if (s.N) j["N"] = vector_field_to_json(*s.N);
    for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
    write_json_file(j, path);
}

geometry::SurfaceS3 load_surface(const std::string& path) {
    ordered_json j = read_json_file(path);
    geometry::SurfaceS3 s;
    s.grid = grid_from_json(j.at("grid"));
    s.l = vector_field_from_json(j.at("l"), s.grid, "surface l");
    if (j.contains("N"))
        s.N = vector_field_from_json(j.at("N"), s.grid, "surface N");
    return s;
}

void save_chart(const hyper::HypersurfaceChart& chart, const std::string& kind,
                const ordered_json& params, const std::string& path,
                const geometry::SurfaceS3* source_surface) {
    ordered_json j;
    j["kind"] = kind;
    j["n"] = chart.n;
    j["params"] = params;
    j["grid"] = grid_to_json(chart.grid);
    if (source_surface) {
        ordered_json src;
        src["grid"] = grid_to_json(source_surface->grid);
        src["l"] = vector_field_to_json(source_surface->l);
        j["source_surface"] = std::move(src);
    }
    ordered_json larr = ordered_json::array();
    for (const auto& v : chart.l) {
        ordered_json row = ordered_json::array();
        for (int c = 0; c < v.size(); ++c) row.push_back(v[c]);
        larr.push_back(std::move(row));
    }
    j["l"] = std::move(larr);
    j["r"] = chart.r.values;
    ordered_json basis = ordered_json::array();
    for (const auto& field : chart.basis) {
        ordered_json barr = ordered_json::array();
        for (const auto& v : field) {
            ordered_json row = ordered_json::array();
            for (int c = 0; c < v.size(); ++c) row.push_back(v[c]);
            barr.push_back(std::move(row));
        }
        basis.push_back(std::move(barr));
    }
    j["basis"] = std::move(basis);
    write_json_file(j, path);
}

ChartFile load_chart(const std::string& path) {
    ordered_json j = read_json_file(path);
    ChartFile out;
    out.kind = j.at("kind").get<std::string>();
    out.params = j.value("params", ordered_json::object());
    out.chart.n = j.at("n").get<int>();
    out.chart.grid = grid_from_json(j.at("grid"));
    if (j.contains("source_surface")) {
        geometry::SurfaceS3 src;
        src.grid = grid_from_json(j.at("source_surface").at("grid"));
        src.l = vector_field_from_json(j.at("source_surface").at("l"), src.grid,
                                       "chart source surface");
        out.source_surface = std::move(src);
    }
    const int dim = out.chart.n + 1;
    const auto& larr = j.at("l");
    if (larr.size() != out.chart.grid.size())
        throw ConfigError("chart l: length does not match grid");
    out.chart.l.assign(out.chart.grid.size(), hyper::VecX::Zero(dim));
    for (std::size_t k = 0; k < out.chart.l.size(); ++k)
        for (int c = 0; c < dim; ++c)
            out.chart.l[k][c] = larr.at(k).at(c).get<double>();
    out.chart.r = ScalarField(out.chart.grid);
    out.chart.r.values = j.at("r").get<std::vector<double>>();
    if (out.chart.r.values.size() != out.chart.grid.size())
        throw ConfigError("chart r: length does not match grid");
    const auto& basis = j.at("basis");
    out.chart.basis.assign(basis.size(),
                           std::vector<hyper::VecX>(out.chart.grid.size(),
                                                    hyper::VecX::Zero(dim)));
    for (std::size_t a = 0; a < basis.size(); ++a)
        for (std::size_t k = 0; k < out.chart.l.size(); ++k)
            for (int c = 0; c < dim; ++c)
                out.chart.basis[a][k][c] = basis.at(a).at(k).at(c).get<double>();
    out.chart.compute_metric();
    return out;
}

}  // namespace bonnet::io
