#include "bonnet/report.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "bonnet/errors.hpp"

namespace bonnet::report {

std::string fmt_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void VerificationReport::provenance(const std::string& key,
                                    const std::string& value) {
    provenance_.emplace_back(key, value);
}

void VerificationReport::provenance(const std::string& key, double value) {
    provenance_.emplace_back(key, fmt_double(value));
}

void VerificationReport::add(const std::string& name, double max_value,
                             double mean_value, double gate) {
    checks_.push_back({name, max_value, mean_value, gate, true,
                       max_value < gate});
}

void VerificationReport::note(const std::string& name, double max_value,
                              double mean_value) {
    checks_.push_back({name, max_value, mean_value, 0.0, false, true});
}

bool VerificationReport::overall_pass() const {
    for (const auto& c : checks_)
        if (c.gated && !c.pass) return false;
    return true;
}

void VerificationReport::write_json(const std::string& path) const {
    nlohmann::ordered_json j;
    j["subcommand"] = subcommand_;
    nlohmann::ordered_json prov = nlohmann::ordered_json::object();
    for (const auto& [k, v] : provenance_) prov[k] = v;
    j["provenance"] = std::move(prov);
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const auto& c : checks_) {
        nlohmann::ordered_json row;
        row["name"] = c.name;
        row["max"] = c.max_value;
        row["mean"] = c.mean_value;
        if (c.gated) row["gate"] = c.gate;
        row["gated"] = c.gated;
        row["pass"] = c.pass;
        checks.push_back(std::move(row));
    }
    j["checks"] = std::move(checks);
    j["overall_pass"] = overall_pass();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write report " + path);
    out << j.dump(2) << "\n";
}

void VerificationReport::write_csv(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write report " + path);
    out << "name,max,mean,gate,gated,pass\n";
    for (const auto& c : checks_) {
        out << c.name << "," << fmt_double(c.max_value) << ","
            << fmt_double(c.mean_value) << ","
            << (c.gated ? fmt_double(c.gate) : std::string("")) << ","
            << (c.gated ? "1" : "0") << "," << (c.pass ? "1" : "0") << "\n";
    }
}

void VerificationReport::print() const {
    for (const auto& c : checks_) {
        if (c.gated)
            std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name
                      << ": max=" << fmt_double(c.max_value)
                      << " mean=" << fmt_double(c.mean_value)
                      << " gate=" << fmt_double(c.gate) << "\n";
        else
            std::cout << "[info] " << c.name << ": max="
                      << fmt_double(c.max_value)
                      << " mean=" << fmt_double(c.mean_value) << "\n";
    }
}

std::uint64_t fnv1a_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot hash " + path);
    std::uint64_t h = 14695981039346656037ull;
    char buf[4096];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize k = 0; k < got; ++k) {
            h ^= static_cast<unsigned char>(buf[k]);
            h *= 1099511628211ull;
        }
        if (got < static_cast<std::streamsize>(sizeof(buf))) break;
    }
    return h;
}

}  // namespace bonnet::report
