#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

// Machine-readable verification reports: named checks with max/mean
// residuals against gates, plus a provenance block. JSON and CSV output
// are byte-deterministic for identical inputs.
namespace bonnet::report {

struct Check {
    std::string name;
    double max_value = 0.0;
    double mean_value = 0.0;
    double gate = 0.0;
    bool gated = true;
    bool pass = true;
};

class VerificationReport {
  public:
    explicit VerificationReport(std::string subcommand)
        : subcommand_(std::move(subcommand)) {}

    void provenance(const std::string& key, const std::string& value);
    void provenance(const std::string& key, double value);

    // Gated check: pass iff max_value < gate.
    void add(const std::string& name, double max_value, double mean_value,
             double gate);
    // Informational entry, never fails the report.
    void note(const std::string& name, double max_value, double mean_value);

    bool overall_pass() const;
    const std::vector<Check>& checks() const { return checks_; }

    void write_json(const std::string& path) const;
    void write_csv(const std::string& path) const;
    // One line per check on stdout.
    void print() const;

  private:
    std::string subcommand_;
    std::vector<std::pair<std::string, std::string>> provenance_;
    std::vector<Check> checks_;
};

std::uint64_t fnv1a_file(const std::string& path);
std::string fmt_double(double x);

}  // namespace bonnet::report
