#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "padicl/padic.hpp"

namespace padicl {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// "key = value" lines, '#' starts a comment
struct Config {
    std::map<std::string, std::string> kv;

    static Config parse(const std::string& text);
    static Config load(const std::string& path);
    void set(const std::string& key, const std::string& value) { kv[key] = value; }

    // strict parsing; malformed values raise ConfigError
    double real(const std::string& key, double def) const;
    int64_t integer(const std::string& key, int64_t def) const;
    uint64_t seed() const { return static_cast<uint64_t>(integer("seed", 20240601)); }
    int threads() const { return static_cast<int>(integer("threads", 1)); }
};

enum class CaseStatus { pass, fail, skipped };
std::string to_string(CaseStatus s);

struct VerifyCase {
    std::string module, id;
    json params;
    std::string relation;
    double tolerance = 0.0;
    CaseStatus status = CaseStatus::skipped;
    double error = 0.0;
    json detail;  // extra measured quantities

    // status from error and tolerance
    void settle(double err);
    json to_json() const;
};

// suites are named "<module>.<check>"; tolerances read from "tol.<suite>"
std::vector<std::string> suite_names();
std::vector<VerifyCase> run_suite(const std::string& name, const Config& cfg);

struct Campaign {
    std::vector<VerifyCase> cases;
    uint64_t seed = 0;
    int threads = 1;
    size_t passed() const;
    size_t failed() const;
    size_t skipped() const;
    bool all_pass() const { return failed() == 0; }
    json to_json() const;
    std::string table() const;
};
// only: suite names or module prefixes; empty runs everything
Campaign run_campaign(const Config& cfg, const std::vector<std::string>& only = {});

}  // namespace padicl
