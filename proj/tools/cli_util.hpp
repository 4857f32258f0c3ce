#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace congen::cli {

// Thrown by `validate` when a check fails; maps to exit code 3.
struct ValidationFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Model block as accepted on the command line and in --config JSON.
struct ModelOptions {
    std::string model = "waxman";
    double q = -1.0;  // required
    double s = -1.0;  // required for waxman; forced to 0 for ger
    std::uint64_t n = 0;
    std::uint64_t seed = 0;

    // Applies config-file values beneath explicit flags, then checks the
    // result, naming the offending field on error.
    void resolve(const std::string& config_path, bool model_given, bool q_given,
                 bool s_given, bool n_given, bool seed_given);
    nlohmann::json to_json() const;
};

std::string iso8601_utc(std::chrono::system_clock::time_point tp);

// One directory per run under the output root (CONGEN_OUTPUT_ROOT or
// cwd), named subcommand-timestamp-seedhash; never reuses an existing
// directory.
class RunContext {
public:
    RunContext(std::string subcommand, std::uint64_t seed, const std::string& out_root,
               const std::string& exact_dir);

    const std::filesystem::path& dir() const { return dir_; }
    std::filesystem::path file(const std::string& name) const { return dir_ / name; }

    void note_output(const std::string& name);
    void phase_done(const std::string& name);  // wall-clock since last mark

    // Writes manifest.json with the resolved config and timings.
    void write_manifest(const nlohmann::json& config);

private:
    std::string subcommand_;
    std::uint64_t seed_;
    std::filesystem::path dir_;
    std::chrono::system_clock::time_point started_;
    std::chrono::steady_clock::time_point phase_mark_;
    std::vector<std::pair<std::string, double>> phases_;
    std::vector<std::string> outputs_;
};

// Throttled progress lines on stderr; stdout stays machine-readable.
class ProgressMeter {
public:
    explicit ProgressMeter(std::string label, double min_interval_seconds = 2.0);
    void update(std::uint64_t done, std::uint64_t total);
    void finish();

private:
    std::string label_;
    double min_interval_;
    std::chrono::steady_clock::time_point last_;
    bool printed_ = false;
};

std::vector<double> parse_double_list(const std::string& text, const std::string& flag);
std::vector<std::uint64_t> parse_uint_list(const std::string& text,
                                           const std::string& flag);

}  // namespace congen::cli
