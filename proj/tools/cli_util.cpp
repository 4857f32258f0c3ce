#include "cli_util.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "congen/rng.hpp"
#include "congen/version.hpp"

namespace congen::cli {

namespace {

[[noreturn]] void usage_error(const std::string& message) {
    throw std::invalid_argument(message);
}

}  // namespace

void ModelOptions::resolve(const std::string& config_path, bool model_given,
                           bool q_given, bool s_given, bool n_given, bool seed_given) {
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw std::runtime_error("cannot open config file: " + config_path);
        nlohmann::json cfg;
        try {
            in >> cfg;
        } catch (const nlohmann::json::exception& e) {
            usage_error("config file " + config_path + " is not valid JSON: " + e.what());
        }
        static const std::vector<std::string> known = {"model", "q", "s", "n", "seed"};
        for (const auto& [key, value] : cfg.items()) {
            if (std::find(known.begin(), known.end(), key) == known.end())
                usage_error("config field '" + key + "' is not recognized");
            (void)value;
        }
        // flags win over config values
        try {
            if (!model_given && cfg.contains("model"))
                model = cfg["model"].get<std::string>();
            if (!q_given && cfg.contains("q")) q = cfg["q"].get<double>();
            if (!s_given && cfg.contains("s")) s = cfg["s"].get<double>();
            if (!n_given && cfg.contains("n")) n = cfg["n"].get<std::uint64_t>();
            if (!seed_given && cfg.contains("seed"))
                seed = cfg["seed"].get<std::uint64_t>();
        } catch (const nlohmann::json::exception& e) {
            usage_error("config field has the wrong type: " + std::string(e.what()));
        }
    }

    if (model != "waxman" && model != "ger")
        usage_error("field 'model' must be \"waxman\" or \"ger\", got \"" + model + "\"");
    if (model == "ger") {
        if (s_given && s != 0.0)
            usage_error("field 's' must be 0 for the ger model (it is fixed-probability)");
        s = 0.0;
    }
    if (q <= 0.0 || q > 1.0)
        usage_error("field 'q' must be in (0, 1], got " + std::to_string(q));
    if (s < 0.0) usage_error("field 's' must be >= 0, got " + std::to_string(s));
    if (n < 2) usage_error("field 'n' must be >= 2");
}

nlohmann::json ModelOptions::to_json() const {
    return {{"model", model}, {"q", q}, {"s", s}, {"n", n}, {"seed", seed}};
}

std::string iso8601_utc(std::chrono::system_clock::time_point tp) {
    const std::time_t t = std::chrono::system_clock::to_time_t(tp);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buffer[32];
    std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buffer;
}

RunContext::RunContext(std::string subcommand, std::uint64_t seed,
                       const std::string& out_root, const std::string& exact_dir)
    : subcommand_(std::move(subcommand)),
      seed_(seed),
      started_(std::chrono::system_clock::now()),
      phase_mark_(std::chrono::steady_clock::now()) {
    if (!exact_dir.empty()) {
        dir_ = exact_dir;
        if (std::filesystem::exists(dir_))
            throw std::runtime_error("run directory already exists: " + dir_.string());
        std::filesystem::create_directories(dir_);
        return;
    }

    std::string root = out_root;
    if (root.empty()) {
        if (const char* env = std::getenv("CONGEN_OUTPUT_ROOT")) root = env;
        if (root.empty()) root = ".";
    }
    const std::time_t t = std::chrono::system_clock::to_time_t(started_);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y%m%d-%H%M%S", &tm);
    char hash[8];
    std::snprintf(hash, sizeof hash, "%06llx",
                  static_cast<unsigned long long>(mix64(seed_) & 0xFFFFFF));

    const std::string base = subcommand_ + "-" + stamp + "-" + hash;
    std::filesystem::path candidate = std::filesystem::path(root) / base;
    for (int k = 2; std::filesystem::exists(candidate); ++k)
        candidate = std::filesystem::path(root) / (base + "-" + std::to_string(k));
    dir_ = candidate;
    std::filesystem::create_directories(dir_);
}

void RunContext::note_output(const std::string& name) { outputs_.push_back(name); }

void RunContext::phase_done(const std::string& name) {
    const auto now = std::chrono::steady_clock::now();
    phases_.emplace_back(name, std::chrono::duration<double>(now - phase_mark_).count());
    phase_mark_ = now;
}

void RunContext::write_manifest(const nlohmann::json& config) {
    nlohmann::json manifest;
    manifest["tool"] = "congen";
    manifest["version"] = version;
    manifest["subcommand"] = subcommand_;
    manifest["seed"] = seed_;
    manifest["config"] = config;
    manifest["started"] = iso8601_utc(started_);
    manifest["finished"] = iso8601_utc(std::chrono::system_clock::now());
    nlohmann::json phases = nlohmann::json::object();
    for (const auto& [name, seconds] : phases_) phases[name] = seconds;
    manifest["phases"] = phases;
    manifest["outputs"] = outputs_;

    std::ofstream out(file("manifest.json"));
    if (!out) throw std::runtime_error("cannot write manifest in " + dir_.string());
    out << manifest.dump(2) << '\n';
}

ProgressMeter::ProgressMeter(std::string label, double min_interval_seconds)
    : label_(std::move(label)),
      min_interval_(min_interval_seconds),
      last_(std::chrono::steady_clock::now()) {}

void ProgressMeter::update(std::uint64_t done, std::uint64_t total) {
    const auto now = std::chrono::steady_clock::now();
    if (std::chrono::duration<double>(now - last_).count() < min_interval_) return;
    last_ = now;
    printed_ = true;
    std::fprintf(stderr, "%s: %llu/%llu (%.0f%%)\n", label_.c_str(),
                 static_cast<unsigned long long>(done),
                 static_cast<unsigned long long>(total),
                 total ? 100.0 * double(done) / double(total) : 100.0);
}

void ProgressMeter::finish() {
    if (printed_) std::fprintf(stderr, "%s: done\n", label_.c_str());
}

std::vector<double> parse_double_list(const std::string& text, const std::string& flag) {
    std::vector<double> values;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        try {
            values.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw std::invalid_argument(flag + ": bad number '" + item + "'");
        }
    }
    if (values.empty()) throw std::invalid_argument(flag + ": empty list");
    return values;
}

std::vector<std::uint64_t> parse_uint_list(const std::string& text,
                                           const std::string& flag) {
    std::vector<std::uint64_t> values;
    for (const double v : parse_double_list(text, flag)) {
        if (v < 0.0 || v != std::floor(v))
            throw std::invalid_argument(flag + ": expected non-negative integers");
        values.push_back(static_cast<std::uint64_t>(v));
    }
    return values;
}

}  // namespace congen::cli
