#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "run_config.hpp"

namespace wavefio::cli {

// One JSON-lines record per command run: command, config hash, seed,
// outputs (paths relative to the output directory) and key metrics. No
// timestamps, so reruns produce identical records.
class Manifest {
public:
    Manifest(std::string command, const RunConfig& config);

    void add_output(const std::string& name);
    template <typename T>
    void add_metric(const std::string& name, const T& value) {
        record_["metrics"][name] = value;
    }

    std::string line() const;
    // Appends line() to <dir>/manifest.jsonl.
    void append_to(const std::filesystem::path& dir) const;

private:
    nlohmann::ordered_json record_;
};

std::string hex64(std::uint64_t v);

}  // namespace wavefio::cli
