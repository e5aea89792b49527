#include "manifest.hpp"

#include <cstdio>
#include <fstream>

#include "wavefio/error.hpp"

namespace wavefio::cli {

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

Manifest::Manifest(std::string command, const RunConfig& config) {
    record_["command"] = std::move(command);
    record_["config_hash"] = hex64(config.hash());
    record_["seed"] = config.seed;
    record_["outputs"] = nlohmann::ordered_json::array();
    record_["metrics"] = nlohmann::ordered_json::object();
}

void Manifest::add_output(const std::string& name) { record_["outputs"].push_back(name); }

std::string Manifest::line() const { return record_.dump(); }

void Manifest::append_to(const std::filesystem::path& dir) const {
    const auto path = dir / "manifest.jsonl";
    std::ofstream os(path, std::ios::app);
    if (!os) throw Error("cannot write " + path.string());
    os << line() << '\n';
}

}  // namespace wavefio::cli
