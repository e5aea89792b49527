#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace wavefio {

// Minimal TOML subset: [section] headers, `key = value` lines, `#`
// comments. Values are numbers, booleans, double-quoted strings, or flat
// arrays of those.
struct ConfigValue {
    using Array = std::vector<ConfigValue>;
    std::variant<double, bool, std::string, Array> value;

    bool is_number() const noexcept { return std::holds_alternative<double>(value); }
    bool is_bool() const noexcept { return std::holds_alternative<bool>(value); }
    bool is_string() const noexcept { return std::holds_alternative<std::string>(value); }
    bool is_array() const noexcept { return std::holds_alternative<Array>(value); }

    // Typed access; throw InvalidArgument naming `what` on a type mismatch.
    double as_number(std::string_view what) const;
    long as_integer(std::string_view what) const;
    bool as_bool(std::string_view what) const;
    const std::string& as_string(std::string_view what) const;
    std::vector<double> as_numbers(std::string_view what) const;
    std::vector<long> as_integers(std::string_view what) const;
    std::vector<std::string> as_strings(std::string_view what) const;
};

using ConfigSection = std::map<std::string, ConfigValue>;

class ConfigDocument {
public:
    // Throws FormatError with the line number on malformed input.
    static ConfigDocument parse(std::string_view text);
    static ConfigDocument load(const std::string& path);

    bool has_section(const std::string& name) const { return sections_.count(name) != 0; }
    const ConfigSection* section(const std::string& name) const;
    const std::map<std::string, ConfigSection>& sections() const noexcept { return sections_; }

private:
    std::map<std::string, ConfigSection> sections_;
};

// FNV-1a 64-bit hash, used to fingerprint configurations in run manifests.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

}  // namespace wavefio
