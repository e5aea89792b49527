#include "wavefio/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "wavefio/error.hpp"

namespace wavefio {

namespace {

class LineParser {
public:
    LineParser(std::string_view text, int line) : s_(text), line_(line) {}

    ConfigValue value() {
        skip_ws();
        if (eof()) fail("missing value");
        const char c = s_[pos_];
        if (c == '[') return array();
        if (c == '"') return {string()};
        if (starts_with("true")) {
            pos_ += 4;
            return {true};
        }
        if (starts_with("false")) {
            pos_ += 5;
            return {false};
        }
        return {number()};
    }

    void expect_end() {
        skip_ws();
        if (!eof() && s_[pos_] != '#') fail("unexpected trailing characters");
    }

    [[noreturn]] void fail(const std::string& why) const {
        throw FormatError("config line " + std::to_string(line_) + ": " + why);
    }

private:
    bool eof() const noexcept { return pos_ >= s_.size(); }
    bool starts_with(std::string_view p) const noexcept { return s_.substr(pos_, p.size()) == p; }
    void skip_ws() {
        while (!eof() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
    }

    ConfigValue array() {
        ++pos_;
        ConfigValue::Array items;
        skip_ws();
        if (!eof() && s_[pos_] == ']') {
            ++pos_;
            return {items};
        }
        while (true) {
            ConfigValue v = value();
            if (v.is_array()) fail("nested arrays are not supported");
            items.push_back(std::move(v));
            skip_ws();
            if (eof()) fail("unterminated array");
            if (s_[pos_] == ',') {
                ++pos_;
                skip_ws();
                if (!eof() && s_[pos_] == ']') {
                    ++pos_;
                    break;
                }
                continue;
            }
            if (s_[pos_] == ']') {
                ++pos_;
                break;
            }
            fail("expected ',' or ']' in array");
        }
        return {items};
    }

    std::string string() {
        ++pos_;
        std::string out;
        while (!eof() && s_[pos_] != '"') {
            if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) ++pos_;
            out.push_back(s_[pos_++]);
        }
        if (eof()) fail("unterminated string");
        ++pos_;
        return out;
    }

    double number() {
        std::size_t end = pos_;
        while (end < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '.' ||
                                   s_[end] == '-' || s_[end] == '+' || s_[end] == '_')) {
            ++end;
        }
        std::string tok(s_.substr(pos_, end - pos_));
        std::erase(tok, '_');
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
            fail("invalid number '" + tok + "'");
        }
        pos_ = end;
        return v;
    }

    std::string_view s_;
    std::size_t pos_ = 0;
    int line_;
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool valid_key(std::string_view k) {
    if (k.empty()) return false;
    for (char c : k) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
    }
    return true;
}

[[noreturn]] void type_error(std::string_view what, const char* expected) {
    throw InvalidArgument("config value " + std::string(what) + " must be " + expected);
}

}  // namespace

double ConfigValue::as_number(std::string_view what) const {
    if (!is_number()) type_error(what, "a number");
    return std::get<double>(value);
}

long ConfigValue::as_integer(std::string_view what) const {
    const double v = as_number(what);
    if (v != std::floor(v) || std::abs(v) > 9.0e15) type_error(what, "an integer");
    return static_cast<long>(v);
}

bool ConfigValue::as_bool(std::string_view what) const {
    if (!is_bool()) type_error(what, "a boolean");
    return std::get<bool>(value);
}

const std::string& ConfigValue::as_string(std::string_view what) const {
    if (!is_string()) type_error(what, "a string");
    return std::get<std::string>(value);
}

std::vector<double> ConfigValue::as_numbers(std::string_view what) const {
    if (!is_array()) type_error(what, "an array of numbers");
    std::vector<double> out;
    for (const auto& v : std::get<Array>(value)) out.push_back(v.as_number(what));
    return out;
}

std::vector<long> ConfigValue::as_integers(std::string_view what) const {
    if (!is_array()) type_error(what, "an array of integers");
    std::vector<long> out;
    for (const auto& v : std::get<Array>(value)) out.push_back(v.as_integer(what));
    return out;
}

std::vector<std::string> ConfigValue::as_strings(std::string_view what) const {
    if (!is_array()) type_error(what, "an array of strings");
    std::vector<std::string> out;
    for (const auto& v : std::get<Array>(value)) out.push_back(v.as_string(what));
    return out;
}

ConfigDocument ConfigDocument::parse(std::string_view text) {
    ConfigDocument doc;
    std::string current;
    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        const std::string_view raw = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        const std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        LineParser err(line, line_no);
        if (line.front() == '[') {
            const auto close = line.find(']');
            if (close == std::string_view::npos) err.fail("unterminated section header");
            const std::string_view name = trim(line.substr(1, close - 1));
            if (!valid_key(name)) err.fail("invalid section name");
            const std::string_view rest = trim(line.substr(close + 1));
            if (!rest.empty() && rest.front() != '#') err.fail("unexpected text after section header");
            current = std::string(name);
            if (doc.sections_.count(current)) err.fail("duplicate section [" + current + "]");
            doc.sections_[current];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) err.fail("expected key = value");
        const std::string key(trim(line.substr(0, eq)));
        if (!valid_key(key)) err.fail("invalid key '" + key + "'");
        if (current.empty()) err.fail("key '" + key + "' outside of a section");
        LineParser p(line.substr(eq + 1), line_no);
        ConfigValue v = p.value();
        p.expect_end();
        auto& sec = doc.sections_[current];
        if (sec.count(key)) err.fail("duplicate key '" + key + "'");
        sec.emplace(key, std::move(v));
        if (end == text.size()) break;
    }
    return doc;
}

ConfigDocument ConfigDocument::load(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error("cannot open config " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse(ss.str());
}

const ConfigSection* ConfigDocument::section(const std::string& name) const {
    auto it = sections_.find(name);
    return it == sections_.end() ? nullptr : &it->second;
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

}  // namespace wavefio
