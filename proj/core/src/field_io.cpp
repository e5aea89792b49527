#include "wavefio/field_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <string>

#include "wavefio/error.hpp"

namespace wavefio {

namespace {

constexpr std::array<char, 4> kMagic{'F', '2', 'D', '1'};

template <typename T>
T to_little(T v) {
    if constexpr (std::endian::native == std::endian::big) {
        auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
        std::reverse(bytes.begin(), bytes.end());
        return std::bit_cast<T>(bytes);
    }
    return v;
}

template <typename T>
void put(std::ostream& os, T v) {
    v = to_little(v);
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
bool get(std::istream& is, T& v) {
    if (!is.read(reinterpret_cast<char*>(&v), sizeof(T))) return false;
    v = to_little(v);
    return true;
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode) {
    std::ofstream os(path, mode);
    if (!os) throw Error("cannot open " + path.string() + " for writing");
    return os;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("cannot open " + path.string() + " for reading");
    return is;
}

bool at_eof(std::istream& is) {
    return is.peek() == std::char_traits<char>::eof();
}

}  // namespace

void write_f2d(std::ostream& os, const Array2D<double>& m) {
    if (m.rows() > std::numeric_limits<std::uint32_t>::max() ||
        m.cols() > std::numeric_limits<std::uint32_t>::max()) {
        throw InvalidArgument("matrix too large for F2D");
    }
    os.write(kMagic.data(), kMagic.size());
    put(os, static_cast<std::uint32_t>(m.rows()));
    put(os, static_cast<std::uint32_t>(m.cols()));
    for (double v : m.values()) put(os, v);
    if (!os) throw Error("F2D write failed");
}

Array2D<double> read_f2d(std::istream& is) {
    std::array<char, 4> magic{};
    if (!is.read(magic.data(), magic.size())) throw FormatError("F2D: truncated header");
    if (magic != kMagic) throw FormatError("F2D: bad magic");
    std::uint32_t rows = 0;
    std::uint32_t cols = 0;
    if (!get(is, rows) || !get(is, cols)) throw FormatError("F2D: truncated header");
    std::vector<double> data(static_cast<std::size_t>(rows) * cols);
    for (double& v : data) {
        if (!get(is, v)) {
            throw FormatError("F2D: payload shorter than " + std::to_string(rows) + "x" +
                              std::to_string(cols) + " values");
        }
        if (!std::isfinite(v)) throw FormatError("F2D: non-finite payload value");
    }
    return Array2D<double>(rows, cols, std::move(data));
}

void write_field(const Field2D& f, const std::filesystem::path& path) {
    auto os = open_out(path, std::ios::binary | std::ios::trunc);
    write_f2d(os, f.array());
}

Field2D read_field(const std::filesystem::path& path) {
    auto is = open_in(path);
    Array2D<double> a = read_f2d(is);
    if (!at_eof(is)) throw FormatError("F2D: trailing bytes after the declared dimensions");
    if (a.rows() != a.cols() || !is_valid_side(a.rows())) {
        throw FormatError("F2D: field must be square with a power-of-two side >= 8, got " +
                          std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
    }
    return Field2D(std::move(a));
}

void write_field_stack(const std::vector<Field2D>& fields, const std::filesystem::path& path) {
    auto os = open_out(path, std::ios::binary | std::ios::trunc);
    for (const auto& f : fields) write_f2d(os, f.array());
}

std::vector<Field2D> read_field_stack(const std::filesystem::path& path) {
    auto is = open_in(path);
    std::vector<Field2D> out;
    while (!at_eof(is)) {
        Array2D<double> a = read_f2d(is);
        if (a.rows() != a.cols() || !is_valid_side(a.rows())) {
            throw FormatError("F2D stack: record is not a valid square field");
        }
        out.emplace_back(std::move(a));
    }
    return out;
}

void write_pgm(const Field2D& f, const std::filesystem::path& path) {
    auto os = open_out(path, std::ios::binary | std::ios::trunc);
    const auto v = f.values();
    double lo = v[0];
    double hi = v[0];
    for (double x : v) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    const double span = hi - lo;
    os << "P5\n" << f.side() << ' ' << f.side() << "\n255\n";
    for (double x : v) {
        const double t = span > 0.0 ? (x - lo) / span : 0.0;
        const auto byte = static_cast<unsigned char>(std::lround(t * 255.0));
        os.put(static_cast<char>(byte));
    }
}

void write_csv(const Field2D& f, const std::filesystem::path& path) {
    auto os = open_out(path, std::ios::trunc);
    os.precision(std::numeric_limits<double>::max_digits10);
    for (std::size_t i = 0; i < f.side(); ++i) {
        for (std::size_t j = 0; j < f.side(); ++j) {
            if (j) os << ',';
            os << f(i, j);
        }
        os << '\n';
    }
}

}  // namespace wavefio
