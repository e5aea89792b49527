#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "wavefio/error.hpp"
#include "wavefio/field_io.hpp"
#include "wavefio/geometry.hpp"

namespace wavefio {

namespace {

constexpr const char* kRayHeader = "x1,x2,xi1,xi2,y1,y2,eta1,eta2,T";

}  // namespace

void write_rays_csv(std::span<const RaySample> rays, const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw Error("cannot open " + path.string() + " for writing");
    os.precision(std::numeric_limits<double>::max_digits10);
    os << kRayHeader << '\n';
    for (const auto& r : rays) {
        os << r.start.x.x1 << ',' << r.start.x.x2 << ',' << r.start.xi.x1 << ',' << r.start.xi.x2 << ','
           << r.end.x.x1 << ',' << r.end.x.x2 << ',' << r.end.xi.x1 << ',' << r.end.xi.x2 << ',' << r.T
           << '\n';
    }
}

std::vector<RaySample> read_rays_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw Error("cannot open " + path.string() + " for reading");
    std::string line;
    if (!std::getline(is, line) || line != kRayHeader) {
        throw FormatError("ray CSV must start with the header " + std::string(kRayHeader));
    }
    std::vector<RaySample> out;
    int line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ls(line);
        double v[9];
        for (int k = 0; k < 9; ++k) {
            std::string cell;
            if (!std::getline(ls, cell, ',')) {
                throw FormatError("ray CSV line " + std::to_string(line_no) + ": expected 9 columns");
            }
            try {
                std::size_t used = 0;
                v[k] = std::stod(cell, &used);
                if (used != cell.size()) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw FormatError("ray CSV line " + std::to_string(line_no) + ": bad number '" + cell + "'");
            }
        }
        std::string extra;
        if (std::getline(ls, extra, ',')) {
            throw FormatError("ray CSV line " + std::to_string(line_no) + ": too many columns");
        }
        out.push_back({{{v[0], v[1]}, {v[2], v[3]}}, {{v[4], v[5]}, {v[6], v[7]}}, v[8]});
    }
    return out;
}

void write_warped_grid(const WarpedGrid& g, const std::filesystem::path& path) {
    const std::size_t m = g.side();
    Array2D<double> a(m, m);
    Array2D<double> b(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            a(i, j) = g.points(i, j).x1;
            b(i, j) = g.points(i, j).x2;
        }
    }
    write_field_stack({Field2D(std::move(a)), Field2D(std::move(b))}, path);
}

WarpedGrid read_warped_grid(const std::filesystem::path& path, const Vec2& orientation, Branch branch) {
    const auto stack = read_field_stack(path);
    if (stack.size() != 2 || stack[0].side() != stack[1].side()) {
        throw FormatError("warped grid file must hold two records of equal size: " + path.string());
    }
    const std::size_t m = stack[0].side();
    WarpedGrid g{Array2D<Vec2>(m, m), orientation, branch};
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) g.points(i, j) = {stack[0](i, j), stack[1](i, j)};
    }
    return g;
}

}  // namespace wavefio
