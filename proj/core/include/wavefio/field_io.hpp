#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "wavefio/array2d.hpp"
#include "wavefio/field.hpp"

namespace wavefio {

// F2D binary layout: the magic bytes "F2D1", rows and cols as little-endian
// uint32, then rows * cols little-endian float64 values in row-major order.
// A stack is several records back to back in one file.

void write_f2d(std::ostream& os, const Array2D<double>& m);
// Reads one record. Throws FormatError on a bad magic, a truncated header
// or payload, or non-finite values.
Array2D<double> read_f2d(std::istream& is);

void write_field(const Field2D& f, const std::filesystem::path& path);
// Reads a file holding exactly one square record; trailing bytes or a
// non-square shape are a FormatError.
Field2D read_field(const std::filesystem::path& path);

void write_field_stack(const std::vector<Field2D>& fields, const std::filesystem::path& path);
std::vector<Field2D> read_field_stack(const std::filesystem::path& path);

// 8-bit binary PGM (P5), min-max normalized. A constant field maps to 0.
void write_pgm(const Field2D& f, const std::filesystem::path& path);

// One line per row, comma separated, round-trip precision.
void write_csv(const Field2D& f, const std::filesystem::path& path);

}  // namespace wavefio
