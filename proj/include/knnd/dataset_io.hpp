#pragma once

#include <filesystem>
#include <iosfwd>

#include "knnd/core.hpp"
#include "knnd/similarity.hpp"

namespace knnd::io {

// CSV: one point per row, d comma-separated columns, no header. Values are
// written with 17 significant digits so doubles survive a round trip.
void writeCsv(std::ostream& out, Dataset<RealVector> const& data);
Dataset<RealVector> readCsv(std::istream& in);

// Binary: 8-byte header (uint32 d, uint32 n, little-endian), then n*d
// little-endian float64 values in row-major order.
void writeBinary(std::ostream& out, Dataset<RealVector> const& data);
Dataset<RealVector> readBinary(std::istream& in);

/// Dispatches on extension: ".csv" is text, anything else binary.
void save(std::filesystem::path const& path, Dataset<RealVector> const& data);
Dataset<RealVector> load(std::filesystem::path const& path);

Dataset<RealVector> toVectors(Dataset<SimplexPoint> const& data);
/// Throws ConfigError if any row is not an interior simplex point.
Dataset<SimplexPoint> toSimplexPoints(Dataset<RealVector> const& data);

}  // namespace knnd::io
