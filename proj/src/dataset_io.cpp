#include "knnd/dataset_io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

namespace knnd::io {

namespace {

std::size_t checkedDim(Dataset<RealVector> const& data) {
  auto const d = data[0].size();
  for (auto const& row : data.items()) {
    if (row.size() != d) throw ConfigError("dataset rows have mismatched dimensions");
  }
  return d;
}

void putU32(std::ostream& out, std::uint32_t v) {
  std::array<char, 4> bytes{};
  for (int i = 0; i < 4; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(bytes.data(), bytes.size());
}

std::uint64_t getLe(std::istream& in, int width) {
  std::array<unsigned char, 8> bytes{};
  if (!in.read(reinterpret_cast<char*>(bytes.data()), width)) {
    throw std::runtime_error("binary dataset: truncated input");
  }
  std::uint64_t v = 0;
  for (int i = width - 1; i >= 0; --i) v = (v << 8) | bytes[i];
  return v;
}

}  // namespace

void writeCsv(std::ostream& out, Dataset<RealVector> const& data) {
  checkedDim(data);
  std::array<char, 32> buf{};
  for (auto const& row : data.items()) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out.put(',');
      auto const res = std::to_chars(buf.data(), buf.data() + buf.size(), row[i],
                                     std::chars_format::general, 17);
      out.write(buf.data(), res.ptr - buf.data());
    }
    out.put('\n');
  }
}

Dataset<RealVector> readCsv(std::istream& in) {
  std::vector<RealVector> rows;
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    RealVector row;
    char const* p = line.data();
    char const* const end = line.data() + line.size();
    while (true) {
      while (p < end && *p == ' ') ++p;
      double v = 0.0;
      auto const res = std::from_chars(p, end, v);
      if (res.ec != std::errc{}) {
        throw std::runtime_error("csv dataset: bad number on line " + std::to_string(lineNo));
      }
      row.push_back(v);
      p = res.ptr;
      while (p < end && *p == ' ') ++p;
      if (p == end) break;
      if (*p != ',') {
        throw std::runtime_error("csv dataset: expected ',' on line " + std::to_string(lineNo));
      }
      ++p;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::runtime_error("csv dataset: ragged row on line " + std::to_string(lineNo));
    }
    rows.push_back(std::move(row));
  }
  return Dataset<RealVector>(std::move(rows));
}

void writeBinary(std::ostream& out, Dataset<RealVector> const& data) {
  auto const d = checkedDim(data);
  if (d > std::numeric_limits<std::uint32_t>::max() ||
      data.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw ConfigError("binary dataset: n or d exceeds 32 bits");
  }
  putU32(out, static_cast<std::uint32_t>(d));
  putU32(out, static_cast<std::uint32_t>(data.size()));
  for (auto const& row : data.items()) {
    for (double v : row) {
      auto bits = std::bit_cast<std::uint64_t>(v);
      std::array<char, 8> bytes{};
      for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
      out.write(bytes.data(), bytes.size());
    }
  }
}

Dataset<RealVector> readBinary(std::istream& in) {
  auto const d = static_cast<std::size_t>(getLe(in, 4));
  auto const n = static_cast<std::size_t>(getLe(in, 4));
  std::vector<RealVector> rows(n, RealVector(d));
  for (auto& row : rows) {
    for (auto& v : row) v = std::bit_cast<double>(getLe(in, 8));
  }
  return Dataset<RealVector>(std::move(rows));
}

void save(std::filesystem::path const& path, Dataset<RealVector> const& data) {
  bool const csv = path.extension() == ".csv";
  std::ofstream out(path, csv ? std::ios::out : std::ios::out | std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  csv ? writeCsv(out, data) : writeBinary(out, data);
}

Dataset<RealVector> load(std::filesystem::path const& path) {
  bool const csv = path.extension() == ".csv";
  std::ifstream in(path, csv ? std::ios::in : std::ios::in | std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return csv ? readCsv(in) : readBinary(in);
}

Dataset<RealVector> toVectors(Dataset<SimplexPoint> const& data) {
  std::vector<RealVector> rows;
  rows.reserve(data.size());
  for (auto const& p : data.items()) rows.emplace_back(p.coords().begin(), p.coords().end());
  return Dataset<RealVector>(std::move(rows));
}

Dataset<SimplexPoint> toSimplexPoints(Dataset<RealVector> const& data) {
  std::vector<SimplexPoint> points;
  points.reserve(data.size());
  for (auto const& row : data.items()) points.emplace_back(row);
  return Dataset<SimplexPoint>(std::move(points));
}

}  // namespace knnd::io
