#include "ballmapper/dataset.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "ballmapper/error.hpp"

namespace ballmapper {

PointCloud::PointCloud(std::size_t n, std::size_t dim, std::vector<double> coords,
                       MetricKind metric)
    : n_(n), dim_(dim), coords_(std::move(coords)), metric_(metric) {
  if (n_ == 0 || dim_ == 0) throw InvalidInput("point cloud needs n >= 1 and dim >= 1");
  if (coords_.size() != n_ * dim_) {
    throw InvalidInput("coordinate buffer has " + std::to_string(coords_.size()) +
                       " entries, expected " + std::to_string(n_ * dim_));
  }
  for (std::size_t k = 0; k < coords_.size(); ++k) {
    if (!std::isfinite(coords_[k])) {
      throw InvalidInput("non-finite coordinate at point " + std::to_string(k / dim_) +
                         ", column " + std::to_string(k % dim_));
    }
  }
}

PointCloud PointCloud::with_metric(MetricKind metric) const {
  return PointCloud(n_, dim_, coords_, metric);
}

ValueSeries ValueSeries::numeric(std::vector<double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw InvalidInput("non-finite value at index " + std::to_string(i));
    }
  }
  ValueSeries s;
  s.values_ = std::move(values);
  return s;
}

ValueSeries ValueSeries::categorical(std::vector<std::string> labels) {
  ValueSeries s;
  s.labels_ = std::move(labels);
  s.categorical_ = true;
  return s;
}

NormCache precompute_squared_norms(const PointCloud& cloud) {
  NormCache cache;
  cache.sq_norms.resize(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    double s = 0.0;
    for (double v : cloud.point(i)) s += v * v;
    cache.sq_norms[i] = s;
  }
  return cache;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_row(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      break;
    }
    cells.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return cells;
}

// Standard decimal or scientific notation; "nan"/"inf" and trailing junk fail.
std::optional<double> parse_number(std::string_view cell) {
  if (cell.empty()) return std::nullopt;
  if (cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(cell.data(), cell.data() + cell.size(), value, std::chars_format::general);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(start, nl - start);
    if (!trim(line).empty()) lines.push_back(line);
    start = nl + 1;
  }
  return lines;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

LoadedPoints parse_points_csv(std::string_view text, const CsvOptions& options) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw ParseError("points file is empty");

  std::size_t first_row = 0;
  std::optional<std::size_t> value_col;
  std::size_t width = 0;
  if (options.has_header) {
    const auto header = split_row(lines[0]);
    width = header.size();
    first_row = 1;
    if (options.value_column) {
      for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == *options.value_column) value_col = c;
      }
      if (!value_col) {
        throw ParseError("value column '" + *options.value_column + "' not found in header");
      }
    }
  } else if (options.value_column) {
    throw ParseError("--value-col requires a header row");
  }
  if (first_row >= lines.size()) throw ParseError("points file has a header but no data rows");

  std::vector<double> coords;
  std::vector<std::string> raw_values;
  std::size_t n = 0;
  for (std::size_t r = first_row; r < lines.size(); ++r) {
    const auto cells = split_row(lines[r]);
    const std::size_t row_number = r + 1;  // 1-based, counts the header
    if (width == 0) width = cells.size();
    if (cells.size() != width) {
      throw ParseError("ragged row " + std::to_string(row_number) + ": " +
                       std::to_string(cells.size()) + " columns, expected " +
                       std::to_string(width));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (value_col && c == *value_col) {
        raw_values.emplace_back(cells[c]);
        continue;
      }
      const auto v = parse_number(cells[c]);
      if (!v) {
        throw ParseError("non-numeric cell '" + std::string(cells[c]) + "' at row " +
                         std::to_string(row_number) + ", column " + std::to_string(c + 1));
      }
      coords.push_back(*v);
    }
    ++n;
  }
  const std::size_t dim = width - (value_col ? 1 : 0);
  if (dim == 0) throw ParseError("points file has no coordinate columns");

  LoadedPoints out{PointCloud(n, dim, std::move(coords), options.metric), std::nullopt};
  if (value_col) {
    std::vector<double> numeric;
    bool all_numeric = true;
    for (const auto& cell : raw_values) {
      const auto v = parse_number(cell);
      if (!v) {
        all_numeric = false;
        break;
      }
      numeric.push_back(*v);
    }
    out.values = all_numeric ? ValueSeries::numeric(std::move(numeric))
                             : ValueSeries::categorical(std::move(raw_values));
  }
  return out;
}

LoadedPoints load_points_csv(const std::filesystem::path& path, const CsvOptions& options) {
  return parse_points_csv(read_file(path), options);
}

ValueSeries parse_values_csv(std::string_view text, bool has_header) {
  const auto lines = split_lines(text);
  const std::size_t first = has_header ? 1 : 0;
  if (lines.size() <= first) throw ParseError("values file is empty");
  std::vector<std::string> cells;
  for (std::size_t r = first; r < lines.size(); ++r) {
    const auto row = split_row(lines[r]);
    if (row.size() != 1) {
      throw ParseError("values file row " + std::to_string(r + 1) + " has " +
                       std::to_string(row.size()) + " columns, expected 1");
    }
    cells.emplace_back(row[0]);
  }
  std::vector<double> numeric;
  for (const auto& c : cells) {
    const auto v = parse_number(c);
    if (!v) return ValueSeries::categorical(std::move(cells));
    numeric.push_back(*v);
  }
  return ValueSeries::numeric(std::move(numeric));
}

ValueSeries load_values_csv(const std::filesystem::path& path, bool has_header) {
  return parse_values_csv(read_file(path), has_header);
}

std::string format_points_csv(const PointCloud& cloud) {
  std::string out;
  char buf[32];
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto row = cloud.point(i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out.push_back(',');
      std::snprintf(buf, sizeof buf, "%.17g", row[j]);
      out += buf;
    }
    out.push_back('\n');
  }
  return out;
}

void write_points_csv(const std::filesystem::path& path, const PointCloud& cloud) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << format_points_csv(cloud);
}

PointCloud generate_uniform_cloud(std::size_t n, std::size_t dim, std::uint64_t seed,
                                  MetricKind metric) {
  if (n == 0 || dim == 0) throw InvalidInput("generate_uniform_cloud needs n >= 1 and dim >= 1");
  std::mt19937_64 rng(seed);
  std::vector<double> coords(n * dim);
  constexpr double scale = 0x1.0p-53;
  for (auto& c : coords) c = static_cast<double>(rng() >> 11) * scale;
  return PointCloud(n, dim, std::move(coords), metric);
}

}  // namespace ballmapper
