#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace paretobf::tools {

/// Decimal text with 17 significant digits ("%.17g").
std::string format_double(double x);

/// Leading `#` block of a point-cloud file.
struct CloudMetadata {
  std::string command;
  std::string scenario_hash;
  std::optional<std::uint64_t> seed;
  std::optional<double> step;
  std::optional<double> snr_db;
  std::vector<std::pair<std::string, std::string>> extra;
};

/// Comma-separated point cloud: metadata block, one header row, then rows.
class PointCloudWriter {
 public:
  PointCloudWriter(std::ostream& out, const CloudMetadata& meta, std::vector<std::string> columns);

  /// Throws std::invalid_argument when the row width differs from the header.
  void row(std::span<const double> values);
  std::size_t rows() const { return rows_; }

 private:
  std::ostream& out_;
  std::vector<std::string> columns_;
  std::size_t rows_ = 0;
  std::string line_;
};

struct PointCloud {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  /// Column position by name; throws std::out_of_range when missing.
  std::size_t column(const std::string& name) const;
  const std::string* meta(const std::string& key) const;
};

/// Parses what PointCloudWriter writes. Throws std::runtime_error on malformed input.
PointCloud read_point_cloud(std::istream& in);

/// power_class column codes.
constexpr double kClassFull = 1.0;
constexpr double kClassFree = 0.0;
constexpr double kClassZero = -1.0;

}  // namespace paretobf::tools
