#include "paretobf_tools/point_cloud.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace paretobf::tools {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

PointCloudWriter::PointCloudWriter(std::ostream& out, const CloudMetadata& meta,
                                   std::vector<std::string> columns)
    : out_(out), columns_(std::move(columns)) {
  out_ << "# paretobf point cloud\n";
  out_ << "# command: " << meta.command << '\n';
  out_ << "# scenario_hash: " << meta.scenario_hash << '\n';
  out_ << "# seed: " << (meta.seed ? std::to_string(*meta.seed) : std::string("none")) << '\n';
  if (meta.step) out_ << "# step: " << format_double(*meta.step) << '\n';
  if (meta.snr_db) out_ << "# snr_db: " << format_double(*meta.snr_db) << '\n';
  for (const auto& [key, value] : meta.extra) out_ << "# " << key << ": " << value << '\n';
  for (std::size_t i = 0; i < columns_.size(); ++i) out_ << (i ? "," : "") << columns_[i];
  out_ << '\n';
}

void PointCloudWriter::row(std::span<const double> values) {
  if (values.size() != columns_.size()) {
    throw std::invalid_argument("point cloud row has " + std::to_string(values.size()) +
                                " values, header has " + std::to_string(columns_.size()));
  }
  line_.clear();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) line_ += ',';
    line_ += format_double(values[i]);
  }
  line_ += '\n';
  out_ << line_;
  ++rows_;
}

std::size_t PointCloud::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw std::out_of_range("no column '" + name + "'");
}

const std::string* PointCloud::meta(const std::string& key) const {
  for (const auto& [k, v] : metadata) {
    if (k == key) return &v;
  }
  return nullptr;
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

}  // namespace

PointCloud read_point_cloud(std::istream& in) {
  PointCloud cloud;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto colon = line.find(": ");
      if (colon != std::string::npos) {
        cloud.metadata.emplace_back(line.substr(2, colon - 2), line.substr(colon + 2));
      }
      continue;
    }
    if (!header) {
      cloud.columns = split(line);
      header = true;
      continue;
    }
    const auto cells = split(line);
    if (cells.size() != cloud.columns.size()) {
      throw std::runtime_error("point cloud row width differs from the header");
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(std::stod(c));
    cloud.rows.push_back(std::move(row));
  }
  if (!header) throw std::runtime_error("point cloud has no header row");
  return cloud;
}

}  // namespace paretobf::tools
