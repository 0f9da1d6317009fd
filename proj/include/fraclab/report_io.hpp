#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fraclab {

/// CSV table with RFC-4180 quoting; numeric cells formatted with %.12g.
class CsvTable {
public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(const std::vector<std::string>& cells);
  void add_row_values(const std::vector<double>& values);
  std::string str() const;
  static std::string format(double v);

private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

struct PlotSeries {
  std::string label;
  std::vector<double> xs;
  std::vector<double> ys;
};

struct PlotStyle {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  bool logx = false;
  bool logy = false;
  int width = 640;
  int height = 440;
};

/// Standalone deterministic SVG line plot with axes, ticks and a legend.
/// Rejects empty or ragged series.
std::string emit_plot(const std::vector<PlotSeries>& series, const PlotStyle& style);

/// FNV-1a 64-bit content hash, hex-encoded (used by run manifests to certify
/// byte-identical reruns).
std::uint64_t fnv1a64(const std::string& data);
std::string content_hash(const std::string& data);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace fraclab
