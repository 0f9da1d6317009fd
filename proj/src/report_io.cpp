#include "fraclab/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fraclab {

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

namespace {

std::string csv_quote(const std::string& cell) {
  if (cell.find_first_of(",\"\r\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

}  // namespace

void CsvTable::add_row(const std::vector<std::string>& cells) {
  if (cells.size() != header_.size())
    throw std::invalid_argument("CsvTable: row width does not match the header");
  rows_.push_back(cells);
}

void CsvTable::add_row_values(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format(v));
  add_row(cells);
}

std::string CsvTable::format(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string CsvTable::str() const {
  std::ostringstream os;
  for (size_t i = 0; i < header_.size(); ++i) os << (i ? "," : "") << csv_quote(header_[i]);
  os << "\n";
  for (const auto& row : rows_) {
    for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_quote(row[i]);
    os << "\n";
  }
  return os.str();
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace

std::string emit_plot(const std::vector<PlotSeries>& series, const PlotStyle& style) {
  if (series.empty()) throw std::invalid_argument("emit_plot: no series");
  for (const auto& s : series) {
    if (s.xs.empty() || s.xs.size() != s.ys.size())
      throw std::invalid_argument("emit_plot: empty or ragged series '" + s.label + "'");
  }
  auto tx = [&](double v) {
    if (!style.logx) return v;
    if (!(v > 0.0)) throw std::invalid_argument("emit_plot: log-scale x requires positive values");
    return std::log10(v);
  };
  auto ty = [&](double v) {
    if (!style.logy) return v;
    if (!(v > 0.0)) throw std::invalid_argument("emit_plot: log-scale y requires positive values");
    return std::log10(v);
  };
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : series)
    for (size_t i = 0; i < s.xs.size(); ++i) {
      xmin = std::min(xmin, tx(s.xs[i]));
      xmax = std::max(xmax, tx(s.xs[i]));
      ymin = std::min(ymin, ty(s.ys[i]));
      ymax = std::max(ymax, ty(s.ys[i]));
    }
  if (xmax - xmin < 1e-12) { xmax += 1.0; xmin -= 1.0; }
  if (ymax - ymin < 1e-12) { ymax += 1.0; ymin -= 1.0; }

  const int ml = 60, mr = 16, mt = 32, mb = 46;
  const double pw = style.width - ml - mr, ph = style.height - mt - mb;
  auto X = [&](double v) { return ml + (tx(v) - xmin) / (xmax - xmin) * pw; };
  auto Y = [&](double v) { return mt + ph - (ty(v) - ymin) / (ymax - ymin) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << style.width << "\" height=\""
     << style.height << "\" viewBox=\"0 0 " << style.width << " " << style.height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << style.width / 2 << "\" y=\"18\" text-anchor=\"middle\" font-size=\"13\" "
     << "font-family=\"sans-serif\">" << style.title << "</text>\n";
  // axes
  os << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw << "\" y2=\""
     << mt + ph << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + ph
     << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    double fx = xmin + (xmax - xmin) * k / 4.0;
    double fy = ymin + (ymax - ymin) * k / 4.0;
    double px = ml + pw * k / 4.0, py = mt + ph - ph * k / 4.0;
    double lx = style.logx ? std::pow(10.0, fx) : fx;
    double ly = style.logy ? std::pow(10.0, fy) : fy;
    os << "<line x1=\"" << fmt(px) << "\" y1=\"" << mt + ph << "\" x2=\"" << fmt(px) << "\" y2=\""
       << mt + ph + 4 << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << fmt(px) << "\" y=\"" << mt + ph + 16
       << "\" text-anchor=\"middle\" font-size=\"10\" font-family=\"sans-serif\">" << fmt(lx)
       << "</text>\n";
    os << "<line x1=\"" << ml - 4 << "\" y1=\"" << fmt(py) << "\" x2=\"" << ml << "\" y2=\""
       << fmt(py) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << ml - 6 << "\" y=\"" << fmt(py + 3)
       << "\" text-anchor=\"end\" font-size=\"10\" font-family=\"sans-serif\">" << fmt(ly)
       << "</text>\n";
  }
  os << "<text x=\"" << ml + pw / 2 << "\" y=\"" << style.height - 8
     << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">" << style.xlabel
     << "</text>\n";
  os << "<text x=\"14\" y=\"" << mt + ph / 2
     << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\" transform=\"rotate(-90 14 "
     << mt + ph / 2 << ")\">" << style.ylabel << "</text>\n";

  for (size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = kPalette[si % 6];
    if (s.xs.size() > 1) {
      os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (size_t i = 0; i < s.xs.size(); ++i)
        os << fmt(X(s.xs[i])) << "," << fmt(Y(s.ys[i])) << (i + 1 < s.xs.size() ? " " : "");
      os << "\"/>\n";
    }
    for (size_t i = 0; i < s.xs.size(); ++i)
      os << "<circle cx=\"" << fmt(X(s.xs[i])) << "\" cy=\"" << fmt(Y(s.ys[i]))
         << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
    os << "<rect x=\"" << ml + pw - 150 << "\" y=\"" << mt + 6 + 16 * si
       << "\" width=\"10\" height=\"10\" fill=\"" << color << "\"/>\n";
    os << "<text x=\"" << ml + pw - 136 << "\" y=\"" << mt + 15 + 16 * si
       << "\" font-size=\"11\" font-family=\"sans-serif\">" << s.label << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string content_hash(const std::string& data) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a64(data)));
  return buf;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_file: cannot open " + path);
  os.write(content.data(), static_cast<std::streamsize>(content.size()));
}

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_file: cannot open " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

}  // namespace fraclab
