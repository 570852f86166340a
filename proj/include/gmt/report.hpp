#pragma once

// Output helpers: JSON reports, CSV tables with header rows, and static
// SVG 1.1 drawings.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "gmt/config.hpp"

namespace gmt {

/// "calibrated" or "config" for every key of the defaults.
nlohmann::json constants_provenance(const Defaults& d);

/// Pretty JSON with a trailing newline; "-" writes to stdout.
void write_json(const std::string& path, const nlohmann::json& j);

/// Shortest round-trip decimal form, identical on every run.
std::string format_number(double v);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
  void add(const std::vector<double>& row);
  std::size_t rows() const noexcept { return rows_.size(); }
  void write(std::ostream& os) const;
  void write(const std::string& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<double>> rows_;
};

/// Rows of numbers from a CSV file; a non-numeric first row is skipped.
std::vector<std::vector<double>> read_csv_numbers(const std::string& path);

/// Minimal SVG 1.1 writer over a world box mapped to a pixel canvas (y up).
class Svg {
 public:
  Svg(double x0, double y0, double x1, double y1, int width_px = 800);
  void rect(double x0, double y0, double x1, double y1, const std::string& stroke,
            const std::string& fill = "none", double stroke_px = 0.5);
  void circle(double cx, double cy, double r, const std::string& stroke,
              const std::string& fill = "none", double stroke_px = 0.5);
  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke,
                double stroke_px = 1.0);
  void text(double x, double y, const std::string& s, int size_px = 12);
  std::string str() const;
  void write(const std::string& path) const;

 private:
  double px(double x) const;
  double py(double y) const;
  double x0_, y0_, x1_, y1_, scale_;
  int w_, h_;
  std::string body_;
};

}  // namespace gmt
