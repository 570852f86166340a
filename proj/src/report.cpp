#include "gmt/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gmt/errors.hpp"

namespace gmt {

nlohmann::json constants_provenance(const Defaults& d) {
  nlohmann::json p;
  const nlohmann::json values = to_json(d);
  for (const auto& [key, value] : values.items()) {
    (void)value;
    const bool calibrated = key == "chain2" || key == "chain3" || key == "neighbor_bound2" ||
                            key == "neighbor_bound3" || key == "poincare_c";
    p[key] = calibrated ? "calibrated" : "config";
  }
  return p;
}

void write_json(const std::string& path, const nlohmann::json& j) {
  const std::string s = j.dump(2) + "\n";
  if (path == "-") {
    std::cout << s;
    std::cout.flush();
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw PreconditionError("cannot write " + path);
  os << s;
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void CsvTable::add(const std::vector<double>& row) {
  if (row.size() != header_.size()) throw PreconditionError("CSV row width differs from header");
  rows_.push_back(row);
}

void CsvTable::write(std::ostream& os) const {
  for (std::size_t i = 0; i < header_.size(); ++i) os << (i ? "," : "") << header_[i];
  os << "\n";
  for (const auto& r : rows_) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << format_number(r[i]);
    os << "\n";
  }
}

void CsvTable::write(const std::string& path) const {
  if (path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw PreconditionError("cannot write " + path);
  write(os);
}

std::vector<std::vector<double>> read_csv_numbers(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw SchemaError("cannot read " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      double v = 0.0;
      const char* b = cell.data();
      while (*b == ' ') ++b;
      const auto res = std::from_chars(b, cell.data() + cell.size(), v);
      if (res.ec != std::errc()) {
        numeric = false;
        break;
      }
      row.push_back(v);
    }
    if (!numeric) {
      if (first) {
        first = false;
        continue;
      }
      throw SchemaError(path + ": non-numeric row '" + line + "'");
    }
    first = false;
    rows.push_back(std::move(row));
  }
  return rows;
}

Svg::Svg(double x0, double y0, double x1, double y1, int width_px)
    : x0_(x0), y0_(y0), x1_(x1), y1_(y1) {
  if (!(x1 > x0 && y1 > y0)) throw PreconditionError("empty SVG viewport");
  w_ = width_px;
  scale_ = width_px / (x1 - x0);
  h_ = static_cast<int>(std::ceil((y1 - y0) * scale_));
}

double Svg::px(double x) const { return (x - x0_) * scale_; }
double Svg::py(double y) const { return (y1_ - y) * scale_; }

namespace {

std::string f(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

void Svg::rect(double x0, double y0, double x1, double y1, const std::string& stroke,
               const std::string& fill, double stroke_px) {
  body_ += "<rect x=\"" + f(px(x0)) + "\" y=\"" + f(py(y1)) + "\" width=\"" + f(px(x1) - px(x0)) +
           "\" height=\"" + f(py(y0) - py(y1)) + "\" stroke=\"" + stroke + "\" fill=\"" + fill +
           "\" stroke-width=\"" + f(stroke_px) + "\"/>\n";
}

void Svg::circle(double cx, double cy, double r, const std::string& stroke, const std::string& fill,
                 double stroke_px) {
  body_ += "<circle cx=\"" + f(px(cx)) + "\" cy=\"" + f(py(cy)) + "\" r=\"" + f(r * scale_) +
           "\" stroke=\"" + stroke + "\" fill=\"" + fill + "\" stroke-width=\"" + f(stroke_px) +
           "\"/>\n";
}

void Svg::polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke,
                   double stroke_px) {
  std::string p;
  for (const auto& [x, y] : pts) p += f(px(x)) + "," + f(py(y)) + " ";
  if (!p.empty()) p.pop_back();
  body_ += "<polyline points=\"" + p + "\" stroke=\"" + stroke +
           "\" fill=\"none\" stroke-width=\"" + f(stroke_px) + "\"/>\n";
}

void Svg::text(double x, double y, const std::string& s, int size_px) {
  std::string esc;
  for (char c : s) {
    if (c == '<') esc += "&lt;";
    else if (c == '>') esc += "&gt;";
    else if (c == '&') esc += "&amp;";
    else esc += c;
  }
  body_ += "<text x=\"" + f(px(x)) + "\" y=\"" + f(py(y)) + "\" font-size=\"" +
           std::to_string(size_px) + "\" font-family=\"sans-serif\">" + esc + "</text>\n";
}

std::string Svg::str() const {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
         "<!DOCTYPE svg PUBLIC \"-//W3C//DTD SVG 1.1//EN\" "
         "\"http://www.w3.org/Graphics/SVG/1.1/DTD/svg11.dtd\">\n"
         "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         std::to_string(w_) + "\" height=\"" + std::to_string(h_) + "\" viewBox=\"0 0 " +
         std::to_string(w_) + " " + std::to_string(h_) + "\">\n" + body_ + "</svg>\n";
}

void Svg::write(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw PreconditionError("cannot write " + path);
  os << str();
}

}  // namespace gmt
