#include "icestate/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <sstream>

#include "icestate/errors.hpp"

namespace icestate {

std::string format_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void ensure_dir(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) throw IoError("cannot create directory " + path + ": " + ec.message());
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("short write to " + path);
}

CsvWriter::CsvWriter(const std::string& path)
    : out_(path, std::ios::binary), path_(path) {
  if (!out_) throw IoError("cannot open " + path + " for writing");
  out_ << csv_schema_tag << '\n';
}

CsvWriter::~CsvWriter() {
  if (!closed_ && out_.is_open()) out_.flush();
}

void CsvWriter::header(const std::vector<std::string>& columns) {
  if (width_ != 0) throw IoError(path_ + ": header written twice");
  if (columns.empty()) throw IoError(path_ + ": empty header");
  width_ = columns.size();
  for (std::size_t i = 0; i < columns.size(); ++i) {
    out_ << (i ? "," : "") << columns[i];
  }
  out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  std::vector<std::string> cells(values.size());
  std::transform(values.begin(), values.end(), cells.begin(), format_g);
  row_cells(cells);
}

void CsvWriter::row_cells(const std::vector<std::string>& cells) {
  if (closed_) throw IoError(path_ + ": row after close");
  if (cells.size() != width_) {
    throw IoError(path_ + ": row width " + std::to_string(cells.size()) +
                  " != header width " + std::to_string(width_));
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    out_ << (i ? "," : "") << cells[i];
  }
  out_ << '\n';
}

void CsvWriter::close() {
  out_.flush();
  if (!out_) throw IoError("short write to " + path_);
  out_.close();
  closed_ = true;
}

namespace {

constexpr const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                   "#ff7f0e", "#9467bd", "#8c564b"};
constexpr int palette_size = 6;

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void absorb(double v) {
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  // Pads degenerate or empty ranges so the affine map below is well defined.
  void finalize() {
    if (lo > hi) {
      lo = 0.0;
      hi = 1.0;
    } else if (hi - lo < 1e-300) {
      lo -= 1.0;
      hi += 1.0;
    }
  }
};

std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_svg_plot(const std::string& path, const PlotSpec& spec,
                    const std::vector<PlotSeries>& series) {
  const double W = spec.width, H = spec.height;
  const double ml = 72, mr = 18, mt = 42, mb = 52;  // frame margins, px
  Range rx, ry;
  for (const PlotSeries& s : series) {
    if (s.x.size() != s.y.size()) {
      throw IoError(path + ": series '" + s.label + "' has mismatched sizes");
    }
    for (double v : s.x) rx.absorb(v);
    for (double v : s.y) ry.absorb(v);
  }
  rx.finalize();
  ry.finalize();
  const auto px = [&](double x) {
    return ml + (x - rx.lo) / (rx.hi - rx.lo) * (W - ml - mr);
  };
  const auto py = [&](double y) {
    return H - mb - (y - ry.lo) / (ry.hi - ry.lo) * (H - mt - mb);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width
      << "\" height=\"" << spec.height << "\" viewBox=\"0 0 " << spec.width
      << " " << spec.height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << svg_num(W / 2) << "\" y=\"24\" font-family=\"sans-serif\""
      << " font-size=\"15\" text-anchor=\"middle\">" << xml_escape(spec.title)
      << "</text>\n";

  // Grid and tick labels, five divisions per axis.
  svg << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
  for (int i = 0; i <= 5; ++i) {
    const double fx = rx.lo + (rx.hi - rx.lo) * i / 5.0;
    const double fy = ry.lo + (ry.hi - ry.lo) * i / 5.0;
    const std::string X = svg_num(px(fx)), Y = svg_num(py(fy));
    svg << "<line x1=\"" << X << "\" y1=\"" << svg_num(mt) << "\" x2=\"" << X
        << "\" y2=\"" << svg_num(H - mb) << "\" stroke=\"#ddd\"/>\n"
        << "<line x1=\"" << svg_num(ml) << "\" y1=\"" << Y << "\" x2=\""
        << svg_num(W - mr) << "\" y2=\"" << Y << "\" stroke=\"#ddd\"/>\n"
        << "<text x=\"" << X << "\" y=\"" << svg_num(H - mb + 16)
        << "\" text-anchor=\"middle\">" << tick_label(fx) << "</text>\n"
        << "<text x=\"" << svg_num(ml - 6) << "\" y=\"" << svg_num(py(fy) + 4)
        << "\" text-anchor=\"end\">" << tick_label(fy) << "</text>\n";
  }
  svg << "</g>\n";

  // Frame on top of the grid.
  svg << "<rect x=\"" << svg_num(ml) << "\" y=\"" << svg_num(mt) << "\" width=\""
      << svg_num(W - ml - mr) << "\" height=\"" << svg_num(H - mt - mb)
      << "\" fill=\"none\" stroke=\"#444\"/>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const PlotSeries& s = series[k];
    if (s.x.empty()) continue;
    svg << "<polyline fill=\"none\" stroke=\"" << palette[k % palette_size]
        << "\" stroke-width=\"1.6\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      svg << (i ? " " : "") << svg_num(px(s.x[i])) << "," << svg_num(py(s.y[i]));
    }
    svg << "\"/>\n";
  }

  // Legend, top-right inside the frame.
  svg << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const double y = mt + 16 + 16 * static_cast<double>(k);
    svg << "<line x1=\"" << svg_num(W - mr - 150) << "\" y1=\"" << svg_num(y - 4)
        << "\" x2=\"" << svg_num(W - mr - 122) << "\" y2=\"" << svg_num(y - 4)
        << "\" stroke=\"" << palette[k % palette_size]
        << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << svg_num(W - mr - 116) << "\" y=\"" << svg_num(y)
        << "\">" << xml_escape(series[k].label) << "</text>\n";
  }
  svg << "</g>\n";

  // Axis labels.
  svg << "<g font-family=\"sans-serif\" font-size=\"13\" fill=\"#111\">\n"
      << "<text x=\"" << svg_num(ml + (W - ml - mr) / 2) << "\" y=\""
      << svg_num(H - 14) << "\" text-anchor=\"middle\">"
      << xml_escape(spec.x_label) << "</text>\n"
      << "<text x=\"18\" y=\"" << svg_num(mt + (H - mt - mb) / 2)
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << svg_num(mt + (H - mt - mb) / 2) << ")\">" << xml_escape(spec.y_label)
      << "</text>\n</g>\n</svg>\n";

  write_text_file(path, svg.str());
}

void write_gnuplot_script(const std::string& path, const std::string& csv_name,
                          const PlotSpec& spec,
                          const std::vector<std::pair<int, int>>& columns,
                          const std::vector<std::string>& labels) {
  if (columns.size() != labels.size()) {
    throw IoError(path + ": column/label count mismatch");
  }
  std::ostringstream gp;
  gp << "# gnuplot companion for " << csv_name << "\n"
     << "set datafile separator ','\n"
     << "set title '" << spec.title << "'\n"
     << "set xlabel '" << spec.x_label << "'\n"
     << "set ylabel '" << spec.y_label << "'\n"
     << "set key outside\nset grid\n"
     << "plot ";
  for (std::size_t i = 0; i < columns.size(); ++i) {
    gp << (i ? ", \\\n     " : "") << "'" << csv_name << "' using "
       << columns[i].first << ":" << columns[i].second << " with lines title '"
       << labels[i] << "'";
  }
  gp << "\n";
  write_text_file(path, gp.str());
}

}  // namespace icestate
