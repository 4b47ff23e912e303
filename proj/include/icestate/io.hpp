#pragma once

#include <fstream>
#include <string>
#include <utility>
#include <vector>

namespace icestate {

// Version tag written as the first line of every CSV this library emits.
inline constexpr const char* csv_schema_tag = "# icestate-csv v1";

// Shortest round-trippable decimal for v ("%.12g", locale independent).
std::string format_g(double v);

// Creates path and any missing parents; no-op when it already exists.
void ensure_dir(const std::string& path);

// Writes content atomically enough for our purposes: open, write, flush,
// fail check.  Throws IoError on any stream failure.
void write_text_file(const std::string& path, const std::string& content);

// Column-checked CSV emission.  Identical inputs produce identical bytes:
// fixed %.12g number formatting, '\n' line endings, no locale.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);
  ~CsvWriter();

  void header(const std::vector<std::string>& columns);
  void row(const std::vector<double>& values);
  // Pre-formatted cells for tables mixing text and numbers.
  void row_cells(const std::vector<std::string>& cells);
  // Flushes and verifies the stream; further rows are invalid.
  void close();

 private:
  std::ofstream out_;
  std::string path_;
  std::size_t width_ = 0;
  bool closed_ = false;
};

// One labelled polyline; x and y must have equal sizes.
struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  int width = 960;
  int height = 540;
};

// Self-contained SVG line plot: framed axes, five ticks per axis, a legend
// entry per series.  Degenerate ranges are padded so a constant series still
// renders.  Series beyond the palette reuse colors.
void write_svg_plot(const std::string& path, const PlotSpec& spec,
                    const std::vector<PlotSeries>& series);

// Companion gnuplot script plotting 1-based CSV column pairs from csv_name
// (a path relative to the script's directory) with the given labels.
void write_gnuplot_script(const std::string& path, const std::string& csv_name,
                          const PlotSpec& spec,
                          const std::vector<std::pair<int, int>>& columns,
                          const std::vector<std::string>& labels);

}  // namespace icestate
