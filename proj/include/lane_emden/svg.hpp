#pragma once

#include <string>
#include <vector>

// Minimal SVG line plots, enough to eyeball sweeps and profile overlays.

namespace lane_emden::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool markers = false;
};

struct Plot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  bool log_x = false;
};

/// Non-finite points (and x <= 0 on a log axis) are skipped.
std::string render(const Plot& plot);

}  // namespace lane_emden::svg
