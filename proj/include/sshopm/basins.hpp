#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "sshopm/solver.hpp"
#include "sshopm/tensor.hpp"

namespace sshopm {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};

struct BasinLegendEntry {
  EigenPair pair;
  Rgb color;
  int cells = 0;
};

/// Grid over the unit sphere in R^3. Cell (i, j), i < width, j < height,
/// starts from theta = pi (j + 0.5) / height, phi = 2 pi (i + 0.5) / width.
struct BasinRaster {
  static constexpr int kNone = -1;

  int width = 0;
  int height = 0;
  /// Row-major by j: ids[j * width + i]. kNone marks runs that did not converge.
  std::vector<int> ids;
  std::vector<BasinLegendEntry> legend;

  int at(int i, int j) const { return ids[static_cast<std::size_t>(j) * width + i]; }
  int none_count() const;
};

RealVector sphere_point(int i, int j, int width, int height);

/// k-th palette color: hues stepped by the golden ratio conjugate.
Rgb palette_color(std::size_t k);

/// Requires a tensor with n = 3 and width, height >= 2 (ArgumentError otherwise).
BasinRaster compute_basins(const SymTensor& a, const ShiftConfig& cfg, int width, int height);

/// Binary P6 pixmap, one pixel per cell, NONE drawn black.
std::string render_ppm(const BasinRaster& raster);

/// CSV `id,lambda,x1,x2,x3,type,r,g,b,cells`.
std::string render_legend_csv(const BasinRaster& raster);

}  // namespace sshopm
