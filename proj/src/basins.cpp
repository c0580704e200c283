#include "sshopm/basins.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "sshopm/errors.hpp"

namespace sshopm {

int BasinRaster::none_count() const {
  return static_cast<int>(std::count(ids.begin(), ids.end(), kNone));
}

RealVector sphere_point(int i, int j, int width, int height) {
  const double theta = std::numbers::pi * (j + 0.5) / height;
  const double phi = 2.0 * std::numbers::pi * (i + 0.5) / width;
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

Rgb palette_color(std::size_t k) {
  const double h = std::fmod(0.1 + 0.6180339887498949 * static_cast<double>(k), 1.0) * 6.0;
  const double s = 0.75;
  const double v = 0.95;
  const int sector = static_cast<int>(h) % 6;
  const double f = h - std::floor(h);
  const double p = v * (1 - s), q = v * (1 - s * f), t = v * (1 - s * (1 - f));
  double r = 0, g = 0, b = 0;
  switch (sector) {
    case 0: r = v, g = t, b = p; break;
    case 1: r = q, g = v, b = p; break;
    case 2: r = p, g = v, b = t; break;
    case 3: r = p, g = q, b = v; break;
    case 4: r = t, g = p, b = v; break;
    default: r = v, g = p, b = q; break;
  }
  auto byte = [](double c) { return static_cast<std::uint8_t>(std::lround(c * 255.0)); };
  return {byte(r), byte(g), byte(b)};
}

BasinRaster compute_basins(const SymTensor& a, const ShiftConfig& cfg, int width, int height) {
  if (a.dim() != 3) throw ArgumentError("basins: the tensor must have dimension 3");
  if (width < 2 || height < 2) throw ArgumentError("basins: resolution must be at least 2x2");
  cfg.validate();
  ShiftConfig run_cfg = cfg;
  run_cfg.record_trace = false;

  BasinRaster out;
  out.width = width;
  out.height = height;
  out.ids.assign(static_cast<std::size_t>(width) * height, BasinRaster::kNone);
  PairCatalog<EigenPair> catalog(a.order());

  for (int j = 0; j < height; ++j) {
    for (int i = 0; i < width; ++i) {
      const auto x0 = sphere_point(i, j, width, height);
      EigenPair p;
      try {
        p = sshopm(a, x0, run_cfg).pair;
      } catch (const NumericalFailure&) {
        continue;
      }
      if (!p.converged) continue;
      p = canonicalize_real(std::move(p), a.order());
      const auto id = catalog.insert(p);
      if (id == out.legend.size()) out.legend.push_back({catalog.pairs()[id], palette_color(id), 0});
      out.ids[static_cast<std::size_t>(j) * width + i] = static_cast<int>(id);
      ++out.legend[id].cells;
    }
  }
  return out;
}

std::string render_ppm(const BasinRaster& raster) {
  std::string out = fmt::format("P6\n{} {}\n255\n", raster.width, raster.height);
  out.reserve(out.size() + raster.ids.size() * 3);
  for (int id : raster.ids) {
    const Rgb c = id == BasinRaster::kNone ? Rgb{} : raster.legend[static_cast<std::size_t>(id)].color;
    out.push_back(static_cast<char>(c.r));
    out.push_back(static_cast<char>(c.g));
    out.push_back(static_cast<char>(c.b));
  }
  return out;
}

std::string render_legend_csv(const BasinRaster& raster) {
  std::string out = "id,lambda,x1,x2,x3,type,r,g,b,cells\n";
  for (std::size_t id = 0; id < raster.legend.size(); ++id) {
    const auto& e = raster.legend[id];
    out += fmt::format("{},{:.17g}", id, e.pair.lambda);
    for (double v : e.pair.x) out += fmt::format(",{:.17g}", v);
    out += fmt::format(",{},{},{},{},{}\n",
                       e.pair.classification ? to_string(*e.pair.classification) : "", e.color.r,
                       e.color.g, e.color.b, e.cells);
  }
  out += fmt::format("{},,,,,NONE,0,0,0,{}\n", BasinRaster::kNone, raster.none_count());
  return out;
}

}  // namespace sshopm
