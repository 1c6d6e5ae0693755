#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "entdyn/catalog.hpp"
#include "entdyn/orbit.hpp"

namespace entdyn::raster {

struct Window {
  double x_min = -2.0;
  double x_max = 2.0;
  double y_min = -2.0;
  double y_max = 2.0;
  int width_px = 256;
  int height_px = 256;
};

void validate(const Window& w);

/// Center of pixel (col, row); row 0 is the top edge (y_max). With an odd
/// pixel count on a symmetric window the middle row is exactly y = 0.
ComplexValue pixel_center(const Window& w, int col, int row);

struct PixelGrid {
  Window window;
  int max_iter = 0;
  std::vector<orbit::Status> status;   // row-major
  std::vector<int> escape_iteration;   // -1 unless escaped
  std::vector<int> labels;             // 0 = not bounded or not yet labeled

  [[nodiscard]] std::size_t index(int col, int row) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(window.width_px) + static_cast<std::size_t>(col);
  }
  [[nodiscard]] std::size_t size() const { return status.size(); }
  [[nodiscard]] std::size_t count(orbit::Status s) const;
};

/// Classifies every pixel center; rows are distributed over threads and the
/// result does not depend on the thread count.
PixelGrid render_k_set(const FunctionSpec& spec, const Window& window, const orbit::OrbitBudget& budget,
                       unsigned threads = 0);

enum class Connectivity { four, eight };

struct Components {
  int count = 0;
  std::vector<std::size_t> sizes;  // descending
};

/// Union-find labeling of the Bounded pixels. Labels are 1..count, numbered
/// in raster order of each component's first pixel.
Components label_components(PixelGrid& grid, Connectivity connectivity);

/// Components (under `connectivity`) containing every pixel center within
/// radius_px of some pixel center of the component.
int count_thick_components(const PixelGrid& grid, Connectivity connectivity, double radius_px = 2.0);

struct RasterStats {
  double bounded_fraction = 0.0;
  double escaped_fraction = 0.0;
  double undetermined_fraction = 0.0;
  int component_count_4 = 0;
  int component_count_8 = 0;
  std::size_t largest_component_px = 0;
};

/// Leaves `grid.labels` holding the Eight-connectivity labeling.
RasterStats compute_stats(PixelGrid& grid);

/// Gray level per pixel: Bounded 0, Undetermined 128, Escaped 255 down to
/// 160 as the escape iteration grows.
std::vector<std::uint8_t> gray_levels(const PixelGrid& grid);

enum class ImageFormat { pgm, png };

/// Binary P5 with header "P5\n<w> <h>\n255\n". Throws Error(io_failure).
void write_image(const PixelGrid& grid, const std::string& path, ImageFormat format = ImageFormat::pgm);
std::string encode_pgm(const PixelGrid& grid);

struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;
};

GrayImage read_pgm(const std::string& path);

}  // namespace entdyn::raster
