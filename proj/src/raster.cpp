#include "entdyn/raster.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "entdyn/error.hpp"
#include "entdyn/parallel.hpp"

namespace entdyn::raster {

using orbit::Status;

void validate(const Window& w) {
  if (!(w.x_min < w.x_max) || !(w.y_min < w.y_max) || !std::isfinite(w.x_min) || !std::isfinite(w.x_max) ||
      !std::isfinite(w.y_min) || !std::isfinite(w.y_max)) {
    throw Error(Errc::invalid_argument, "window needs x_min < x_max and y_min < y_max");
  }
  if (w.width_px < 8 || w.height_px < 8) throw Error(Errc::invalid_argument, "window needs at least 8x8 pixels");
}

ComplexValue pixel_center(const Window& w, int col, int row) {
  const double mid_x = 0.5 * (w.x_min + w.x_max);
  const double mid_y = 0.5 * (w.y_min + w.y_max);
  const double half_x = 0.5 * (w.x_max - w.x_min);
  const double half_y = 0.5 * (w.y_max - w.y_min);
  const double x = mid_x + (2.0 * col + 1.0 - w.width_px) * half_x / w.width_px;
  const double y = mid_y - (2.0 * row + 1.0 - w.height_px) * half_y / w.height_px;
  return {x, y};
}

std::size_t PixelGrid::count(Status s) const { return static_cast<std::size_t>(std::count(status.begin(), status.end(), s)); }

PixelGrid render_k_set(const FunctionSpec& spec, const Window& window, const orbit::OrbitBudget& budget,
                       unsigned threads) {
  validate(window);
  orbit::validate(budget);
  PixelGrid g;
  g.window = window;
  g.max_iter = budget.max_iter;
  const std::size_t n = static_cast<std::size_t>(window.width_px) * static_cast<std::size_t>(window.height_px);
  g.status.assign(n, Status::undetermined);
  g.escape_iteration.assign(n, -1);
  g.labels.assign(n, 0);
  parallel_for(
      static_cast<std::size_t>(window.height_px),
      [&](std::size_t row) {
        for (int col = 0; col < window.width_px; ++col) {
          const auto v = orbit::classify_orbit(spec, pixel_center(window, col, static_cast<int>(row)), budget);
          const std::size_t i = g.index(col, static_cast<int>(row));
          g.status[i] = v.status;
          if (v.escape_iteration) g.escape_iteration[i] = *v.escape_iteration;
        }
      },
      threads);
  return g;
}

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;

  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }

  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent[b] = a;
  }
};

}  // namespace

Components label_components(PixelGrid& grid, Connectivity connectivity) {
  const int w = grid.window.width_px;
  const int h = grid.window.height_px;
  UnionFind uf(grid.size());
  auto bounded = [&](int c, int r) {
    return c >= 0 && c < w && r >= 0 && r < h && grid.status[grid.index(c, r)] == Status::bounded;
  };
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      if (!bounded(c, r)) continue;
      const std::size_t i = grid.index(c, r);
      if (bounded(c - 1, r)) uf.unite(i, grid.index(c - 1, r));
      if (bounded(c, r - 1)) uf.unite(i, grid.index(c, r - 1));
      if (connectivity == Connectivity::eight) {
        if (bounded(c - 1, r - 1)) uf.unite(i, grid.index(c - 1, r - 1));
        if (bounded(c + 1, r - 1)) uf.unite(i, grid.index(c + 1, r - 1));
      }
    }
  }

  Components out;
  std::vector<int> root_label(grid.size(), 0);
  grid.labels.assign(grid.size(), 0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid.status[i] != Status::bounded) continue;
    const std::size_t root = uf.find(i);
    if (root_label[root] == 0) {
      root_label[root] = ++out.count;
      out.sizes.push_back(0);
    }
    grid.labels[i] = root_label[root];
    ++out.sizes[static_cast<std::size_t>(root_label[root] - 1)];
  }
  std::sort(out.sizes.begin(), out.sizes.end(), std::greater<>());
  return out;
}

int count_thick_components(const PixelGrid& grid, Connectivity connectivity, double radius_px) {
  PixelGrid labeled = grid;
  label_components(labeled, connectivity);
  const int w = grid.window.width_px;
  const int h = grid.window.height_px;
  const int reach = static_cast<int>(std::floor(radius_px));
  std::vector<std::pair<int, int>> offsets;
  for (int dy = -reach; dy <= reach; ++dy) {
    for (int dx = -reach; dx <= reach; ++dx) {
      if (dx * dx + dy * dy <= radius_px * radius_px) offsets.emplace_back(dx, dy);
    }
  }
  std::set<int> thick;
  for (int r = reach; r < h - reach; ++r) {
    for (int c = reach; c < w - reach; ++c) {
      const int label = labeled.labels[labeled.index(c, r)];
      if (label == 0 || thick.count(label) != 0) continue;
      const bool full = std::all_of(offsets.begin(), offsets.end(), [&](const auto& o) {
        return labeled.labels[labeled.index(c + o.first, r + o.second)] == label;
      });
      if (full) thick.insert(label);
    }
  }
  return static_cast<int>(thick.size());
}

RasterStats compute_stats(PixelGrid& grid) {
  RasterStats s;
  const auto n = static_cast<double>(grid.size());
  s.bounded_fraction = static_cast<double>(grid.count(Status::bounded)) / n;
  s.escaped_fraction = static_cast<double>(grid.count(Status::escaped)) / n;
  s.undetermined_fraction = static_cast<double>(grid.count(Status::undetermined)) / n;
  s.component_count_4 = label_components(grid, Connectivity::four).count;
  const Components eight = label_components(grid, Connectivity::eight);
  s.component_count_8 = eight.count;
  s.largest_component_px = eight.sizes.empty() ? 0 : eight.sizes.front();
  return s;
}

std::vector<std::uint8_t> gray_levels(const PixelGrid& grid) {
  std::vector<std::uint8_t> out(grid.size());
  const int max_iter = std::max(grid.max_iter, 1);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    switch (grid.status[i]) {
      case Status::bounded:
        out[i] = 0;
        break;
      case Status::undetermined:
        out[i] = 128;
        break;
      case Status::escaped: {
        const int it = std::clamp(grid.escape_iteration[i], 0, max_iter);
        out[i] = static_cast<std::uint8_t>(255 - (95 * it) / max_iter);
        break;
      }
    }
  }
  return out;
}

std::string encode_pgm(const PixelGrid& grid) {
  const auto gray = gray_levels(grid);
  std::string out = fmt::format("P5\n{} {}\n255\n", grid.window.width_px, grid.window.height_px);
  out.append(reinterpret_cast<const char*>(gray.data()), gray.size());
  return out;
}

namespace {

void write_png(const PixelGrid& grid, const std::string& path) {
  FILE* fp = std::fopen(path.c_str(), "wb");
  if (fp == nullptr) throw Error(Errc::io_failure, fmt::format("cannot open '{}' for writing", path));
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (png == nullptr || info == nullptr || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    throw Error(Errc::io_failure, fmt::format("libpng failed writing '{}'", path));
  }
  const auto gray = gray_levels(grid);
  const int w = grid.window.width_px;
  const int h = grid.window.height_px;
  png_init_io(png, fp);
  png_set_IHDR(png, info, static_cast<png_uint_32>(w), static_cast<png_uint_32>(h), 8, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int r = 0; r < h; ++r) {
    png_write_row(png, gray.data() + static_cast<std::size_t>(r) * static_cast<std::size_t>(w));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  if (std::fclose(fp) != 0) throw Error(Errc::io_failure, fmt::format("error closing '{}'", path));
}

}  // namespace

void write_image(const PixelGrid& grid, const std::string& path, ImageFormat format) {
  if (format == ImageFormat::png) {
    write_png(grid, path);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io_failure, fmt::format("cannot open '{}' for writing", path));
  const std::string bytes = encode_pgm(grid);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::io_failure, fmt::format("error writing '{}'", path));
}

GrayImage read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_failure, fmt::format("cannot open '{}'", path));
  auto token = [&]() {
    std::string t;
    char ch = 0;
    while (in.get(ch)) {
      if (ch == '#') {
        std::string skip;
        std::getline(in, skip);
      } else if (!std::isspace(static_cast<unsigned char>(ch))) {
        t.push_back(ch);
        break;
      }
    }
    while (in.get(ch) && !std::isspace(static_cast<unsigned char>(ch))) t.push_back(ch);
    return t;
  };
  GrayImage img;
  try {
    if (token() != "P5") throw Error(Errc::io_failure, fmt::format("'{}' is not a binary PGM", path));
    img.width = std::stoi(token());
    img.height = std::stoi(token());
    if (std::stoi(token()) != 255) throw Error(Errc::io_failure, "only maxval 255 is supported");
  } catch (const std::logic_error&) {
    throw Error(Errc::io_failure, fmt::format("malformed PGM header in '{}'", path));
  }
  if (img.width <= 0 || img.height <= 0) throw Error(Errc::io_failure, "bad PGM dimensions");
  img.pixels.resize(static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height));
  in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
  if (in.gcount() != static_cast<std::streamsize>(img.pixels.size())) {
    throw Error(Errc::io_failure, fmt::format("truncated PGM data in '{}'", path));
  }
  return img;
}

}  // namespace entdyn::raster
