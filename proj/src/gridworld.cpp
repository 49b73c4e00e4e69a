#include "nartplan/gridworld.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace nartplan {

namespace {

constexpr double kTotalPocSlack = 1e-9;

std::string cell_str(CellIndex c) {
  return "(" + std::to_string(c.col) + "," + std::to_string(c.row) + ")";
}

// Shortest round-trip decimal form, so save/load is bit-identical.
std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

GridWorld::GridWorld(int width, int height, double cell_size_m)
    : width_(width), height_(height), cell_size_(cell_size_m) {
  if (width <= 0 || height <= 0) {
    throw std::invalid_argument("grid dimensions must be positive");
  }
  if (!(cell_size_m > 0.0)) {
    throw std::invalid_argument("cell size must be positive");
  }
  poc_.assign(static_cast<size_t>(width) * height, 0.0);
  valid_.assign(static_cast<size_t>(width) * height, 1);
  aoi_vertices_ = {CellIndex{0, 0}, CellIndex{width - 1, 0},
                   CellIndex{width - 1, height - 1}, CellIndex{0, height - 1}};
}

void GridWorld::set_cell(CellIndex c, double poc, bool valid) {
  if (!in_bounds(c)) {
    throw std::invalid_argument("set_cell out of bounds at " + cell_str(c));
  }
  poc_[index_of(c)] = valid ? poc : 0.0;
  valid_[index_of(c)] = valid ? 1 : 0;
}

int GridWorld::valid_cell_count() const {
  return static_cast<int>(std::count(valid_.begin(), valid_.end(), std::uint8_t{1}));
}

double GridWorld::total_poc() const {
  double total = 0.0;
  for (size_t i = 0; i < poc_.size(); ++i) {
    if (valid_[i]) total += poc_[i];
  }
  return total;
}

void GridWorld::set_aoi_vertices(std::vector<CellIndex> vertices) {
  aoi_vertices_ = std::move(vertices);
}

int GridWorld::frontier_distance(CellIndex c) const {
  int border = std::min(std::min(c.col, width_ - 1 - c.col), std::min(c.row, height_ - 1 - c.row));
  if (border == 0) return 0;
  // Expand Chebyshev rings until an invalid cell shows up.
  for (int r = 1; r < border; ++r) {
    for (int dr = -r; dr <= r; ++dr) {
      for (int dc = -r; dc <= r; ++dc) {
        if (std::max(std::abs(dr), std::abs(dc)) != r) continue;
        CellIndex n{c.col + dc, c.row + dr};
        if (!valid_[index_of(n)]) return r;
      }
    }
  }
  return border;
}

void GridWorld::validate() const {
  if (width_ <= 0 || height_ <= 0) {
    throw std::invalid_argument("grid dimensions must be positive");
  }
  if (valid_cell_count() == 0) {
    throw std::invalid_argument("no valid cells");
  }
  for (int row = 0; row < height_; ++row) {
    for (int col = 0; col < width_; ++col) {
      CellIndex c{col, row};
      double p = poc_[index_of(c)];
      if (!valid_[index_of(c)]) {
        if (p != 0.0) {
          throw std::invalid_argument("invalid cell with nonzero poc at " + cell_str(c));
        }
        continue;
      }
      if (!(p >= 0.0) || p > 1.0) {
        throw std::invalid_argument("poc out of [0,1] at cell " + cell_str(c) + ": " +
                                    std::to_string(p));
      }
    }
  }
  if (total_poc() > 1.0 + kTotalPocSlack) {
    throw std::invalid_argument("total poc exceeds 1: " + std::to_string(total_poc()));
  }
  if (aoi_vertices_.size() < 3) {
    throw std::invalid_argument("aoi needs at least 3 vertices");
  }
  for (size_t i = 0; i < aoi_vertices_.size(); ++i) {
    if (!is_valid(aoi_vertices_[i])) {
      throw std::invalid_argument("aoi vertex not a valid cell: " + cell_str(aoi_vertices_[i]));
    }
    if (aoi_vertices_[i] == aoi_vertices_[(i + 1) % aoi_vertices_.size()]) {
      throw std::invalid_argument("aoi has repeated consecutive vertex " +
                                  cell_str(aoi_vertices_[i]));
    }
  }
}

Point2 cell_center(const GridWorld& grid, CellIndex c) {
  if (!grid.is_valid(c)) {
    throw std::invalid_argument("cell_center on out-of-bounds or invalid cell (" +
                                std::to_string(c.col) + "," + std::to_string(c.row) + ")");
  }
  return Point2{(c.col + 0.5) * grid.cell_size(), (c.row + 0.5) * grid.cell_size()};
}

std::vector<CellIndex> neighbors(const GridWorld& grid, CellIndex c) {
  if (!grid.is_valid(c)) {
    throw std::invalid_argument("neighbors of out-of-bounds or invalid cell (" +
                                std::to_string(c.col) + "," + std::to_string(c.row) + ")");
  }
  std::vector<CellIndex> out;
  out.reserve(8);
  for (int dr = -1; dr <= 1; ++dr) {
    for (int dc = -1; dc <= 1; ++dc) {
      if (dr == 0 && dc == 0) continue;
      if (grid.adjacency() == Adjacency::Four && dr != 0 && dc != 0) continue;
      CellIndex n{c.col + dc, c.row + dr};
      if (grid.is_valid(n)) out.push_back(n);
    }
  }
  return out;
}

GridWorld load_poc_map(std::istream& in) {
  std::string tag;
  int width = 0;
  int height = 0;
  double cell_size = 0.0;
  if (!(in >> tag) || tag != "grid" || !(in >> width >> height >> cell_size)) {
    throw std::runtime_error("map parse error: expected header 'grid <w> <h> <cell_size_m>'");
  }
  if (width <= 0 || height <= 0 || !(cell_size > 0.0)) {
    throw std::runtime_error("map parse error: non-positive grid dimensions or cell size");
  }
  GridWorld grid(width, height, cell_size);
  for (int row = 0; row < height; ++row) {
    for (int col = 0; col < width; ++col) {
      double v;
      if (!(in >> v)) {
        throw std::runtime_error("map parse error: missing poc value at cell (" +
                                 std::to_string(col) + "," + std::to_string(row) + ")");
      }
      if (v == -1.0) {
        grid.set_cell(CellIndex{col, row}, 0.0, false);
      } else {
        grid.set_cell(CellIndex{col, row}, v, true);
      }
    }
  }
  if (in >> tag) {
    if (tag != "aoi") {
      throw std::runtime_error("map parse error: unexpected token '" + tag + "'");
    }
    std::vector<CellIndex> vertices;
    std::string pair;
    while (in >> pair) {
      auto comma = pair.find(',');
      if (comma == std::string::npos) {
        throw std::runtime_error("map parse error: aoi vertex '" + pair +
                                 "' is not 'col,row'");
      }
      try {
        vertices.push_back(CellIndex{std::stoi(pair.substr(0, comma)),
                                     std::stoi(pair.substr(comma + 1))});
      } catch (const std::exception&) {
        throw std::runtime_error("map parse error: bad aoi vertex '" + pair + "'");
      }
    }
    grid.set_aoi_vertices(std::move(vertices));
  }
  grid.validate();
  return grid;
}

GridWorld load_poc_map_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open map file: " + path);
  }
  return load_poc_map(in);
}

void save_poc_map(const GridWorld& grid, std::ostream& out) {
  out << "grid " << grid.width() << ' ' << grid.height() << ' '
      << format_double(grid.cell_size()) << '\n';
  for (int row = 0; row < grid.height(); ++row) {
    for (int col = 0; col < grid.width(); ++col) {
      if (col > 0) out << ' ';
      CellIndex c{col, row};
      if (grid.is_valid(c)) {
        out << format_double(grid.poc(c));
      } else {
        out << "-1";
      }
    }
    out << '\n';
  }
  out << "aoi";
  for (const auto& v : grid.aoi_vertices()) {
    out << ' ' << v.col << ',' << v.row;
  }
  out << '\n';
}

void save_poc_map_file(const GridWorld& grid, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write map file: " + path);
  }
  save_poc_map(grid, out);
}

GridWorld make_uniform_map(int width, int height, double cell_size_m, double total_poc,
                           const std::vector<CellIndex>& invalid) {
  if (!(total_poc >= 0.0) || total_poc > 1.0) {
    throw std::invalid_argument("total poc must lie in [0,1]");
  }
  GridWorld grid(width, height, cell_size_m);
  for (const auto& c : invalid) grid.set_cell(c, 0.0, false);
  int valid = grid.valid_cell_count();
  if (valid == 0) {
    throw std::invalid_argument("no valid cells");
  }
  double per_cell = total_poc / valid;
  for (int row = 0; row < height; ++row) {
    for (int col = 0; col < width; ++col) {
      CellIndex c{col, row};
      if (grid.is_valid(c)) grid.set_cell(c, per_cell, true);
    }
  }
  grid.validate();
  return grid;
}

GridWorld make_clustered_map(int width, int height, double cell_size_m, double total_poc,
                             std::uint64_t seed, const std::vector<CellIndex>& invalid) {
  if (!(total_poc >= 0.0) || total_poc > 1.0) {
    throw std::invalid_argument("total poc must lie in [0,1]");
  }
  GridWorld grid(width, height, cell_size_m);
  for (const auto& c : invalid) grid.set_cell(c, 0.0, false);
  if (grid.valid_cell_count() == 0) {
    throw std::invalid_argument("no valid cells");
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> blob_count(3, 5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int blobs = blob_count(rng);

  std::vector<double> mass(static_cast<size_t>(width) * height, 0.0);
  for (int b = 0; b < blobs; ++b) {
    double cx = unit(rng) * width;
    double cy = unit(rng) * height;
    double sigma = (0.08 + 0.15 * unit(rng)) * std::max(width, height);
    double amp = 0.5 + unit(rng);
    for (int row = 0; row < height; ++row) {
      for (int col = 0; col < width; ++col) {
        double dx = (col + 0.5) - cx;
        double dy = (row + 0.5) - cy;
        mass[static_cast<size_t>(row) * width + col] +=
            amp * std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
      }
    }
  }

  double sum = 0.0;
  for (int row = 0; row < height; ++row) {
    for (int col = 0; col < width; ++col) {
      CellIndex c{col, row};
      if (grid.is_valid(c)) sum += mass[grid.index_of(c)];
    }
  }
  if (!(sum > 0.0)) {
    throw std::runtime_error("clustered map generation produced zero mass");
  }
  for (int row = 0; row < height; ++row) {
    for (int col = 0; col < width; ++col) {
      CellIndex c{col, row};
      if (grid.is_valid(c)) {
        grid.set_cell(c, total_poc * mass[grid.index_of(c)] / sum, true);
      }
    }
  }
  grid.validate();
  return grid;
}

}  // namespace nartplan
