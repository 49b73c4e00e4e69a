#ifndef NARTPLAN_GRIDWORLD_HPP
#define NARTPLAN_GRIDWORLD_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace nartplan {

struct CellIndex {
  int col = 0;
  int row = 0;

  bool operator==(const CellIndex& o) const { return col == o.col && row == o.row; }
  bool operator!=(const CellIndex& o) const { return !(*this == o); }
};

enum class Adjacency : int { Four = 4, Eight = 8 };

/// Discretized mission area. Each cell carries a probability-of-containment
/// prior; invalid cells are masked out and hold zero probability.
/// Immutable after construction/load; safe for shared concurrent reads.
class GridWorld {
public:
  GridWorld() = default;
  GridWorld(int width, int height, double cell_size_m);

  int width() const { return width_; }
  int height() const { return height_; }
  double cell_size() const { return cell_size_; }
  Adjacency adjacency() const { return adjacency_; }
  void set_adjacency(Adjacency a) { adjacency_ = a; }

  int cell_count() const { return width_ * height_; }
  int index_of(CellIndex c) const { return c.row * width_ + c.col; }
  CellIndex cell_at(int index) const { return CellIndex{index % width_, index / width_}; }

  bool in_bounds(CellIndex c) const {
    return c.col >= 0 && c.col < width_ && c.row >= 0 && c.row < height_;
  }
  bool is_valid(CellIndex c) const { return in_bounds(c) && valid_[index_of(c)]; }

  double poc(CellIndex c) const { return poc_[index_of(c)]; }
  double poc_at(int index) const { return poc_[index]; }
  const std::vector<double>& poc_values() const { return poc_; }
  const std::vector<std::uint8_t>& valid_mask() const { return valid_; }

  void set_cell(CellIndex c, double poc, bool valid);

  int valid_cell_count() const;
  double total_poc() const;

  const std::vector<CellIndex>& aoi_vertices() const { return aoi_vertices_; }
  void set_aoi_vertices(std::vector<CellIndex> vertices);

  /// Chebyshev distance of a cell to the nearest out-of-grid or invalid cell.
  /// Zero on the frontier ring.
  int frontier_distance(CellIndex c) const;

  /// Checks all type invariants; throws std::invalid_argument naming the
  /// offending cell on failure.
  void validate() const;

private:
  int width_ = 0;
  int height_ = 0;
  double cell_size_ = 1.0;
  Adjacency adjacency_ = Adjacency::Eight;
  std::vector<double> poc_;
  std::vector<std::uint8_t> valid_;
  std::vector<CellIndex> aoi_vertices_;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Center of cell c in the inertial frame (origin at grid corner (0,0)).
Point2 cell_center(const GridWorld& grid, CellIndex c);

/// Valid in-bounds neighbors of c under the grid's adjacency, in row-major
/// order of the neighbor cells. Throws on an invalid query cell.
std::vector<CellIndex> neighbors(const GridWorld& grid, CellIndex c);

/// Parses the plain-text map format:
///   grid <width> <height> <cell_size_m>
///   <height> rows of <width> poc values, -1 marking invalid cells
///   aoi <col>,<row> <col>,<row> ...   (optional; defaults to grid corners)
GridWorld load_poc_map(std::istream& in);
GridWorld load_poc_map_file(const std::string& path);

void save_poc_map(const GridWorld& grid, std::ostream& out);
void save_poc_map_file(const GridWorld& grid, const std::string& path);

/// All valid cells share the same poc; masked cells may be listed in
/// `invalid` before normalization.
GridWorld make_uniform_map(int width, int height, double cell_size_m, double total_poc,
                           const std::vector<CellIndex>& invalid = {});

/// Seeded Gaussian-blob prior rasterized onto the grid and normalized to
/// `total_poc`.
GridWorld make_clustered_map(int width, int height, double cell_size_m, double total_poc,
                             std::uint64_t seed, const std::vector<CellIndex>& invalid = {});

}  // namespace nartplan

#endif
