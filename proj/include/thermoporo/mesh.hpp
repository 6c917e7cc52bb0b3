#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <vector>

namespace thermoporo {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Which diagonal splits each lattice square into two triangles.
enum class Diagonal {
  Right,  // lower-left to upper-right
  Left,   // upper-left to lower-right
};

/// Affine map x = B * xhat + b from the reference triangle (0,0),(1,0),(0,1).
struct CellGeometry {
  std::array<Point, 3> vertices;
  double area = 0.0;
  std::array<std::array<double, 2>, 2> jacobian{};  // B, row-major
  std::array<double, 2> offset{};                   // b
  double det = 0.0;                                 // det(B) = 2 * area
  std::array<std::array<double, 2>, 2> inverse_transpose{};
};

/// Structured triangulation of the unit square with n = 2^level squares per
/// side. Vertices are numbered row-major, i + j*(n+1) for x = i/n, y = j/n.
/// Edges get a global index in order of first appearance while walking cells.
class Mesh {
 public:
  static constexpr int kMaxLevel = 12;

  std::size_t level() const { return level_; }
  std::size_t cells_per_side() const { return n_; }
  double h_max() const;
  Diagonal diagonal() const { return diagonal_; }

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t num_cells() const { return cells_.size(); }

  const Point& vertex(std::size_t v) const { return vertices_[v]; }
  const std::array<std::size_t, 3>& cell(std::size_t c) const { return cells_[c]; }
  const std::array<std::size_t, 2>& edge(std::size_t e) const { return edges_[e]; }
  /// Global edge ids of a cell; local edge k joins local vertices kEdgeVertices[k].
  const std::array<std::size_t, 3>& cell_edges(std::size_t c) const {
    return cell_edges_[c];
  }
  bool vertex_on_boundary(std::size_t v) const { return vertex_boundary_[v]; }
  bool edge_on_boundary(std::size_t e) const { return edge_boundary_[e]; }
  /// Number of cells sharing each edge (1 on the boundary, 2 inside).
  const std::vector<int>& edge_cell_count() const { return edge_cells_; }

  CellGeometry cell_geometry(std::size_t c) const;
  Point centroid(std::size_t c) const;

  static constexpr std::array<std::array<int, 2>, 3> kEdgeVertices{
      {{1, 2}, {2, 0}, {0, 1}}};

 private:
  friend Mesh build_unit_square_mesh(int level, Diagonal diagonal);

  std::size_t level_ = 0;
  std::size_t n_ = 1;
  Diagonal diagonal_ = Diagonal::Right;
  std::vector<Point> vertices_;
  std::vector<std::array<std::size_t, 3>> cells_;
  std::vector<std::array<std::size_t, 2>> edges_;
  std::vector<std::array<std::size_t, 3>> cell_edges_;
  std::vector<bool> vertex_boundary_;
  std::vector<bool> edge_boundary_;
  std::vector<int> edge_cells_;
};

/// Throws std::invalid_argument for level < 0 and std::length_error above kMaxLevel.
Mesh build_unit_square_mesh(int level, Diagonal diagonal = Diagonal::Right);

/// Debug dump: "nv ne nc", vertex coordinates, cell triples.
void write_mesh(std::ostream& out, const Mesh& mesh);

}  // namespace thermoporo
