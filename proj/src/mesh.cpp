#include "thermoporo/mesh.hpp"

#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>

namespace thermoporo {

namespace {

bool on_boundary(const Point& p) {
  return p.x == 0.0 || p.x == 1.0 || p.y == 0.0 || p.y == 1.0;
}

}  // namespace

double Mesh::h_max() const { return std::sqrt(2.0) / static_cast<double>(n_); }

Mesh build_unit_square_mesh(int level, Diagonal diagonal) {
  if (level < 0) {
    throw std::invalid_argument("mesh level must be non-negative");
  }
  if (level > Mesh::kMaxLevel) {
    throw std::length_error("mesh level " + std::to_string(level) +
                            " exceeds the supported maximum of " +
                            std::to_string(Mesh::kMaxLevel));
  }
  Mesh mesh;
  mesh.level_ = static_cast<std::size_t>(level);
  mesh.n_ = std::size_t{1} << level;
  mesh.diagonal_ = diagonal;
  const std::size_t n = mesh.n_;
  const double dn = static_cast<double>(n);

  mesh.vertices_.reserve((n + 1) * (n + 1));
  for (std::size_t j = 0; j <= n; ++j) {
    for (std::size_t i = 0; i <= n; ++i) {
      // i/n is exact for the endpoints, so boundary tests can compare with 0 and 1.
      mesh.vertices_.push_back({static_cast<double>(i) / dn, static_cast<double>(j) / dn});
    }
  }
  auto vid = [n](std::size_t i, std::size_t j) { return i + j * (n + 1); };

  mesh.cells_.reserve(2 * n * n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t v00 = vid(i, j), v10 = vid(i + 1, j);
      const std::size_t v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
      if (diagonal == Diagonal::Right) {
        mesh.cells_.push_back({v00, v10, v11});
        mesh.cells_.push_back({v00, v11, v01});
      } else {
        mesh.cells_.push_back({v00, v10, v01});
        mesh.cells_.push_back({v10, v11, v01});
      }
    }
  }

  std::map<std::pair<std::size_t, std::size_t>, std::size_t> edge_index;
  mesh.cell_edges_.resize(mesh.cells_.size());
  for (std::size_t c = 0; c < mesh.cells_.size(); ++c) {
    const auto& cell = mesh.cells_[c];
    for (int k = 0; k < 3; ++k) {
      std::size_t a = cell[Mesh::kEdgeVertices[k][0]];
      std::size_t b = cell[Mesh::kEdgeVertices[k][1]];
      if (a > b) std::swap(a, b);
      auto [it, inserted] = edge_index.try_emplace({a, b}, mesh.edges_.size());
      if (inserted) {
        mesh.edges_.push_back({a, b});
        mesh.edge_cells_.push_back(0);
      }
      mesh.cell_edges_[c][k] = it->second;
      ++mesh.edge_cells_[it->second];
    }
  }

  mesh.vertex_boundary_.resize(mesh.vertices_.size());
  for (std::size_t v = 0; v < mesh.vertices_.size(); ++v) {
    mesh.vertex_boundary_[v] = on_boundary(mesh.vertices_[v]);
  }
  mesh.edge_boundary_.resize(mesh.edges_.size());
  for (std::size_t e = 0; e < mesh.edges_.size(); ++e) {
    mesh.edge_boundary_[e] = mesh.edge_cells_[e] == 1;
  }
  return mesh;
}

CellGeometry Mesh::cell_geometry(std::size_t c) const {
  if (c >= cells_.size()) {
    throw std::out_of_range("cell id " + std::to_string(c) + " out of range");
  }
  CellGeometry g;
  for (int k = 0; k < 3; ++k) g.vertices[k] = vertices_[cells_[c][k]];
  const Point& p0 = g.vertices[0];
  const Point& p1 = g.vertices[1];
  const Point& p2 = g.vertices[2];
  g.jacobian = {{{p1.x - p0.x, p2.x - p0.x}, {p1.y - p0.y, p2.y - p0.y}}};
  g.offset = {p0.x, p0.y};
  g.det = g.jacobian[0][0] * g.jacobian[1][1] - g.jacobian[0][1] * g.jacobian[1][0];
  g.area = 0.5 * g.det;
  const double inv_det = 1.0 / g.det;
  // (B^{-1})^T
  g.inverse_transpose = {{{g.jacobian[1][1] * inv_det, -g.jacobian[1][0] * inv_det},
                          {-g.jacobian[0][1] * inv_det, g.jacobian[0][0] * inv_det}}};
  return g;
}

Point Mesh::centroid(std::size_t c) const {
  const auto& cell = cells_[c];
  Point p;
  for (auto v : cell) {
    p.x += vertices_[v].x;
    p.y += vertices_[v].y;
  }
  p.x /= 3.0;
  p.y /= 3.0;
  return p;
}

void write_mesh(std::ostream& out, const Mesh& mesh) {
  out << mesh.num_vertices() << ' ' << mesh.num_edges() << ' ' << mesh.num_cells() << '\n';
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    out << mesh.vertex(v).x << ' ' << mesh.vertex(v).y << '\n';
  }
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto& cell = mesh.cell(c);
    out << cell[0] << ' ' << cell[1] << ' ' << cell[2] << '\n';
  }
}

}  // namespace thermoporo
