#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "thermoporo/mesh.hpp"

using namespace thermoporo;

TEST(Mesh, LevelOneCounts) {
  const Mesh m = build_unit_square_mesh(1);
  EXPECT_EQ(m.num_vertices(), 9u);
  EXPECT_EQ(m.num_edges(), 16u);
  EXPECT_EQ(m.num_cells(), 8u);
  EXPECT_NEAR(m.h_max(), 0.707107, 1e-6);
}

TEST(Mesh, LevelZeroCounts) {
  const Mesh m = build_unit_square_mesh(0);
  EXPECT_EQ(m.num_vertices(), 4u);
  EXPECT_EQ(m.num_edges(), 5u);
  EXPECT_EQ(m.num_cells(), 2u);
  EXPECT_NEAR(m.cell_geometry(0).area, 0.5, 1e-15);
}

TEST(Mesh, LevelThreeMeshSize) {
  EXPECT_NEAR(build_unit_square_mesh(3).h_max(), 0.176777, 1e-6);
}

TEST(Mesh, CombinatorialFormulas) {
  for (int l = 0; l <= 5; ++l) {
    for (Diagonal d : {Diagonal::Right, Diagonal::Left}) {
      const Mesh m = build_unit_square_mesh(l, d);
      const std::size_t n = std::size_t{1} << l;
      EXPECT_EQ(m.num_vertices(), (n + 1) * (n + 1));
      EXPECT_EQ(m.num_edges(), 2 * n * (n + 1) + n * n);
      EXPECT_EQ(m.num_cells(), 2 * n * n);
      const long euler = static_cast<long>(m.num_vertices()) - static_cast<long>(m.num_edges()) +
                         static_cast<long>(m.num_cells());
      EXPECT_EQ(euler, 1);
    }
  }
}

TEST(Mesh, AreasPositiveAndSumToOne) {
  for (int l = 0; l <= 6; ++l) {
    const Mesh m = build_unit_square_mesh(l);
    double total = 0.0;
    for (std::size_t c = 0; c < m.num_cells(); ++c) {
      const CellGeometry g = m.cell_geometry(c);
      EXPECT_GT(g.det, 0.0);
      EXPECT_NEAR(g.det, 2.0 * g.area, 1e-15);
      total += g.area;
    }
    EXPECT_NEAR(total, 1.0, 1e-14);
  }
}

TEST(Mesh, LevelTwoCellArea) {
  const Mesh m = build_unit_square_mesh(2);
  for (std::size_t c = 0; c < m.num_cells(); ++c) EXPECT_NEAR(m.cell_geometry(c).area, 1.0 / 32, 1e-15);
}

TEST(Mesh, EdgeSharing) {
  const Mesh m = build_unit_square_mesh(3);
  const auto& count = m.edge_cell_count();
  for (std::size_t e = 0; e < m.num_edges(); ++e) {
    EXPECT_EQ(count[e], m.edge_on_boundary(e) ? 1 : 2);
  }
}

TEST(Mesh, AffineMapReproducesVertices) {
  const Mesh m = build_unit_square_mesh(2);
  for (std::size_t c = 0; c < m.num_cells(); ++c) {
    const CellGeometry g = m.cell_geometry(c);
    const Point ref[3] = {{0, 0}, {1, 0}, {0, 1}};
    for (int k = 0; k < 3; ++k) {
      const double x = g.jacobian[0][0] * ref[k].x + g.jacobian[0][1] * ref[k].y + g.offset[0];
      const double y = g.jacobian[1][0] * ref[k].x + g.jacobian[1][1] * ref[k].y + g.offset[1];
      EXPECT_NEAR(x, g.vertices[k].x, 1e-15);
      EXPECT_NEAR(y, g.vertices[k].y, 1e-15);
    }
  }
}

TEST(Mesh, LatticeAndRowMajorNumbering) {
  const Mesh m = build_unit_square_mesh(3);
  const std::size_t n = 8;
  for (std::size_t j = 0; j <= n; ++j) {
    for (std::size_t i = 0; i <= n; ++i) {
      const Point& p = m.vertex(i + j * (n + 1));
      EXPECT_DOUBLE_EQ(p.x, static_cast<double>(i) / n);
      EXPECT_DOUBLE_EQ(p.y, static_cast<double>(j) / n);
      const bool bnd = i == 0 || j == 0 || i == n || j == n;
      EXPECT_EQ(m.vertex_on_boundary(i + j * (n + 1)), bnd);
    }
  }
}

TEST(Mesh, RefinementQuadruplesCellsAndKeepsShape) {
  auto aspect = [](const Mesh& m) {
    double worst = 0.0;
    for (std::size_t c = 0; c < m.num_cells(); ++c) {
      const CellGeometry g = m.cell_geometry(c);
      double per = 0.0, longest = 0.0;
      for (int k = 0; k < 3; ++k) {
        const Point& a = g.vertices[k];
        const Point& b = g.vertices[(k + 1) % 3];
        const double len = std::hypot(a.x - b.x, a.y - b.y);
        per += len;
        longest = std::max(longest, len);
      }
      worst = std::max(worst, longest / (2.0 * g.area / per));
    }
    return worst;
  };
  for (int l = 0; l < 5; ++l) {
    const Mesh a = build_unit_square_mesh(l);
    const Mesh b = build_unit_square_mesh(l + 1);
    EXPECT_EQ(b.num_cells(), 4 * a.num_cells());
    EXPECT_NEAR(aspect(a), aspect(b), 1e-10);
  }
}

TEST(Mesh, RejectsBadLevels) {
  EXPECT_ANY_THROW(build_unit_square_mesh(-1));
  EXPECT_ANY_THROW(build_unit_square_mesh(Mesh::kMaxLevel + 1));
}

TEST(Mesh, DumpHeader) {
  std::ostringstream out;
  write_mesh(out, build_unit_square_mesh(1));
  std::istringstream in(out.str());
  std::size_t nv = 0, ne = 0, nc = 0;
  in >> nv >> ne >> nc;
  EXPECT_EQ(nv, 9u);
  EXPECT_EQ(ne, 16u);
  EXPECT_EQ(nc, 8u);
}

TEST(Mesh, CellIdOutOfRange) {
  const Mesh m = build_unit_square_mesh(1);
  EXPECT_THROW(m.cell_geometry(8), std::out_of_range);
}
