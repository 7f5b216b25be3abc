#pragma once

// Graph encoding of the discrete energy Per(F) - lambda |F| on a raster.
//
// Perimeter uses Cauchy-Crofton weights over the 16-neighbourhood: for a
// neighbour vector e of grid length |e| covering an angular sector dphi of
// line directions in [0, pi), every cut edge of that family contributes
// h * dphi / (2 |e|).

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "largesol/maxflow.hpp"
#include "largesol/raster.hpp"

namespace largesol {

struct NeighborOffset {
  int dx;
  int dy;
  double weight;  // per unit spacing; multiply by h
};

/// One representative of each undirected 16-neighbourhood direction.
inline const std::array<NeighborOffset, 8>& crofton_offsets() {
  static const std::array<NeighborOffset, 8> table = [] {
    std::array<std::pair<int, int>, 8> dirs{{{1, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 1}, {-1, 2}, {-1, 1}, {-2, 1}}};
    std::array<double, 8> angle{};
    for (std::size_t k = 0; k < 8; ++k) angle[k] = std::atan2(dirs[k].second, dirs[k].first);
    std::array<NeighborOffset, 8> out{};
    for (std::size_t k = 0; k < 8; ++k) {
      const double prev = k == 0 ? angle[7] - std::numbers::pi : angle[k - 1];
      const double next = k == 7 ? angle[0] + std::numbers::pi : angle[k + 1];
      const double dphi = 0.5 * (next - prev);
      const double len = std::hypot(dirs[k].first, dirs[k].second);
      out[k] = {dirs[k].first, dirs[k].second, dphi / (2.0 * len)};
    }
    return out;
  }();
  return table;
}

/// Cauchy-Crofton perimeter of a mask; cells outside the grid count as outside.
inline double crofton_perimeter(const Mask& m) {
  const auto& g = m.geom;
  double per = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (!m.cells[g.index(i, j)]) continue;
      for (const auto& o : crofton_offsets()) {
        if (!m.at(i + o.dx, j + o.dy)) per += o.weight;
        if (!m.at(i - o.dx, j - o.dy)) per += o.weight;
      }
    }
  }
  return per * g.h;
}

/// Discrete energy Per(F) - lambda |F| of a mask.
inline double discrete_energy(const Mask& m, double lambda) {
  return crofton_perimeter(m) - lambda * m.area();
}

/// Node-per-cell graph with integer capacities (real capacities times scale).
class CutGraph {
 public:
  using Cap = std::int64_t;
  using Solver = PushRelabel<Cap>;

  explicit CutGraph(const RasterDomain& domain) : geom_(domain.geom()) {
    const Mask& m = domain.mask();
    node_of_cell_.assign(m.cells.size(), -1);
    for (std::size_t k = 0; k < m.cells.size(); ++k) {
      if (m.cells[k]) {
        node_of_cell_[k] = static_cast<int>(cell_of_node_.size());
        cell_of_node_.push_back(k);
      }
    }
    const double h = geom_.h;
    scale_ = std::ldexp(1.0, 30) / h;
    sink_.assign(cell_of_node_.size(), 0);
    std::vector<double> sink_real(cell_of_node_.size(), 0.0);
    for (std::size_t u = 0; u < cell_of_node_.size(); ++u) {
      const std::size_t k = cell_of_node_[u];
      const int i = static_cast<int>(k % static_cast<std::size_t>(geom_.nx));
      const int j = static_cast<int>(k / static_cast<std::size_t>(geom_.nx));
      for (const auto& o : crofton_offsets()) {
        const Cap w = to_cap(o.weight * h);
        for (int sgn : {1, -1}) {
          const int a = i + sgn * o.dx, b = j + sgn * o.dy;
          if (!m.at(a, b)) {
            sink_[u] += w;
          } else if (sgn == 1) {
            edges_.push_back({static_cast<int>(u), node_of_cell_[geom_.index(a, b)], w});
          }
        }
      }
    }
  }

  const GridGeometry& geom() const { return geom_; }
  int num_nodes() const { return static_cast<int>(cell_of_node_.size()); }
  double scale() const { return scale_; }
  Cap to_cap(double x) const { return static_cast<Cap>(std::llround(x * scale_)); }

  /// Source capacity per node encoding lambda h^2.
  Cap source_capacity(double lambda) const { return to_cap(lambda * geom_.h * geom_.h); }

  /// Fresh solver with zero source capacity.
  Solver make_solver() const { return Solver(num_nodes(), edges_, sink_); }

  /// Cells on the source side of the solver's current cut.
  Mask extract(const Solver& solver) const {
    Mask out(geom_);
    const auto side = solver.source_side();
    for (std::size_t u = 0; u < side.size(); ++u) {
      if (side[u]) out.cells[cell_of_node_[u]] = 1;
    }
    return out;
  }

 private:
  GridGeometry geom_;
  std::vector<int> node_of_cell_;
  std::vector<std::size_t> cell_of_node_;
  std::vector<Solver::Edge> edges_;
  std::vector<Cap> sink_;
  double scale_ = 1.0;
};

}  // namespace largesol
