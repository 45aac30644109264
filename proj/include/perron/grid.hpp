#ifndef PERRON_GRID_HPP
#define PERRON_GRID_HPP

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace perron {

// A rectangular lattice of candidate nodes with spacing h and a boolean mask
// selecting the interior (unknown) nodes. Boundary values are implicitly zero
// and never stored. Nodes sit at integer multiples of h, vertex-centered.
//
// Construction guarantees: h > 0, at least one interior node, and the interior
// nodes form a single 4-connected component.
class GridDomain {
public:
  GridDomain(int nx, int ny, double h, std::vector<std::uint8_t> mask);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double h() const { return h_; }
  int interior_count() const { return m_; }

  bool is_interior(int ix, int iy) const {
    if (ix < 0 || iy < 0 || ix >= nx_ || iy >= ny_) return false;
    return mask_[static_cast<std::size_t>(iy) * nx_ + ix] != 0;
  }

  // Index of an interior node in scan order (iy outer, ix inner), -1 if the
  // node is not interior.
  int interior_index(int ix, int iy) const {
    if (!is_interior(ix, iy)) return -1;
    return index_[static_cast<std::size_t>(iy) * nx_ + ix];
  }

  // Inverse of interior_index.
  std::pair<int, int> node_of(int k) const { return nodes_[k]; }

  bool operator==(const GridDomain& o) const {
    return nx_ == o.nx_ && ny_ == o.ny_ && h_ == o.h_ && mask_ == o.mask_;
  }

private:
  int nx_, ny_;
  double h_;
  std::vector<std::uint8_t> mask_;
  std::vector<int> index_;
  std::vector<std::pair<int, int>> nodes_;
  int m_;
};

// Five-point discrete Laplacian -Delta_h restricted to the interior nodes of
// a domain: diagonal 4/h^2, off-diagonal -1/h^2 for each interior 4-neighbor.
// Symmetric positive definite.
struct StencilMatrix {
  int m = 0;
  double h = 0.0;
  double diag = 0.0;     // 4/h^2
  double offdiag = 0.0;  // -1/h^2
  // Up to four interior neighbors per row, -1 padding.
  std::vector<std::array<int, 4>> neighbors;
  int bandwidth = 0;  // max |k - neighbor(k)|
};

// Interior of the unit square (0,1)^2 at spacing h; requires 1/h to be an
// integer, (1/h - 1)^2 interior nodes.
GridDomain unit_square(double h);

// Interior of (0,2)^2 minus the closed square [1,2]^2 at spacing h; requires
// 1/h to be an integer. Nodes on the cut edges x=1 (y>=1) and y=1 (x>=1)
// belong to the removed set and are excluded.
GridDomain l_shape(double h);

// Text mask format: line 1 "nx ny", line 2 "h", then ny rows of nx characters
// '1' (interior) / '0', rows ordered top to bottom.
GridDomain load_mask(const std::string& path);

StencilMatrix assemble(const GridDomain& d);

// y = S x.
std::vector<double> apply_stencil(const StencilMatrix& s,
                                  const std::vector<double>& x);

}  // namespace perron

#endif
