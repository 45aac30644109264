#include "perron/grid.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <queue>
#include <sstream>

#include "perron/errors.hpp"
#include "perron/vec.hpp"

namespace perron {

GridDomain::GridDomain(int nx, int ny, double h, std::vector<std::uint8_t> mask)
    : nx_(nx), ny_(ny), h_(h), mask_(std::move(mask)) {
  if (nx_ <= 0 || ny_ <= 0)
    throw InvalidArgumentError("grid extents must be positive");
  if (!(h_ > 0.0)) throw InvalidArgumentError("grid spacing must be positive");
  if (mask_.size() != static_cast<std::size_t>(nx_) * ny_)
    throw DimensionError("mask size does not match nx*ny");

  index_.assign(mask_.size(), -1);
  m_ = 0;
  for (int iy = 0; iy < ny_; ++iy)
    for (int ix = 0; ix < nx_; ++ix)
      if (mask_[static_cast<std::size_t>(iy) * nx_ + ix]) {
        index_[static_cast<std::size_t>(iy) * nx_ + ix] = m_++;
        nodes_.emplace_back(ix, iy);
      }
  if (m_ == 0) throw DomainError("domain has no interior nodes");

  // All interior nodes must be reachable from the first one through
  // interior 4-neighbor steps.
  std::vector<std::uint8_t> seen(m_, 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!q.empty()) {
    auto [ix, iy] = nodes_[q.front()];
    q.pop();
    const int dx[4] = {1, -1, 0, 0};
    const int dy[4] = {0, 0, 1, -1};
    for (int d = 0; d < 4; ++d) {
      int k = interior_index(ix + dx[d], iy + dy[d]);
      if (k >= 0 && !seen[k]) {
        seen[k] = 1;
        ++reached;
        q.push(k);
      }
    }
  }
  if (reached != m_)
    throw ConnectivityError(
        "interior nodes are not 4-connected (" + std::to_string(reached) +
        " of " + std::to_string(m_) + " reachable)");
}

namespace {

// 1/h must be an integer (reciprocal spacing); returns it.
int reciprocal_spacing(double h) {
  if (!(h > 0.0)) throw InvalidArgumentError("grid spacing must be positive");
  double inv = 1.0 / h;
  long long n = std::llround(inv);
  if (n < 1 || std::fabs(n * h - 1.0) > 1e-9)
    throw InvalidArgumentError("1/h must be an integer, got h = " +
                               std::to_string(h));
  return static_cast<int>(n);
}

}  // namespace

GridDomain unit_square(double h) {
  int n = reciprocal_spacing(h);
  if (n < 2)
    throw DomainError("unit square at h = 1 has no interior nodes");
  int side = n - 1;
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(side) * side, 1);
  return GridDomain(side, side, h, std::move(mask));
}

GridDomain l_shape(double h) {
  int n = reciprocal_spacing(h);
  int side = 2 * n - 1;
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(side) * side, 0);
  // Node (ix,iy) is the point ((ix+1)h, (iy+1)h); the closed removed square
  // [1,2]x[1,2] covers ix+1 >= n and iy+1 >= n.
  for (int iy = 0; iy < side; ++iy)
    for (int ix = 0; ix < side; ++ix)
      if (!(ix + 1 >= n && iy + 1 >= n))
        mask[static_cast<std::size_t>(iy) * side + ix] = 1;
  return GridDomain(side, side, h, std::move(mask));
}

GridDomain load_mask(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open mask file: " + path, 0);

  auto next_line = [&in](int& lineno) -> std::string {
    std::string line;
    if (!std::getline(in, line))
      throw ParseError("unexpected end of mask file", lineno);
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  };

  int lineno = 0;
  std::string header = next_line(lineno);
  std::istringstream hs(header);
  long long nx = 0, ny = 0;
  std::string extra;
  if (!(hs >> nx >> ny) || (hs >> extra) || nx <= 0 || ny <= 0)
    throw ParseError("expected 'nx ny' with positive integers", lineno);

  std::string hline = next_line(lineno);
  std::istringstream ss(hline);
  double h = 0.0;
  if (!(ss >> h) || (ss >> extra) || !(h > 0.0))
    throw ParseError("expected a positive grid spacing", lineno);

  std::vector<std::uint8_t> mask(static_cast<std::size_t>(nx) * ny, 0);
  // File rows run top to bottom; row index iy counts bottom-up.
  for (long long r = 0; r < ny; ++r) {
    std::string row = next_line(lineno);
    if (static_cast<long long>(row.size()) != nx)
      throw ParseError("mask row has " + std::to_string(row.size()) +
                           " characters, expected " + std::to_string(nx),
                       lineno);
    long long iy = ny - 1 - r;
    for (long long ix = 0; ix < nx; ++ix) {
      char c = row[static_cast<std::size_t>(ix)];
      if (c != '0' && c != '1')
        throw ParseError(std::string("invalid mask character '") + c + "'",
                         lineno);
      mask[static_cast<std::size_t>(iy) * nx + ix] = (c == '1');
    }
  }
  std::string tail;
  while (std::getline(in, tail)) {
    ++lineno;
    if (!tail.empty() && tail.back() == '\r') tail.pop_back();
    if (!tail.empty())
      throw ParseError("unexpected content after mask rows", lineno);
  }
  return GridDomain(static_cast<int>(nx), static_cast<int>(ny), h,
                    std::move(mask));
}

StencilMatrix assemble(const GridDomain& d) {
  StencilMatrix s;
  s.m = d.interior_count();
  s.h = d.h();
  double inv_h2 = 1.0 / (d.h() * d.h());
  s.diag = 4.0 * inv_h2;
  s.offdiag = -inv_h2;
  s.neighbors.assign(s.m, {-1, -1, -1, -1});
  s.bandwidth = 0;
  for (int k = 0; k < s.m; ++k) {
    auto [ix, iy] = d.node_of(k);
    const int dx[4] = {1, -1, 0, 0};
    const int dy[4] = {0, 0, 1, -1};
    int slot = 0;
    for (int t = 0; t < 4; ++t) {
      int j = d.interior_index(ix + dx[t], iy + dy[t]);
      if (j >= 0) {
        s.neighbors[k][slot++] = j;
        s.bandwidth = std::max(s.bandwidth, std::abs(j - k));
      }
    }
  }
  return s;
}

std::vector<double> apply_stencil(const StencilMatrix& s,
                                  const std::vector<double>& x) {
  require_dimension(x.size(), static_cast<std::size_t>(s.m), "apply_stencil");
  std::vector<double> y(s.m);
  for (int k = 0; k < s.m; ++k) {
    double acc = 0.0;
    for (int j : s.neighbors[k])
      if (j >= 0) acc += x[j];
    y[k] = s.diag * x[k] + s.offdiag * acc;
  }
  return y;
}

}  // namespace perron
