#pragma once
#include <Eigen/Dense>
#include <array>
#include <complex>
#include <memory>

namespace ibnls {

using cplx = std::complex<double>;

enum class Space { Physical, Spectral };

// Periodic box [-L, L)^dim with n points per axis, row-major (last axis fastest).
// With offset = true every node is shifted by h/2 so the origin is not a node.
class Grid {
 public:
  Grid() = default;
  Grid(int dim, int n, double half_width, bool offset = false);

  int dim() const { return dim_; }
  int n() const { return n_; }
  double half_width() const { return L_; }
  double spacing() const { return 2.0 * L_ / n_; }
  double cell_volume() const;
  bool offset() const { return offset_; }
  Eigen::Index size() const;
  bool contains_origin() const { return !offset_; }

  double axis_coord(int i) const { return -L_ + (i + (offset_ ? 0.5 : 0.0)) * spacing(); }
  // (π/L)·j in FFT ordering; the Nyquist index maps to j = -n/2
  double axis_wavenumber(int i) const;
  std::array<int, 3> unravel(Eigen::Index idx) const;

  const Eigen::ArrayXd& radius() const;  // |x|
  const Eigen::ArrayXd& xi2() const;     // |ξ|²
  Eigen::ArrayXd coordinate(int axis) const;
  // ξ_axis per point, Nyquist zeroed (odd derivatives)
  Eigen::ArrayXd wavenumber(int axis) const;

  bool operator==(const Grid& o) const {
    return dim_ == o.dim_ && n_ == o.n_ && L_ == o.L_ && offset_ == o.offset_;
  }
  bool operator!=(const Grid& o) const { return !(*this == o); }

 private:
  struct Tables;
  int dim_ = 0, n_ = 0;
  double L_ = 0;
  bool offset_ = false;
  std::shared_ptr<const Tables> tables_;
};

Grid make_grid(int dim, int n_points, double half_width, bool offset = false);

struct Field {
  Grid grid;
  Eigen::ArrayXcd values;
  Space space = Space::Physical;
};

Field zeros(const Grid& g);

template <class Fn>  // fn(const std::array<double,3>& x) -> complex
Field sample(const Grid& g, Fn fn) {
  Field f{g, Eigen::ArrayXcd(g.size()), Space::Physical};
  std::array<double, 3> x{0, 0, 0};
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    auto ix = g.unravel(i);
    for (int a = 0; a < g.dim(); ++a) x[a] = g.axis_coord(ix[a]);
    f.values[i] = fn(x);
  }
  return f;
}

void require_same_grid(const Grid& a, const Grid& b, const char* what);

// unitary DFT (1/sqrt(N_total)); throws SpaceMismatch on wrong input space
Field transform(const Field& f);
Field inverse_transform(const Field& f);
// in place, no copy of the samples
void transform_inplace(Field& f);
void inverse_transform_inplace(Field& f);
Field to_spectral(const Field& f);
Field to_physical(const Field& f);

// multiplier applied in Fourier space, result returned in the input's space
Field apply_multiplier(const Field& f, const Eigen::ArrayXcd& m);
Field apply_multiplier(const Field& f, const Eigen::ArrayXd& m);
Field laplacian(const Field& f);
Field derivative(const Field& f, int axis);

// h^d Σ conj(a) b, both in the same space
cplx inner(const Field& a, const Field& b);
double l2_norm(const Field& f);

struct SobolevNorms {
  double l2, h1dot, h2dot;
  double h2;  // sqrt(‖f‖² + ‖Δf‖²)
};
SobolevNorms sobolev_norms(const Field& f);

enum class OriginRule { Regularized, LatticeCorrected };

struct WeightField {
  Grid grid;
  double b = 0;
  double eps_reg = 0;
  OriginRule rule = OriginRule::Regularized;
  Eigen::ArrayXd values;
};

// samples (|x|² + eps²)^{-b/2}
WeightField make_weight(const Grid& g, double b, double eps_reg);
// exact |x|^{-b} off the origin; the origin node carries -Z_d(b) h^{-b} so the
// rectangle rule for |x|^{-b}·smooth converges at the smooth-data rate
WeightField make_corrected_weight(const Grid& g, double b);

// Σ'_{n∈Z^d} |n|^{-s}, analytically continued (Epstein zeta of the cubic lattice)
double lattice_zeta(int d, double s);

}  // namespace ibnls
