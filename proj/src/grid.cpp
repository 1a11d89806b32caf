#include "ibnls/grid.hpp"

#include <fftw3.h>

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "ibnls/error.hpp"

namespace ibnls {

struct Grid::Tables {
  Eigen::ArrayXd radius;
  Eigen::ArrayXd xi2;
};

Grid::Grid(int dim, int n, double half_width, bool offset)
    : dim_(dim), n_(n), L_(half_width), offset_(offset) {
  auto t = std::make_shared<Tables>();
  const Eigen::Index N = size();
  t->radius.setZero(N);
  t->xi2.setZero(N);
  for (Eigen::Index i = 0; i < N; ++i) {
    auto ix = unravel(i);
    double r2 = 0, k2 = 0;
    for (int a = 0; a < dim_; ++a) {
      double x = axis_coord(ix[a]), k = axis_wavenumber(ix[a]);
      r2 += x * x;
      k2 += k * k;
    }
    t->radius[i] = std::sqrt(r2);
    t->xi2[i] = k2;
  }
  tables_ = std::move(t);
}

double Grid::cell_volume() const { return std::pow(spacing(), dim_); }

Eigen::Index Grid::size() const {
  Eigen::Index s = 1;
  for (int a = 0; a < dim_; ++a) s *= n_;
  return s;
}

double Grid::axis_wavenumber(int i) const {
  int j = i < n_ / 2 ? i : i - n_;
  return std::numbers::pi / L_ * j;
}

std::array<int, 3> Grid::unravel(Eigen::Index idx) const {
  std::array<int, 3> ix{0, 0, 0};
  for (int a = dim_ - 1; a >= 0; --a) {
    ix[a] = static_cast<int>(idx % n_);
    idx /= n_;
  }
  return ix;
}

const Eigen::ArrayXd& Grid::radius() const { return tables_->radius; }
const Eigen::ArrayXd& Grid::xi2() const { return tables_->xi2; }

Eigen::ArrayXd Grid::coordinate(int axis) const {
  Eigen::ArrayXd out(size());
  for (Eigen::Index i = 0; i < size(); ++i) out[i] = axis_coord(unravel(i)[axis]);
  return out;
}

Eigen::ArrayXd Grid::wavenumber(int axis) const {
  Eigen::ArrayXd out(size());
  for (Eigen::Index i = 0; i < size(); ++i) {
    int k = unravel(i)[axis];
    out[i] = (k == n_ / 2) ? 0.0 : axis_wavenumber(k);
  }
  return out;
}

Grid make_grid(int dim, int n_points, double half_width, bool offset) {
  if (dim < 1 || dim > 3) throw Error(ErrorKind::InvalidGrid, "dim must be 1, 2 or 3");
  if (n_points < 8 || (n_points & (n_points - 1)) != 0)
    throw Error(ErrorKind::InvalidGrid, "n_points must be a power of two >= 8");
  if (!(half_width > 0)) throw Error(ErrorKind::InvalidGrid, "half_width must be positive");
  return Grid(dim, n_points, half_width, offset);
}

Field zeros(const Grid& g) { return Field{g, Eigen::ArrayXcd::Zero(g.size()), Space::Physical}; }

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (a != b) throw Error(ErrorKind::GridMismatch, what);
}

// FFTW plans are cached per (dim, n, sign, alignment). Planning is not
// thread-safe in FFTW, execution with new arrays is.
namespace {

std::mutex plan_mutex;
std::map<std::tuple<int, int, int, int>, fftw_plan> plan_cache;

fftw_plan get_plan(int dim, int n, int sign, int align, Eigen::Index total) {
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto key = std::make_tuple(dim, n, sign, align);
  auto it = plan_cache.find(key);
  if (it != plan_cache.end()) return it->second;
  // scratch with the same alignment offset as the data we will execute on
  char* raw = static_cast<char*>(fftw_malloc(sizeof(fftw_complex) * total + 64));
  auto* buf = reinterpret_cast<fftw_complex*>(raw + align);
  int dims[3] = {n, n, n};
  fftw_plan pl = fftw_plan_dft(dim, dims, buf, buf, sign, FFTW_ESTIMATE);
  fftw_free(raw);
  plan_cache.emplace(key, pl);
  return pl;
}

void fft_inplace(Eigen::ArrayXcd& v, const Grid& g, int sign) {
  auto* data = reinterpret_cast<fftw_complex*>(v.data());
  int align = fftw_alignment_of(reinterpret_cast<double*>(v.data()));
  fftw_plan pl = get_plan(g.dim(), g.n(), sign, align, g.size());
  fftw_execute_dft(pl, data, data);
  v *= 1.0 / std::sqrt(static_cast<double>(g.size()));
}

}  // namespace

Field transform(const Field& f) {
  if (f.space != Space::Physical) throw Error(ErrorKind::SpaceMismatch, "transform expects a physical field");
  Field out = f;
  fft_inplace(out.values, f.grid, FFTW_FORWARD);
  out.space = Space::Spectral;
  return out;
}

Field inverse_transform(const Field& f) {
  if (f.space != Space::Spectral)
    throw Error(ErrorKind::SpaceMismatch, "inverse_transform expects a spectral field");
  Field out = f;
  fft_inplace(out.values, f.grid, FFTW_BACKWARD);
  out.space = Space::Physical;
  return out;
}

void transform_inplace(Field& f) {
  if (f.space != Space::Physical) throw Error(ErrorKind::SpaceMismatch, "transform expects a physical field");
  fft_inplace(f.values, f.grid, FFTW_FORWARD);
  f.space = Space::Spectral;
}

void inverse_transform_inplace(Field& f) {
  if (f.space != Space::Spectral)
    throw Error(ErrorKind::SpaceMismatch, "inverse_transform expects a spectral field");
  fft_inplace(f.values, f.grid, FFTW_BACKWARD);
  f.space = Space::Physical;
}

Field to_spectral(const Field& f) { return f.space == Space::Spectral ? f : transform(f); }
Field to_physical(const Field& f) { return f.space == Space::Physical ? f : inverse_transform(f); }

Field apply_multiplier(const Field& f, const Eigen::ArrayXcd& m) {
  Field s = to_spectral(f);
  s.values *= m;
  return f.space == Space::Physical ? inverse_transform(s) : s;
}

Field apply_multiplier(const Field& f, const Eigen::ArrayXd& m) {
  Field s = to_spectral(f);
  s.values *= m;
  return f.space == Space::Physical ? inverse_transform(s) : s;
}

Field laplacian(const Field& f) { return apply_multiplier(f, Eigen::ArrayXd(-f.grid.xi2())); }

Field derivative(const Field& f, int axis) {
  Eigen::ArrayXcd m = cplx(0, 1) * f.grid.wavenumber(axis).cast<cplx>();
  return apply_multiplier(f, m);
}

cplx inner(const Field& a, const Field& b) {
  require_same_grid(a.grid, b.grid, "inner product");
  if (a.space != b.space) throw Error(ErrorKind::SpaceMismatch, "inner product across spaces");
  return a.grid.cell_volume() * (a.values.conjugate() * b.values).sum();
}

double l2_norm(const Field& f) { return std::sqrt(f.grid.cell_volume() * f.values.abs2().sum()); }

SobolevNorms sobolev_norms(const Field& f) {
  Field s = to_spectral(f);
  const double dv = f.grid.cell_volume();
  Eigen::ArrayXd p = s.values.abs2();
  const auto& k2 = f.grid.xi2();
  SobolevNorms n;
  n.l2 = std::sqrt(dv * p.sum());
  n.h1dot = std::sqrt(dv * (k2 * p).sum());
  n.h2dot = std::sqrt(dv * (k2 * k2 * p).sum());
  n.h2 = std::sqrt(n.l2 * n.l2 + n.h2dot * n.h2dot);
  return n;
}

WeightField make_weight(const Grid& g, double b, double eps_reg) {
  if (!(b > 0)) throw Error(ErrorKind::ParameterOutOfRange, "weight exponent b must be positive");
  if (!(eps_reg >= 0)) throw Error(ErrorKind::ParameterOutOfRange, "eps_reg must be >= 0");
  if (eps_reg == 0 && g.contains_origin())
    throw Error(ErrorKind::SingularOrigin, "eps_reg = 0 on a grid containing the origin");
  WeightField w{g, b, eps_reg, OriginRule::Regularized, {}};
  w.values = (g.radius().square() + eps_reg * eps_reg).pow(-0.5 * b);
  return w;
}

double lattice_zeta(int d, double s) {
  if (d < 1 || d > 3) throw Error(ErrorKind::ParameterOutOfRange, "lattice_zeta supports d in {1,2,3}");
  if (!(s > 0) || s == d) throw Error(ErrorKind::ParameterOutOfRange, "lattice_zeta needs s > 0, s != d");
  // theta-function splitting at t = 1:
  // π^{-a}Γ(a)Z = Σ'[Γ(a,πn²)(πn²)^{-a} + Γ(d/2-a,πn²)(πn²)^{a-d/2}] - 1/a - 1/(d/2-a), a = s/2
  const double pi = std::numbers::pi;
  const double a = 0.5 * s, c = 0.5 * d - a;
  const int K = 6;  // Γ(·, π·36) ~ e^{-113}
  int lo[3] = {0, 0, 0}, hi[3] = {0, 0, 0};
  for (int k = 0; k < d; ++k) lo[k] = -K, hi[k] = K;
  double sum = 0;
  for (int i = lo[0]; i <= hi[0]; ++i)
    for (int j = lo[1]; j <= hi[1]; ++j)
      for (int l = lo[2]; l <= hi[2]; ++l) {
        int n2 = i * i + j * j + l * l;
        if (n2 == 0) continue;
        double x = pi * n2;
        sum += boost::math::tgamma(a, x) * std::pow(x, -a);
        // Γ(c, x) for c ≤ 0 is not defined in boost; c > 0 always holds for s < d
        if (c > 0)
          sum += boost::math::tgamma(c, x) * std::pow(x, -c);
        else
          throw Error(ErrorKind::ParameterOutOfRange, "lattice_zeta needs s < d");
      }
  double total = sum - 1.0 / a - 1.0 / c;
  return total * std::pow(pi, a) / std::tgamma(a);
}

WeightField make_corrected_weight(const Grid& g, double b) {
  if (!(b > 0) || !(b < g.dim()))
    throw Error(ErrorKind::ParameterOutOfRange, "corrected weight needs 0 < b < d");
  WeightField w{g, b, 0.0, OriginRule::LatticeCorrected, {}};
  const auto& r = g.radius();
  w.values.resize(g.size());
  const double origin = -lattice_zeta(g.dim(), b) * std::pow(g.spacing(), -b);
  for (Eigen::Index i = 0; i < g.size(); ++i)
    w.values[i] = r[i] == 0.0 ? origin : std::pow(r[i], -b);
  return w;
}

}  // namespace ibnls
