#include "divcurl/fields.hpp"

#include <fmt/format.h>

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "divcurl/fft.hpp"

namespace divcurl {

ScalarField::ScalarField(Grid grid) : grid_(grid), values_(grid.size(), cplx{}) {}

ScalarField::ScalarField(Grid grid, std::vector<cplx> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw GridMismatch("value count " + std::to_string(values_.size()) +
                       " does not match grid size " + std::to_string(grid_.size()));
  }
}

ScalarField ScalarField::constant(const Grid& grid, cplx value) {
  return ScalarField(grid, std::vector<cplx>(grid.size(), value));
}

ScalarField ScalarField::from_spectrum(const Grid& grid, std::vector<cplx> spectrum) {
  if (spectrum.size() != grid.size()) {
    throw GridMismatch("spectrum size does not match grid");
  }
  std::vector<cplx> values(grid.size());
  fft::inverse(grid, spectrum, values);
  return ScalarField(grid, std::move(values));
}

ScalarField ScalarField::from_function(const Grid& grid,
                                       const std::function<cplx(std::span<const double>)>& fn) {
  std::vector<cplx> values(grid.size());
  std::vector<double> x(static_cast<std::size_t>(grid.dim()));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid.point_at(i, x);
    values[i] = fn(x);
  }
  return ScalarField(grid, std::move(values));
}

ScalarField ScalarField::plane_wave(const Grid& grid, std::span<const int> k) {
  std::vector<cplx> spec(grid.size(), cplx{});
  spec[grid.flat_index_of_frequency(k)] = 1.0;
  return from_spectrum(grid, std::move(spec));
}

std::vector<cplx> ScalarField::spectrum() const {
  std::vector<cplx> spec(grid_.size());
  fft::forward(grid_, values_, spec);
  return spec;
}

ScalarField ScalarField::real_part() const {
  std::vector<cplx> v(values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = values_[i].real();
  return ScalarField(grid_, std::move(v));
}

ScalarField ScalarField::conj() const {
  std::vector<cplx> v(values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::conj(values_[i]);
  return ScalarField(grid_, std::move(v));
}

double ScalarField::max_imag() const {
  double m = 0.0;
  for (const auto& v : values_) m = std::max(m, std::abs(v.imag()));
  return m;
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
  require_same_grid(grid_, other.grid_, "field addition");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
  require_same_grid(grid_, other.grid_, "field subtraction");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

ScalarField& ScalarField::operator*=(cplx c) {
  for (auto& v : values_) v *= c;
  return *this;
}

ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "pointwise product");
  std::vector<cplx> v(a.grid().size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] * b[i];
  return ScalarField(a.grid(), std::move(v));
}

VectorField::VectorField(Grid grid, int components) : grid_(grid) {
  if (components < 1) throw std::invalid_argument("vector field needs at least one component");
  comps_.assign(static_cast<std::size_t>(components), ScalarField(grid));
}

VectorField::VectorField(std::vector<ScalarField> components)
    : grid_(components.empty() ? throw std::invalid_argument("vector field needs components")
                               : components.front().grid()),
      comps_(std::move(components)) {
  for (const auto& c : comps_) require_same_grid(grid_, c.grid(), "vector field assembly");
}

VectorField VectorField::constant(const Grid& grid, std::span<const cplx> value) {
  std::vector<ScalarField> comps;
  for (cplx v : value) comps.push_back(ScalarField::constant(grid, v));
  return VectorField(std::move(comps));
}

VectorField& VectorField::operator+=(const VectorField& other) {
  if (other.components() != components()) throw GridMismatch("component count mismatch");
  for (std::size_t j = 0; j < comps_.size(); ++j) comps_[j] += other.comps_[j];
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& other) {
  if (other.components() != components()) throw GridMismatch("component count mismatch");
  for (std::size_t j = 0; j < comps_.size(); ++j) comps_[j] -= other.comps_[j];
  return *this;
}

VectorField& VectorField::operator*=(cplx c) {
  for (auto& comp : comps_) comp *= c;
  return *this;
}

VectorField operator*(const ScalarField& s, const VectorField& v) {
  std::vector<ScalarField> comps;
  comps.reserve(v.parts().size());
  for (const auto& c : v.parts()) comps.push_back(s * c);
  return VectorField(std::move(comps));
}

TwoFormField::TwoFormField(Grid grid)
    : grid_(grid), comps_(static_cast<std::size_t>(component_count(grid.dim())), ScalarField(grid)) {}

TwoFormField::TwoFormField(Grid grid, std::vector<ScalarField> components)
    : grid_(grid), comps_(std::move(components)) {
  if (static_cast<int>(comps_.size()) != component_count(grid.dim())) {
    throw GridMismatch("2-form needs d(d-1)/2 components");
  }
  for (const auto& c : comps_) require_same_grid(grid_, c.grid(), "2-form assembly");
}

int TwoFormField::pair_index(int dim, int j, int k) {
  if (!(0 <= j && j < k && k < dim)) {
    throw std::out_of_range("2-form index pair must satisfy 0 <= j < k < d");
  }
  // pairs (i, *) for i < j come first; row i holds d - 1 - i entries
  return j * (2 * dim - j - 1) / 2 + (k - j - 1);
}

ScalarField TwoFormField::at(int j, int k) const {
  if (j == k) return ScalarField(grid_);
  if (j < k) return comps_[static_cast<std::size_t>(pair_index(grid_.dim(), j, k))];
  return comps_[static_cast<std::size_t>(pair_index(grid_.dim(), k, j))] * cplx{-1.0};
}

std::vector<cplx> to_spectrum(const ScalarField& f) { return f.spectrum(); }

ScalarField apply_multiplier(const ScalarField& f, const Multiplier& m) {
  auto spec = f.spectrum();
  for_each_frequency(f.grid(), [&](std::size_t i, std::span<const int> k) {
    const cplx factor = m(k);
    if (!std::isfinite(factor.real()) || !std::isfinite(factor.imag())) {
      throw std::domain_error("multiplier is not finite at a lattice frequency");
    }
    spec[i] *= factor;
  });
  return ScalarField::from_spectrum(f.grid(), std::move(spec));
}

VectorField apply_multiplier(const VectorField& f, const Multiplier& m) {
  std::vector<ScalarField> comps;
  for (const auto& c : f.parts()) comps.push_back(apply_multiplier(c, m));
  return VectorField(std::move(comps));
}

cplx integrate(const ScalarField& f) {
  cplx s{};
  for (const auto& v : f.values()) s += v;
  return s / static_cast<double>(f.grid().size());
}

cplx inner_product(const ScalarField& f, const ScalarField& g) {
  require_same_grid(f.grid(), g.grid(), "inner product");
  cplx s{};
  for (std::size_t i = 0; i < f.grid().size(); ++i) s += f[i] * std::conj(g[i]);
  return s / static_cast<double>(f.grid().size());
}

cplx inner_product(const VectorField& f, const VectorField& g) {
  if (f.components() != g.components()) throw GridMismatch("inner product: component mismatch");
  cplx s{};
  for (int j = 0; j < f.components(); ++j) s += inner_product(f[j], g[j]);
  return s;
}

cplx spectral_inner_product(const ScalarField& f, const ScalarField& g) {
  require_same_grid(f.grid(), g.grid(), "inner product");
  const auto a = f.spectrum();
  const auto b = g.spectrum();
  cplx s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * std::conj(b[i]);
  return s;
}

double l2_norm(const ScalarField& f) { return std::sqrt(inner_product(f, f).real()); }
double l2_norm(const VectorField& f) { return std::sqrt(inner_product(f, f).real()); }

ScalarField dot(const VectorField& a, const VectorField& b) {
  if (a.components() != b.components()) throw GridMismatch("dot: component mismatch");
  require_same_grid(a.grid(), b.grid(), "dot");
  std::vector<cplx> v(a.grid().size(), cplx{});
  for (int j = 0; j < a.components(); ++j) {
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += a[j][i] * b[j][i];
  }
  return ScalarField(a.grid(), std::move(v));
}

ScalarField pointwise_dot_sum(std::span<const VectorField> e_list,
                              std::span<const VectorField> b_list) {
  if (e_list.size() != b_list.size()) {
    throw std::invalid_argument("pointwise_dot_sum: lists differ in length");
  }
  if (e_list.empty()) throw std::invalid_argument("pointwise_dot_sum: empty lists");
  ScalarField sum(e_list.front().grid());
  for (std::size_t n = 0; n < e_list.size(); ++n) sum += dot(e_list[n], b_list[n]);
  return sum;
}

ScalarField squared_magnitude(const VectorField& a) {
  std::vector<cplx> v(a.grid().size(), cplx{});
  for (int j = 0; j < a.components(); ++j) {
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += std::norm(a[j][i]);
  }
  return ScalarField(a.grid(), std::move(v));
}

ScalarField band_limit(const ScalarField& f, double band) {
  const double b2 = band * band * (1.0 + 1e-12);
  return apply_multiplier(f, [b2](std::span<const int> k) {
    return norm_squared(k) <= b2 ? cplx{1.0} : cplx{0.0};
  });
}

VectorField band_limit(const VectorField& f, double band) {
  std::vector<ScalarField> comps;
  for (const auto& c : f.parts()) comps.push_back(band_limit(c, band));
  return VectorField(std::move(comps));
}

double out_of_band_fraction(const ScalarField& f, double band) {
  const double b2 = band * band * (1.0 + 1e-12);
  const auto spec = f.spectrum();
  double outside = 0.0, total = 0.0;
  for_each_frequency(f.grid(), [&](std::size_t i, std::span<const int> k) {
    const double w = std::norm(spec[i]);
    total += w;
    if (norm_squared(k) > b2) outside += w;
  });
  return total > 0.0 ? std::sqrt(outside / total) : 0.0;
}

void write_components(std::ostream& out, const Grid& grid, std::span<const ScalarField> comps) {
  out << "divcurl-field 1\n";
  out << grid.dim() << ' ' << grid.n() << ' ' << comps.size() << '\n';
  for (const auto& c : comps) {
    require_same_grid(grid, c.grid(), "field dump");
    for (const auto& v : c.values()) out << fmt::format("{:.17g} {:.17g}\n", v.real(), v.imag());
  }
}

std::vector<ScalarField> read_components(std::istream& in) {
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "divcurl-field" || version != 1) {
    throw std::runtime_error("not a divcurl-field version 1 dump");
  }
  int d = 0, n = 0;
  std::size_t count = 0;
  if (!(in >> d >> n >> count)) throw std::runtime_error("truncated field header");
  const Grid grid(d, n);
  std::vector<ScalarField> comps;
  for (std::size_t c = 0; c < count; ++c) {
    std::vector<cplx> values(grid.size());
    for (auto& v : values) {
      double re = 0.0, im = 0.0;
      if (!(in >> re >> im)) throw std::runtime_error("truncated field values");
      v = {re, im};
    }
    comps.emplace_back(grid, std::move(values));
  }
  return comps;
}

}  // namespace divcurl
