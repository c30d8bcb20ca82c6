#include "divcurl/calculus.hpp"

#include <cmath>

namespace divcurl {
namespace {

constexpr cplx kI{0.0, 1.0};

std::vector<std::vector<cplx>> spectra_of(const VectorField& f) {
  std::vector<std::vector<cplx>> out;
  out.reserve(static_cast<std::size_t>(f.components()));
  for (const auto& c : f.parts()) out.push_back(c.spectrum());
  return out;
}

std::vector<ScalarField> fields_from(const Grid& grid, std::vector<std::vector<cplx>> specs) {
  std::vector<ScalarField> out;
  out.reserve(specs.size());
  for (auto& s : specs) out.push_back(ScalarField::from_spectrum(grid, std::move(s)));
  return out;
}

void require_vector_dim(const VectorField& f, const char* op) {
  if (f.components() != f.grid().dim()) {
    throw GridMismatch(std::string(op) + ": expected d components");
  }
}

}  // namespace

VectorField gradient(const ScalarField& phi) {
  const Grid& g = phi.grid();
  const auto spec = phi.spectrum();
  std::vector<std::vector<cplx>> out(static_cast<std::size_t>(g.dim()), std::vector<cplx>(g.size()));
  for_each_frequency(g, [&](std::size_t i, std::span<const int> k) {
    for (int j = 0; j < g.dim(); ++j) out[j][i] = kI * static_cast<double>(k[j]) * spec[i];
  });
  return VectorField(fields_from(g, std::move(out)));
}

ScalarField divergence(const VectorField& field) {
  require_vector_dim(field, "divergence");
  const Grid& g = field.grid();
  const auto spec = spectra_of(field);
  std::vector<cplx> out(g.size(), cplx{});
  for_each_frequency(g, [&](std::size_t i, std::span<const int> k) {
    for (int j = 0; j < g.dim(); ++j) out[i] += kI * static_cast<double>(k[j]) * spec[j][i];
  });
  return ScalarField::from_spectrum(g, std::move(out));
}

TwoFormField curl(const VectorField& field) {
  require_vector_dim(field, "curl");
  const Grid& g = field.grid();
  const int d = g.dim();
  const auto spec = spectra_of(field);
  std::vector<std::vector<cplx>> out(static_cast<std::size_t>(TwoFormField::component_count(d)),
                                     std::vector<cplx>(g.size()));
  for_each_frequency(g, [&](std::size_t i, std::span<const int> k) {
    int p = 0;
    for (int a = 0; a < d; ++a) {
      for (int b = a + 1; b < d; ++b, ++p) {
        out[p][i] = kI * (static_cast<double>(k[a]) * spec[b][i] - static_cast<double>(k[b]) * spec[a][i]);
      }
    }
  });
  return TwoFormField(g, fields_from(g, std::move(out)));
}

std::vector<ScalarField> exterior_derivative(const TwoFormField& alpha) {
  const Grid& g = alpha.grid();
  const int d = g.dim();
  std::vector<std::vector<cplx>> spec;
  for (const auto& c : alpha.parts()) spec.push_back(c.spectrum());
  auto comp = [&](int a, int b, std::size_t i) {
    return spec[static_cast<std::size_t>(TwoFormField::pair_index(d, a, b))][i];
  };
  std::vector<std::vector<cplx>> out;
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b)
      for (int c = b + 1; c < d; ++c) out.emplace_back(g.size());
  for_each_frequency(g, [&](std::size_t i, std::span<const int> k) {
    int p = 0;
    for (int a = 0; a < d; ++a) {
      for (int b = a + 1; b < d; ++b) {
        for (int c = b + 1; c < d; ++c, ++p) {
          out[p][i] = kI * (static_cast<double>(k[a]) * comp(b, c, i) -
                            static_cast<double>(k[b]) * comp(a, c, i) +
                            static_cast<double>(k[c]) * comp(a, b, i));
        }
      }
    }
  });
  return fields_from(g, std::move(out));
}

VectorField codifferential(const TwoFormField& alpha) {
  const Grid& g = alpha.grid();
  const int d = g.dim();
  std::vector<std::vector<cplx>> spec;
  for (const auto& c : alpha.parts()) spec.push_back(c.spectrum());
  std::vector<std::vector<cplx>> out(static_cast<std::size_t>(d), std::vector<cplx>(g.size(), cplx{}));
  for_each_frequency(g, [&](std::size_t i, std::span<const int> k) {
    for (int a = 0; a < d; ++a) {
      for (int b = a + 1; b < d; ++b) {
        const cplx v = spec[static_cast<std::size_t>(TwoFormField::pair_index(d, a, b))][i];
        // -(d_a alpha_{ab}) lands in component b, -(d_b alpha_{ba}) = +d_b alpha_{ab} in a
        out[b][i] -= kI * static_cast<double>(k[a]) * v;
        out[a][i] += kI * static_cast<double>(k[b]) * v;
      }
    }
  });
  return VectorField(fields_from(g, std::move(out)));
}

ScalarField riesz_component(const ScalarField& f, int j) {
  if (j < 0 || j >= f.grid().dim()) throw std::out_of_range("Riesz component index");
  return apply_multiplier(f, [j](std::span<const int> k) {
    const double r2 = norm_squared(k);
    return r2 == 0.0 ? cplx{} : cplx{k[j] / std::sqrt(r2)};
  });
}

VectorField riesz(const ScalarField& f) {
  const Grid& g = f.grid();
  const auto spec = f.spectrum();
  std::vector<std::vector<cplx>> out(static_cast<std::size_t>(g.dim()), std::vector<cplx>(g.size()));
  for_each_frequency(g, [&](std::size_t i, std::span<const int> k) {
    const double r2 = norm_squared(k);
    const double inv = r2 == 0.0 ? 0.0 : 1.0 / std::sqrt(r2);
    for (int j = 0; j < g.dim(); ++j) out[j][i] = static_cast<double>(k[j]) * inv * spec[i];
  });
  return VectorField(fields_from(g, std::move(out)));
}

VectorField leray_project(const VectorField& field) {
  require_vector_dim(field, "leray_project");
  const Grid& g = field.grid();
  const int d = g.dim();
  auto spec = spectra_of(field);
  for_each_frequency(g, [&](std::size_t i, std::span<const int> k) {
    const double r2 = norm_squared(k);
    if (r2 == 0.0) return;
    cplx kdot{};
    for (int j = 0; j < d; ++j) kdot += static_cast<double>(k[j]) * spec[j][i];
    for (int j = 0; j < d; ++j) spec[j][i] -= static_cast<double>(k[j]) * kdot / r2;
  });
  return VectorField(fields_from(g, std::move(spec)));
}

ScalarField fractional_laplacian(const ScalarField& f, double s) {
  if (s < 0.0) {
    const double mean = std::abs(integrate(f));
    if (mean > 1e-12) {
      throw std::invalid_argument("negative-order fractional Laplacian needs a zero-mean input (mean " +
                                  std::to_string(mean) + ")");
    }
  }
  return apply_multiplier(f, [s](std::span<const int> k) {
    const double r2 = norm_squared(k);
    return r2 == 0.0 ? cplx{} : cplx{std::pow(r2, 0.5 * s)};
  });
}

VectorField fractional_laplacian(const VectorField& f, double s) {
  std::vector<ScalarField> comps;
  for (const auto& c : f.parts()) comps.push_back(fractional_laplacian(c, s));
  return VectorField(std::move(comps));
}

double gradient_energy(const ScalarField& field) {
  const auto spec = field.spectrum();
  double e = 0.0;
  for_each_frequency(field.grid(), [&](std::size_t i, std::span<const int> k) {
    e += norm_squared(k) * std::norm(spec[i]);
  });
  return e;
}

double gradient_energy(const VectorField& field) {
  double e = 0.0;
  for (const auto& c : field.parts()) e += gradient_energy(c);
  return e;
}

double l2_norm_squared(const TwoFormField& alpha) {
  double s = 0.0;
  for (const auto& c : alpha.parts()) s += inner_product(c, c).real();
  return s;
}

double curl_residual(const VectorField& field) {
  const double scale = gradient_energy(field);
  if (scale == 0.0) return 0.0;
  return std::sqrt(l2_norm_squared(curl(field)) / scale);
}

double divergence_residual(const VectorField& field) {
  const double scale = gradient_energy(field);
  if (scale == 0.0) return 0.0;
  return l2_norm(divergence(field)) / std::sqrt(scale);
}

double mean_residual(const ScalarField& field) { return std::abs(integrate(field)); }

double mean_residual(const VectorField& field) {
  double m = 0.0;
  for (const auto& c : field.parts()) m = std::max(m, mean_residual(c));
  return m;
}

ScalarField scalar_potential(const VectorField& e, double tol) {
  require_vector_dim(e, "scalar_potential");
  const double residual = curl_residual(e);
  if (residual > tol) throw ConstraintViolation("scalar_potential: field is not curl-free", residual);
  const double mean = mean_residual(e);
  if (mean > tol) throw ConstraintViolation("scalar_potential: field is not zero-mean", mean);
  const Grid& g = e.grid();
  const auto spec = spectra_of(e);
  std::vector<cplx> out(g.size(), cplx{});
  for_each_frequency(g, [&](std::size_t i, std::span<const int> k) {
    const double r2 = norm_squared(k);
    if (r2 == 0.0) return;
    cplx kdot{};
    for (int j = 0; j < g.dim(); ++j) kdot += static_cast<double>(k[j]) * spec[j][i];
    out[i] = -kI * kdot / r2;
  });
  return ScalarField::from_spectrum(g, std::move(out));
}

namespace {

void require_div_free(const VectorField& b, double tol, const char* op) {
  const double residual = divergence_residual(b);
  if (residual > tol) {
    throw ConstraintViolation(std::string(op) + ": field is not divergence-free", residual);
  }
  const double mean = mean_residual(b);
  if (mean > tol) throw ConstraintViolation(std::string(op) + ": field is not zero-mean", mean);
}

}  // namespace

TwoFormField two_form_potential(const VectorField& b, double tol) {
  require_vector_dim(b, "two_form_potential");
  require_div_free(b, tol, "two_form_potential");
  const Grid& g = b.grid();
  const int d = g.dim();
  const auto spec = spectra_of(b);
  std::vector<std::vector<cplx>> out(static_cast<std::size_t>(TwoFormField::component_count(d)),
                                     std::vector<cplx>(g.size(), cplx{}));
  // alpha = d omega_B / |k|^2, so d* alpha = B - k (k.B)/|k|^2 = B and d alpha = 0
  for_each_frequency(g, [&](std::size_t i, std::span<const int> k) {
    const double r2 = norm_squared(k);
    if (r2 == 0.0) return;
    int p = 0;
    for (int a = 0; a < d; ++a) {
      for (int c = a + 1; c < d; ++c, ++p) {
        out[p][i] = kI * (static_cast<double>(k[a]) * spec[c][i] - static_cast<double>(k[c]) * spec[a][i]) / r2;
      }
    }
  });
  return TwoFormField(g, fields_from(g, std::move(out)));
}

VectorField vector_potential_3d(const VectorField& b, double tol) {
  if (b.grid().dim() != 3) throw std::invalid_argument("vector_potential_3d requires d = 3");
  require_vector_dim(b, "vector_potential_3d");
  require_div_free(b, tol, "vector_potential_3d");
  const Grid& g = b.grid();
  const auto spec = spectra_of(b);
  std::vector<std::vector<cplx>> out(3, std::vector<cplx>(g.size(), cplx{}));
  // A = i k x B / |k|^2
  for_each_frequency(g, [&](std::size_t i, std::span<const int> k) {
    const double r2 = norm_squared(k);
    if (r2 == 0.0) return;
    const double k0 = k[0], k1 = k[1], k2 = k[2];
    out[0][i] = kI * (k1 * spec[2][i] - k2 * spec[1][i]) / r2;
    out[1][i] = kI * (k2 * spec[0][i] - k0 * spec[2][i]) / r2;
    out[2][i] = kI * (k0 * spec[1][i] - k1 * spec[0][i]) / r2;
  });
  return VectorField(fields_from(g, std::move(out)));
}

VectorField two_form_to_vector_3d(const TwoFormField& alpha) {
  if (alpha.grid().dim() != 3) throw std::invalid_argument("3d identification requires d = 3");
  // alpha_{12} = A_3, alpha_{13} = -A_2, alpha_{23} = A_1 (1-based)
  return VectorField({alpha[2], alpha[1] * cplx{-1.0}, alpha[0]});
}

VectorField classical_curl_3d(const VectorField& field) {
  if (field.grid().dim() != 3) throw std::invalid_argument("classical curl requires d = 3");
  const auto c = curl(field);
  // (curl F)_1 = d_2 F_3 - d_3 F_2 = c_{23}, (curl F)_2 = -c_{13}, (curl F)_3 = c_{12}
  return VectorField({c[2], c[1] * cplx{-1.0}, c[0]});
}

VectorField cross(const VectorField& a, const VectorField& b) {
  if (a.components() != 3 || b.components() != 3) throw GridMismatch("cross product needs 3 components");
  return VectorField({a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]});
}

TwoFormField wedge(const VectorField& a, const VectorField& b) {
  require_vector_dim(a, "wedge");
  require_vector_dim(b, "wedge");
  const int d = a.grid().dim();
  std::vector<ScalarField> comps;
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) comps.push_back(a[j] * b[k] - a[k] * b[j]);
  }
  return TwoFormField(a.grid(), std::move(comps));
}

ScalarField pair_two_forms(const TwoFormField& beta, const TwoFormField& gamma) {
  require_same_grid(beta.grid(), gamma.grid(), "2-form pairing");
  ScalarField sum(beta.grid());
  for (int p = 0; p < beta.components(); ++p) sum += beta[p] * gamma[p];
  return sum;
}

}  // namespace divcurl
