#include "divcurl/spectral.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "divcurl/norms.hpp"

namespace divcurl {

BandIndex::BandIndex(const Grid& grid, double band) : grid_(grid), band_(band) {
  const double b2 = band * band * (1.0 + 1e-12);
  for_each_frequency(grid, [&](std::size_t, std::span<const int> k) {
    const double r2 = norm_squared(k);
    if (r2 > 0.0 && r2 <= b2 && !grid.on_nyquist_row(k)) modes_.emplace_back(k.begin(), k.end());
  });
  std::sort(modes_.begin(), modes_.end(), [](const Frequency& a, const Frequency& b) {
    const double ra = norm_squared(a), rb = norm_squared(b);
    if (ra != rb) return ra < rb;
    return a > b;
  });
  for (std::size_t i = 0; i < modes_.size(); ++i) lookup_.emplace(modes_[i], i);
}

std::optional<std::size_t> BandIndex::position(const Frequency& k) const {
  if (auto it = lookup_.find(k); it != lookup_.end()) return it->second;
  return std::nullopt;
}

Eigen::VectorXcd BandIndex::restrict(const ScalarField& f) const {
  require_same_grid(grid_, f.grid(), "band restriction");
  const auto spec = f.spectrum();
  Eigen::VectorXcd out(static_cast<Eigen::Index>(modes_.size()));
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = spec[grid_.flat_index_of_frequency(modes_[i])];
  }
  return out;
}

ScalarField BandIndex::extend(const Eigen::VectorXcd& coefficients) const {
  if (static_cast<std::size_t>(coefficients.size()) != modes_.size()) {
    throw GridMismatch("band vector length does not match band index");
  }
  std::vector<cplx> spec(grid_.size(), cplx{});
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    spec[grid_.flat_index_of_frequency(modes_[i])] = coefficients(static_cast<Eigen::Index>(i));
  }
  return ScalarField::from_spectrum(grid_, std::move(spec));
}

DenseOperator::DenseOperator(Eigen::MatrixXcd matrix)
    : matrix_(std::move(matrix)), cache_(std::make_shared<Cache>()) {}

DenseOperator::DenseOperator(Eigen::MatrixXcd matrix, std::shared_ptr<const BandIndex> index,
                             double truncation)
    : matrix_(std::move(matrix)), index_(std::move(index)), truncation_(truncation),
      cache_(std::make_shared<Cache>()) {}

const std::vector<double>& DenseOperator::singular_values() const {
  std::call_once(cache_->once, [this] { cache_->values = divcurl::singular_values(matrix_); });
  return cache_->values;
}

std::vector<double> singular_values(const Eigen::MatrixXcd& matrix) {
  if (matrix.size() == 0) return {};
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(matrix);
  if (svd.info() != Eigen::Success) throw std::runtime_error("singular value decomposition failed to converge");
  const auto& sv = svd.singularValues();
  std::vector<double> out(sv.data(), sv.data() + sv.size());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

std::vector<double> singular_values(const DenseOperator& op) { return op.singular_values(); }

namespace {

struct BandedMultiplier {
  std::shared_ptr<const BandIndex> index;
  std::vector<cplx> spectrum;  // of the truncated u
  double truncation = 0.0;
};

BandedMultiplier prepare(const ScalarField& u, double band) {
  const Grid& grid = u.grid();
  // u is cut to |k| <= band, so only shifts k - m inside that ball are looked
  // up; they stay off the Nyquist row and alias-free while band < n/2.
  if (band >= grid.nyquist()) {
    throw std::invalid_argument("band " + std::to_string(band) + " must stay below the Nyquist frequency n/2 = " +
                                std::to_string(grid.nyquist()));
  }
  if (band < 1.0) throw std::invalid_argument("band must be >= 1");
  BandedMultiplier out;
  out.index = std::make_shared<const BandIndex>(grid, band);
  out.truncation = out_of_band_fraction(u, band);
  out.spectrum = band_limit(u, band).spectrum();
  return out;
}

// u^(k - m) for band modes k, m; zero once |k - m| leaves the band u was cut to.
cplx shifted_coefficient(const BandedMultiplier& mult, const Frequency& k, const Frequency& m,
                         Frequency& scratch) {
  const double b2 = mult.index->band() * mult.index->band() * (1.0 + 1e-12);
  double r2 = 0.0;
  for (std::size_t a = 0; a < k.size(); ++a) {
    scratch[a] = k[a] - m[a];
    r2 += static_cast<double>(scratch[a]) * scratch[a];
  }
  if (r2 > b2) return {};
  return mult.spectrum[mult.index->grid().flat_index_of_frequency(scratch)];
}

}  // namespace

DenseOperator materialize_commutator(const ScalarField& u, int j, double band) {
  if (j < 0 || j >= u.grid().dim()) throw std::out_of_range("commutator component index");
  const auto mult = prepare(u, band);
  const auto& idx = *mult.index;
  const auto size = static_cast<Eigen::Index>(idx.size());
  std::vector<double> symbol(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    symbol[i] = idx.mode(i)[j] / std::sqrt(norm_squared(idx.mode(i)));
  }
  Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(size, size);
  Frequency scratch(static_cast<std::size_t>(u.grid().dim()));
  for (std::size_t r = 0; r < idx.size(); ++r) {
    for (std::size_t c = 0; c < idx.size(); ++c) {
      const double diff = symbol[r] - symbol[c];
      if (diff == 0.0) continue;
      mat(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          diff * shifted_coefficient(mult, idx.mode(r), idx.mode(c), scratch);
    }
  }
  return DenseOperator(std::move(mat), mult.index, mult.truncation);
}

DenseOperator materialize_cwikel(const ScalarField& u, double band) {
  const auto mult = prepare(u, band);
  const auto& idx = *mult.index;
  const auto size = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXcd mat(size, size);
  Frequency scratch(static_cast<std::size_t>(u.grid().dim()));
  for (std::size_t c = 0; c < idx.size(); ++c) {
    const double inv = 1.0 / std::sqrt(norm_squared(idx.mode(c)));
    for (std::size_t r = 0; r < idx.size(); ++r) {
      mat(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          inv * shifted_coefficient(mult, idx.mode(r), idx.mode(c), scratch);
    }
  }
  return DenseOperator(std::move(mat), mult.index, mult.truncation);
}

namespace {

void require_orthonormal_columns(const Eigen::MatrixXcd& m, const char* which) {
  const Eigen::MatrixXcd gram = m.adjoint() * m;
  const double dev = (gram - Eigen::MatrixXcd::Identity(m.cols(), m.cols())).cwiseAbs().maxCoeff();
  if (dev > 1e-10) {
    throw std::invalid_argument(std::string(which) + " vectors are not orthonormal (deviation " +
                                std::to_string(dev) + ")");
  }
}

}  // namespace

TracePairing trace_pairing_bound(const DenseOperator& op, const Eigen::MatrixXcd& xs,
                                 const Eigen::MatrixXcd& ys) {
  if (xs.cols() != ys.cols()) throw std::invalid_argument("trace pairing needs equally many x and y vectors");
  if (xs.rows() != op.rows() || ys.rows() != op.cols()) {
    throw GridMismatch("trace pairing vectors do not match the operator shape");
  }
  if (xs.cols() > std::min(op.rows(), op.cols())) {
    throw std::invalid_argument("more vectors than the smaller operator dimension");
  }
  if (xs.cols() > 0) {
    require_orthonormal_columns(xs, "x");
    require_orthonormal_columns(ys, "y");
  }
  TracePairing out;
  const Eigen::MatrixXcd ky = op.matrix() * ys;
  for (Eigen::Index n = 0; n < xs.cols(); ++n) out.lhs += std::abs(xs.col(n).dot(ky.col(n)));
  const auto& s = op.singular_values();
  for (Eigen::Index n = 0; n < xs.cols(); ++n) out.rhs += s[static_cast<std::size_t>(n)];
  return out;
}

PartialSum partial_sum_bound(std::span<const double> s, double p, std::size_t count) {
  if (!(p > 1.0)) throw std::invalid_argument("partial-sum bound needs p > 1");
  if (count > s.size()) throw std::invalid_argument("partial-sum length exceeds the spectrum");
  PartialSum out;
  for (std::size_t n = 0; n < count; ++n) out.sum += s[n];
  out.cap = p / (p - 1.0) * weak_lp_functional(s, p) * std::pow(static_cast<double>(count), 1.0 - 1.0 / p);
  return out;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CliffordAlgebra::CliffordAlgebra(int dim, std::vector<Eigen::MatrixXcd> generators)
    : dim_(dim), generators_(std::move(generators)) {
  if (static_cast<int>(generators_.size()) != dim) throw std::invalid_argument("need d generators");
}

double CliffordAlgebra::anticommutation_defect() const {
  double worst = 0.0;
  const auto id = Eigen::MatrixXcd::Identity(size(), size());
  for (int j = 0; j < dim_; ++j) {
    for (int k = j; k < dim_; ++k) {
      const Eigen::MatrixXcd anti = (*this)[j] * (*this)[k] + (*this)[k] * (*this)[j];
      const Eigen::MatrixXcd target = j == k ? Eigen::MatrixXcd(2.0 * id) : Eigen::MatrixXcd::Zero(size(), size());
      worst = std::max(worst, (anti - target).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

double CliffordAlgebra::hermiticity_defect() const {
  double worst = 0.0;
  for (const auto& g : generators_) worst = std::max(worst, (g - g.adjoint()).cwiseAbs().maxCoeff());
  return worst;
}

CliffordAlgebra clifford_generators(int d) {
  if (d < 2 || d > 8) throw std::invalid_argument("Clifford generators are provided for 2 <= d <= 8");
  using M = Eigen::MatrixXcd;
  M s1(2, 2), s2(2, 2), s3(2, 2);
  s1 << 0, 1, 1, 0;
  s2 << 0, cplx(0, -1), cplx(0, 1), 0;
  s3 << 1, 0, 0, -1;
  const M id2 = M::Identity(2, 2);
  const int m = d / 2;
  auto chain = [&](int a, const M& middle) {
    // s3 on the first a factors, middle on factor a, identity afterwards
    M out = M::Identity(1, 1);
    for (int f = 0; f < m; ++f) out = kron(out, f < a ? s3 : (f == a ? middle : id2));
    return out;
  };
  std::vector<M> gens;
  for (int a = 0; a < m; ++a) {
    gens.push_back(chain(a, s1));
    gens.push_back(chain(a, s2));
  }
  if (d % 2 == 1) {
    M top = M::Identity(1, 1);
    for (int f = 0; f < m; ++f) top = kron(top, s3);
    gens.push_back(top);
  }
  return CliffordAlgebra(d, std::move(gens));
}

CommutatorRecovery clifford_commutator_recovery(const ScalarField& u, int j, double band) {
  const int d = u.grid().dim();
  if (j < 0 || j >= d) throw std::out_of_range("commutator component index");
  const auto gamma = clifford_generators(d);
  std::vector<DenseOperator> parts;
  for (int l = 0; l < d; ++l) parts.push_back(materialize_commutator(u, l, band));
  const Eigen::Index spinor = gamma.size();
  const Eigen::Index space = parts.front().rows();
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(spinor * space, spinor * space);
  for (int l = 0; l < d; ++l) c += kron(gamma[l], parts[static_cast<std::size_t>(l)].matrix());
  const Eigen::MatrixXcd gj = kron(gamma[j], Eigen::MatrixXcd::Identity(space, space));
  CommutatorRecovery out;
  out.rhs = 0.5 * (c * gj + gj * c);
  out.lhs = kron(Eigen::MatrixXcd::Identity(spinor, spinor), parts[static_cast<std::size_t>(j)].matrix());
  out.deviation = (out.lhs - out.rhs).cwiseAbs().maxCoeff();
  return out;
}

}  // namespace divcurl
