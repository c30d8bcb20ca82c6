#include <cmath>

#include "divcurl/experiments.hpp"
#include "divcurl/norms.hpp"
#include "divcurl/rng.hpp"

namespace divcurl {

namespace {

using Eigen::MatrixXd;

// Nearest matrix with orthonormal rows (polar factor).
MatrixXd orthonormal_rows(const MatrixXd& q) {
  Eigen::JacobiSVD<MatrixXd> svd(q, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().transpose();
}

MatrixXd random_rows(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  RandomStream rng(seed);
  MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = rng.normal();
  return orthonormal_rows(m);
}

nlohmann::json to_json(const MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

// Real basis fields sampled on the grid: one column per basis member and
// component block, so g = sum_c rowwise(Phi_c C) . Psi_c.
struct Basis {
  std::vector<MatrixXd> comps;  // d matrices of size (points, P)
};

Basis sample(const std::vector<VectorField>& members, int d) {
  Basis b;
  const auto points = static_cast<Eigen::Index>(members.front().grid().size());
  for (int c = 0; c < d; ++c) {
    MatrixXd m(points, static_cast<Eigen::Index>(members.size()));
    for (std::size_t p = 0; p < members.size(); ++p) {
      const auto vals = members[p][c].values();
      for (Eigen::Index x = 0; x < points; ++x) m(x, static_cast<Eigen::Index>(p)) = vals[static_cast<std::size_t>(x)].real();
    }
    b.comps.push_back(std::move(m));
  }
  return b;
}

class Objective {
 public:
  Objective(const Grid& grid, Basis phi, Basis psi, std::size_t pairs)
      : grid_(grid), phi_(std::move(phi)), psi_(std::move(psi)),
        q_(static_cast<double>(grid.dim()) / (grid.dim() - 1)),
        scale_(std::pow(static_cast<double>(pairs), 1.0 - 1.0 / grid.dim())) {}

  ScalarField density(const MatrixXd& qe, const MatrixXd& qb) const {
    const MatrixXd c = qe.transpose() * qb;
    Eigen::VectorXd g = Eigen::VectorXd::Zero(phi_.comps.front().rows());
    for (std::size_t a = 0; a < phi_.comps.size(); ++a)
      g += (phi_.comps[a] * c).cwiseProduct(psi_.comps[a]).rowwise().sum();
    std::vector<cplx> vals(static_cast<std::size_t>(g.size()));
    for (Eigen::Index x = 0; x < g.size(); ++x) vals[static_cast<std::size_t>(x)] = g(x);
    return ScalarField(grid_, std::move(vals));
  }

  // ||(-Delta)^{-1/2} g||_q / N^{1 - 1/d}; for d = 2 this is the exact dual norm.
  double value(const MatrixXd& qe, const MatrixXd& qb) const {
    return neg_sobolev_proxy(density(qe, qb), 1.0, q_) / scale_;
  }

  // Euclidean gradients with respect to qe and qb.
  std::pair<MatrixXd, MatrixXd> gradient(const MatrixXd& qe, const MatrixXd& qb) const {
    const ScalarField g = density(qe, qb);
    const ScalarField lg = fractional_laplacian(g, -1.0);
    const double j = lp_norm(lg, q_);
    if (j == 0.0) return {MatrixXd::Zero(qe.rows(), qe.cols()), MatrixXd::Zero(qb.rows(), qb.cols())};
    std::vector<cplx> h(grid_.size());
    for (std::size_t x = 0; x < h.size(); ++x) {
      const double v = lg[x].real();
      h[x] = std::pow(std::abs(v), q_ - 2.0) * v;
    }
    // The mean of h pairs with nothing (g stays mean-free), so drop it.
    cplx mean = 0.0;
    for (const auto& v : h) mean += v;
    mean /= static_cast<double>(h.size());
    for (auto& v : h) v -= mean;
    const ScalarField w = fractional_laplacian(ScalarField(grid_, std::move(h)), -1.0);
    Eigen::VectorXd wv(static_cast<Eigen::Index>(grid_.size()));
    const double factor = std::pow(j, 1.0 - q_) / static_cast<double>(grid_.size()) / scale_;
    for (std::size_t x = 0; x < grid_.size(); ++x) wv(static_cast<Eigen::Index>(x)) = w[x].real() * factor;
    MatrixXd dc = MatrixXd::Zero(phi_.comps.front().cols(), psi_.comps.front().cols());
    for (std::size_t a = 0; a < phi_.comps.size(); ++a)
      dc += phi_.comps[a].transpose() * wv.asDiagonal() * psi_.comps[a];
    return {qb * dc.transpose(), qe * dc};
  }

 private:
  Grid grid_;
  Basis phi_, psi_;
  double q_;
  double scale_;
};

}  // namespace

ExperimentRecord extremizer_search(const ExtremizerConfig& config) {
  const Grid grid(config.d, config.n);
  if (config.pairs < 1) throw std::invalid_argument("extremizer needs N >= 1 pairs");
  if (config.steps < 0) throw std::invalid_argument("steps must be >= 0");
  if (!(config.step_size > 0.0)) throw std::invalid_argument("step_size must be positive");
  const std::size_t basis_size = 2 * config.pool;
  if (basis_size < config.pairs) {
    throw std::invalid_argument("degenerate parametrization: pool spans " + std::to_string(basis_size) +
                                " members, fewer than N = " + std::to_string(config.pairs));
  }
  auto modes = half_lattice_modes(grid, grid.nyquist() - 1.0);
  if (modes.size() < config.pool) {
    throw std::invalid_argument("grid has only " + std::to_string(modes.size()) + " modes for a pool of " +
                                std::to_string(config.pool));
  }
  modes.resize(config.pool);
  const auto e_basis = mode_family_curl_free(grid, modes);
  const auto b_basis = mode_family_div_free(grid, modes, PolarizationRule::first());
  const Objective objective(grid, sample(e_basis.members(), config.d), sample(b_basis.members(), config.d),
                            config.pairs);

  MatrixXd qe = random_rows(config.pairs, basis_size, derive_seed(config.seed, 0));
  MatrixXd qb = random_rows(config.pairs, basis_size, derive_seed(config.seed, 1));
  double current = objective.value(qe, qb);
  const double initial = current;
  std::vector<double> trace{current};
  double eta = config.step_size;
  int accepted = 0;
  for (int step = 0; step < config.steps; ++step) {
    const auto [ge, gb] = objective.gradient(qe, qb);
    bool moved = false;
    for (int attempt = 0; attempt < 30 && !moved; ++attempt) {
      const MatrixXd te = orthonormal_rows(qe + eta * ge);
      const MatrixXd tb = orthonormal_rows(qb + eta * gb);
      const double trial = objective.value(te, tb);
      if (trial > current) {
        qe = te;
        qb = tb;
        current = trial;
        moved = true;
        eta *= 1.5;
      } else {
        eta *= 0.5;
      }
    }
    if (!moved) break;
    ++accepted;
    trace.push_back(current);
  }

  ExperimentRecord record;
  record.experiment = "extremizer_search";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    record.series.push_back({static_cast<double>(i), trace[i], std::nullopt, std::nullopt});
  }
  nlohmann::json pool = nlohmann::json::array();
  for (const auto& k : modes) pool.push_back(k);
  record.metrics["initial_objective"] = initial;
  record.metrics["final_objective"] = current;
  record.metrics["accepted_steps"] = accepted;
  record.metrics["pool_modes"] = pool;
  record.metrics["best_e_mixing"] = to_json(qe);
  record.metrics["best_b_mixing"] = to_json(qb);
  bool monotone = true;
  for (std::size_t i = 1; i < trace.size(); ++i) monotone = monotone && trace[i] >= trace[i - 1];
  record.gates.push_back({"objective_nondecreasing", monotone ? 1.0 : 0.0, 1.0, false});
  return record;
}

}  // namespace divcurl
