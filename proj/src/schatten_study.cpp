#include <cmath>
#include <sstream>

#include "divcurl/experiments.hpp"
#include "divcurl/norms.hpp"

namespace divcurl {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

double parse_double(const std::string& text, const std::string& recipe) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty()) throw std::invalid_argument("bad number '" + text + "' in u recipe '" + recipe + "'");
  return v;
}

Frequency parse_mode(const std::string& text, int d, const std::string& recipe) {
  Frequency k;
  for (const auto& c : split(text, ',')) {
    const double v = parse_double(c, recipe);
    if (v != std::floor(v)) throw std::invalid_argument("non-integer mode in u recipe '" + recipe + "'");
    k.push_back(static_cast<int>(v));
  }
  if (static_cast<int>(k.size()) != d) {
    throw std::invalid_argument("mode in u recipe '" + recipe + "' has " + std::to_string(k.size()) +
                                " components, grid has d = " + std::to_string(d));
  }
  return k;
}

ScalarField cosine(const Grid& grid, const Frequency& k) {
  if (!grid.contains(k) || grid.on_nyquist_row(k)) {
    throw std::invalid_argument("u recipe mode does not fit below the Nyquist row");
  }
  return ScalarField::from_function(grid, [&](std::span<const double> x) {
    double phase = 0.0;
    for (std::size_t a = 0; a < k.size(); ++a) phase += k[a] * x[a];
    return cplx(std::cos(phase));
  });
}

}  // namespace

ScalarField make_u(const Grid& grid, const std::string& recipe) {
  const auto parts = split(recipe, ':');
  if (parts.size() < 2) throw std::invalid_argument("u recipe '" + recipe + "' needs <kind>:<amplitude>");
  const std::string& kind = parts[0];
  const double amp = parse_double(parts[1], recipe);
  const int d = grid.dim();
  auto arity = [&](std::size_t want) {
    if (parts.size() != want) throw std::invalid_argument("u recipe '" + recipe + "' has the wrong number of fields");
  };
  if (kind == "const") {
    arity(2);
    return ScalarField::constant(grid, amp);
  }
  if (kind == "mode") {
    arity(3);
    return cosine(grid, parse_mode(parts[2], d, recipe)) * cplx(amp);
  }
  if (kind == "modes") {
    arity(3);
    ScalarField u(grid);
    for (const auto& m : split(parts[2], ';')) u += cosine(grid, parse_mode(m, d, recipe));
    return u * cplx(amp);
  }
  if (kind == "random") {
    arity(4);
    const double band = parse_double(parts[2], recipe);
    const double seed = parse_double(parts[3], recipe);
    if (seed < 0 || seed != std::floor(seed)) throw std::invalid_argument("random u seed must be a nonnegative integer");
    return random_real_field(grid, band, static_cast<std::uint64_t>(seed)) * cplx(amp);
  }
  if (kind == "bump") {
    arity(3);
    const double width = parse_double(parts[2], recipe);
    if (!(width > 0.0)) throw std::invalid_argument("bump width must be positive");
    return ScalarField::from_function(grid, [&](std::span<const double> x) {
      double r2 = 0.0;
      for (double xa : x) r2 += (xa - std::numbers::pi) * (xa - std::numbers::pi);
      return cplx(amp * std::exp(-r2 / (2.0 * width * width)));
    });
  }
  throw std::invalid_argument("unknown u recipe kind '" + kind + "'");
}

DenseOperator materialize_vector_commutator(const ScalarField& u, double band) {
  const int d = u.grid().dim();
  std::vector<DenseOperator> parts;
  for (int j = 0; j < d; ++j) parts.push_back(materialize_commutator(u, j, band));
  const Eigen::Index rows = parts.front().rows();
  Eigen::MatrixXcd stacked(rows * d, parts.front().cols());
  for (int j = 0; j < d; ++j) stacked.middleRows(rows * j, rows) = parts[static_cast<std::size_t>(j)].matrix();
  return DenseOperator(std::move(stacked));
}

ExperimentRecord schatten_study(const SchattenConfig& config) {
  const Grid grid(config.d, config.n);
  const bool cwikel = config.which == SchattenKind::cwikel;
  if (cwikel && config.d < 3) throw std::invalid_argument("cwikel study requires d >= 3");
  if (!(config.p > 0.0)) throw std::invalid_argument("p must be positive");
  if (config.u_recipes.empty()) throw std::invalid_argument("u recipe list is empty");

  struct Cell {
    std::vector<double> s;
    double weak = 0.0;
    double rhs = 0.0;
    double truncation = 0.0;
    std::optional<double> slope;
  };
  std::vector<Cell> cells(config.u_recipes.size());
  parallel_for(cells.size(), config.jobs, [&](std::size_t i) {
    const ScalarField u = make_u(grid, config.u_recipes[i]);
    const ScalarField ub = band_limit(u, config.band);
    Cell& cell = cells[i];
    if (cwikel) {
      const DenseOperator op = materialize_cwikel(u, config.band);
      cell.truncation = op.truncation();
      cell.s = op.singular_values();
      cell.rhs = lp_norm(ub, config.d);
    } else {
      cell.truncation = out_of_band_fraction(u, config.band);
      cell.s = materialize_vector_commutator(u, config.band).singular_values();
      cell.rhs = sobolev_seminorm(ub, 1.0, config.d);
    }
    cell.weak = weak_lp_functional(cell.s, config.p);
    cell.slope = tail_slope(cell.s);
  });

  ExperimentRecord record;
  record.experiment = "schatten_study";
  nlohmann::json per_u = nlohmann::json::array();
  std::optional<double> slope_min, slope_max;
  std::size_t violations = 0, checks = 0;
  const double pd = config.d;
  std::vector<double> ps{pd, 1.5, 2.0};
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const Cell& c = cells[i];
    const bool exact_zero = c.weak == 0.0 && c.rhs == 0.0;
    std::optional<double> ratio;
    if (c.rhs > 0.0) ratio = c.weak / c.rhs;
    record.series.push_back({c.rhs, c.weak, c.rhs, ratio});
    nlohmann::json entry = {{"recipe", config.u_recipes[i]},
                            {"weak_norm", c.weak},
                            {"rhs_norm", c.rhs},
                            {"truncation", c.truncation},
                            {"exact_zero", exact_zero},
                            {"singular_value_count", c.s.size()},
                            {"largest_singular_value", c.s.empty() ? 0.0 : c.s.front()}};
    entry["tail_slope"] = c.slope ? nlohmann::json(*c.slope) : nlohmann::json(nullptr);
    per_u.push_back(entry);
    if (c.slope && !exact_zero) {
      slope_min = std::min(slope_min.value_or(*c.slope), *c.slope);
      slope_max = std::max(slope_max.value_or(*c.slope), *c.slope);
    }
    for (double p : ps) {
      for (std::size_t count = 1; count <= c.s.size(); ++count) {
        const auto bound = partial_sum_bound(c.s, p, count);
        ++checks;
        if (bound.sum > bound.cap * (1.0 + 1e-12) + 1e-300) ++violations;
      }
    }
  }
  record.metrics["per_u"] = per_u;
  record.metrics["which"] = cwikel ? "cwikel" : "commutator";
  record.metrics["p"] = config.p;
  record.metrics["band"] = config.band;
  record.metrics["tail_slope_min"] = slope_min ? nlohmann::json(*slope_min) : nlohmann::json(nullptr);
  record.metrics["tail_slope_max"] = slope_max ? nlohmann::json(*slope_max) : nlohmann::json(nullptr);
  record.metrics["partial_sum_checks"] = checks;
  record.metrics["partial_sum_violations"] = violations;
  return record;
}

}  // namespace divcurl
