#include "divcurl/config.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#define TOML_EXCEPTIONS 1
#include "toml.hpp"

namespace divcurl {

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : "; ") + s;
  return out;
}

enum class Type { integer, real, string, integer_list, real_list, string_list };

const std::map<std::string, std::map<std::string, Type>>& schema() {
  static const std::map<std::string, std::map<std::string, Type>> s = {
      {"run", {{"experiment", Type::string}, {"seed", Type::integer}, {"out", Type::string}, {"jobs", Type::integer}}},
      {"grid", {{"d", Type::integer}, {"n", Type::integer}, {"band", Type::real}}},
      {"identity", {{"trials", Type::integer}}},
      {"family",
       {{"radius", Type::real}, {"pairing", Type::string}, {"e_mode", Type::string},
        {"polarization", Type::string}, {"components", Type::integer}}},
      {"norm", {{"variant", Type::string}, {"q", Type::real}, {"p", Type::real}}},
      {"series", {{"N", Type::integer_list}, {"weights", Type::real_list}}},
      {"schatten", {{"which", Type::string}, {"u", Type::string_list}}},
      {"extremizer",
       {{"pairs", Type::integer}, {"pool", Type::integer}, {"steps", Type::integer}, {"step_size", Type::real}}},
      {"certify", {{"steps", Type::integer}, {"step_size", Type::real}}},
      {"gates", {}},
  };
  return s;
}

const std::map<std::string, std::set<std::string>>& sections_for() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"identity_suite", {"run", "grid", "identity", "gates"}},
      {"scaling_study", {"run", "grid", "family", "norm", "series", "certify", "gates"}},
      {"schatten_study", {"run", "grid", "norm", "schatten", "gates"}},
      {"extremizer_search", {"run", "grid", "extremizer", "gates"}},
  };
  return s;
}

bool type_ok(const nlohmann::json& v, Type t) {
  auto all = [&](auto pred) {
    if (!v.is_array()) return false;
    for (const auto& x : v)
      if (!pred(x)) return false;
    return true;
  };
  switch (t) {
    case Type::integer: return v.is_number_integer();
    case Type::real: return v.is_number();
    case Type::string: return v.is_string();
    case Type::integer_list: return all([](const nlohmann::json& x) { return x.is_number_integer(); });
    case Type::real_list: return all([](const nlohmann::json& x) { return x.is_number(); });
    case Type::string_list: return all([](const nlohmann::json& x) { return x.is_string(); });
  }
  return false;
}

const char* type_name(Type t) {
  switch (t) {
    case Type::integer: return "an integer";
    case Type::real: return "a number";
    case Type::string: return "a string";
    case Type::integer_list: return "a list of integers";
    case Type::real_list: return "a list of numbers";
    case Type::string_list: return "a list of strings";
  }
  return "?";
}

nlohmann::json from_toml_node(const toml::node& node) {
  if (auto v = node.as_integer()) return v->get();
  if (auto v = node.as_floating_point()) return v->get();
  if (auto v = node.as_string()) return v->get();
  if (auto v = node.as_boolean()) return v->get();
  if (auto arr = node.as_array()) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& item : *arr) out.push_back(from_toml_node(item));
    return out;
  }
  if (auto tbl = node.as_table()) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [key, value] : *tbl) out[std::string(key.str())] = from_toml_node(value);
    return out;
  }
  return "<unsupported value>";
}

RunConfig validate(const nlohmann::json& root) {
  std::vector<std::string> errors;
  if (!root.is_object()) throw ConfigError({"config must be a table of sections"});
  // Paths that failed the structural pass; the semantic pass treats them as
  // absent so every violation is reported in one go.
  std::set<std::string> malformed;

  // Structure and types first.
  for (auto it = root.begin(); it != root.end(); ++it) {
    const auto sec = schema().find(it.key());
    if (sec == schema().end()) {
      errors.push_back(it.key() + ": unknown section");
      continue;
    }
    if (!it.value().is_object()) {
      errors.push_back(it.key() + ": must be a section");
      malformed.insert(it.key());
      continue;
    }
    for (auto kv = it.value().begin(); kv != it.value().end(); ++kv) {
      const std::string path = it.key() + "." + kv.key();
      if (it.key() == "gates") {
        if (!kv.value().is_number()) errors.push_back(path + ": must be a number");
        continue;
      }
      const auto key = sec->second.find(kv.key());
      if (key == sec->second.end()) {
        errors.push_back(path + ": unknown key");
      } else if (!type_ok(kv.value(), key->second)) {
        errors.push_back(path + ": must be " + type_name(key->second));
        malformed.insert(path);
      }
    }
  }

  auto get = [&](const std::string& sec, const std::string& key) -> const nlohmann::json* {
    if (malformed.count(sec) || malformed.count(sec + "." + key)) return nullptr;
    const auto s = root.find(sec);
    if (s == root.end()) return nullptr;
    const auto k = s->find(key);
    return k == s->end() ? nullptr : &*k;
  };
  auto require = [&](const std::string& sec, const std::string& key) -> const nlohmann::json* {
    const auto* v = get(sec, key);
    if (!v && !malformed.count(sec) && !malformed.count(sec + "." + key))
      errors.push_back(sec + "." + key + ": required");
    return v;
  };

  RunConfig c;
  if (const auto* v = require("run", "experiment")) c.experiment = v->get<std::string>();
  const auto allowed = sections_for().find(c.experiment);
  if (!c.experiment.empty() && allowed == sections_for().end()) {
    errors.push_back("run.experiment: unknown experiment '" + c.experiment + "'");
  }
  if (allowed != sections_for().end()) {
    for (auto it = root.begin(); it != root.end(); ++it) {
      if (schema().count(it.key()) && !allowed->second.count(it.key()))
        errors.push_back(it.key() + ": section does not apply to experiment " + c.experiment);
    }
  }

  if (const auto* v = get("run", "seed")) {
    if (v->get<std::int64_t>() < 0) errors.push_back("run.seed: must be >= 0");
    else c.seed = v->get<std::uint64_t>();
  }
  if (const auto* v = get("run", "out")) c.out_dir = v->get<std::string>();
  if (const auto* v = get("run", "jobs")) {
    c.jobs = v->get<int>();
    if (c.jobs < 1) errors.push_back("run.jobs: must be >= 1");
  }

  if (const auto* v = require("grid", "d")) {
    c.d = v->get<int>();
    if (c.d < 2) errors.push_back("grid.d: must satisfy d >= 2");
  }
  if (const auto* v = require("grid", "n")) {
    c.n = v->get<int>();
    if (c.n < 4 || c.n % 2 != 0) errors.push_back("grid.n: must be even and >= 4");
  }
  if (const auto* v = get("grid", "band")) {
    c.band = v->get<double>();
    if (!(*c.band >= 1.0)) errors.push_back("grid.band: must be >= 1");
  }

  const std::string& e = c.experiment;
  if (e == "identity_suite") {
    if (!c.band) errors.push_back("grid.band: required");
    else if (c.n > 0 && 3.0 * *c.band >= c.n) errors.push_back("grid.band: identity products need 3 band < n");
    if (const auto* v = get("identity", "trials")) {
      c.trials = v->get<int>();
      if (c.trials < 1) errors.push_back("identity.trials: must be >= 1");
    }
  } else if (e == "scaling_study") {
    if (const auto* v = require("family", "radius")) {
      c.radius = v->get<double>();
      if (!(*c.radius >= 1.0)) errors.push_back("family.radius: must be >= 1");
      else if (c.n > 0 && *c.radius >= c.n / 2.0) errors.push_back("family.radius: must stay below n/2");
    }
    if (const auto* v = get("family", "pairing")) c.pairing = v->get<std::string>();
    if (c.pairing != "rotate") errors.push_back("family.pairing: must be \"rotate\"");
    if (const auto* v = get("family", "e_mode")) c.e_mode = v->get<std::string>();
    if (c.e_mode != "orthonormal" && c.e_mode != "repeated")
      errors.push_back("family.e_mode: must be \"orthonormal\" or \"repeated\"");
    if (const auto* v = get("family", "polarization")) c.polarization = v->get<std::string>();
    if (c.polarization != "first" && c.polarization != "all")
      errors.push_back("family.polarization: must be \"first\" or \"all\"");
    if (const auto* v = get("family", "components")) {
      c.components = v->get<int>();
      if (*c.components < 1) errors.push_back("family.components: must be >= 1");
    }
    if (const auto* v = require("norm", "variant")) {
      c.variant = v->get<std::string>();
      static const std::set<std::string> variants{"main", "triangle", "lorentz", "interpolated", "liebsob"};
      if (!variants.count(*c.variant)) errors.push_back("norm.variant: unknown variant '" + *c.variant + "'");
    }
    if (get("norm", "p")) errors.push_back("norm.p: does not apply to scaling_study");
    if (const auto* v = get("norm", "q")) c.q = v->get<double>();
    const double qd = c.d >= 2 ? static_cast<double>(c.d) / (c.d - 1) : 2.0;
    const std::string variant = c.variant.value_or("");
    if (variant == "main" || variant == "lorentz") {
      if (!c.q) errors.push_back("norm.q: required for variant " + variant);
      else if (std::abs(*c.q - qd) > 1e-12) errors.push_back("norm.q: must equal d/(d-1) for variant " + variant);
    } else if (variant == "interpolated") {
      if (!c.q) errors.push_back("norm.q: required for variant interpolated");
      else if (!(*c.q > 1.0 && *c.q < qd)) errors.push_back("norm.q: must satisfy 1 < q < d/(d-1)");
    } else if (c.q && (variant == "triangle" || variant == "liebsob")) {
      errors.push_back("norm.q: does not apply to variant " + variant);
    }
    if (variant == "liebsob") {
      if (!c.components) errors.push_back("family.components: required for variant liebsob");
      if (c.d < 3) errors.push_back("grid.d: variant liebsob requires d >= 3");
    } else if (c.components) {
      errors.push_back("family.components: only applies to variant liebsob");
    }
    if (const auto* v = require("series", "N")) {
      for (const auto& x : *v) {
        if (x.get<std::int64_t>() < 1) {
          errors.push_back("series.N: entries must be >= 1");
          break;
        }
        c.n_list.push_back(x.get<std::size_t>());
      }
      if (c.n_list.empty()) errors.push_back("series.N: must not be empty");
      for (std::size_t i = 1; i < c.n_list.size(); ++i) {
        if (c.n_list[i] <= c.n_list[i - 1]) {
          errors.push_back("series.N: must be strictly increasing");
          break;
        }
      }
    }
    if (const auto* v = get("series", "weights")) {
      c.weights = v->get<std::vector<double>>();
      for (double w : *c.weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
          errors.push_back("series.weights: entries must be finite and >= 0");
          break;
        }
      }
      if (!c.n_list.empty() && c.weights->size() < c.n_list.back())
        errors.push_back("series.weights: fewer entries than the largest N");
    }
    if (const auto* v = get("certify", "steps")) {
      c.certify_steps = v->get<int>();
      if (c.certify_steps < 0) errors.push_back("certify.steps: must be >= 0");
    }
    if (const auto* v = get("certify", "step_size")) {
      c.certify_step = v->get<double>();
      if (!(c.certify_step > 0.0)) errors.push_back("certify.step_size: must be > 0");
    }
  } else if (e == "schatten_study") {
    if (!c.band) errors.push_back("grid.band: required");
    else if (c.n > 0 && *c.band >= c.n / 2.0) errors.push_back("grid.band: must stay below n/2");
    if (const auto* v = require("norm", "p")) {
      c.p = v->get<double>();
      if (!(*c.p > 1.0)) errors.push_back("norm.p: must be > 1");
    }
    if (get("norm", "q")) errors.push_back("norm.q: does not apply to schatten_study");
    if (get("norm", "variant")) errors.push_back("norm.variant: does not apply to schatten_study");
    if (const auto* v = require("schatten", "which")) {
      c.which = v->get<std::string>();
      if (*c.which != "commutator" && *c.which != "cwikel")
        errors.push_back("schatten.which: must be \"commutator\" or \"cwikel\"");
      else if (*c.which == "cwikel" && c.d == 2)
        errors.push_back("schatten.which: cwikel requires d >= 3");
    }
    if (const auto* v = require("schatten", "u")) {
      c.u_recipes = v->get<std::vector<std::string>>();
      if (c.u_recipes.empty()) errors.push_back("schatten.u: must not be empty");
    }
  } else if (e == "extremizer_search") {
    if (const auto* v = require("extremizer", "pairs")) {
      if (v->get<std::int64_t>() < 1) errors.push_back("extremizer.pairs: must be >= 1");
      else c.pairs = v->get<std::size_t>();
    }
    if (const auto* v = require("extremizer", "pool")) {
      if (v->get<std::int64_t>() < 1) errors.push_back("extremizer.pool: must be >= 1");
      else c.pool = v->get<std::size_t>();
    }
    if (c.pairs && c.pool && 2 * *c.pool < *c.pairs)
      errors.push_back("extremizer.pool: pool spans fewer members than pairs");
    if (const auto* v = require("extremizer", "steps")) {
      c.steps = v->get<int>();
      if (*c.steps < 0) errors.push_back("extremizer.steps: must be >= 0");
    }
    if (const auto* v = require("extremizer", "step_size")) {
      c.step_size = v->get<double>();
      if (!(*c.step_size > 0.0)) errors.push_back("extremizer.step_size: must be > 0");
    }
  }

  if (const auto g = root.find("gates"); g != root.end() && g->is_object()) {
    const auto& names = gate_names(e);
    for (auto kv = g->begin(); kv != g->end(); ++kv) {
      if (!kv.value().is_number()) continue;
      if (std::find(names.begin(), names.end(), kv.key()) == names.end()) {
        errors.push_back("gates." + kv.key() + ": unknown gate for experiment " + (e.empty() ? "?" : e));
      } else {
        c.gates[kv.key()] = kv.value().get<double>();
      }
    }
  }
  if (!errors.empty()) throw ConfigError(errors);
  return c;
}

std::string toml_value(const nlohmann::json& v) {
  if (v.is_number_float()) {
    const double x = v.get<double>();
    std::string s = fmt::format("{}", x);
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
  }
  if (v.is_array()) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + toml_value(v[i]);
    return out + "]";
  }
  return v.dump();
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::invalid_argument("invalid config: " + join(violations)), violations_(std::move(violations)) {}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"extremizer_search", "identity_suite", "scaling_study",
                                              "schatten_study"};
  return names;
}

const std::vector<std::string>& gate_names(const std::string& experiment) {
  static const std::map<std::string, std::vector<std::string>> gates = {
      {"identity_suite", {"max_deviation"}},
      {"scaling_study", {"exponent_max", "exponent_min", "ratio_max"}},
      {"schatten_study", {"ratio_spread_max", "slope_min", "slope_max", "partial_sum_violations_max"}},
      {"extremizer_search", {"final_over_initial_min"}},
  };
  static const std::vector<std::string> none;
  const auto it = gates.find(experiment);
  return it == gates.end() ? none : it->second;
}

RunConfig parse_config(const std::string& text) {
  toml::table table;
  try {
    table = toml::parse(text);
  } catch (const toml::parse_error& err) {
    const auto& where = err.source().begin;
    throw ConfigError({fmt::format("line {}, column {}: {}", where.line, where.column, err.description())});
  }
  return validate(from_toml_node(table));
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot read config file '" + path + "'"});
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

RunConfig config_from_json(const nlohmann::json& j) { return validate(j); }

nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json j;
  j["run"] = {{"experiment", c.experiment}, {"seed", c.seed}, {"jobs", c.jobs}};
  if (c.out_dir) j["run"]["out"] = *c.out_dir;
  j["grid"] = {{"d", c.d}, {"n", c.n}};
  if (c.band) j["grid"]["band"] = *c.band;
  if (c.experiment == "identity_suite") {
    j["identity"] = {{"trials", c.trials}};
  } else if (c.experiment == "scaling_study") {
    j["family"] = {{"pairing", c.pairing}, {"e_mode", c.e_mode}, {"polarization", c.polarization}};
    if (c.radius) j["family"]["radius"] = *c.radius;
    if (c.components) j["family"]["components"] = *c.components;
    j["norm"] = nlohmann::json::object();
    if (c.variant) j["norm"]["variant"] = *c.variant;
    if (c.q) j["norm"]["q"] = *c.q;
    j["series"] = {{"N", c.n_list}};
    if (c.weights) j["series"]["weights"] = *c.weights;
    j["certify"] = {{"steps", c.certify_steps}, {"step_size", c.certify_step}};
  } else if (c.experiment == "schatten_study") {
    j["norm"] = nlohmann::json::object();
    if (c.p) j["norm"]["p"] = *c.p;
    j["schatten"] = {{"u", c.u_recipes}};
    if (c.which) j["schatten"]["which"] = *c.which;
  } else if (c.experiment == "extremizer_search") {
    j["extremizer"] = nlohmann::json::object();
    if (c.pairs) j["extremizer"]["pairs"] = *c.pairs;
    if (c.pool) j["extremizer"]["pool"] = *c.pool;
    if (c.steps) j["extremizer"]["steps"] = *c.steps;
    if (c.step_size) j["extremizer"]["step_size"] = *c.step_size;
  }
  if (!c.gates.empty()) j["gates"] = c.gates;
  return j;
}

std::string to_toml(const RunConfig& c) {
  const nlohmann::json j = to_json(c);
  std::string out;
  for (auto sec = j.begin(); sec != j.end(); ++sec) {
    out += "[" + sec.key() + "]\n";
    for (auto kv = sec.value().begin(); kv != sec.value().end(); ++kv) {
      out += kv.key() + " = " + toml_value(kv.value()) + "\n";
    }
    out += "\n";
  }
  return out;
}

}  // namespace divcurl
