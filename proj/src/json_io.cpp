#include "augtrack/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "augtrack/error.hpp"

namespace augtrack {
namespace {

[[noreturn]] void config_error(const std::string& msg) { throw ConfigError(msg); }

const Json& require(const Json& j, const char* key) {
  if (!j.is_object()) config_error("expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) config_error(std::string("missing key \"") + key + "\"");
  return *it;
}

real as_real(const Json& v, const std::string& key) {
  if (!v.is_number()) config_error("\"" + key + "\" must be a number");
  return v.get<real>();
}

int as_int(const Json& v, const std::string& key) {
  if (v.is_number_integer()) return static_cast<int>(v.get<std::int64_t>());
  if (v.is_number_float()) {
    const real x = v.get<real>();
    if (std::floor(x) == x && std::abs(x) < 1e9L) return static_cast<int>(x);
  }
  config_error("\"" + key + "\" must be an integer");
}

Vector as_vector(const Json& v, const std::string& key) {
  if (!v.is_array()) config_error("\"" + key + "\" must be an array of numbers");
  Vector out;
  for (const auto& e : v) out.push_back(as_real(e, key));
  return out;
}

Matrix<real> as_matrix(const Json& v, const std::string& key) {
  if (!v.is_array() || v.empty()) config_error("\"" + key + "\" must be a non-empty 2-D array");
  const std::size_t rows = v.size();
  const std::size_t cols = v.front().is_array() ? v.front().size() : 0;
  Matrix<real> m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const Vector row = as_vector(v[i], key);
    if (row.size() != cols) config_error("\"" + key + "\" has ragged rows");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = row[j];
  }
  return m;
}

void check_keys(const Json& j, const std::set<std::string>& allowed, const char* what) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      config_error(std::string("unknown key \"") + it.key() + "\" in " + what);
}

Json number(real v) {
  if (!std::isfinite(v)) return nullptr;
  return Json(v);
}

Json vector_json(const Vector& v) {
  Json a = Json::array();
  for (real x : v) a.push_back(number(x));
  return a;
}

Json matrix_json(const Matrix<real>& m) {
  Json a = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(vector_json(m.row(i)));
  return a;
}

bool is_flat_array(const Json& j) {
  for (const auto& e : j)
    if (e.is_array() || e.is_object()) return false;
  return true;
}

// String escaping via the stock json type.
std::string quoted(const std::string& s) { return nlohmann::json(s).dump(); }

void emit(std::ostringstream& os, const Json& j, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(indent * depth), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << pad << quoted(it.key()) << ": ";
        emit(os, it.value(), indent, depth + 1);
      }
      os << "\n" << close << "}";
      return;
    }
    case Json::value_t::array: {
      if (is_flat_array(j)) {
        os << "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) os << ", ";
          emit(os, j[i], indent, depth + 1);
        }
        os << "]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << pad;
        emit(os, j[i], indent, depth + 1);
      }
      os << "\n" << close << "]";
      return;
    }
    case Json::value_t::number_float:
      if (std::isfinite(j.get<real>()))
        os << format_real(j.get<real>());
      else
        os << "null";
      return;
    case Json::value_t::string:
      os << quoted(j.get<std::string>());
      return;
    case Json::value_t::boolean:
      os << (j.get<bool>() ? "true" : "false");
      return;
    case Json::value_t::number_integer:
      os << j.get<std::int64_t>();
      return;
    case Json::value_t::number_unsigned:
      os << j.get<std::uint64_t>();
      return;
    default:
      os << "null";
      return;
  }
}

std::string csv_real(real v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return format_real(v);
}

const char* kind_name(FilterDesign::Kind k) {
  return k == FilterDesign::Kind::alpha_beta ? "alpha_beta" : "pole_placement";
}

}  // namespace

std::string format_real(real v) {
  if (!std::isfinite(v)) return "null";
  if (v == 0.0L) return std::signbit(v) ? "-0.0" : "0.0";
  char buf[64];
  for (int prec = 17; prec <= 21; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*Lg", prec, v);
    if (std::strtold(buf, nullptr) == v) break;
  }
  std::string s(buf);
  // Keep floats recognizable as floats when they happen to be integral.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    config_error(source + ": " + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) config_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str(), path);
}

std::string dump_json(const Json& j, int indent) {
  std::ostringstream os;
  emit(os, j, indent, 0);
  os << "\n";
  return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) config_error("cannot write " + path);
  out << text;
  if (!out) config_error("error writing " + path);
}

Json spec_to_json(const ModelSpec& s) {
  Json j = Json::object();
  j["k_tgt"] = s.k_tgt;
  j["k_man"] = s.k_man;
  j["k_int"] = s.k_int;
  j["ts"] = number(s.ts);
  j["omega"] = number(s.omega);
  j["pole"] = number(s.pole);
  j["q"] = s.lag_q;
  j["d"] = s.deriv_d;
  return j;
}

ModelSpec spec_from_json(const Json& j) {
  if (!j.is_object()) config_error("model spec must be a JSON object");
  check_keys(j, {"k_tgt", "k_man", "k_int", "ts", "omega", "pole", "q", "d", "name"},
             "model spec");
  ModelSpec s;
  s.k_tgt = as_int(require(j, "k_tgt"), "k_tgt");
  s.k_man = as_int(require(j, "k_man"), "k_man");
  s.k_int = as_int(require(j, "k_int"), "k_int");
  s.ts = as_real(require(j, "ts"), "ts");
  s.pole = as_real(require(j, "pole"), "pole");
  s.lag_q = as_int(require(j, "q"), "q");
  s.omega = j.contains("omega") ? as_real(j["omega"], "omega") : 0.0L;
  s.deriv_d = j.contains("d") ? as_int(j["d"], "d") : 0;
  if (s.k_man == 1 && !j.contains("omega")) config_error("\"omega\" is required when k_man = 1");
  return s;
}

Json design_to_json(const FilterDesign& d) {
  Json j = Json::object();
  if (!d.name.empty()) j["name"] = d.name;
  j["kind"] = kind_name(d.kind);
  j["K"] = static_cast<std::int64_t>(d.tf.order());
  j["spec"] = spec_to_json(d.spec);
  if (d.alpha_beta) {
    j["alpha"] = number(d.alpha_beta->alpha);
    j["beta"] = number(d.alpha_beta->beta);
    if (d.tracking_index) j["tracking_index"] = number(*d.tracking_index);
  }
  j["b"] = vector_json(d.tf.b);
  j["a"] = vector_json(d.tf.a);
  j["gain_kin"] = vector_json(d.realization.h);
  j["g_obs_kin"] = matrix_json(d.realization.g);
  j["c_obs_kin"] = vector_json(d.realization.c);
  return j;
}

FilterDesign design_from_json(const Json& j, const std::string& default_name) {
  if (!j.is_object()) config_error("filter document must be a JSON object");
  const std::string name =
      j.contains("name") && j["name"].is_string() ? j["name"].get<std::string>() : default_name;

  if (j.contains("b")) {
    check_keys(j,
               {"name", "kind", "K", "spec", "alpha", "beta", "tracking_index", "b", "a",
                "gain_kin", "g_obs_kin", "c_obs_kin"},
               "design");
    FilterDesign d;
    d.name = name;
    d.spec = spec_from_json(require(j, "spec"));
    const std::string kind = j.contains("kind") ? j["kind"].get<std::string>() : "pole_placement";
    if (kind == "alpha_beta") {
      d.kind = FilterDesign::Kind::alpha_beta;
      d.alpha_beta = AlphaBetaGains{as_real(require(j, "alpha"), "alpha"),
                                    as_real(require(j, "beta"), "beta")};
      if (j.contains("tracking_index"))
        d.tracking_index = as_real(j["tracking_index"], "tracking_index");
    } else if (kind == "pole_placement") {
      d.spec.validate();
    } else {
      config_error("unknown design kind \"" + kind + "\"");
    }
    d.tf.b = as_vector(require(j, "b"), "b");
    d.tf.a = as_vector(require(j, "a"), "a");
    if (d.tf.a.empty() || d.tf.a.front() != 1.0L) config_error("\"a\" must start with 1");
    if (d.tf.b.size() != d.tf.a.size()) config_error("\"b\" and \"a\" must have equal length");
    d.realization.h = as_vector(require(j, "gain_kin"), "gain_kin");
    d.realization.g = as_matrix(require(j, "g_obs_kin"), "g_obs_kin");
    d.realization.c = as_vector(require(j, "c_obs_kin"), "c_obs_kin");
    const std::size_t k = d.tf.order();
    if (d.realization.h.size() != k || d.realization.c.size() != k ||
        d.realization.g.rows() != k || d.realization.g.cols() != k)
      config_error("realization dimensions do not match the filter order");
    return d;
  }

  if (j.contains("alpha") || j.contains("tracking_index")) {
    check_keys(j, {"name", "alpha", "beta", "tracking_index", "q", "ts", "omega"},
               "alpha-beta spec");
    AlphaBetaGains g;
    std::optional<real> lam;
    if (j.contains("alpha")) {
      g.alpha = as_real(j["alpha"], "alpha");
      g.beta = as_real(require(j, "beta"), "beta");
    } else {
      lam = as_real(j["tracking_index"], "tracking_index");
      if (!(*lam > 0.0L)) config_error("\"tracking_index\" must be positive");
      g = kalata_gains(*lam);
    }
    const int q = j.contains("q") ? as_int(j["q"], "q") : 0;
    const real ts = j.contains("ts") ? as_real(j["ts"], "ts") : 0.04L;
    const real omega = j.contains("omega") ? as_real(j["omega"], "omega") : 0.0L;
    FilterDesign d = design_alpha_beta(g, q, ts, omega, name);
    d.tracking_index = lam;
    return d;
  }

  return design_filter(spec_from_json(j), name);
}

Json metrics_to_json(const MetricsReport& m, const ModelSpec& spec) {
  Json j = Json::object();
  j["wng"] = number(m.wng);
  j["wng_db"] = number(m.wng_db);
  j["wng_freq"] = number(m.wng_freq);
  j["mesg"] = number(m.mesg);
  j["mesg_db"] = number(m.mesg_db);
  j["sigma_tgt"] = number(m.sigma_tgt);
  j["sigma_man"] = number(m.sigma_man);
  j["eps_r"] = number(m.eps_r);
  j["eps_theta_deg"] = number(m.eps_theta_deg);
  j["h_inf_sq"] = number(m.h_inf_sq);
  j["omega_max"] = number(m.omega_max);
  j["omega_man"] = number(m.omega_man);
  Json flat = Json::array();
  bool all_pass = true;
  for (const auto& r : m.flatness) {
    Json e = Json::object();
    e["omega_c"] = number(r.omega_c);
    e["l"] = r.order;
    e["observed"] = vector_json({r.observed.real(), r.observed.imag()});
    e["expected"] = vector_json({r.expected.real(), r.expected.imag()});
    e["residual"] = number(r.residual);
    e["pass"] = r.passes();
    all_pass = all_pass && r.passes();
    flat.push_back(e);
  }
  j["flatness"] = flat;
  j["flatness_pass"] = all_pass;
  j["spec"] = spec_to_json(spec);
  return j;
}

ScenarioConfig scenario_from_json(const Json& j) {
  if (!j.is_object()) config_error("scenario config must be a JSON object");
  check_keys(j,
             {"id", "n_frames", "ts", "speed", "omega", "radius", "sigma_sns", "seed",
              "step_frame", "step_offset", "turn_start", "turn_end", "heading_change_frame",
              "heading_change_deg", "jitter_start", "jitter_amplitude"},
             "scenario config");
  ScenarioConfig c = ScenarioConfig::defaults(as_int(require(j, "id"), "id"));
  auto opt_real = [&](const char* k, real& dst) {
    if (j.contains(k)) dst = as_real(j[k], k);
  };
  auto opt_int = [&](const char* k, int& dst) {
    if (j.contains(k)) dst = as_int(j[k], k);
  };
  opt_int("n_frames", c.n_frames);
  opt_real("ts", c.ts);
  opt_real("speed", c.speed);
  opt_real("omega", c.omega);
  opt_real("radius", c.radius);
  opt_real("sigma_sns", c.sigma_sns);
  if (j.contains("seed")) {
    const Json& s = j["seed"];
    if (!s.is_number_integer() || (s.is_number_integer() && !s.is_number_unsigned() &&
                                   s.get<std::int64_t>() < 0))
      config_error("\"seed\" must be a non-negative integer");
    c.seed = s.get<std::uint64_t>();
  }
  opt_int("step_frame", c.step_frame);
  opt_real("step_offset", c.step_offset);
  opt_int("turn_start", c.turn_start);
  opt_int("turn_end", c.turn_end);
  opt_int("heading_change_frame", c.heading_change_frame);
  opt_real("heading_change_deg", c.heading_change_deg);
  opt_int("jitter_start", c.jitter_start);
  opt_real("jitter_amplitude", c.jitter_amplitude);
  return c;
}

Json scenario_to_json(const ScenarioConfig& c) {
  Json j = Json::object();
  j["id"] = c.id;
  j["n_frames"] = c.n_frames;
  j["ts"] = number(c.ts);
  j["speed"] = number(c.speed);
  j["omega"] = number(c.omega);
  j["radius"] = number(c.radius);
  j["sigma_sns"] = number(c.sigma_sns);
  j["seed"] = c.seed;
  if (c.id == 1) {
    j["step_frame"] = c.step_frame;
    j["step_offset"] = number(c.step_offset);
    j["turn_start"] = c.turn_start;
    j["turn_end"] = c.turn_end;
    j["heading_change_frame"] = c.heading_change_frame;
    j["heading_change_deg"] = number(c.heading_change_deg);
    j["jitter_start"] = c.jitter_start;
    j["jitter_amplitude"] = number(c.jitter_amplitude);
  }
  return j;
}

Json sim_results_to_json(const ScenarioConfig& cfg, const std::vector<SimResult>& results) {
  Json j = Json::object();
  j["scenario"] = scenario_to_json(cfg);
  Json filters = Json::array();
  for (const auto& r : results) {
    Json f = Json::object();
    f["name"] = r.filter;
    f["q"] = r.lag_q;
    f["reps"] = r.n_rep;
    f["sigma_d"] = number(r.sigma_d);
    Json t = Json::object();
    t["eps_r"] = number(r.terminal.eps_r);
    t["eps_theta_deg"] = number(r.terminal.eps_theta_deg);
    t["dist"] = number(r.terminal.dist);
    f["terminal"] = t;
    filters.push_back(f);
  }
  j["filters"] = filters;
  return j;
}

void write_response_csv(std::ostream& os, const std::vector<ResponseRow>& rows) {
  os << "f,omega,mag,mag_db,phase_rad,phase_err_rad\n";
  for (const auto& r : rows)
    os << csv_real(r.f) << ',' << csv_real(r.omega) << ',' << csv_real(r.mag) << ','
       << csv_real(r.mag_db) << ',' << csv_real(r.phase_rad) << ','
       << csv_real(r.phase_err_rad) << '\n';
}

void write_frames_csv(std::ostream& os, const std::vector<FrameRecord>& frames) {
  os << "n,truth_x,truth_y,meas_x,meas_y,est_x,est_y\n";
  for (const auto& f : frames)
    os << f.n << ',' << csv_real(f.truth_x) << ',' << csv_real(f.truth_y) << ','
       << csv_real(f.meas_x) << ',' << csv_real(f.meas_y) << ',' << csv_real(f.est_x)
       << ',' << csv_real(f.est_y) << '\n';
}

}  // namespace augtrack
