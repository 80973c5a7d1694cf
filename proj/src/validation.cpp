#include "augtrack/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

#include "augtrack/analysis.hpp"
#include "augtrack/simulate.hpp"

namespace augtrack {

ModelSpec reference_spec_b(real pole) {
  ModelSpec s;
  s.k_tgt = 2;
  s.k_man = 0;
  s.k_int = 1;
  s.ts = 0.04L;
  s.omega = 2.5L;
  s.pole = pole;
  s.lag_q = 2;
  return s;
}

ModelSpec reference_spec_c(real pole) {
  ModelSpec s = reference_spec_b(pole);
  s.k_man = 1;
  return s;
}

FilterDesign reference_filter_a() {
  FilterDesign f = design_alpha_beta(kalata_gains(0.1L), 2, 0.04L, 2.5L, "A");
  f.tracking_index = 0.1L;
  return f;
}

FilterDesign reference_filter_b(real pole) {
  char name[32];
  std::snprintf(name, sizeof name, pole == 0.8L ? "B" : "B@%.1f", static_cast<double>(pole));
  return design_filter(reference_spec_b(pole), name);
}

FilterDesign reference_filter_c() { return design_filter(reference_spec_c(), "C"); }

std::vector<FilterDesign> reference_filters() {
  return {reference_filter_a(), reference_filter_b(0.8L), reference_filter_c(),
          reference_filter_b(0.7L), reference_filter_b(0.9L)};
}

real last_digit_unit(const std::string& printed) {
  const auto e = printed.find_first_of("eE");
  const std::string mant = printed.substr(0, e);
  const int exponent = e == std::string::npos ? 0 : std::atoi(printed.c_str() + e + 1);
  const auto dot = mant.find('.');
  const int decimals = dot == std::string::npos ? 0 : static_cast<int>(mant.size() - dot - 1);
  return std::pow(10.0L, static_cast<real>(exponent - decimals));
}

std::string format_like(const std::string& printed, real value) {
  const auto e = printed.find_first_of("eE");
  const std::string mant = printed.substr(0, e);
  const auto dot = mant.find('.');
  const int decimals = dot == std::string::npos ? 0 : static_cast<int>(mant.size() - dot - 1);
  char buf[64];
  if (e != std::string::npos)
    std::snprintf(buf, sizeof buf, "%.*Le", decimals, value);
  else
    std::snprintf(buf, sizeof buf, "%.*Lf", decimals, value);
  return buf;
}

namespace {

class Suite {
 public:
  // |computed - printed| within half a unit of the last printed digit.
  void rounded(const std::string& group, const std::string& item, const std::string& printed,
               real computed) {
    add(group, item, printed, computed, 0.5L * last_digit_unit(printed));
  }

  // Table tolerance: 0.5 % relative or one unit in the last digit.
  void table(const std::string& group, const std::string& item, const std::string& printed,
             real computed) {
    const real ref = std::strtold(printed.c_str(), nullptr);
    add(group, item, printed, computed,
        std::max(0.005L * std::abs(ref), last_digit_unit(printed)));
  }

  void relative(const std::string& group, const std::string& item, const std::string& printed,
                real computed, real rel) {
    const real ref = std::strtold(printed.c_str(), nullptr);
    add(group, item, printed, computed, rel * std::abs(ref));
  }

  // |computed| <= bound, for printed values that are at roundoff level.
  void bounded(const std::string& group, const std::string& item, const std::string& printed,
               real computed, real bound) {
    GoldenCheck c{group, item, printed, computed, bound, std::abs(computed) <= bound};
    checks.push_back(c);
  }

  void matrix(const std::string& group, const std::string& name,
              const std::vector<std::vector<std::string>>& printed, const Matrix<real>& m) {
    for (std::size_t i = 0; i < printed.size(); ++i)
      for (std::size_t j = 0; j < printed[i].size(); ++j)
        rounded(group, name + "[" + std::to_string(i) + "," + std::to_string(j) + "]",
                printed[i][j], m(i, j));
  }

  // A non-positive `tol` means half a unit of each entry's last digit.
  void vector(const std::string& group, const std::string& name,
              const std::vector<std::string>& printed, const Vector& v, real tol = 0) {
    for (std::size_t i = 0; i < printed.size(); ++i) {
      const std::string item = name + "[" + std::to_string(i) + "]";
      const real value = i < v.size() ? v[i] : std::numeric_limits<real>::quiet_NaN();
      if (tol > 0)
        add(group, item, printed[i], value, tol);
      else
        rounded(group, item, printed[i], value);
    }
  }

  std::vector<GoldenCheck> checks;

 private:
  void add(const std::string& group, const std::string& item, const std::string& printed,
           real computed, real tol) {
    const real ref = std::strtold(printed.c_str(), nullptr);
    checks.push_back({group, item, printed, computed, tol, std::abs(computed - ref) <= tol});
  }
};

void worked_example(Suite& s, real perturb) {
  const std::string g = "worked example";
  const ModelSpec spec = reference_spec_b();
  const ObserverRealization obs = place_poles(spec);
  const ObserverCanonicalForm ocf = observer_canonical_form(obs);
  TransferFunction tf = extract_transfer_function(obs);
  tf.b[0] += perturb;

  s.vector(g, "a_prc", {"1", "-1", "-1", "1"}, obs.process_poly.coeffs);
  s.vector(g, "a_obs", {"1.000", "-2.400", "1.920", "-0.512"}, obs.observer_poly.coeffs);
  s.vector(g, "K_pcf", {"-1.512", "2.920", "-1.400"}, obs.gain_pcf);
  s.matrix(g, "O_prc_kin", {{"1", "0.04", "-1"}, {"1", "0.08", "1"}, {"1", "0.12", "-1"}},
           observability_matrix(obs.c_prd, obs.g_prc));
  s.matrix(g, "T_prc_kin<-pcf",
           {{"-0.75", "-0.25", "0.25"}, {"12.50", "12.50", "12.50"}, {"-0.25", "0.25", "-0.25"}},
           obs.t_kin_from_pcf);
  s.matrix(g, "T_prc_pcf<-kin",
           {{"-1", "0.00", "-1"}, {"0", "0.04", "2"}, {"1", "0.04", "-1"}}, obs.t_pcf_from_kin);
  s.vector(g, "K_kin", {"0.054", "0.100", "1.458"}, obs.gain_kin);
  s.matrix(g, "G_obs_kin",
           {{"0.9460", "0.0378", "0.0540"},
            {"-0.1000", "0.9960", "0.1000"},
            {"-1.4580", "-0.0583", "0.4580"}},
           obs.g_obs_kin);
  s.vector(g, "c_obs_kin", {"1", "-0.08", "0"}, obs.c_obs_kin);
  s.matrix(g, "O_obs_kin",
           {{"1", "-0.0800", "0"}, {"0.9540", "-0.0418", "0.0460"}, {"0.8396", "-0.0083", "0.0684"}},
           observability_matrix(obs.c_obs_kin, obs.g_obs_kin));
  s.matrix(g, "T_obs_kin<-ocf",
           {{"10.4688", "9.5585", "9.9012"},
            {"130.8603", "119.4811", "111.2654"},
            {"-98.0883", "-67.8198", "-51.9659"}},
           ocf.t_kin_from_ocf);
  s.matrix(g, "T_obs_ocf<-kin",
           {{"0.470", "-0.0614", "-0.042"},
            {"-1.446", "0.1502", "0.046"},
            {"1.000", "-0.0800", "0.000"}},
           ocf.t_ocf_from_kin);
  s.vector(g, "H_obs_ocf", {"-0.042", "0.004", "0.046"}, ocf.h_ocf);
  s.vector(g, "b", {"0.046", "0.004", "-0.042", "0"}, tf.b);
  s.vector(g, "a", {"1", "-2.4", "1.92", "-0.512"}, tf.a);
}

void filter_table(Suite& s) {
  const std::string g = "filter table";
  const FilterDesign a = reference_filter_a();
  s.relative(g, "A alpha", "0.36", a.alpha_beta->alpha, 1e-9L / 0.36L);
  s.relative(g, "A beta", "0.08", a.alpha_beta->beta, 1e-9L / 0.08L);
  const complex disc = std::sqrt(complex(a.tf.a[1] * a.tf.a[1] - 4.0L * a.tf.a[2]));
  s.relative(g, "A pole radius (+)", "0.8", std::abs((-a.tf.a[1] + disc) / 2.0L), 1e-12L / 0.8L);
  s.relative(g, "A pole radius (-)", "0.8", std::abs((-a.tf.a[1] - disc) / 2.0L), 1e-12L / 0.8L);

  const FilterDesign c = reference_filter_c();
  s.vector(g, "C b", {"0.0899", "-0.1532", "-0.0232", "0.1534", "-0.0666", "0"}, c.tf.b, 5e-5L);
  s.vector(g, "C a", {"1", "-4.0", "6.4", "-5.12", "2.048", "-0.3277"}, c.tf.a, 5e-5L);
  const Polynomial expect = observer_poly(0.8L, 5);
  real worst = 0;
  for (std::size_t i = 0; i < expect.coeffs.size(); ++i)
    worst = std::max(worst, std::abs(expect.coeffs[i] - c.tf.a[i]));
  s.bounded(g, "C a vs (z-0.8)^5", "0", worst, 1e-12L);
}

struct TableColumn {
  const char* label;
  std::vector<std::string> analytic;  // MESG, sigma_man, eps_r, eps_theta, WNG, sigma_tgt
  std::vector<std::string> db;        // MESG dB, WNG dB
  std::vector<std::string> observed;  // terminal dist, eps_r, eps_theta
};

const std::vector<TableColumn>& table_columns() {
  static const std::vector<TableColumn> cols = {
      {"A", {"4.9e-4", "0.222", "0.148", "-0.945", "0.156", "0.558"}, {"-33.06", "-8.081"},
       {"0.221", "0.147", "-0.936"}},
      {"B", {"5.6e-2", "2.358", "1.288", "-10.66", "0.125", "0.499"}, {"-12.55", "-9.043"},
       {"2.345", "1.287", "-10.59"}},
      {"C", {"1.9e-19", "4.4e-9", "-2.3e-9", "-2.1e-8", "0.188", "0.614"}, {"-187.2", "-7.254"},
       {"1.6e-3", "-8.1e-4", "-7.8e-3"}},
      {"B@0.7", {"3.1e-3", "0.558", "0.400", "-2.186", "0.165", "0.575"}, {"-25.07", "-7.823"},
       {"0.555", "0.398", "-2.168"}},
      {"B@0.9", {"0.689", "8.303", "0.624", "-47.36", "0.069", "0.372"}, {"-1.615", "-11.61"},
       {"8.284", "0.643", "-47.19"}},
  };
  return cols;
}

void metric_table(Suite& s, std::vector<FilterDesign> filters) {
  const std::string g = "metric table";
  const auto& cols = table_columns();
  for (std::size_t f = 0; f < filters.size(); ++f) {
    const TableColumn& col = cols[f];
    const std::string p = std::string(col.label) + " ";
    const MetricsReport m = analyze(filters[f].tf, filters[f].spec);
    if (std::string(col.label) == "C") {
      s.bounded(g, p + "MESG", "<= 1e-15", m.mesg, 1e-15L);
      s.bounded(g, p + "sigma_man", "<= 1e-7", m.sigma_man, 1e-7L);
      s.bounded(g, p + "eps_R", "<= 1e-7", m.eps_r, 1e-7L);
      s.bounded(g, p + "eps_theta", "<= 1e-7", m.eps_theta_deg, 1e-7L);
    } else {
      s.table(g, p + "MESG", col.analytic[0], m.mesg);
      s.table(g, p + "sigma_man", col.analytic[1], m.sigma_man);
      s.table(g, p + "eps_R", col.analytic[2], m.eps_r);
      s.table(g, p + "eps_theta", col.analytic[3], m.eps_theta_deg);
      s.table(g, p + "MESG dB", col.db[0], m.mesg_db);
    }
    s.table(g, p + "WNG", col.analytic[4], m.wng);
    s.table(g, p + "sigma_tgt", col.analytic[5], m.sigma_tgt);
    s.table(g, p + "WNG dB", col.db[1], m.wng_db);
  }
}

void circular_scenario(Suite& s, const std::vector<FilterDesign>& filters) {
  const std::string g = "circular scenario";
  const auto results = mc_evaluate(ScenarioConfig::defaults(2), filters, 1);
  const auto& cols = table_columns();
  for (std::size_t f = 0; f < filters.size(); ++f) {
    const TableColumn& col = cols[f];
    const std::string p = std::string(col.label) + " terminal ";
    const TerminalErrors& t = results[f].terminal;
    const std::string label = col.label;
    if (label == "C") {
      s.bounded(g, p + "dist", "<= 2e-3", t.dist, 2e-3L);
      s.bounded(g, p + "eps_R", "<= 2e-3", t.eps_r, 2e-3L);
      s.bounded(g, p + "eps_theta", "<= 1e-2", t.eps_theta_deg, 1e-2L);
      continue;
    }
    const real rel = label == "B@0.9" ? 0.04L : 0.015L;
    s.relative(g, p + "dist", col.observed[0], t.dist, rel);
    s.relative(g, p + "eps_R", col.observed[1], t.eps_r, rel);
    s.relative(g, p + "eps_theta", col.observed[2], t.eps_theta_deg, rel);
  }
}

}  // namespace

std::vector<GoldenCheck> run_golden_suite(const ValidationOptions& opts) {
  Suite s;
  worked_example(s, opts.perturb);
  filter_table(s);
  std::vector<FilterDesign> filters = reference_filters();
  filters[1].tf.b[0] += opts.perturb;
  metric_table(s, filters);
  circular_scenario(s, filters);
  return std::move(s.checks);
}

}  // namespace augtrack
