#include "augtrack/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "augtrack/analysis.hpp"
#include "augtrack/detail/quad.hpp"
#include "augtrack/error.hpp"
#include "augtrack/rng.hpp"

namespace augtrack {
namespace {

using detail::quad;

struct Point {
  real x = 0, y = 0;
};

// Scenario 1 path for n in [0, count): the apparent truth before jitter.
std::vector<Point> scenario1_path(const ScenarioConfig& cfg, int count) {
  std::vector<Point> path(static_cast<std::size_t>(count));
  const real step = cfg.speed * cfg.ts;
  const real dtheta = cfg.omega * cfg.ts;
  real x = 0, y = 0, heading = 0;
  for (int n = 0; n < count; ++n) {
    if (n > 0) {
      if (n >= cfg.turn_start && n <= cfg.turn_end) {
        // Counter-clockwise arc about the centre left of the heading.
        const real cx = x - cfg.radius * std::sin(heading);
        const real cy = y + cfg.radius * std::cos(heading);
        heading += dtheta;
        x = cx + cfg.radius * std::sin(heading);
        y = cy - cfg.radius * std::cos(heading);
      } else {
        if (n == cfg.heading_change_frame) heading += cfg.heading_change_deg * kPi / 180.0L;
        x += step * std::cos(heading);
        y += step * std::sin(heading);
      }
    }
    path[static_cast<std::size_t>(n)] = {x, y + (n >= cfg.step_frame ? cfg.step_offset : 0.0L)};
  }
  return path;
}

Point truth_point(const ScenarioConfig& cfg, const std::vector<Point>& s1, int n) {
  const real nr = static_cast<real>(n);
  switch (cfg.id) {
    case 1:
      if (n < 0) return {nr * cfg.speed * cfg.ts, 0};
      return s1[static_cast<std::size_t>(n)];
    case 2: {
      const real phase = cfg.omega * cfg.ts * nr;
      return {cfg.radius * std::cos(phase), cfg.radius * std::sin(phase)};
    }
    default:
      return {nr * cfg.speed * cfg.ts, 0};
  }
}

}  // namespace

ScenarioConfig ScenarioConfig::defaults(int id) {
  ScenarioConfig c;
  c.id = id;
  c.sigma_sns = id == 2 ? 0.0L : 1.0L;
  return c;
}

void ScenarioConfig::validate() const {
  auto fail = [](const std::string& m) { throw Error(ErrorCode::invalid_spec, m); };
  if (id < 1 || id > 3) fail("unknown scenario id " + std::to_string(id));
  if (n_frames < 1) fail("n_frames must be >= 1");
  if (!(ts > 0.0L)) fail("ts must be positive");
  if (!(sigma_sns >= 0.0L)) fail("sigma_sns must be >= 0");
  if (!(speed >= 0.0L)) fail("speed must be >= 0");
  if (id != 3) {
    if (!(radius > 0.0L) || !(omega > 0.0L)) fail("radius and omega must be positive");
    if (std::abs(radius * omega - speed) > 1e-9L * std::max(speed, 1.0L)) {
      std::ostringstream os;
      os << "radius * omega must equal speed (" << static_cast<double>(radius) << " * "
         << static_cast<double>(omega) << " != " << static_cast<double>(speed) << ")";
      fail(os.str());
    }
  }
}

real ScenarioData::truth_xat(int n) const {
  return truth_x.at(static_cast<std::size_t>(n + kMaxTruthLag));
}
real ScenarioData::truth_yat(int n) const {
  return truth_y.at(static_cast<std::size_t>(n + kMaxTruthLag));
}

ScenarioData gen_scenario(const ScenarioConfig& cfg, std::uint64_t rep) {
  cfg.validate();
  ScenarioData d;
  d.n_frames = cfg.n_frames;
  const int total = cfg.n_frames + 2 * kMaxTruthLag;
  const std::vector<Point> s1 =
      cfg.id == 1 ? scenario1_path(cfg, cfg.n_frames + kMaxTruthLag) : std::vector<Point>{};
  d.truth_x.resize(static_cast<std::size_t>(total));
  d.truth_y.resize(static_cast<std::size_t>(total));
  for (int i = 0; i < total; ++i) {
    const Point p = truth_point(cfg, s1, i - kMaxTruthLag);
    d.truth_x[static_cast<std::size_t>(i)] = p.x;
    d.truth_y[static_cast<std::size_t>(i)] = p.y;
  }

  RandomStream noise_x(cfg.seed, rep, 0);
  RandomStream noise_y(cfg.seed, rep, 1);
  d.meas_x.resize(static_cast<std::size_t>(cfg.n_frames));
  d.meas_y.resize(static_cast<std::size_t>(cfg.n_frames));
  for (int n = 0; n < cfg.n_frames; ++n) {
    const auto i = static_cast<std::size_t>(n);
    real mx = d.truth_xat(n);
    real my = d.truth_yat(n);
    if (cfg.sigma_sns > 0.0L) {
      mx += cfg.sigma_sns * static_cast<real>(noise_x.gaussian());
      my += cfg.sigma_sns * static_cast<real>(noise_y.gaussian());
    }
    if (cfg.id == 1 && n >= cfg.jitter_start)
      my += n % 2 == 0 ? cfg.jitter_amplitude : -cfg.jitter_amplitude;
    d.meas_x[i] = mx;
    d.meas_y[i] = my;
  }
  return d;
}

Vector init_step_state(const TransferFunction& tf, real x0) {
  const std::size_t k_order = std::max(tf.a.size(), tf.b.size()) - 1;
  auto coef = [&](const Vector& c, std::size_t j) { return j < c.size() ? quad(c[j]) : quad(0); };
  quad sum_a = 0, sum_b = 0, mag_a = 0;
  for (std::size_t j = 0; j <= k_order; ++j) {
    sum_a += coef(tf.a, j);
    sum_b += coef(tf.b, j);
    mag_a += abs(coef(tf.a, j));
  }
  if (abs(sum_a) <= PivotTolerance<quad>::value() * mag_a)
    throw Error(ErrorCode::singular_fixed_point, "denominator vanishes at z = 1");
  const quad x = x0;
  const quad y = x * sum_b / sum_a;
  Vector v(k_order);
  quad acc = 0;
  for (std::size_t i = k_order; i-- > 0;) {
    acc += coef(tf.b, i + 1) * x - coef(tf.a, i + 1) * y;
    v[i] = static_cast<real>(acc);
  }
  return v;
}

Vector init_step_state(const StateSpaceFilter& ss, real x0) {
  const std::size_t n = ss.order();
  Matrix<quad> m = Matrix<quad>::identity(n) - ss.g.cast<quad>();
  std::vector<quad> rhs(n);
  for (std::size_t i = 0; i < n; ++i) rhs[i] = quad(ss.h[i]) * quad(x0);
  try {
    return cast_vector<quad, real>(solve(m, rhs));
  } catch (const SingularMatrixError&) {
    throw Error(ErrorCode::singular_fixed_point, "I - G is singular");
  }
}

Vector run_tf_filter(const TransferFunction& tf, const Vector& x, const InitPolicy& init) {
  if (tf.a.empty() || tf.a[0] != 1.0L)
    throw Error(ErrorCode::invalid_spec, "denominator must have a[0] = 1");
  const std::size_t k_order = std::max(tf.a.size(), tf.b.size()) - 1;
  Vector a(k_order + 1, 0.0L), b(k_order + 1, 0.0L);
  std::copy(tf.a.begin(), tf.a.end(), a.begin());
  std::copy(tf.b.begin(), tf.b.end(), b.begin());

  Vector v(k_order, 0.0L);
  if (init.kind == InitPolicy::Kind::step && !x.empty()) {
    v = init_step_state(tf, x.front());
  } else if (init.kind == InitPolicy::Kind::explicit_state) {
    if (init.state.size() != k_order)
      throw Error(ErrorCode::invalid_spec, "initial state has the wrong length");
    v = init.state;
  }

  Vector y(x.size());
  for (std::size_t n = 0; n < x.size(); ++n) {
    const real out = b[0] * x[n] + (k_order ? v[0] : 0.0L);
    for (std::size_t i = 0; i < k_order; ++i)
      v[i] = b[i + 1] * x[n] - a[i + 1] * out + (i + 1 < k_order ? v[i + 1] : 0.0L);
    y[n] = out;
  }
  return y;
}

ObserverRun run_ss_observer(const StateSpaceFilter& ss, const Vector& x, const InitPolicy& init) {
  const std::size_t k_order = ss.order();
  Vector w(k_order, 0.0L);
  if (init.kind == InitPolicy::Kind::step && !x.empty()) {
    w = init_step_state(ss, x.front());
  } else if (init.kind == InitPolicy::Kind::explicit_state) {
    if (init.state.size() != k_order)
      throw Error(ErrorCode::invalid_spec, "initial state has the wrong length");
    w = init.state;
  }
  ObserverRun run;
  run.y.reserve(x.size());
  run.states.reserve(x.size());
  for (real xn : x) {
    Vector next = ss.g * w;
    for (std::size_t i = 0; i < k_order; ++i) next[i] += ss.h[i] * xn;
    w = std::move(next);
    run.y.push_back(dot(ss.c, w));
    run.states.push_back(w);
  }
  return run;
}

KalmanRun run_variable_kf(const Vector& z, real sigma_q, real sigma_r, real ts,
                          KalmanOptions opts) {
  if (!(sigma_q >= 0.0L) || !(sigma_r > 0.0L) || !(ts > 0.0L))
    throw Error(ErrorCode::invalid_spec, "KF needs sigma_q >= 0, sigma_r > 0, ts > 0");
  const real q2 = sigma_q * sigma_q;
  const real q11 = q2 * ts * ts * ts * ts / 4.0L;
  const real q12 = q2 * ts * ts * ts / 2.0L;
  const real q22 = q2 * ts * ts;
  const real r = sigma_r * sigma_r;

  KalmanRun run;
  if (z.empty()) return run;
  real x0 = z.front(), x1 = 0;
  real p00 = opts.p0, p01 = 0, p11 = opts.p0;
  for (std::size_t n = 0; n < z.size(); ++n) {
    if (n > 0) {
      x0 += ts * x1;
      const real n00 = p00 + 2.0L * ts * p01 + ts * ts * p11 + q11;
      const real n01 = p01 + ts * p11 + q12;
      const real n11 = p11 + q22;
      p00 = n00;
      p01 = n01;
      p11 = n11;
    }
    const real s = p00 + r;
    const real k0 = p00 / s;
    const real k1 = p01 / s;
    const real innov = z[n] - x0;
    x0 += k0 * innov;
    x1 += k1 * innov;
    const real u00 = (1.0L - k0) * p00;
    const real u01 = (1.0L - k0) * p01;
    const real u11 = p11 - k1 * p01;
    p00 = u00;
    p01 = u01;
    p11 = u11;
    run.gains.emplace_back(k0, k1);
    run.position.push_back(x0);
    run.velocity.push_back(x1);
    run.output.push_back(x0 - static_cast<real>(opts.lag_q) * ts * x1);
  }
  return run;
}

std::vector<SimResult> mc_evaluate(const ScenarioConfig& cfg,
                                   const std::vector<FilterDesign>& filters, int n_rep,
                                   std::optional<int> delay_q) {
  cfg.validate();
  if (n_rep < 1) throw Error(ErrorCode::invalid_spec, "n_rep must be >= 1");
  for (const auto& f : filters) {
    const int q = delay_q.value_or(f.spec.lag_q);
    if (std::abs(q) > kMaxTruthLag)
      throw Error(ErrorCode::invalid_spec, "lag outside the supported truth window");
  }

  struct Accum {
    real sum_sq = 0, term_sq = 0, eps_r = 0, eps_theta = 0;
  };
  std::vector<Accum> acc(filters.size());
  std::vector<SimResult> out(filters.size());
  const int last = cfg.n_frames - 1;

  for (int rep = 0; rep < n_rep; ++rep) {
    const ScenarioData data = gen_scenario(cfg, static_cast<std::uint64_t>(rep));
    for (std::size_t f = 0; f < filters.size(); ++f) {
      const int q = delay_q.value_or(filters[f].spec.lag_q);
      const Vector ex = run_tf_filter(filters[f].tf, data.meas_x, InitPolicy::step());
      const Vector ey = run_tf_filter(filters[f].tf, data.meas_y, InitPolicy::step());
      for (int n = 0; n < cfg.n_frames; ++n) {
        const auto i = static_cast<std::size_t>(n);
        const real dx = ex[i] - data.truth_xat(n - q);
        const real dy = ey[i] - data.truth_yat(n - q);
        acc[f].sum_sq += dx * dx + dy * dy;
      }
      const auto li = static_cast<std::size_t>(last);
      const real tx = data.truth_xat(last - q), ty = data.truth_yat(last - q);
      const real dx = ex[li] - tx, dy = ey[li] - ty;
      acc[f].term_sq += dx * dx + dy * dy;
      if (cfg.id == 2) {
        acc[f].eps_r += std::hypot(ex[li], ey[li]) - cfg.radius;
        acc[f].eps_theta +=
            wrap_angle(std::atan2(ey[li], ex[li]) - std::atan2(ty, tx)) * 180.0L / kPi;
      }
      if (rep == 0) {
        auto& frames = out[f].frames;
        frames.reserve(static_cast<std::size_t>(cfg.n_frames));
        for (int n = 0; n < cfg.n_frames; ++n) {
          const auto i = static_cast<std::size_t>(n);
          frames.push_back({n, data.truth_xat(n), data.truth_yat(n), data.meas_x[i],
                            data.meas_y[i], ex[i], ey[i]});
        }
      }
    }
  }

  const real reps = static_cast<real>(n_rep);
  const real nan = std::numeric_limits<real>::quiet_NaN();
  for (std::size_t f = 0; f < filters.size(); ++f) {
    SimResult& r = out[f];
    r.filter = filters[f].name;
    r.lag_q = delay_q.value_or(filters[f].spec.lag_q);
    r.n_rep = n_rep;
    r.sigma_d = std::sqrt(acc[f].sum_sq / (reps * static_cast<real>(cfg.n_frames)));
    r.terminal.dist = std::sqrt(acc[f].term_sq / reps);
    r.terminal.eps_r = cfg.id == 2 ? acc[f].eps_r / reps : nan;
    r.terminal.eps_theta_deg = cfg.id == 2 ? acc[f].eps_theta / reps : nan;
  }
  return out;
}

}  // namespace augtrack
