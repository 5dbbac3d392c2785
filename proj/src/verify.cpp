#include "qanc/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "qanc/errors.hpp"
#include "qanc/fd_oracle.hpp"
#include "qanc/json_util.hpp"

namespace qanc::verify {

using construction::Construction;
using construction::FProfile;
using construction::FRatios;
using curvature::CurvatureSample;

namespace {

const XReal kHuge = XReal::from_log(1e15);

bool xless(const XReal& a, const XReal& b) { return a < b; }

std::vector<XReal> sorted_unique(std::vector<XReal> v) {
  std::sort(v.begin(), v.end(), xless);
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

int get_int(const nlohmann::json& j, const char* key, int lo) {
  const auto& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < lo) {
    throw ConfigError(std::string("sweep.") + key + " must be an integer >= " + std::to_string(lo));
  }
  return v.get<int>();
}

double get_double(const nlohmann::json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number() || !std::isfinite(v.get<double>())) {
    throw ConfigError(std::string("sweep.") + key + " must be a finite number");
  }
  return v.get<double>();
}

}  // namespace

SweepSpec SweepSpec::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("sweep must be a JSON object");
  static const std::set<std::string> known = {
      "generations",     "s_points", "sphere_points",        "x_points", "window_points",
      "junction_points", "seed",     "mode",                 "moderate_epsilon",
      "moderate_R0",     "smoothing_window_rel"};
  for (const auto& [k, v] : j.items()) {
    if (!known.count(k)) throw ConfigError("unknown sweep key '" + k + "'");
  }
  SweepSpec s;
  if (j.contains("generations")) {
    const auto& g = j.at("generations");
    if (g.is_number_integer()) {
      const int n = get_int(j, "generations", 1);
      s.generations.clear();
      for (int i = 1; i <= n; ++i) s.generations.push_back(i);
    } else if (g.is_array() && !g.empty()) {
      s.generations.clear();
      for (const auto& e : g) {
        if (!e.is_number_integer() || e.get<int>() < 1) {
          throw ConfigError("sweep.generations entries must be integers >= 1");
        }
        s.generations.push_back(e.get<int>());
      }
      std::sort(s.generations.begin(), s.generations.end());
      s.generations.erase(std::unique(s.generations.begin(), s.generations.end()),
                          s.generations.end());
    } else {
      throw ConfigError("sweep.generations must be a count or a list");
    }
  }
  if (j.contains("s_points")) s.s_points = get_int(j, "s_points", 64);
  if (j.contains("sphere_points")) s.sphere_points = get_int(j, "sphere_points", 64);
  if (j.contains("x_points")) s.x_points = get_int(j, "x_points", 64);
  if (j.contains("window_points")) s.window_points = get_int(j, "window_points", 32);
  if (j.contains("junction_points")) s.junction_points = get_int(j, "junction_points", 0);
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_integer() || j.at("seed").get<long long>() < 0) throw ConfigError("sweep.seed must be a non-negative integer");
    s.seed = j.at("seed").get<unsigned long long>();
  }
  if (j.contains("mode")) {
    if (!j.at("mode").is_string()) throw ConfigError("sweep.mode must be a string");
    s.mode.mode = construction::parse_mode(j.at("mode").get<std::string>());
  }
  if (j.contains("moderate_epsilon")) s.mode.moderate_epsilon = get_double(j, "moderate_epsilon");
  if (j.contains("moderate_R0")) s.mode.moderate_R0 = get_double(j, "moderate_R0");
  if (j.contains("smoothing_window_rel")) {
    s.mode.smoothing_window_rel = get_double(j, "smoothing_window_rel");
  }
  return s;
}

nlohmann::json SweepSpec::to_json() const {
  return {{"generations", generations},
          {"s_points", s_points},
          {"sphere_points", sphere_points},
          {"x_points", x_points},
          {"window_points", window_points},
          {"junction_points", junction_points},
          {"seed", seed},
          {"mode", construction::mode_name(mode.mode)},
          {"moderate_epsilon", mode.moderate_epsilon},
          {"moderate_R0", mode.moderate_R0},
          {"smoothing_window_rel", mode.smoothing_window_rel}};
}

nlohmann::json SamplePoint::to_json() const {
  return {{"what", what},
          {"generation", generation},
          {"s", xreal_to_json(s)},
          {"x", xreal_to_json(x)},
          {"value", xreal_to_json(value)}};
}

nlohmann::json SweepResult::to_json() const {
  nlohmann::json mr;
  static const char* dirs[4] = {"T", "X", "Sigma", "Theta"};
  for (int k = 0; k < 4; ++k) mr[dirs[k]] = xreal_to_json(min_ricci[k]);
  nlohmann::json ms;
  const auto& names = curvature::value_names();
  for (int k = 0; k < 8; ++k) ms[names[k]] = xreal_to_json(min_sectional[k]);
  auto worst = nlohmann::json::array();
  for (const auto& w : min_ricci_at) worst.push_back(w.to_json());
  worst.push_back(min_sectional_at.to_json());
  return {{"points", points},
          {"excised", excised},
          {"min_ricci", mr},
          {"min_sectional", ms},
          {"K0", std::sqrt(K0_sq)},
          {"K0_squared", K0_sq},
          {"K0_first_form", K0_first_form},
          {"worst_points", worst},
          {"reduction_compared", reduction_compared},
          {"reduction", reduction.to_json()}};
}

double fit_decay_constant(const std::vector<CurvatureSample>& samples, SamplePoint* binding) {
  XReal mn = kHuge;
  for (const auto& smp : samples) {
    if (smp.excised) continue;
    const XReal k = smp.k.min();
    if (k < mn) {
      mn = k;
      if (binding) *binding = {smp.generation, smp.s, smp.x, k, "K_min"};
    }
  }
  if (mn.sign() >= 0) return 0.0;
  return (-mn).to_double();
}

std::string csv_header() {
  std::string h = "generation,s,x,excised";
  for (const auto& n : curvature::value_names()) h += "," + n;
  return h;
}

void write_csv_row(std::ostream& os, const CurvatureSample& smp) {
  os << smp.generation << "," << smp.s << "," << smp.x << "," << (smp.excised ? 1 : 0);
  for (const auto& v : smp.values()) os << "," << v;
  os << "\n";
}

// ---------------------------------------------------------------------------
// sweep

namespace {

std::vector<XReal> s_grid(const Construction& cons, const SweepSpec& spec) {
  const double r = cons.dc.r;
  const double s0 = 1.0 + 2.0 * r;
  std::vector<XReal> s;
  for (int k = 0; k <= spec.sphere_points; ++k) s.emplace_back(1.0 + 2.0 * r * k / spec.sphere_points);
  const double span = log_ratio(cons.u.alpha, XReal(s0));
  for (int k = 0; k <= spec.s_points; ++k) {
    s.push_back(XReal(s0) * XReal::from_log(span * k / spec.s_points));
  }
  // Junctions of u and g, and the top and bottom of the ball.
  const double h = 2.0 * r / spec.sphere_points;
  for (double J : {1.0 + r / 6.0, 1.0 + 11.0 * r / 6.0, s0, 1.0 + r / 5.0, 1.0 + 9.0 * r / 5.0,
                   cons.schedule.transition_lo, cons.schedule.transition_hi}) {
    s.emplace_back(J);
    for (int k = 1; k <= spec.junction_points; ++k) {
      const double d = h * k / spec.junction_points;
      if (J - d >= 1.0) s.emplace_back(J - d);
      s.emplace_back(J + d);
    }
  }
  for (const auto& w : cons.u.profile.smoothing_windows()) {
    for (int k = 0; k <= spec.window_points; ++k) {
      s.push_back(w.center + w.half_width * XReal(-1.0 + 2.0 * k / spec.window_points));
    }
  }
  auto out = sorted_unique(std::move(s));
  out.erase(std::remove_if(out.begin(), out.end(),
                           [&](const XReal& v) { return v < XReal(1.0) || cons.u.alpha < v; }),
            out.end());
  return out;
}

void add_f_points(const FProfile& f, int n, std::vector<XReal>& xs) {
  const int n1 = std::max(8, n / 8), n2 = std::max(8, n / 4), n3 = std::max(8, n / 4);
  const int n4 = std::max(8, n - n1 - n2 - n3);
  for (int k = 0; k <= n1; ++k) xs.push_back(XReal(f.y() * k / n1) / f.l());
  const double span = log_ratio(XReal(f.eps()), f.b());
  for (int k = 1; k <= n2; ++k) xs.push_back(f.b() * XReal::from_log(span * k / n2));
  const double e = f.eps(), e4 = f.bump_end(), h = std::numbers::pi / 2.0;
  for (int k = 1; k <= n3; ++k) xs.emplace_back(e + (e4 - e) * k / n3);
  for (int k = 1; k <= n4; ++k) xs.emplace_back(e4 + (h - e4) * k / n4);
}

struct Accumulator {
  SweepResult res;
  XReal min_k = kHuge;

  Accumulator() {
    res.min_ricci.fill(kHuge);
    res.min_sectional.fill(kHuge);
  }

  void take(const CurvatureSample& smp) {
    static const char* dirs[4] = {"Ric_T", "Ric_X", "Ric_Sigma", "Ric_Theta"};
    const auto ric = smp.ric.as_array();
    for (int k = 0; k < 4; ++k) {
      if (ric[k] < res.min_ricci[k]) {
        res.min_ricci[k] = ric[k];
        res.min_ricci_at[k] = {smp.generation, smp.s, smp.x, ric[k], dirs[k]};
      }
    }
    const auto sec = smp.k.as_array();
    const auto& names = curvature::value_names();
    for (int k = 0; k < 8; ++k) {
      res.min_sectional[k] = min(res.min_sectional[k], sec[k]);
      if (sec[k] < min_k) {
        min_k = sec[k];
        res.min_sectional_at = {smp.generation, smp.s, smp.x, sec[k], names[k]};
      }
    }
  }
};

struct ReductionStat {
  double max_rel_diff = 0;
  double min_theta_gain = std::numeric_limits<double>::infinity();
  long compared = 0;
};

double rel_diff(const XReal& a, const XReal& b) {
  const XReal scale = max(max(abs(a), abs(b)), XReal(1.0));
  return (abs(a - b) / scale).to_double();
}

}  // namespace

SweepResult sweep(const Construction& cons, const SweepSpec& spec, std::ostream* csv) {
  if (spec.generations.empty()) throw DomainError("sweep needs at least one generation");
  const auto ss = s_grid(cons, spec);

  // x grid shared by all generations: union of the branch-aware grids of
  // every f_eps in force.
  std::vector<const FProfile*> fs;
  for (int gen : spec.generations) {
    for (double s : {1.0, 1.0 + 2.0 * cons.dc.r}) {
      const FProfile* f = &cons.f_at(gen, s);
      if (std::find(fs.begin(), fs.end(), f) == fs.end()) fs.push_back(f);
    }
  }
  std::vector<XReal> xs;
  for (const auto* f : fs) add_f_points(*f, spec.x_points, xs);
  xs = sorted_unique(std::move(xs));
  std::map<const FProfile*, std::vector<FRatios>> table;
  for (const auto* f : fs) {
    auto& t = table[f];
    t.reserve(xs.size());
    for (const auto& x : xs) t.push_back(f->ratios(x));
  }

  Accumulator acc;
  const int ng = static_cast<int>(spec.generations.size());
  std::vector<ReductionStat> red(std::max(0, ng - 1));
  std::vector<std::array<XReal, 13>> prev(xs.size()), cur(xs.size());
  std::vector<const FProfile*> prev_f(xs.size());
  const double s_ball_hi = 1.0 + 2.0 * cons.dc.r;
  if (csv) *csv << csv_header() << "\n";

  for (const auto& s : ss) {
    const double sd = s.to_double();
    const auto uv = cons.u.at(s);
    std::vector<char> excised(xs.size(), 0);
    if (sd <= s_ball_hi) {
      for (std::size_t ix = 0; ix < xs.size(); ++ix) {
        excised[ix] = surgery::ball_membership(cons.dc, sd, xs[ix].to_double()).member;
      }
    }
    for (int gi = 0; gi < ng; ++gi) {
      const int gen = spec.generations[gi];
      const auto gv = cons.g.at(gen, s);
      const XReal t2g2 = cons.g.t2_over_g2(gen, s);
      const FProfile* f = &cons.f_at(gen, sd);
      const auto& tab = table.at(f);
      const bool band = !cons.schedule.constant && sd > cons.schedule.transition_lo &&
                        sd < cons.schedule.transition_hi;
      const double f_still = cons.f_at(gen, 1.0).bump_end();
      for (std::size_t ix = 0; ix < xs.size(); ++ix) {
        const XReal& x = xs[ix];
        if (excised[ix]) {
          ++acc.res.excised;
          continue;
        }
        if (band && x.to_double() < f_still) {
          std::ostringstream why;
          why << "f_t != 0 outside the balls at generation " << gen << ", s = " << sd
              << ", x = " << x;
          throw StructuralError(why.str());
        }
        const auto fst = curvature::frame_state(gen, s, x, uv, gv, t2g2, tab[ix]);
        CurvatureSample smp;
        smp.generation = gen;
        smp.s = s;
        smp.x = x;
        smp.k = curvature::sectional_components(fst);
        smp.ric = curvature::ricci_diagonal(fst);
        acc.take(smp);
        ++acc.res.points;
        cur[ix] = smp.values();
        if (csv) write_csv_row(*csv, smp);
        if (gi > 0) {
          const int pg = spec.generations[gi - 1];
          bool comparable = !(pg == 1 && sd <= 1.0 + cons.dc.r / 6.0);
          if (comparable && prev_f[ix] != f) {
            comparable = x.to_double() >= std::max(prev_f[ix]->bump_end(), f->bump_end());
          }
          if (comparable) {
            auto& st = red[gi - 1];
            ++st.compared;
            for (int k : {0, 1, 2, 3, 4, 5, 6, 9, 10, 11}) {
              st.max_rel_diff = std::max(st.max_rel_diff, rel_diff(cur[ix][k], prev[ix][k]));
            }
            for (int k : {7, 12}) {
              const XReal scale = max(max(abs(cur[ix][k]), abs(prev[ix][k])), XReal(1.0));
              st.min_theta_gain =
                  std::min(st.min_theta_gain, ((cur[ix][k] - prev[ix][k]) / scale).to_double());
            }
          }
        }
        prev[ix] = cur[ix];
        prev_f[ix] = f;
      }
    }
  }

  SweepResult res = std::move(acc.res);
  res.K0_sq = acc.min_k.sign() >= 0 ? 0.0 : (-acc.min_k).to_double();
  const double t1 = cons.p.t1;
  res.K0_first_form = res.K0_sq * (1.0 + 1.0 / (t1 * t1));
  for (int gi = 1; gi < ng; ++gi) {
    const auto& st = red[gi - 1];
    const std::string tag =
        std::to_string(spec.generations[gi - 1]) + "_" + std::to_string(spec.generations[gi]);
    res.reduction_compared += st.compared;
    if (st.compared == 0) {
      res.reduction.add_failure("reduction_" + tag, "no comparable points");
      continue;
    }
    res.reduction.add("reduction_" + tag + "_max_rel_diff", XReal(st.max_rel_diff), "<=",
                      XReal(1e-12), "terms without t^2/g^2");
    res.reduction.add("reduction_" + tag + "_theta_monotone", XReal(st.min_theta_gain), ">=",
                      XReal(-1e-12), "t^2/g^2-bearing terms nondecreasing in the generation");
  }
  return res;
}

// ---------------------------------------------------------------------------
// report

nlohmann::json VerificationReport::to_json() const {
  auto site_json = nlohmann::json::array();
  for (const auto& s : sites) site_json.push_back(s.to_json());
  return {{"parameters", parameters.to_json()},
          {"derived_constants", derived.to_json(parameters.generations)},
          {"ledger", ledger.to_json()},
          {"sweep", sweep.to_json()},
          {"surgery_sites", site_json},
          {"mode", construction::mode_name(mode.mode)},
          {"mode_settings",
           {{"moderate_epsilon", mode.moderate_epsilon},
            {"moderate_R0", mode.moderate_R0},
            {"smoothing_window_rel", mode.smoothing_window_rel}}},
          {"pass", pass}};
}

VerificationReport sweep_Q(const ParameterSet& p, const SweepSpec& spec, std::ostream* csv) {
  VerificationReport rep;
  rep.parameters = p;
  rep.mode = spec.mode;
  rep.ledger = construction::check_admissibility(p, spec.mode);
  std::unique_ptr<Construction> cons;
  try {
    rep.derived = derive_constants(p);
    cons = construction::build_construction(p, spec.mode);
  } catch (const Error& e) {
    rep.ledger.add_failure("construction", e.what());
    rep.pass = false;
    return rep;
  }

  const auto& sch = cons->schedule;
  if (sch.constant) {
    const auto& f = cons->f_for_eps(sch.eps[1]);
    rep.ledger.append(construction::menguy_margins(f, p.eta).to_ledger("menguy_moderate"));
  } else {
    for (std::size_t i = 1; i < sch.eps.size(); ++i) {
      const auto& f = cons->f_for_eps(sch.eps[i]);
      rep.ledger.append(
          construction::menguy_margins(f, p.eta).to_ledger("menguy_eps" + std::to_string(i)));
    }
    for (std::size_t i = 0; i < sch.containment_margin.size(); ++i) {
      rep.ledger.add("schedule_containment_" + std::to_string(i + 1),
                     XReal(sch.containment_margin[i]), ">", XReal(0.0),
                     "4r/5 minus the ball distance of the transition corners");
    }
  }
  double f_jump = 0;
  for (std::size_t i = 1; i < sch.eps.size(); ++i) {
    f_jump = std::max(f_jump,
                      piecewise::check_continuity(cons->f_for_eps(sch.eps[i]).profile(), 1).max_jump);
  }
  rep.ledger.add("continuity_f_C1", XReal(f_jump), "<", XReal(1e-9),
                 "relative jump, every epsilon in use");
  const auto uc = piecewise::check_continuity(cons->u.profile, 1);
  rep.ledger.add("continuity_u_C1", XReal(uc.max_jump), "<", XReal(1e-9), "relative jump");
  for (int gen : {1, 2}) {
    const auto qc = piecewise::check_continuity(cons->g.q_for(gen), 0);
    rep.ledger.add("continuity_q_gen" + std::to_string(gen), XReal(qc.max_jump), "<", XReal(1e-9),
                   "t g_t/g continuous, so g is C1");
  }
  for (int gen = 1; gen <= p.generations; ++gen) {
    rep.sites.push_back(surgery::certify_site(*cons, gen, 1000));
    rep.ledger.append(rep.sites.back().to_ledger());
  }
  rep.ledger.append(surgery::base_cap_check(*cons).ledger);

  try {
    rep.sweep = sweep(*cons, spec, csv);
    static const char* dirs[4] = {"T", "X", "Sigma", "Theta"};
    for (int k = 0; k < 4; ++k) {
      const auto& w = rep.sweep.min_ricci_at[k];
      std::ostringstream note;
      note << "generation " << w.generation << ", s = " << w.s << ", x = " << w.x;
      rep.ledger.add(std::string("sweep_min_ricci_") + dirs[k], rep.sweep.min_ricci[k], ">",
                     XReal(0.0), note.str());
    }
    rep.ledger.append(rep.sweep.reduction);
  } catch (const Error& e) {
    rep.ledger.add_failure("sweep", e.what());
  }
  rep.pass = rep.ledger.pass();
  return rep;
}

// ---------------------------------------------------------------------------
// oracle

namespace {

// f_eps from its defining formulas in long double, independent of the
// piecewise evaluator.
// Matching constants re-derived in long double: y = l b solves
// tan(y) = y/(1-eps) (C1 at b), delta solves cot(eps+delta) = (1-eps)/eps (C1 at
// eps), and l follows from matching values at eps.
struct OracleMatch {
  fd::Real y, delta, log_l;
};

OracleMatch oracle_match(double eps_d, double R0_d) {
  using R = fd::Real;
  const R eps = eps_d, R0 = R0_d;
  // tan(y) - y/(1-eps) on (0, pi/2): g(y) = sin(y)(1-eps) - y cos(y), g > 0 near pi/2.
  R lo = std::sqrt(eps) * R(0.5), hi = std::min(std::sqrt(R(3) * eps) * R(2), std::numbers::pi_v<R> / 2 - R(1e-6));
  auto g = [&](R y) {
    const R y2 = y * y;
    const R t = y < R(1e-2) ? R(1) / 3 + y2 * (R(2) / 15 + y2 * (R(17) / 315 + y2 * R(62) / 2835))
                            : (std::tan(y) - y) / (y2 * y);
    return t - eps / ((1 - eps) * y2);
  };
  for (int k = 0; k < 200; ++k) {
    const R mid = (lo + hi) / 2;
    (g(mid) > 0 ? hi : lo) = mid;
  }
  OracleMatch m;
  m.y = (lo + hi) / 2;
  m.delta = std::atan(eps / (1 - eps)) - eps;
  m.log_l = (std::log(std::sin(m.y)) + (1 - eps) * std::log(eps / m.y) - std::log(R0) -
             std::log(std::sin(eps + m.delta))) / eps;
  return m;
}

fd::Real f_eps_value(const FProfile& f, const OracleMatch& m, fd::Real x) {
  using R = fd::Real;
  const R half_pi = std::numbers::pi_v<R> / 2;
  if (x > half_pi) x = std::numbers::pi_v<R> - x;
  const R eps = f.eps();
  const R log_l = m.log_l;
  const R y = m.y;
  const R b = std::exp(std::log(y) - log_l);
  if (x <= b) return std::sin(std::exp(log_l) * x) / std::exp(log_l);
  if (x <= eps) return std::exp(std::log(std::sin(y)) - log_l + (1 - eps) * std::log(x / b));
  const R z = (x - eps) / (f.bump_end() - eps);
  R phi = 0;
  if (z <= 0) {
    phi = 1;
  } else if (z < 1) {
    phi = 1 - z * z * z * (10 - 15 * z + 6 * z * z);
  }
  return static_cast<R>(f.R0()) * std::sin(x + m.delta * phi);
}

struct GenOneMetric {
  const Construction* cons;
  const FProfile* f;
  OracleMatch match;
  double log_g1_over_t1;

  fd::Diagonal operator()(const fd::Point& p) const {
    using R = fd::Real;
    const XReal s(static_cast<double>(p[0]));
    const R U = cons->u.profile.eval(s, 0).to_double();
    const R fx = f_eps_value(*f, match, p[1]);
    const double logG = cons->g.q_first.integral(XReal(1.0 + cons->dc.r / 6.0), s);
    const R G = std::exp(static_cast<R>(log_g1_over_t1 + logG));
    const R uf = U * fx;
    const R sp = std::sin(p[2]), st = std::sin(p[4]);
    return {1, U * U, uf * uf, uf * uf * sp * sp, G * G, G * G * st * st};
  }
};

bool near_any(double v, const std::vector<double>& js, double d) {
  return std::any_of(js.begin(), js.end(), [&](double j) { return std::fabs(v - j) < d; });
}

}  // namespace

nlohmann::json OracleReport::to_json() const {
  return {{"points", points},
          {"rel_step", rel_step},
          {"x_rel_step", x_rel_step},
          {"max_relative_deviation", max_relative_deviation},
          {"worst", worst.to_json()},
          {"max_richardson_change", max_richardson_change}};
}

OracleReport oracle_crosscheck(const Construction& cons, int n_points, double rel_step,
                               double x_rel_step, unsigned long long seed, bool corrupt_x_theta) {
  if (!cons.schedule.constant) {
    throw UnsupportedError("the finite-difference cross-check runs in moderate mode");
  }
  OracleReport rep;
  rep.rel_step = rel_step;
  rep.x_rel_step = x_rel_step;
  const double r = cons.dc.r;
  const FProfile& f = cons.f_at(1, 1.0);
  const GenOneMetric metric{&cons, &f, oracle_match(f.eps(), f.R0()), cons.dc.log_g(1) - cons.dc.log_t1};

  std::vector<double> s_junctions = {1.0 + r / 6.0, 1.0 + 11.0 * r / 6.0, 1.0 + 2.0 * r};
  for (const auto& w : cons.u.profile.smoothing_windows()) {
    s_junctions.push_back((w.center - w.half_width).to_double());
    s_junctions.push_back((w.center + w.half_width).to_double());
  }
  const std::vector<double> x_junctions = {f.b().to_double(), f.eps(), f.bump_end()};

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double sigma_max = std::min(300.0, cons.dc.log_alpha);
  const double log_x_lo = std::log(1e-5), log_x_hi = std::log(std::numbers::pi / 2.0);
  static const std::array<std::pair<int, int>, 8> planes = {
      {{0, 1}, {0, 2}, {0, 4}, {1, 2}, {1, 4}, {2, 4}, {2, 3}, {4, 5}}};
  static const std::array<int, 4> ric_axes = {0, 1, 2, 4};
  const auto& names = curvature::value_names();

  int attempts = 0;
  while (rep.points < n_points) {
    if (++attempts > 1000 * n_points) throw OraclePrecisionError("could not place oracle points");
    double s;
    if (unit(rng) < 0.2) {
      s = 1.0 + 2.0 * r * unit(rng);
    } else {
      s = std::exp(std::log1p(2.0 * r) + (sigma_max - std::log1p(2.0 * r)) * unit(rng));
    }
    const double x = std::exp(log_x_lo + (log_x_hi - log_x_lo) * unit(rng));
    const double hs = rel_step * s, hx = x_rel_step * x;
    if (near_any(s, s_junctions, 20.0 * hs) || near_any(x, x_junctions, 20.0 * hx)) continue;
    if (s <= 1.0 + 2.0 * r + 20.0 * hs) {
      if (s - 20.0 * hs < 1.0) continue;
      const double d = surgery::ball_membership(cons.dc, s, x).distance;
      if (d < 0.8 * r * (1.0 + 1e-3)) continue;
    }
    const fd::Point p = {s, x, 1.0, 0.3, 1.0, 0.7};
    const fd::Real ha = rel_step;
    const fd::OracleResult o = fd::fd_riemann(metric, p, {hs, hx, ha, ha, ha, ha});
    rep.max_richardson_change = std::max(rep.max_richardson_change, o.richardson_change);

    const XReal sx(s), xx(x);
    const auto fs = curvature::frame_state(cons, 1, sx, xx);
    const auto k = curvature::sectional_components(fs, corrupt_x_theta);
    const auto ric = curvature::ricci_diagonal(fs);
    const auto ks = k.as_array();
    const auto rs = ric.as_array();
    const double s2 = s * s;
    auto compare = [&](double closed, double fd_val, const std::string& what) {
      const double dev = std::fabs(closed - fd_val) / std::max(std::fabs(closed), 1.0);
      if (dev > rep.max_relative_deviation) {
        rep.max_relative_deviation = dev;
        rep.worst = {1, sx, xx, XReal(dev), what};
      }
    };
    for (int i = 0; i < 8; ++i) {
      compare(ks[i].to_double(), s2 * o.sectional[planes[i].first][planes[i].second], names[i]);
    }
    for (int i = 0; i < 4; ++i) {
      compare(rs[i].to_double(), s2 * o.ricci[ric_axes[i]][ric_axes[i]], names[9 + i]);
    }
    ++rep.points;
  }
  return rep;
}

double constant_curvature_fixture_error(double rel_step) {
  // dtau^2 + sin^2 tau (dx^2 + sin^2 x dS^2) + dS^2_theta and the flat
  // product: sectionals 1 on the S^4 and S^2 planes, 0 on mixed planes.
  const fd::MetricFn sphere = [](const fd::Point& p) {
    const fd::Real a = std::sin(p[0]), b = std::sin(p[1]), c = std::sin(p[2]), d = std::sin(p[4]);
    const fd::Real a2 = a * a, ab = a2 * b * b;
    return fd::Diagonal{1, a2, ab, ab * c * c, 1, d * d};
  };
  const fd::MetricFn flat = [](const fd::Point&) { return fd::Diagonal{1, 1, 1, 1, 1, 1}; };
  const fd::Point p = {1.1, 0.9, 1.2, 0.4, 1.3, 0.2};
  const fd::Real hr = rel_step;
  const std::array<fd::Real, 6> h = {hr, hr, hr, hr, hr, hr};
  const auto os = fd::fd_riemann(sphere, p, h);
  const auto of = fd::fd_riemann(flat, p, h);
  double err = 0.0;
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      if (a == b) continue;
      const bool s4 = a < 4 && b < 4;
      const bool s2 = a >= 4 && b >= 4;
      err = std::max(err, std::fabs(os.sectional[a][b] - (s4 || s2 ? 1.0 : 0.0)));
      err = std::max(err, std::fabs(of.sectional[a][b]));
    }
  return err;
}

}  // namespace qanc::verify
