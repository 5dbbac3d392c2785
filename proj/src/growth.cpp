#include "qanc/growth.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <numbers>

#include "qanc/errors.hpp"
#include "qanc/numeric.hpp"

namespace qanc::growth {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kGaussOrder = 20;
constexpr double kMaxPanel = 0.5;  // in sigma = log s

// Normalized block integral I(sigma) = int_0^sigma U^3 G^2 F(s) s dsigma on
// sigma-panels aligned with every profile junction.
struct Block {
  int gen = 0;
  std::vector<double> edges;
  std::vector<XReal> cumulative;  // integral up to edges[k]
  mutable std::map<const construction::FProfile*, double> F_cache;

  double F_at(const construction::Construction& cons, const XReal& s) const {
    const auto* f = &cons.f_at(gen, s.to_double());
    auto it = F_cache.find(f);
    if (it == F_cache.end()) it = F_cache.emplace(f, f_square_integral(*f)).first;
    return it->second;
  }

  XReal integrand(const construction::Construction& cons, double sigma) const {
    const XReal s = XReal::from_log(sigma);
    const double logU = cons.u.at(s).U.log_abs();
    const double logG = cons.g.at(gen, s).logG;
    const double F = F_at(cons, s);
    return XReal::from_log(3.0 * logU + 2.0 * logG + sigma) * XReal(F);
  }

  XReal panel(const construction::Construction& cons, double a, double b) const {
    const auto& rule = numeric::gauss_legendre(kGaussOrder);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    XReal acc(0.0);
    for (std::size_t k = 0; k < rule.nodes.size(); ++k)
      acc += integrand(cons, mid + half * rule.nodes[k]) * XReal(rule.weights[k] * half);
    return acc;
  }

  XReal upto(const construction::Construction& cons, double sigma) const {
    if (sigma <= edges.front()) return XReal(0.0);
    if (sigma >= edges.back()) return cumulative.back();
    const auto it = std::upper_bound(edges.begin(), edges.end(), sigma);
    const std::size_t k = static_cast<std::size_t>(it - edges.begin()) - 1;
    return cumulative[k] + panel(cons, edges[k], sigma);
  }
};

Block build_block(const construction::Construction& cons, int gen) {
  if (gen < 1 || gen > cons.p.generations)
    throw DomainError("generation outside 1.." + std::to_string(cons.p.generations));
  const double log_alpha = cons.dc.log_alpha;
  std::vector<double> cuts = {0.0, log_alpha};
  auto add = [&](const XReal& s) {
    const double v = s.log_abs();
    if (v > 0.0 && v < log_alpha) cuts.push_back(v);
  };
  for (const auto& b : cons.u.profile.branches()) add(b.lo);
  for (const auto& w : cons.u.profile.smoothing_windows()) {
    add(w.center - w.half_width);
    add(w.center + w.half_width);
  }
  for (const auto& b : cons.g.q_for(gen).branches()) add(b.lo);
  add(XReal(cons.schedule.transition_hi));
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  Block blk;
  blk.gen = gen;
  blk.edges.push_back(0.0);
  for (std::size_t k = 1; k < cuts.size(); ++k) {
    const double a = cuts[k - 1], b = cuts[k];
    const int n = std::max(1, static_cast<int>(std::ceil((b - a) / kMaxPanel)));
    for (int m = 1; m <= n; ++m) blk.edges.push_back(m == n ? b : a + (b - a) * m / n);
  }
  blk.cumulative.push_back(XReal(0.0));
  for (std::size_t k = 1; k < blk.edges.size(); ++k)
    blk.cumulative.push_back(blk.cumulative.back() +
                             blk.panel(cons, blk.edges[k - 1], blk.edges[k]));
  return blk;
}

// log(16 pi^2 t_i^4 g_i^2): the prefactor of the normalized block integral.
double log_prefactor(const construction::Construction& cons, int gen) {
  return std::log(16.0 * kPi * kPi) + 4.0 * cons.dc.log_t(gen) + 2.0 * cons.dc.log_g(gen);
}

// Splits log t into (generation, sigma) with sigma in (0, log alpha].
std::pair<int, double> locate(const construction::Construction& cons, double log_t) {
  const double rel = log_t - cons.dc.log_t1;
  if (rel < 0.0) throw DomainError("volume and diameter need t >= t1");
  if (rel == 0.0) return {1, 0.0};
  int gen = 1 + static_cast<int>(std::floor(rel / cons.dc.log_alpha));
  double sigma = rel - (gen - 1) * cons.dc.log_alpha;
  if (sigma <= 0.0 && gen > 1) {
    --gen;
    sigma += cons.dc.log_alpha;
  }
  return {gen, sigma};
}

class Tabulation {
 public:
  explicit Tabulation(const construction::Construction& cons) : cons_(cons) {}

  const Block& block(int gen) {
    while (static_cast<int>(blocks_.size()) < gen)
      blocks_.push_back(build_block(cons_, static_cast<int>(blocks_.size()) + 1));
    return blocks_[gen - 1];
  }

  XReal completed(int gen) {  // volume of generations 1..gen-1
    XReal v(0.0);
    for (int k = 1; k < gen; ++k)
      v += XReal::from_log(log_prefactor(cons_, k)) * block(k).cumulative.back();
    return v;
  }

  double log_volume(double log_t) {
    const auto [gen, sigma] = locate(cons_, log_t);
    const XReal part = XReal::from_log(log_prefactor(cons_, gen)) * block(gen).upto(cons_, sigma);
    return (completed(gen) + part).log_abs();
  }

 private:
  const construction::Construction& cons_;
  std::vector<Block> blocks_;
};

}  // namespace

double f_square_integral(const construction::FProfile& f) {
  const auto& rule = numeric::gauss_legendre(kGaussOrder);
  const double half_pi = kPi / 2.0;
  std::vector<double> cuts = {0.0, f.b().to_double(), f.eps(), f.bump_end(), half_pi};
  std::sort(cuts.begin(), cuts.end());
  double acc = 0.0;
  for (std::size_t k = 1; k < cuts.size(); ++k) {
    const double a = cuts[k - 1], b = cuts[k];
    if (!(b > a)) continue;
    constexpr int kSub = 8;
    for (int m = 0; m < kSub; ++m) {
      const double lo = a + (b - a) * m / kSub, hi = a + (b - a) * (m + 1) / kSub;
      const double mid = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double v = f.value(XReal(mid + h * rule.nodes[q])).to_double();
        acc += rule.weights[q] * h * v * v;
      }
    }
  }
  return 2.0 * acc;  // f is symmetric about pi/2
}

GenerationVolume generation_volume(const construction::Construction& cons, int gen) {
  const Block blk = build_block(cons, gen);
  GenerationVolume gv;
  gv.generation = gen;
  const auto& f = cons.f_at(gen, 1.0 + 2.0 * cons.dc.r);
  gv.eps = f.eps();
  gv.F = f_square_integral(f);
  gv.I = blk.cumulative.back();
  gv.log_volume = log_prefactor(cons, gen) + gv.I.log_abs();
  gv.log_glued_scale = 4.0 * cons.dc.log_t(gen) + 2.0 * cons.dc.log_g(gen) -
                       4.0 * std::log(cons.dc.II_ball);
  return gv;
}

double volume_of_ball(const construction::Construction& cons, double log_t) {
  Tabulation tab(cons);
  return tab.log_volume(log_t);
}

double diameter_at(const construction::Construction& cons, double log_t) {
  const auto [gen, sigma] = locate(cons, log_t);
  (void)gen;
  return kPi * cons.u.at(XReal::from_log(sigma)).U_over_s;
}

GrowthFit fit_growth_exponent(const std::vector<GrowthSample>& samples, double gamma,
                              double log_t2) {
  std::vector<const GrowthSample*> aligned;
  for (const auto& s : samples)
    if (s.aligned) aligned.push_back(&s);
  if (aligned.size() < 5)
    throw InsufficientDataError("growth fit needs at least 5 generation-aligned samples, got " +
                                std::to_string(aligned.size()));
  const double n = static_cast<double>(aligned.size());
  double mx = 0, my = 0;
  for (const auto* s : aligned) {
    mx += s->log_t;
    my += s->log_vol;
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (const auto* s : aligned) {
    sxx += (s->log_t - mx) * (s->log_t - mx);
    sxy += (s->log_t - mx) * (s->log_vol - my);
  }
  GrowthFit fit;
  fit.used = static_cast<int>(aligned.size());
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;

  const double p = 4.0 + 2.0 * gamma;
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& s : samples) {
    if (s.log_t < log_t2) continue;
    const double v = s.log_vol - p * s.log_t;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  fit.V1 = std::exp(lo);
  fit.V2 = std::exp(hi);
  return fit;
}

GrowthSeries growth_series(const construction::Construction& cons, int generations,
                           int per_period) {
  if (generations < 1 || generations > cons.p.generations)
    throw DomainError("growth generations outside 1.." + std::to_string(cons.p.generations));
  if (per_period < 2) throw DomainError("growth needs at least 2 samples per period");
  Tabulation tab(cons);
  GrowthSeries out;
  const double la = cons.dc.log_alpha;
  for (int gen = 1; gen <= generations; ++gen) {
    out.blocks.push_back(generation_volume(cons, gen));
    // Uniform in sigma, plus the spherical block, log-spaced sigma up to the
    // first uniform point (where U/s turns) and the smoothing windows.
    std::vector<double> sig;
    for (int m = 1; m < per_period; ++m) sig.push_back(la * m / per_period);
    for (int k = 1; k <= 4; ++k) sig.push_back(std::log1p(2.0 * cons.dc.r * k / 4.0));
    const double lo = std::log1p(2.0 * cons.dc.r), hi = la / per_period;
    for (int k = 0; k <= per_period; ++k) sig.push_back(lo * std::pow(hi / lo, double(k) / per_period));
    for (const auto& w : cons.u.profile.smoothing_windows())
      for (int k = -2; k <= 2; ++k) sig.push_back((w.center + w.half_width * XReal(k / 2.0)).log_abs());
    std::sort(sig.begin(), sig.end());
    const double base = cons.dc.log_t(gen);
    for (double v : sig) {
      if (!(v > 0.0 && v < la)) continue;
      GrowthSample s;
      s.log_t = base + v;
      s.log_vol = tab.log_volume(s.log_t);
      s.diam_ratio = diameter_at(cons, s.log_t);
      out.samples.push_back(s);
    }
    GrowthSample end;
    end.log_t = cons.dc.log_t(gen + 1);
    end.log_vol = tab.log_volume(end.log_t);
    end.diam_ratio = diameter_at(cons, end.log_t);
    end.aligned = true;
    out.samples.push_back(end);
  }
  const double log_t2 = cons.dc.log_t(2);
  out.fit = fit_growth_exponent(out.samples, cons.p.gamma, log_t2);
  out.diam_min = INFINITY;
  out.diam_max = -INFINITY;
  for (const auto& s : out.samples) {
    if (s.log_t < log_t2) continue;
    out.diam_min = std::min(out.diam_min, s.diam_ratio);
    out.diam_max = std::max(out.diam_max, s.diam_ratio);
  }
  out.diam_band_lo = kPi * cons.dc.cos_Delta - 0.05;
  out.diam_band_hi = kPi * cons.dc.c + 0.05;
  return out;
}

ConstraintLedger GrowthSeries::to_ledger(double gamma) const {
  ConstraintLedger L;
  const double p = 4.0 + 2.0 * gamma;
  L.add("growth_exponent_lower", XReal(fit.exponent), ">=", XReal(p - 0.05));
  L.add("growth_exponent_upper", XReal(fit.exponent), "<=", XReal(p + 0.05));
  L.add("growth_sub_euclidean", XReal(fit.exponent), "<=", XReal(5.0), "6 - exponent >= 1");
  L.add("growth_band_V1_lt_V2", XReal(fit.V1), "<", XReal(fit.V2));
  L.add("growth_diam_lower", XReal(diam_min), ">=", XReal(diam_band_lo), "pi cos(Delta) - 0.05");
  L.add("growth_diam_upper", XReal(diam_max), "<=", XReal(diam_band_hi), "pi c + 0.05");
  return L;
}

nlohmann::json GrowthSeries::to_json() const {
  nlohmann::json blocks_j = nlohmann::json::array();
  for (const auto& b : blocks)
    blocks_j.push_back({{"generation", b.generation},
                        {"eps", b.eps},
                        {"F", b.F},
                        {"log_I", b.I.log_abs()},
                        {"log_volume", b.log_volume},
                        {"log_glued_scale", b.log_glued_scale}});
  return {{"samples", samples.size()},
          {"exponent", fit.exponent},
          {"intercept", fit.intercept},
          {"aligned_samples", fit.used},
          {"V1", fit.V1},
          {"V2", fit.V2},
          {"diam_min", diam_min},
          {"diam_max", diam_max},
          {"diam_band", {diam_band_lo, diam_band_hi}},
          {"blocks", blocks_j}};
}

void GrowthSeries::write_csv(std::ostream& os) const {
  os << "log10_t,log10_vol,diam_ratio\n";
  os << std::setprecision(17);
  for (const auto& s : samples)
    os << s.log_t / std::numbers::ln10 << ',' << s.log_vol / std::numbers::ln10 << ','
       << s.diam_ratio << '\n';
}

}  // namespace qanc::growth
