#include "ckn/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <thread>

#include "ckn/emden_fowler.hpp"
#include "ckn/multibubble.hpp"
#include "ckn/nonlinearity_bounds.hpp"
#include "ckn/operators.hpp"
#include "ckn/spectrum.hpp"
#include "ckn/stability.hpp"

namespace ckn {

std::vector<std::pair<int, double>> RunConfig::pairs() const {
  std::vector<std::pair<int, double>> out;
  for (int n : n_values)
    for (double p : p_values) out.emplace_back(n, p);
  return out;
}

DiscOptions RunConfig::disc_options() const {
  DiscOptions o;
  o.N = grid_N;
  o.S = grid_S;
  o.L = L;
  o.M = M;
  return o;
}

void RunConfig::validate() const {
  for (auto [n, p] : pairs()) {
    if (n < 2) throw std::invalid_argument("n must be >= 2 (got " + std::to_string(n) + ")");
    if (!(p > 2.0) || !(p < critical_exponent(n)))
      throw std::invalid_argument("p = " + format_number(p) + " is outside (2, 2*) for n = " +
                                  std::to_string(n));
  }
  if (grid_N < 0 || grid_S < 0) throw std::invalid_argument("grid overrides must be nonnegative");
  if (L < 2) throw std::invalid_argument("L must be >= 2");
  if (M < L + 1) throw std::invalid_argument("M must exceed L");
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
}

std::vector<double> parse_range(const std::string& spec) {
  auto num = [&](const std::string& s) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != s.size() || !std::isfinite(v))
      throw std::invalid_argument("bad number '" + s + "' in '" + spec + "'");
    return v;
  };
  const auto c1 = spec.find(':');
  if (c1 == std::string::npos) return {num(spec)};
  const auto c2 = spec.find(':', c1 + 1);
  if (c2 == std::string::npos || spec.find(':', c2 + 1) != std::string::npos)
    throw std::invalid_argument("range must be a:b:step, got '" + spec + "'");
  const double a = num(spec.substr(0, c1)), b = num(spec.substr(c1 + 1, c2 - c1 - 1)),
               step = num(spec.substr(c2 + 1));
  if (!(step > 0.0) || b < a) throw std::invalid_argument("range needs a <= b and step > 0: '" + spec + "'");
  const long count = static_cast<long>(std::floor((b - a) / step + 1e-9)) + 1;
  std::vector<double> out;
  // snap to 12 significant decimals so 2.2:3:0.4 yields 2.6, not 2.6000000000000001
  for (long i = 0; i < count; ++i) out.push_back(std::round((a + i * step) * 1e12) / 1e12);
  return out;
}

ReportMeta make_meta(const RunConfig& cfg) {
  ReportMeta m;
  m.command = cfg.command;
  m.N = cfg.grid_N;
  m.S = cfg.grid_S;
  m.L = cfg.L;
  m.M = cfg.M;
  m.seed = cfg.seed;
  m.params = cfg.pairs();
  return m;
}

namespace {

// Runs fn(i) for i < count on up to `threads` workers; results keep input order.
std::vector<std::vector<Row>> parallel_rows(std::size_t count, int threads,
                                            const std::function<std::vector<Row>(std::size_t)>& fn) {
  std::vector<std::vector<Row>> out(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < count;) out[i] = fn(i);
  };
  const int nt = std::max(1, std::min<int>(threads, static_cast<int>(count)));
  std::vector<std::thread> pool;
  for (int t = 1; t < nt; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return out;
}

Row make_row(const Table& t, std::string sig = {}) {
  return {std::vector<Cell>(t.columns.size()), std::move(sig)};
}

void set(const Table& t, Row& r, const std::string& col, Cell v) { r.cells[t.column(col)] = std::move(v); }

Table collect(Table t, std::vector<std::vector<Row>> chunks) {
  for (auto& c : chunks)
    for (auto& r : c) t.rows.push_back(std::move(r));
  return t;
}

std::string quad_signature(const CknParams& prm) {
  return "n=" + std::to_string(prm.n) + ";p=" + format_number(prm.p) + ";quad=trapezoid;h=0.01;margin=30/sqrtL";
}

}  // namespace

Table cmd_constants(const RunConfig& cfg) {
  cfg.validate();
  Table t;
  t.columns = {"n", "p", "E0", "F", "E0_over_F_plus_1", "R_energy", "R_gamma", "rel_discrepancy",
               "series_terms", "tail_bound", "grid_floor", "error"};
  const auto pairs = cfg.pairs();
  auto chunks = parallel_rows(pairs.size(), cfg.threads, [&](std::size_t i) {
    auto [n, p] = pairs[i];
    Row r = make_row(t);
    set(t, r, "n", static_cast<long long>(n));
    set(t, r, "p", p);
    try {
      const auto prm = CknParams::from_pn(p, n);
      const auto d = Discretization::make(prm, cfg.disc_options());
      r.signature = d->signature();
      const auto c = compute_constants(d);
      set(t, r, "E0", c.E0);
      set(t, r, "F", c.F);
      set(t, r, "E0_over_F_plus_1", c.E0 / c.F + 1.0);
      set(t, r, "R_energy", c.R_energy);
      set(t, r, "R_gamma", c.R_gamma);
      set(t, r, "rel_discrepancy", c.relative_discrepancy());
      set(t, r, "series_terms", static_cast<long long>(c.series_terms));
      set(t, r, "tail_bound", c.tail_bound);
      set(t, r, "grid_floor", hminus1_norm(apply_H1(ZonalField::bubble(d))));
    } catch (const std::exception& e) {
      set(t, r, "error", std::string(e.what()));
    }
    return std::vector<Row>{std::move(r)};
  });
  return collect(std::move(t), std::move(chunks));
}

Table cmd_sharpness(const RunConfig& cfg) {
  cfg.validate();
  Table t;
  if (cfg.detail)
    t.columns = {"n", "p", "mu", "residual", "distance", "ratio", "projY_norm", "perp_distance",
                 "t_star", "naive_residual", "tail_fraction", "error"};
  else
    t.columns = {"n", "p", "slope_residual", "slope_distance", "slope_naive", "slope_projY",
                 "slope_perp", "ratio_limit", "ratio_drift", "R_gamma", "ratio_over_R", "error"};
  const auto mus = cfg.mus.empty() ? default_mus() : cfg.mus;
  const auto pairs = cfg.pairs();
  auto chunks = parallel_rows(pairs.size(), cfg.threads, [&](std::size_t i) {
    auto [n, p] = pairs[i];
    std::vector<Row> rows;
    auto base = [&] {
      Row r = make_row(t);
      set(t, r, "n", static_cast<long long>(n));
      set(t, r, "p", p);
      return r;
    };
    try {
      const auto prm = CknParams::from_pn(p, n);
      const auto d = Discretization::make(prm, cfg.disc_options());
      const auto rep = sharpness_study(d, mus);
      if (cfg.detail) {
        for (const auto& pt : rep.points) {
          Row r = base();
          r.signature = d->signature();
          set(t, r, "mu", pt.mu);
          set(t, r, "residual", pt.residual);
          set(t, r, "distance", pt.distance);
          set(t, r, "ratio", pt.ratio);
          set(t, r, "projY_norm", pt.projY_norm);
          set(t, r, "perp_distance", pt.perp_distance);
          set(t, r, "t_star", pt.t_star);
          set(t, r, "naive_residual", pt.naive_residual);
          set(t, r, "tail_fraction", pt.tail_fraction);
          rows.push_back(std::move(r));
        }
      } else {
        Row r = base();
        r.signature = d->signature();
        const double R = compute_R_gamma(prm).value;
        set(t, r, "slope_residual", rep.slope_residual);
        set(t, r, "slope_distance", rep.slope_distance);
        set(t, r, "slope_naive", rep.slope_naive);
        set(t, r, "slope_projY", rep.slope_projY);
        set(t, r, "slope_perp", rep.slope_perp);
        set(t, r, "ratio_limit", rep.ratio_limit);
        set(t, r, "ratio_drift", rep.ratio_drift);
        set(t, r, "R_gamma", R);
        set(t, r, "ratio_over_R", rep.ratio_limit / R);
        rows.push_back(std::move(r));
      }
    } catch (const std::exception& e) {
      Row r = base();
      set(t, r, "error", std::string(e.what()));
      rows.push_back(std::move(r));
    }
    return rows;
  });
  return collect(std::move(t), std::move(chunks));
}

Table cmd_spectrum(const RunConfig& cfg) {
  cfg.validate();
  for (int ell : cfg.ells)
    if (ell < 0) throw std::invalid_argument("degrees must be >= 0");
  if (cfg.k < 1 || cfg.k > 10) throw std::invalid_argument("k must be in [1, 10]");
  Table t;
  t.columns = {"n", "p", "kind", "ell", "index", "parity", "gamma", "residual", "error"};
  const auto pairs = cfg.pairs();
  auto chunks = parallel_rows(pairs.size(), cfg.threads, [&](std::size_t i) {
    auto [n, p] = pairs[i];
    std::vector<Row> rows;
    auto base = [&](const std::string& kind) {
      Row r = make_row(t);
      set(t, r, "n", static_cast<long long>(n));
      set(t, r, "p", p);
      set(t, r, "kind", kind);
      return r;
    };
    try {
      const auto prm = CknParams::from_pn(p, n);
      auto opt = cfg.disc_options();
      for (int ell : cfg.ells) opt.L = std::max(opt.L, ell);
      const auto d = Discretization::make(prm, opt);
      for (int ell : cfg.ells) {
        const auto sp = eigensolve_sector(*d, ell, cfg.k);
        for (std::size_t j = 0; j < sp.eigenvalues.size(); ++j) {
          Row r = base("eigenvalue");
          r.signature = d->signature();
          set(t, r, "ell", static_cast<long long>(ell));
          set(t, r, "index", static_cast<long long>(j + 1));
          set(t, r, "parity", std::string(sp.parity[j] > 0 ? "even" : "odd"));
          set(t, r, "gamma", sp.eigenvalues[j]);
          set(t, r, "residual", sp.residuals[j]);
          rows.push_back(std::move(r));
        }
      }
      Row r = base("gamma3");
      r.signature = d->signature();
      set(t, r, "gamma", gamma3(*d));
      rows.push_back(std::move(r));
    } catch (const std::exception& e) {
      Row r = base("error");
      set(t, r, "error", std::string(e.what()));
      rows.push_back(std::move(r));
    }
    return rows;
  });
  return collect(std::move(t), std::move(chunks));
}

Table cmd_interactions(const RunConfig& cfg) {
  cfg.validate();
  if (!(cfg.zeta > 0.0)) throw std::invalid_argument("zeta must be positive");
  Table t;
  t.columns = {"n", "p", "kind", "gap", "value", "predicted", "ratio", "weighted_norm", "spread", "error"};
  const auto pairs = cfg.pairs();
  auto chunks = parallel_rows(pairs.size(), cfg.threads, [&](std::size_t i) {
    auto [n, p] = pairs[i];
    std::vector<Row> rows;
    auto base = [&](const std::string& kind) {
      Row r = make_row(t);
      set(t, r, "n", static_cast<long long>(n));
      set(t, r, "p", p);
      set(t, r, "kind", kind);
      return r;
    };
    try {
      const auto prm = CknParams::from_pn(p, n);
      const auto gaps = cfg.gaps.empty() ? default_gaps(prm) : cfg.gaps;
      auto emit = [&](const std::string& kind, const WindowReport& w) {
        for (const auto& row : w.rows) {
          Row r = base(kind);
          r.signature = quad_signature(prm);
          set(t, r, "gap", row.gap);
          set(t, r, "value", row.value);
          set(t, r, "predicted", row.predicted);
          set(t, r, "ratio", row.ratio);
          set(t, r, "spread", w.spread);
          rows.push_back(std::move(r));
        }
      };
      emit("interaction", interaction_window(prm, 0.25 * p, gaps));
      emit("pair", pair_window(prm, gaps));
      emit("derivative", derivative_window(prm, gaps));
      WindowReport res;
      std::vector<double> wnorm;
      std::vector<std::string> sigs;
      for (double g : gaps) {
        const auto bc = BubbleConfig::make(prm, {-0.5 * g, 0.5 * g}, cfg.zeta);
        const auto dg = bubble_sum_residual(bc);
        res.rows.push_back({g, dg.residual, bc.Q, dg.ratio});
        wnorm.push_back(dg.interaction_norm);
      }
      double lo = INFINITY, hi = 0.0;
      for (const auto& r : res.rows) lo = std::min(lo, r.ratio), hi = std::max(hi, r.ratio);
      res.spread = hi / lo;
      const std::size_t first = rows.size();
      emit("residual", res);
      for (std::size_t j = 0; j < wnorm.size(); ++j) {
        set(t, rows[first + j], "weighted_norm", wnorm[j]);
        rows[first + j].signature = "n=" + std::to_string(n) + ";p=" + format_number(p) + ";L=0;fd=8";
      }
    } catch (const std::exception& e) {
      Row r = base("error");
      set(t, r, "error", std::string(e.what()));
      rows.push_back(std::move(r));
    }
    return rows;
  });
  return collect(std::move(t), std::move(chunks));
}

SelftestResult cmd_selftest(const RunConfig& cfg_in) {
  RunConfig cfg = cfg_in;
  if (cfg.n_values.empty() && cfg.p_values.empty()) {
    cfg.n_values = {3};
    cfg.p_values = {4.0};
  }
  cfg.validate();
  SelftestResult res;
  Table& t = res.table;
  t.columns = {"n", "p", "check", "value", "tolerance", "pass", "error"};
  const auto pairs = cfg.pairs();
  auto chunks = parallel_rows(pairs.size(), cfg.threads, [&](std::size_t i) {
    auto [n, p] = pairs[i];
    std::vector<Row> rows;
    std::string sig;
    // bound > 0: value <= bound passes; bound < 0: value > -bound passes
    auto check = [&](const std::string& name, const std::function<double()>& f, double bound) {
      Row r = make_row(t, sig);
      set(t, r, "n", static_cast<long long>(n));
      set(t, r, "p", p);
      set(t, r, "check", name);
      set(t, r, "tolerance", bound);
      bool ok = false;
      try {
        const double v = f();
        set(t, r, "value", v);
        ok = bound > 0 ? std::abs(v) <= bound : v > -bound;
      } catch (const std::exception& e) {
        set(t, r, "error", std::string(e.what()));
      }
      set(t, r, "pass", static_cast<long long>(ok));
      rows.push_back(std::move(r));
    };
    std::shared_ptr<const Discretization> d;
    CknParams prm;
    try {
      prm = CknParams::from_pn(p, n);
      d = Discretization::make(prm, cfg.disc_options());
      sig = d->signature();
    } catch (const std::exception& e) {
      Row r = make_row(t);
      set(t, r, "n", static_cast<long long>(n));
      set(t, r, "p", p);
      set(t, r, "check", std::string("setup"));
      set(t, r, "pass", 0LL);
      set(t, r, "error", std::string(e.what()));
      rows.push_back(std::move(r));
      return rows;
    }
    check("sphere_moment_beta", [&] {
      double err = 0.0;
      for (int j = 0; j <= 3; ++j) {
        const double v = sphere_area(n - 1) * std::exp(std::lgamma(j + 0.5) + std::lgamma(0.5 * (n - 1)) -
                                                        std::lgamma(j + 0.5 * n));
        err = std::max(err, std::abs(sphere_moment(n, j) - v) / v);
      }
      return err;
    }, 1e-12);
    check("bubble_lp_gamma", [&] {
      const double q = 2.0 * p / (p - 2.0);
      const double exact = std::pow(prm.beta, p) * prm.sphere() * std::sqrt(M_PI) *
                           std::exp(std::lgamma(0.5 * q) - std::lgamma(0.5 * (q + 1.0))) / prm.alpha;
      return std::abs(std::pow(lp_norm(ZonalField::bubble(d), p), p) - exact) / exact;
    }, 1e-9);
    check("emden_fowler", [&] {
      const double lam = 1.7;
      std::vector<double> radii;
      for (double s = -5.0; s <= 5.0; s += 0.5) radii.push_back(std::exp(-s));
      const auto u = inverse_emden_fowler(ZonalField::bubble(d, std::log(lam)), radii);
      double err = 0.0;
      for (std::size_t j = 0; j < radii.size(); ++j) {
        const double ex = radial_bubble(prm, radii[j], lam);
        err = std::max(err, std::abs(u[j] - ex) / ex);
      }
      return err;
    }, 1e-10);
    check("gamma1_is_1", [&] { return eigensolve_sector(*d, 0, 2).eigenvalues[0] - 1.0; }, 1e-4);
    check("gamma2_is_p_minus_1", [&] { return eigensolve_sector(*d, 0, 2).eigenvalues[1] - (p - 1.0); }, 1e-4);
    check("gamma_l1_is_p_minus_1", [&] { return eigensolve_sector(*d, 1, 1).eigenvalues[0] - (p - 1.0); }, 1e-4);
    check("gamma3_margin", [&] { return gamma3(*d) - (p - 1.0); }, -1e-3);
    check("bubble_residual_t0", [&] { return hminus1_norm(apply_H1(ZonalField::bubble(d, 0.0))); }, 1e-6);
    check("bubble_residual_t1.7", [&] { return hminus1_norm(apply_H1(ZonalField::bubble(d, 1.7))); }, 1e-6);
    std::unique_ptr<CounterexampleFamily> fam;
    check("corrector_identity", [&] {
      fam = std::make_unique<CounterexampleFamily>(d);
      return fam->corrector_residual();
    }, 1e-7);
    check("eta_orthogonality", [&] {
      if (!fam) throw std::runtime_error("corrector unavailable");
      const auto o = fam->orthogonality();
      return std::max({std::abs(o.bubble), std::abs(o.ds), std::abs(o.kernel)});
    }, 1e-8);
    StabilityConstants sc;
    bool have_sc = false;
    check("R_two_route", [&] {
      sc = compute_constants(d);
      have_sc = true;
      return sc.relative_discrepancy();
    }, 1e-2);
    auto need_sc = [&] {
      if (!have_sc) throw std::runtime_error("constants unavailable");
    };
    check("R_tail_bound", [&] { need_sc(); return sc.tail_bound; }, 1e-9);
    check("F_positive", [&] { need_sc(); return sc.F; }, -0.0);
    check("E0_plus_F_positive", [&] { need_sc(); return sc.E0 + sc.F; }, -0.0);
    check("elementary_constants_stable", [&] {
      const auto ec = elementary_constants(p, cfg.samples, cfg.seed);
      return ec.stable() ? 0.0 : 1.0;
    }, 0.5);
    check("interaction_symmetry", [&] {
      const double g = 6.0 / prm.sqrt_lambda();
      const double a = interaction(prm, 0.0, g, 0.3 * p, 0.7 * p);
      const double b = interaction(prm, g, 0.0, 0.7 * p, 0.3 * p);
      return std::abs(a - b) / std::abs(a);
    }, 1e-12);
    check("single_bubble_sum_residual", [&] {
      return bubble_sum_residual(BubbleConfig::make(prm, {0.0}, cfg.zeta)).residual;
    }, 1e-6);
    return rows;
  });
  res.table = collect(std::move(res.table), std::move(chunks));
  for (std::size_t i = 0; i < res.table.rows.size(); ++i)
    if (res.table.number(i, "pass") != 1.0) res.passed = false;
  return res;
}

}  // namespace ckn
