#pragma once

// Parameter scans over chains and channels, with row-oriented CSV / JSON-lines
// output. Grid points are independent; results are always returned in grid
// order regardless of how many worker threads evaluated them.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <fmt/format.h>
#include <json.hpp>

#include "xxz/channel.hpp"
#include "xxz/closed_forms.hpp"
#include "xxz/regimes.hpp"

namespace xxz {

/// Malformed or inconsistent configuration.
class ConfigError : public DomainError {
 public:
  explicit ConfigError(const std::string& what) : DomainError(what) {}
};

// ---------------------------------------------------------------------------
// grids

struct Axis {
  std::string name;
  std::vector<double> values;

  static Axis range(std::string name, double min, double max, double step) {
    if (!(step > 0.0)) throw ConfigError("axis '" + name + "': step must be > 0");
    if (!(min <= max)) throw ConfigError("axis '" + name + "': min must be <= max");
    const double span = (max - min) / step;
    if (span > 1e9) throw ResourceError("axis '" + name + "' has too many points");
    const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
    Axis a{std::move(name), {}};
    a.values.reserve(count);
    for (std::size_t i = 0; i < count; ++i) a.values.push_back(min + static_cast<double>(i) * step);
    return a;
  }

  static Axis list(std::string name, std::vector<double> values) {
    if (values.empty()) throw ConfigError("axis '" + name + "' is empty");
    return Axis{std::move(name), std::move(values)};
  }
};

class ScanGrid {
 public:
  ScanGrid() = default;
  explicit ScanGrid(std::vector<Axis> axes) : axes_(std::move(axes)) {}

  /// Each key is an axis: either a list of values or {"min", "max", "step"}.
  static ScanGrid from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("grid must be a JSON object");
    std::vector<Axis> axes;
    for (const auto& [name, spec] : j.items()) {
      if (spec.is_array()) {
        axes.push_back(Axis::list(name, spec.get<std::vector<double>>()));
      } else if (spec.is_object()) {
        axes.push_back(Axis::range(name, spec.at("min").get<double>(), spec.at("max").get<double>(),
                                   spec.at("step").get<double>()));
      } else if (spec.is_number()) {
        axes.push_back(Axis::list(name, {spec.get<double>()}));
      } else {
        throw ConfigError("grid axis '" + name + "' must be a list or {min,max,step}");
      }
    }
    return ScanGrid(std::move(axes));
  }

  const std::vector<Axis>& axes() const { return axes_; }

  const Axis* find(const std::string& name) const {
    for (const auto& a : axes_)
      if (a.name == name) return &a;
    return nullptr;
  }

  std::vector<double> values_or(const std::string& name, std::vector<double> fallback) const {
    const Axis* a = find(name);
    return a ? a->values : std::move(fallback);
  }

  std::size_t size() const {
    std::size_t n = 1;
    for (const auto& a : axes_) n *= a.values.size();
    return n;
  }

  void check_cap(std::size_t cap) const {
    if (size() > cap) {
      throw ResourceError("grid has " + std::to_string(size()) + " points, cap is " +
                          std::to_string(cap));
    }
  }

 private:
  std::vector<Axis> axes_;
};

// ---------------------------------------------------------------------------
// execution

struct SweepOptions {
  Limits limits;
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Runs fn(i) for i in [0, count) on up to `threads` workers; rethrows the
/// first exception after all workers have joined.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::jthread> workers;
  for (unsigned t = 0; t < threads; ++t) {
    workers.emplace_back([&, t] {
      for (std::size_t i = t; i < count; i += threads) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  workers.clear();
  if (error) std::rethrow_exception(error);
}

// ---------------------------------------------------------------------------
// tabular output

using Cell = std::variant<double, std::int64_t, std::string, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", v);
}

inline void write_csv(const Table& t, std::ostream& os) {
  for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) os << ',';
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) os << format_double(v);
            else if constexpr (std::is_same_v<T, bool>) os << (v ? "true" : "false");
            else os << v;
          },
          row[c]);
    }
    os << '\n';
  }
}

inline void write_jsonl(const Table& t, std::ostream& os) {
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj;
    for (std::size_t c = 0; c < row.size(); ++c) {
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
              if (std::isfinite(v)) obj[t.columns[c]] = v;
              else obj[t.columns[c]] = nullptr;
            } else {
              obj[t.columns[c]] = v;
            }
          },
          row[c]);
    }
    os << obj.dump() << '\n';
  }
}

inline std::string join_ints(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ";" : "") + std::to_string(v[i]);
  return out;
}

// ---------------------------------------------------------------------------
// phase scan

struct PhasePoint {
  double field = 0.0;
  double delta = 0.0;
  int ground_sector = 0;          // lowest n_up in the ground manifold
  std::vector<int> sectors;       // every n_up present in the ground manifold
  Eigen::Index index_in_sector = 0;
  double energy = 0.0;
  double concurrence = 0.0;
  std::size_t degeneracy = 1;
};

/// Ground-state classification and pair concurrence of a single chain.
inline PhasePoint evaluate_point(const ChainSpec& spec, int pair_i, int pair_j, const Limits& limits) {
  const auto gm = ground_manifold(spec, limits);
  PhasePoint p;
  p.field = spec.fields.empty() ? 0.0 : spec.fields.front();
  p.delta = spec.delta;
  p.energy = gm.energy;
  p.degeneracy = gm.degeneracy();
  for (const auto& m : gm.members) {
    if (std::find(p.sectors.begin(), p.sectors.end(), m.n_up) == p.sectors.end()) p.sectors.push_back(m.n_up);
  }
  std::sort(p.sectors.begin(), p.sectors.end());
  p.ground_sector = p.sectors.front();
  for (const auto& m : gm.members) {
    if (m.n_up == p.ground_sector) {
      p.index_in_sector = m.index_in_sector;
      break;
    }
  }
  p.concurrence = concurrence(reduce_pair(gm.ensemble, pair_i, pair_j)).value;
  return p;
}

struct PhaseScanConfig {
  ChainSpec chain;
  ScanGrid grid;  // axes "B" (uniform field) and "delta"
  int pair_i = 1;
  int pair_j = -1;  // -1: last site
};

/// One PhasePoint per (delta, B) node, delta outermost.
inline std::vector<PhasePoint> phase_scan(const PhaseScanConfig& cfg, const SweepOptions& opt = {}) {
  cfg.chain.validate();
  if (cfg.chain.n_sites > opt.limits.full_space_sites) {
    throw ResourceError("phase scan of " + std::to_string(cfg.chain.n_sites) +
                        " sites exceeds cap of " + std::to_string(opt.limits.full_space_sites));
  }
  cfg.grid.check_cap(opt.limits.grid_points);
  const int pj = cfg.pair_j < 0 ? cfg.chain.n_sites : cfg.pair_j;
  detail::check_pair(cfg.chain.n_sites, cfg.pair_i, pj);

  const auto deltas = cfg.grid.values_or("delta", {cfg.chain.delta});
  const Axis* fields = cfg.grid.find("B");
  const std::size_t nb = fields ? fields->values.size() : 1;
  std::vector<PhasePoint> out(deltas.size() * nb);
  parallel_for(out.size(), opt.threads, [&](std::size_t idx) {
    ChainSpec spec = cfg.chain;
    spec.delta = deltas[idx / nb];
    if (fields) spec = with_uniform_field(spec, fields->values[idx % nb]);
    out[idx] = evaluate_point(spec, cfg.pair_i, pj, opt.limits);
  });
  return out;
}

inline Table phase_table(const std::vector<PhasePoint>& pts) {
  Table t{{"delta", "B", "ground_sector", "sectors", "index_in_sector", "energy", "concurrence",
           "degeneracy"},
          {}};
  for (const auto& p : pts) {
    t.rows.push_back({p.delta, p.field, std::int64_t{p.ground_sector}, join_ints(p.sectors),
                      static_cast<std::int64_t>(p.index_in_sector), p.energy, p.concurrence,
                      static_cast<std::int64_t>(p.degeneracy)});
  }
  return t;
}

// ---------------------------------------------------------------------------
// concurrence curve

struct CurvePoint {
  double delta;
  double field;
  double concurrence;
};

/// C_ij of the ground mixture, one row per (delta, B), delta outermost.
inline std::vector<CurvePoint> concurrence_curve(const PhaseScanConfig& cfg, const SweepOptions& opt = {}) {
  const auto pts = phase_scan(cfg, opt);
  std::vector<CurvePoint> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back({p.delta, p.field, p.concurrence});
  return out;
}

inline Table curve_table(const std::vector<CurvePoint>& pts, int i, int j) {
  Table t{{"delta", "B", fmt::format("C_{}_{}", i, j)}, {}};
  for (const auto& p : pts) t.rows.push_back({p.delta, p.field, p.concurrence});
  return t;
}

// ---------------------------------------------------------------------------
// channel curve

struct ChannelPoint {
  int n_sites;
  double beta;
  double c_numeric;
  double c_closed;           // nan where the closed form does not apply (beta <= 1)
  double max_ratio_deviation;  // nan for beta = 0
  int parity;
  double parity_gap;
  bool near_degenerate;
};

inline void require_even(const std::vector<int>& ns) {
  std::vector<int> bad;
  for (int n : ns)
    if (n < 4 || n % 2 != 0) bad.push_back(n);
  if (!bad.empty()) {
    std::string list;
    for (std::size_t i = 0; i < bad.size(); ++i) list += (i ? ", " : "") + std::to_string(bad[i]);
    throw DomainError("channel chain lengths must be even and >= 4; offending: " + list);
  }
}

inline ChannelPoint channel_point(int n_sites, double beta, double coupling = 1.0) {
  const auto d = design(n_sites, coupling, 0.5 * beta * coupling);
  ChannelPoint p{n_sites, beta, d.boundary_concurrence, std::nan(""), std::nan(""),
                 d.parity, d.parity_gap, d.near_degenerate};
  if (beta > 1.0) p.c_closed = closed::c1n_channel(beta, n_sites / 2);
  if (beta != 0.0) p.max_ratio_deviation = max_ratio_deviation(d);
  return p;
}

inline std::vector<ChannelPoint> channel_curve(const std::vector<int>& n_values,
                                               const std::vector<double>& betas, double coupling = 1.0,
                                               const SweepOptions& opt = {}) {
  require_even(n_values);
  if (n_values.size() * betas.size() > opt.limits.grid_points) throw ResourceError("channel grid exceeds cap");
  std::vector<ChannelPoint> out(n_values.size() * betas.size());
  parallel_for(out.size(), opt.threads, [&](std::size_t idx) {
    out[idx] = channel_point(n_values[idx / betas.size()], betas[idx % betas.size()], coupling);
  });
  return out;
}

inline Table channel_table(const std::vector<ChannelPoint>& pts) {
  Table t{{"N", "beta", "C1N_numeric", "C1N_closed", "max_ratio_deviation", "parity", "parity_gap",
           "near_degenerate"},
          {}};
  for (const auto& p : pts) {
    t.rows.push_back({std::int64_t{p.n_sites}, p.beta, p.c_numeric, p.c_closed, p.max_ratio_deviation,
                      std::int64_t{p.parity}, p.parity_gap, p.near_degenerate});
  }
  return t;
}

// ---------------------------------------------------------------------------
// channel sizing

struct DesignReport {
  int n_sites = 0;
  double target = 0.0;
  double coupling = 1.0;
  double beta = 0.0;       // smallest beta reaching the target numerically
  double field = 0.0;      // beta * J / 2
  double achieved = 0.0;   // numeric C_1N at that beta
  std::optional<double> beta_closed_form;
  bool achieved_at_zero_field = false;
};

/// Smallest bulk field whose numeric boundary concurrence reaches `target`,
/// by bisection on beta (C_1N is nondecreasing in B), forward-verified.
inline DesignReport design_for_target(int n_sites, double target, double coupling = 1.0) {
  require_even({n_sites});
  if (!(target > 0.0 && target < 1.0)) throw DomainError("target concurrence must lie in (0, 1)");
  if (!(coupling > 0.0)) throw DomainError("coupling must be > 0");
  auto c_at = [&](double beta) { return design(n_sites, coupling, 0.5 * beta * coupling).boundary_concurrence; };

  DesignReport r;
  r.n_sites = n_sites;
  r.target = target;
  r.coupling = coupling;
  try {
    r.beta_closed_form = closed::beta_for_target(target, n_sites / 2);
  } catch (const NumericError&) {
  }

  const double c0 = c_at(0.0);
  if (c0 >= target) {
    r.achieved = c0;
    r.achieved_at_zero_field = true;
    return r;
  }
  double lo = 0.0;
  double hi = 1.0;
  while (c_at(hi) < target) {
    lo = hi;
    hi *= 2.0;
    if (hi > closed::kBetaCap) {
      throw NumericError(fmt::format("target {} unreachable for N={} below beta = {:g}", target,
                                     n_sites, closed::kBetaCap));
    }
  }
  while (hi - lo > 1e-10 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (c_at(mid) >= target) hi = mid;
    else lo = mid;
  }
  r.beta = hi;
  r.field = 0.5 * hi * coupling;
  r.achieved = c_at(hi);
  if (r.achieved < target) throw NumericError("forward verification of the channel design failed");
  return r;
}

inline Table design_table(const DesignReport& r) {
  Table t{{"N", "target", "J", "beta", "B", "C1N_achieved", "beta_closed_form", "achieved_at_zero_field"},
          {}};
  t.rows.push_back({std::int64_t{r.n_sites}, r.target, r.coupling, r.beta, r.field, r.achieved,
                    r.beta_closed_form.value_or(std::nan("")), r.achieved_at_zero_field});
  return t;
}

// ---------------------------------------------------------------------------
// four-site regime table

struct Table1Entry {
  double delta;
  std::size_t regime;
  FieldRegime numeric;
  std::optional<closed::RegimeRow> published;
};

inline std::vector<Table1Entry> table1(const std::vector<double>& deltas = {0.0, 0.5, 1.0, 2.0},
                                       double crossing_tol = 1e-9) {
  std::vector<Table1Entry> out;
  for (double delta : deltas) {
    const auto spec = ChainSpec::uniform(4, 1.0, 0.0, delta);
    RegimeScanOptions opt;
    opt.b_max = 3.0 + 2.0 * std::abs(delta);
    opt.crossing_tol = crossing_tol;
    const auto regimes = find_field_regimes(spec, opt);
    const auto published = closed::tabulated_c14_regimes(delta);
    for (std::size_t r = 0; r < regimes.size(); ++r) {
      std::optional<closed::RegimeRow> row;
      if (published && r < published->size()) row = (*published)[r];
      out.push_back({delta, r, regimes[r], row});
    }
  }
  return out;
}

inline Table table1_table(const std::vector<Table1Entry>& entries) {
  Table t{{"delta", "regime", "ground", "n_up", "B_low", "B_high", "B_low_published", "B_high_published",
           "E_at_B_low", "E_published", "C14_max", "C14_published", "C14_diff"},
          {}};
  const double nan = std::nan("");
  for (const auto& e : entries) {
    const auto& p = e.published;
    t.rows.push_back({e.delta, static_cast<std::int64_t>(e.regime), closed::four_site_label(e.numeric.n_up),
                      std::int64_t{e.numeric.n_up}, e.numeric.b_low, e.numeric.b_high,
                      p ? p->b_low : nan, p ? p->b_high : nan, e.numeric.energy_at_low,
                      p && p->energy ? *p->energy : nan, e.numeric.c_max, p ? p->c14_max : nan,
                      p ? e.numeric.c_max - p->c14_max : nan});
  }
  return t;
}

/// Fixed-width text rendering for terminals.
inline void write_table1_text(const std::vector<Table1Entry>& entries, std::ostream& os) {
  os << fmt::format("{:>5} {:>6} {:>22} {:>22} {:>10} {:>10} {:>9} {:>9} {:>10}\n", "Delta", "GS",
                    "B interval (numeric)", "B interval (published)", "E(B_low)", "E(pub)", "C14max",
                    "C14(pub)", "dC14");
  auto iv = [](double a, double b) { return fmt::format("[{:.4f}, {:.4f})", a, b); };
  for (const auto& e : entries) {
    const auto& p = e.published;
    os << fmt::format("{:>5} {:>6} {:>22} {:>22} {:>10.4f} {:>10} {:>9.4f} {:>9} {:>10}\n", e.delta,
                      closed::four_site_label(e.numeric.n_up), iv(e.numeric.b_low, e.numeric.b_high),
                      p ? iv(p->b_low, p->b_high) : "-", e.numeric.energy_at_low,
                      p && p->energy ? fmt::format("{:.4f}", *p->energy) : "-", e.numeric.c_max,
                      p ? fmt::format("{:.4f}", p->c14_max) : "-",
                      p ? fmt::format("{:+.1e}", e.numeric.c_max - p->c14_max) : "-");
  }
}

}  // namespace xxz
