#pragma once

// Chain specifications, the spin/bit convention, and fixed-magnetization
// sector bases.
//
// Basis labels are unsigned integers. Site s (1-based) of an N-site chain is
// bit (N - s), so site 1 is the most significant bit. A set bit means the
// spin points up (sigma^z = +1), a cleared bit means down (sigma^z = -1).

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "xxz/errors.hpp"

namespace xxz {

using Mask = std::uint64_t;

inline constexpr int kMaxSites = 62;

/// Size caps shared by every module that materializes dense objects.
struct Limits {
  int full_space_sites = 14;          // build_full and dense density matrices
  std::size_t sector_dimension = 3432;  // C(14, 7)
  std::size_t grid_points = 1'000'000;
};

/// Bit of site `site` (1-based) in an `n_sites` chain.
constexpr Mask site_bit(int n_sites, int site) { return Mask{1} << (n_sites - site); }

/// sigma^z eigenvalue (+1 / -1) of `site` in basis state `mask`.
constexpr int spin_at(Mask mask, int n_sites, int site) {
  return (mask & site_bit(n_sites, site)) ? 1 : -1;
}

struct ChainSpec {
  int n_sites = 2;
  std::vector<double> couplings;  // J_i, bond (i, i+1), size n_sites - 1
  std::vector<double> fields;     // B_i, size n_sites
  double delta = 0.0;
  double temperature = 0.0;

  /// Throws DomainError if the arrays do not match n_sites or values are non-finite.
  void validate() const {
    if (n_sites < 2 || n_sites > kMaxSites) {
      throw DomainError("n_sites must lie in [2, " + std::to_string(kMaxSites) +
                        "], got " + std::to_string(n_sites));
    }
    if (couplings.size() != static_cast<std::size_t>(n_sites - 1)) {
      throw DomainError("couplings must have n_sites-1 = " + std::to_string(n_sites - 1) +
                        " entries, got " + std::to_string(couplings.size()));
    }
    if (fields.size() != static_cast<std::size_t>(n_sites)) {
      throw DomainError("fields must have n_sites = " + std::to_string(n_sites) +
                        " entries, got " + std::to_string(fields.size()));
    }
    auto finite = [](double v) { return std::isfinite(v); };
    if (!std::all_of(couplings.begin(), couplings.end(), finite) ||
        !std::all_of(fields.begin(), fields.end(), finite) || !std::isfinite(delta) ||
        !std::isfinite(temperature)) {
      throw DomainError("chain parameters must be finite");
    }
    if (temperature < 0.0) throw DomainError("temperature must be nonnegative");
  }

  static ChainSpec uniform(int n_sites, double coupling, double field, double delta) {
    ChainSpec spec;
    spec.n_sites = n_sites;
    spec.couplings.assign(static_cast<std::size_t>(std::max(n_sites - 1, 0)), coupling);
    spec.fields.assign(static_cast<std::size_t>(std::max(n_sites, 0)), field);
    spec.delta = delta;
    spec.validate();
    return spec;
  }

  friend bool operator==(const ChainSpec&, const ChainSpec&) = default;
};

inline void to_json(nlohmann::json& j, const ChainSpec& s) {
  j = nlohmann::json{{"n_sites", s.n_sites},
                     {"couplings", s.couplings},
                     {"fields", s.fields},
                     {"delta", s.delta},
                     {"temperature", s.temperature}};
}

inline void from_json(const nlohmann::json& j, ChainSpec& s) {
  j.at("n_sites").get_to(s.n_sites);
  j.at("couplings").get_to(s.couplings);
  j.at("fields").get_to(s.fields);
  j.at("delta").get_to(s.delta);
  s.temperature = j.value("temperature", 0.0);
  s.validate();
}

/// Exact rational with positive denominator in lowest terms.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational make(std::int64_t num, std::int64_t den) {
    if (den == 0) throw DomainError("zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num, den);
    return g == 0 ? Rational{0, 1} : Rational{num / g, den / g};
  }

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  std::string str() const {
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
  }

  friend bool operator==(const Rational&, const Rational&) = default;
};

/// Total spin label S_T = (N - 2k) / 2 of the sector with k up spins.
inline Rational total_spin(int n_sites, int n_up) {
  if (n_up < 0 || n_up > n_sites) {
    throw DomainError("n_up must lie in [0, n_sites]");
  }
  return Rational::make(n_sites - 2 * n_up, 2);
}

/// Binomial coefficient C(n, k); exact for the sizes used here.
inline std::size_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::size_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
  return r;
}

/// All basis states with a fixed number of up spins, ascending.
class SectorBasis {
 public:
  SectorBasis(int n_sites, int n_up, std::vector<Mask> states)
      : n_sites_(n_sites), n_up_(n_up), states_(std::move(states)) {}

  int n_sites() const { return n_sites_; }
  int n_up() const { return n_up_; }
  std::size_t size() const { return states_.size(); }
  const std::vector<Mask>& states() const { return states_; }
  Mask state(std::size_t index) const { return states_[index]; }

  /// Sector index of `mask`, or nullopt if `mask` is not in this sector.
  std::optional<std::size_t> index_of(Mask mask) const {
    auto it = std::lower_bound(states_.begin(), states_.end(), mask);
    if (it == states_.end() || *it != mask) return std::nullopt;
    return static_cast<std::size_t>(it - states_.begin());
  }

  Rational total_spin() const { return xxz::total_spin(n_sites_, n_up_); }

 private:
  int n_sites_;
  int n_up_;
  std::vector<Mask> states_;
};

/// Next larger integer with the same popcount (Gosper's hack).
inline Mask next_same_popcount(Mask v) {
  const Mask t = v | (v - 1);
  return (t + 1) | (((~t & -~t) - 1) >> (std::countr_zero(v) + 1));
}

inline SectorBasis build_sector_basis(int n_sites, int n_up, const Limits& limits = {}) {
  if (n_sites < 1 || n_sites > kMaxSites) throw DomainError("n_sites out of range");
  if (n_up < 0 || n_up > n_sites) {
    throw DomainError("n_up = " + std::to_string(n_up) + " outside [0, " +
                      std::to_string(n_sites) + "]");
  }
  const std::size_t dim = binomial(n_sites, n_up);
  if (dim > limits.sector_dimension) {
    throw ResourceError("sector dimension C(" + std::to_string(n_sites) + "," +
                        std::to_string(n_up) + ") = " + std::to_string(dim) +
                        " exceeds cap " + std::to_string(limits.sector_dimension));
  }
  std::vector<Mask> states;
  states.reserve(dim);
  if (n_up == 0) {
    states.push_back(0);
  } else {
    Mask v = (Mask{1} << n_up) - 1;
    for (std::size_t i = 0; i < dim; ++i) {
      states.push_back(v);
      if (i + 1 < dim) v = next_same_popcount(v);
    }
  }
  return SectorBasis(n_sites, n_up, std::move(states));
}

}  // namespace xxz
