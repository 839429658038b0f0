#include <set>

#include <gtest/gtest.h>

#include "xxz/chain_model.hpp"

namespace xxz {
namespace {

TEST(SectorBasis, AllDownSector) {
  const auto b = build_sector_basis(3, 0);
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b.state(0), 0b000u);
}

TEST(SectorBasis, OneUpThreeSites) {
  const auto b = build_sector_basis(3, 1);
  EXPECT_EQ(b.states(), (std::vector<Mask>{0b001, 0b010, 0b100}));
  EXPECT_EQ(b.size(), binomial(3, 1));
}

TEST(SectorBasis, TwoUpFourSitesHasSixStates) {
  const auto b = build_sector_basis(4, 2);
  EXPECT_EQ(b.states(), (std::vector<Mask>{0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100}));
}

TEST(SectorBasis, RejectsOutOfRange) {
  EXPECT_THROW(build_sector_basis(3, 4), DomainError);
  EXPECT_THROW(build_sector_basis(3, -1), DomainError);
}

TEST(SectorBasis, DimensionCap) {
  Limits tight;
  tight.sector_dimension = 10;
  EXPECT_THROW(build_sector_basis(6, 3, tight), ResourceError);
  EXPECT_NO_THROW(build_sector_basis(6, 1, tight));
}

TEST(SectorBasis, IndexOfInvertsStates) {
  const auto b = build_sector_basis(8, 3);
  for (std::size_t i = 0; i < b.size(); ++i) EXPECT_EQ(b.index_of(b.state(i)), i);
  EXPECT_FALSE(b.index_of(0b1111).has_value());
}

TEST(SectorBasis, UnionOverSectorsIsFullBasis) {
  for (int n = 1; n <= 10; ++n) {
    std::set<Mask> seen;
    std::size_t total = 0;
    for (int k = 0; k <= n; ++k) {
      const auto b = build_sector_basis(n, k);
      EXPECT_TRUE(std::is_sorted(b.states().begin(), b.states().end()));
      EXPECT_EQ(b.size(), binomial(n, k));
      for (Mask m : b.states()) {
        EXPECT_EQ(std::popcount(m), k);
        seen.insert(m);
      }
      total += b.size();
    }
    EXPECT_EQ(total, std::size_t{1} << n);
    EXPECT_EQ(seen.size(), std::size_t{1} << n);
    EXPECT_EQ(*seen.rbegin(), (Mask{1} << n) - 1);
  }
}

TEST(TotalSpin, SectorLabels) {
  EXPECT_EQ(total_spin(4, 1), Rational::make(1, 1));
  EXPECT_EQ(total_spin(4, 2), Rational::make(0, 1));
  EXPECT_EQ(total_spin(2, 1), Rational::make(0, 1));
  EXPECT_EQ(total_spin(3, 1), Rational::make(1, 2));
  EXPECT_EQ(total_spin(4, 0).str(), "2");
  EXPECT_EQ(total_spin(5, 1).str(), "3/2");
  EXPECT_EQ(total_spin(4, 4), Rational::make(-2, 1));
  EXPECT_THROW(total_spin(4, 5), DomainError);
}

TEST(SpinConvention, SiteOneIsMostSignificant) {
  EXPECT_EQ(site_bit(3, 1), 0b100u);
  EXPECT_EQ(site_bit(3, 3), 0b001u);
  EXPECT_EQ(spin_at(0b100, 3, 1), 1);
  EXPECT_EQ(spin_at(0b100, 3, 2), -1);
}

TEST(ChainSpec, JsonRoundTripUsesExactKeys) {
  ChainSpec s;
  s.n_sites = 3;
  s.couplings = {1.0, 0.5};
  s.fields = {0.0, 0.25, 0.0};
  s.delta = 0.75;
  s.temperature = 0.1;
  const nlohmann::json j = s;
  for (const char* key : {"n_sites", "couplings", "fields", "delta", "temperature"}) EXPECT_TRUE(j.contains(key));
  EXPECT_EQ(j.size(), 5u);
  EXPECT_EQ(j.get<ChainSpec>(), s);
}

TEST(ChainSpec, ValidationRejectsMismatchedArrays) {
  ChainSpec s = ChainSpec::uniform(4, 1.0, 0.0, 0.0);
  s.couplings.pop_back();
  EXPECT_THROW(s.validate(), DomainError);
  s = ChainSpec::uniform(4, 1.0, 0.0, 0.0);
  s.fields.push_back(0.0);
  EXPECT_THROW(s.validate(), DomainError);
  s = ChainSpec::uniform(4, 1.0, 0.0, 0.0);
  s.temperature = -1.0;
  EXPECT_THROW(s.validate(), DomainError);
  EXPECT_THROW(ChainSpec::uniform(1, 1.0, 0.0, 0.0), DomainError);

  const auto bad = nlohmann::json::parse(R"({"n_sites": 3, "couplings": [1], "fields": [0,0,0], "delta": 0})");
  EXPECT_THROW(bad.get<ChainSpec>(), DomainError);
}

}  // namespace
}  // namespace xxz
