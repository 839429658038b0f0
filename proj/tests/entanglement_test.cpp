#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "xxz/closed_forms.hpp"
#include "xxz/entanglement.hpp"

namespace xxz {
namespace {

PureState basis_state(int n, Mask label) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(Eigen::Index{1} << n);
  v(static_cast<Eigen::Index>(label)) = 1.0;
  return PureState::full(n, v);
}

TEST(ReducePair, ProductState) {
  const auto r = reduce_pair(basis_state(3, 0b000), 1, 3);
  Eigen::Matrix4d expected = Eigen::Matrix4d::Zero();
  expected(0, 0) = 1.0;
  EXPECT_EQ(r.rho, expected);
  EXPECT_EQ(concurrence(r).value, 0.0);
}

TEST(ReducePair, AntisymmetricOneUpState) {
  // (-|001> + |100>)/sqrt2; tracing site 2 by hand leaves
  // rho_{01,01} = rho_{10,10} = 1/2 and rho_{01,10} = -1/2 on sites (1,3).
  Eigen::VectorXd v = Eigen::VectorXd::Zero(8);
  v(0b001) = -1.0 / std::sqrt(2.0);
  v(0b100) = 1.0 / std::sqrt(2.0);
  const auto r = reduce_pair(PureState::full(3, v), 1, 3);
  Eigen::Matrix4d expected = Eigen::Matrix4d::Zero();
  expected(1, 1) = 0.5;
  expected(2, 2) = 0.5;
  expected(1, 2) = -0.5;
  expected(2, 1) = -0.5;
  EXPECT_LT((r.rho - expected).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(concurrence(r).value, 1.0, 1e-12);
}

TEST(ReducePair, ThreeSiteGroundAtZeroAnisotropy) {
  const auto d = decompose(build_full(ChainSpec::uniform(3, 1.0, 0.5, 0.0)));
  const auto r = reduce_pair(PureState::full(3, d.vector(0)), 1, 3);
  EXPECT_NEAR(concurrence(r).value, 0.5, 1e-12);
}

TEST(ReducePair, RejectsBadSites) {
  const auto s = basis_state(3, 0);
  EXPECT_THROW(reduce_pair(s, 0, 2), DomainError);
  EXPECT_THROW(reduce_pair(s, 1, 4), DomainError);
  EXPECT_THROW(reduce_pair(s, 2, 2), DomainError);
}

TEST(ReducePair, MatchesPauliOracleForFullAndSectorStates) {
  std::mt19937_64 rng(21);
  for (int n = 2; n <= 5; ++n) {
    const auto psi = oracle::random_unit(rng, Eigen::Index{1} << n);
    const Eigen::MatrixXd full_rho = psi * psi.transpose();
    const auto state = PureState::full(n, psi);

    auto basis = std::make_shared<const SectorBasis>(build_sector_basis(n, n / 2));
    const auto sector_amps = oracle::random_unit(rng, static_cast<Eigen::Index>(basis->size()));
    Eigen::VectorXd embedded = Eigen::VectorXd::Zero(Eigen::Index{1} << n);
    for (std::size_t a = 0; a < basis->size(); ++a) embedded(static_cast<Eigen::Index>(basis->state(a))) = sector_amps(static_cast<Eigen::Index>(a));
    const auto sector_state = PureState::in_sector(basis, sector_amps);
    const Eigen::MatrixXd sector_rho = embedded * embedded.transpose();

    for (int i = 1; i <= n; ++i) {
      for (int j = 1; j <= n; ++j) {
        if (i == j) continue;
        EXPECT_LT((reduce_pair(state, i, j).rho - oracle::pauli_reduced(full_rho, n, i, j)).cwiseAbs().maxCoeff(), 1e-13);
        EXPECT_LT((reduce_pair(sector_state, i, j).rho - oracle::pauli_reduced(sector_rho, n, i, j)).cwiseAbs().maxCoeff(), 1e-13);
        DensityMatrix dm{n, full_rho};
        EXPECT_LT((reduce_pair_mixed(dm, i, j).rho - reduce_pair(state, i, j).rho).cwiseAbs().maxCoeff(), 1e-13);
      }
    }
  }
}

TEST(ReducePairMixed, MaximallyMixed) {
  DensityMatrix dm{2, Eigen::MatrixXd::Identity(4, 4) / 4.0};
  const auto r = reduce_pair_mixed(dm, 1, 2);
  EXPECT_LT((r.rho - Eigen::Matrix4d::Identity() / 4.0).cwiseAbs().maxCoeff(), 1e-16);
  EXPECT_EQ(concurrence(r).value, 0.0);
}

TEST(ReducePairMixed, DegenerateThreeSiteGroundMixtureIsSeparable) {
  const auto d = decompose(build_full(ChainSpec::uniform(3, 1.0, 0.0, 1.0)));
  ASSERT_EQ(ground_space(d).size(), 2u);
  const auto r = reduce_pair_mixed(ground_state_density(d), 1, 3);
  EXPECT_NEAR(concurrence(r).value, 0.0, 1e-9);
}

TEST(ThermalState, HighTemperatureIsMaximallyMixed) {
  auto spec = ChainSpec::uniform(3, 1.0, 0.3, 0.5);
  spec.temperature = 1e9;
  const auto rho = thermal_state(spec, decompose(build_full(spec)));
  EXPECT_LT((rho.rho - Eigen::MatrixXd::Identity(8, 8) / 8.0).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(ThermalState, LowTemperatureConcentratesOnGround) {
  auto spec = ChainSpec::uniform(3, 1.0, 0.5, 0.0);
  spec.temperature = 1e-6;
  const auto d = decompose(build_full(spec));
  const auto rho = thermal_state(spec, d);
  const double w0 = d.vector(0).dot(rho.rho * d.vector(0));
  EXPECT_GE(w0, 1.0 - 1e-9);
}

TEST(ThermalState, ZeroTemperatureLimitMatchesGroundPath) {
  // nondegenerate: B=0.5 Delta=0 three sites, and a random four-site chain
  std::vector<ChainSpec> specs{ChainSpec::uniform(3, 1.0, 0.5, 0.0)};
  std::mt19937_64 rng(4);
  specs.push_back(oracle::random_spec(rng, 4));
  for (auto spec : specs) {
    const auto d = decompose(build_full(spec));
    ASSERT_EQ(ground_space(d).size(), 1u);
    spec.temperature = 1e-8;
    const auto thermal = reduce_pair_mixed(thermal_state(spec, d), 1, spec.n_sites);
    const auto ground = reduce_pair(PureState::full(spec.n_sites, d.vector(0)), 1, spec.n_sites);
    EXPECT_LT((thermal.rho - ground.rho).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_NEAR(concurrence(thermal).value, concurrence(ground).value, 1e-6);
    EXPECT_LT((ground_state_density(d).rho - thermal_state(spec, d).rho).cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(ThermalState, ThreeSiteConcurrenceDecaysWithTemperature) {
  auto spec = ChainSpec::uniform(3, 1.0, 0.5, 0.0);
  const auto d = decompose(build_full(spec));
  double prev = 0.5 + 1e-12;
  for (double t = 0.01; t <= 2.0; t += 0.01) {
    spec.temperature = t;
    const double c = concurrence(reduce_pair_mixed(thermal_state(spec, d), 1, 3)).value;
    EXPECT_LE(c, prev + 1e-12) << "T=" << t;
    prev = c;
  }
  spec.temperature = 0.01;
  EXPECT_NEAR(concurrence(reduce_pair_mixed(thermal_state(spec, d), 1, 3)).value, 0.5, 1e-6);
}

TEST(ThermalState, RejectsNonPositiveTemperature) {
  const auto spec = ChainSpec::uniform(3, 1.0, 0.5, 0.0);
  EXPECT_THROW(thermal_state(spec, decompose(build_full(spec))), DomainError);
}

TEST(Concurrence, BellAndProduct) {
  TwoQubitDensityMatrix bell;
  Eigen::Vector4d psi(0, 1, 1, 0);
  psi.normalize();
  bell.rho = psi * psi.transpose();
  EXPECT_NEAR(concurrence(bell).value, 1.0, 1e-12);

  TwoQubitDensityMatrix product;
  product.rho(0, 0) = 1.0;
  EXPECT_EQ(concurrence(product).value, 0.0);
}

TEST(Concurrence, ThreeSiteGroundAtUnitAnisotropy) {
  const auto d = decompose(build_full(ChainSpec::uniform(3, 1.0, 0.5, 1.0)));
  ASSERT_EQ(ground_space(d).size(), 1u);
  EXPECT_NEAR(concurrence(reduce_pair(PureState::full(3, d.vector(0)), 1, 3)).value, 1.0 / 3.0, 1e-12);
}

TEST(Concurrence, RejectsInvalidStates) {
  TwoQubitDensityMatrix t;
  t.rho = Eigen::Matrix4d::Identity() / 2.0;
  EXPECT_THROW(concurrence(t), DomainError);
  t.rho = Eigen::Matrix4d::Zero();
  t.rho(0, 0) = 1.5;
  t.rho(1, 1) = -0.5;
  EXPECT_THROW(concurrence(t), DomainError);
}

TEST(Concurrence, PureTwoQubitFormula) {
  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 500; ++rep) {
    const Eigen::Vector4d psi = oracle::random_unit(rng, 4);
    TwoQubitDensityMatrix t;
    t.rho = psi * psi.transpose();
    EXPECT_NEAR(concurrence(t).value, oracle::pure_two_qubit_concurrence(psi), 1e-7);
  }
}

TEST(Concurrence, SpectralPathMatchesNonsymmetricProduct) {
  std::mt19937_64 rng(99);
  for (int rep = 0; rep < 2000; ++rep) {
    TwoQubitDensityMatrix t;
    t.rho = oracle::random_density(rng);
    const auto res = concurrence(t);
    const auto ref = oracle::lambdas_nonsymmetric(t.rho);
    for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(res.lambdas[k], ref[k], 1e-8);
    EXPECT_GE(res.value, 0.0);
    EXPECT_LE(res.value, 1.0);
  }
}

TEST(Concurrence, FourSiteTwoUpStatesAgreeWithOracleAndSwap) {
  std::mt19937_64 rng(31);
  auto basis = std::make_shared<const SectorBasis>(build_sector_basis(4, 2));
  for (int rep = 0; rep < 200; ++rep) {
    const auto state = PureState::in_sector(basis, oracle::random_unit(rng, 6));
    for (int i = 1; i <= 4; ++i) {
      for (int j = i + 1; j <= 4; ++j) {
        const auto r = reduce_pair(state, i, j);
        const double c = concurrence(r).value;
        EXPECT_NEAR(c, oracle::concurrence_nonsymmetric(r.rho), 1e-10);
        EXPECT_NEAR(c, concurrence(reduce_pair(state, j, i)).value, 1e-12);
        EXPECT_GE(c, 0.0);
        EXPECT_LE(c, 1.0);
      }
    }
  }
}

TEST(GroundManifold, SectorRouteMatchesFullSpaceRoute) {
  std::mt19937_64 rng(17);
  std::vector<ChainSpec> specs{ChainSpec::uniform(3, 1.0, 0.0, 1.0), ChainSpec::uniform(4, 1.0, 0.0, 0.0),
                               ChainSpec::uniform(3, 1.0, 0.5, 0.0)};
  for (int rep = 0; rep < 6; ++rep) specs.push_back(oracle::random_spec(rng, 3 + rep % 4));
  for (const auto& spec : specs) {
    const auto gm = ground_manifold(spec);
    const auto d = decompose(build_full(spec));
    EXPECT_EQ(gm.degeneracy(), ground_space(d).size());
    EXPECT_NEAR(gm.energy, d.eigenvalues(0), 1e-12);
    const auto dense = ground_state_density(d);
    for (int i = 1; i < spec.n_sites; ++i) {
      const auto a = reduce_pair(gm.ensemble, i, spec.n_sites);
      const auto b = reduce_pair_mixed(dense, i, spec.n_sites);
      EXPECT_LT((a.rho - b.rho).cwiseAbs().maxCoeff(), 1e-10);
    }
  }
}

TEST(GroundManifold, ClosedFormC13OverAnisotropy) {
  for (double delta = 0.0; delta <= 3.0 + 1e-9; delta += 0.25) {
    const double bc = closed::critical_field_3(delta, 1.0).b_critical;
    const auto gm = ground_manifold(ChainSpec::uniform(3, 1.0, 0.5 * bc, delta));
    EXPECT_NEAR(concurrence(reduce_pair(gm.ensemble, 1, 3)).value, closed::c13_ground(delta, 1.0), 1e-9);
  }
}

}  // namespace
}  // namespace xxz
