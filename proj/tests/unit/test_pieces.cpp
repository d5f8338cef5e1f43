// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "brute_force.hpp"
#include "golden.hpp"
#include "htopos/error.hpp"
#include "htopos/pieces.hpp"

using namespace htopos;

TEST(Pieces, ComponentsMatchOracle) {
  Topos t(builtin_site("delta1"));
  Presheaf i = t.yoneda(1);
  EXPECT_EQ(pi0(t.omega().object()).components, golden()["delta1"]["omega_components"].get<std::size_t>());
  EXPECT_EQ(pi0(product(i, i).object).components,
            golden()["delta1"]["interval_square_components"].get<std::size_t>());
  Topos g(builtin_site("parallel_pair"));
  Presheaf e = g.yoneda(1);
  EXPECT_EQ(pi0(product(e, e).object).components,
            golden()["parallel_pair"]["interval_square_components"].get<std::size_t>());
}

TEST(Pieces, InitialHasNoComponents) {
  Topos t(builtin_site("delta1"));
  EXPECT_EQ(pi0(t.initial()).components, 0u);
  EXPECT_FALSE(is_connected(t.initial()));
  EXPECT_TRUE(is_connected(t.terminal()));
}

TEST(Pieces, RandomComponentsMatchSearch) {
  for (const auto& n : builtin_names()) {
    SiteRef s = builtin_site(n);
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 30; ++trial) {
      Presheaf x = oracle::random_presheaf(s, rng, 3);
      PiecesResult r = pi0(x);
      EXPECT_EQ(r.components, oracle::components(x)) << n;
      EXPECT_TRUE(r.p.validate().empty());
    }
  }
}

TEST(Pieces, UnitIsUniversalForDiscreteTargets) {
  Topos t(builtin_site("delta1"));
  Presheaf x = coproduct(t.yoneda(1), t.terminal()).object;
  PiecesResult r = pi0(x);
  for (std::size_t s = 1; s <= 3; ++s) {
    std::uint64_t fns = 1;
    for (std::size_t k = 0; k < r.components; ++k) fns *= s;
    EXPECT_EQ(t.hom_count(x, t.discrete(s)), fns);
  }
}

TEST(Pieces, PointsAndTheta) {
  Topos t(builtin_site("delta1"));
  Presheaf i = t.yoneda(1);
  PointsResult p = points(t, i);
  EXPECT_EQ(p.points.size(), 2u);
  EXPECT_TRUE(p.gamma.validate().empty());
  EXPECT_EQ(theta(t, i), (std::vector<std::size_t>{0, 0}));
  EXPECT_EQ(theta(t, t.two()), (std::vector<std::size_t>{0, 1}));
}

TEST(Pieces, CodiscreteAdjunction) {
  Topos t(builtin_site("delta1"));
  Presheaf i = t.yoneda(1);
  for (std::size_t s = 1; s <= 3; ++s) {
    Presheaf l = codiscrete(t, s);
    EXPECT_TRUE(l.validate().empty());
    std::uint64_t fns = 1;
    for (int k = 0; k < 2; ++k) fns *= s;
    EXPECT_EQ(t.hom_count(i, l), fns);
  }
  EXPECT_THROW(codiscrete(Topos(builtin_site("parallel_pair")), 2), PreconditionError);
}

TEST(Pieces, AdjunctionCertificates) {
  Topos t(builtin_site("delta1"));
  Presheaf i = t.yoneda(1);
  std::vector<Presheaf> fam{t.initial(), t.terminal(), t.two(), i, t.omega().object()};
  std::vector<std::string> names{"0", "1", "2", "I", "Omega"};
  EXPECT_TRUE(certify_pieces_adjunction(t, fam, names).verified());
  EXPECT_TRUE(certify_points_adjunction(t, fam, names).verified());
}

TEST(Pieces, StreamedAgreesWithDirect) {
  Topos t(builtin_site("delta1"));
  Presheaf i = t.yoneda(1), om = t.omega().object();
  for (const auto& [x, y] : std::vector<std::pair<Presheaf, Presheaf>>{{i, om}, {i, i}, {t.two(), i}, {om, t.two()}}) {
    auto a = exponential_pieces(t, x, y);
    ExponentialPieces b = exponential_pieces_direct(t, x, y);
    EXPECT_EQ(a->count, b.count);
    EXPECT_EQ(a->classes, b.classes);
    EXPECT_EQ(a->label, b.label);
    EXPECT_EQ(a->tables, b.tables);
  }
}

TEST(Pieces, NonNsSiteUsesFullExponential) {
  Topos t(builtin_site("parallel_pair"));
  Presheaf e = t.yoneda(1);
  auto a = exponential_pieces(t, e, e);
  EXPECT_FALSE(a->streamed);
  EXPECT_EQ(a->count, t.hom_count(e, e));
}
