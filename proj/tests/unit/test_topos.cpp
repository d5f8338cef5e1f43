// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "brute_force.hpp"
#include "golden.hpp"
#include "htopos/ccc.hpp"
#include "htopos/error.hpp"
#include "htopos/topos.hpp"

using namespace htopos;

namespace {

struct Delta1 {
  Topos t{builtin_site("delta1")};
  Presheaf one = t.terminal();
  Presheaf two = t.two();
  Presheaf i = t.yoneda(1);
  Presheaf omega = t.omega().object();
};

std::vector<std::size_t> sizes_of(const nlohmann::json& j) { return j.get<std::vector<std::size_t>>(); }

}  // namespace

TEST(Omega, StageSizesMatchOracle) {
  Delta1 d;
  EXPECT_EQ(d.omega.sizes(), sizes_of(golden()["delta1"]["omega_sizes"]));
  for (std::string site : {"one", "parallel_pair"}) {
    Topos t(builtin_site(site));
    EXPECT_EQ(t.omega().object().sizes(), sizes_of(golden()[site]["omega_sizes"])) << site;
  }
  for (Index c = 0; c < 2; ++c) EXPECT_EQ(d.omega.size(c), oracle::sieve_count(d.t.category(), c));
}

TEST(Omega, GlobalPointsMatchOracle) {
  Delta1 d;
  EXPECT_EQ(d.t.points(d.omega).size(), golden()["delta1"]["omega_points"].get<std::size_t>());
}

TEST(Omega, SievesOrderedBySize) {
  Delta1 d;
  const auto want = golden()["delta1"]["omega_stage1_sieve_sizes"].get<std::vector<int>>();
  for (Elem s = 0; s < d.omega.size(1); ++s) EXPECT_EQ(std::popcount(d.t.omega().mask(1, s)), want[s]);
}

TEST(Omega, HeytingLaws) {
  Delta1 d;
  const Omega& om = d.t.omega();
  for (Index c = 0; c < 2; ++c)
    for (Elem a = 0; a < d.omega.size(c); ++a) {
      EXPECT_EQ(om.meet(c, a, om.top(c)), a);
      EXPECT_EQ(om.join(c, a, om.bottom(c)), a);
      EXPECT_EQ(om.neg(c, a), om.implies(c, a, om.bottom(c)));
      for (Elem b = 0; b < d.omega.size(c); ++b) {
        EXPECT_EQ(om.meet(c, a, b), om.meet(c, b, a));
        for (Elem x = 0; x < d.omega.size(c); ++x)
          EXPECT_EQ(om.leq(c, om.meet(c, x, a), b), om.leq(c, x, om.implies(c, a, b)));
      }
    }
}

TEST(Omega, CharacteristicRoundTrip) {
  Delta1 d;
  const Omega& om = d.t.omega();
  for (const PresheafMap& chi : d.t.hom(d.i, d.omega)) {
    Subobject s = om.classified(chi);
    EXPECT_TRUE(s.validate().empty());
    EXPECT_EQ(om.characteristic(s), chi);
  }
  EXPECT_EQ(d.t.hom_count(d.i, d.omega), golden()["delta1"]["hom_I_Omega"].get<std::uint64_t>());
}

TEST(Omega, MapsMatchOperations) {
  Delta1 d;
  const Omega& om = d.t.omega();
  const Product& sq = om.square();
  for (Index c = 0; c < 2; ++c)
    for (Elem a = 0; a < d.omega.size(c); ++a)
      for (Elem b = 0; b < d.omega.size(c); ++b) {
        EXPECT_EQ(om.meet_map()(c, sq.pair(c, a, b)), om.meet(c, a, b));
        EXPECT_EQ(om.implies_map()(c, sq.pair(c, a, b)), om.implies(c, a, b));
      }
}

TEST(Exponential, StageSizesMatchOracle) {
  Delta1 d;
  auto e = d.t.exponential(d.i, d.i);
  EXPECT_EQ(e->object().sizes(), sizes_of(golden()["delta1"]["exp_I_I_sizes"]));
  EXPECT_TRUE(e->object().validate().empty());
  EXPECT_TRUE(e->eval().validate().empty());
}

TEST(Exponential, TransposeRoundTrip) {
  Delta1 d;
  Product ix = product(d.i, d.two);
  for (const PresheafMap& f : d.t.hom(ix.object, d.i)) {
    PresheafMap g = transpose(d.t, d.i, d.two, f);
    EXPECT_EQ(untranspose(d.t, g, d.two, d.i), f);
  }
  EXPECT_EQ(d.t.hom_count(ix.object, d.i), d.t.hom_count(d.i, d.t.exponential(d.two, d.i)->object()));
}

TEST(Exponential, NameUnnameAndPoints) {
  Delta1 d;
  auto maps = d.t.hom(d.i, d.omega);
  auto pts = d.t.points(d.t.exponential(d.i, d.omega)->object());
  EXPECT_EQ(maps.size(), pts.size());
  for (const auto& f : maps) EXPECT_EQ(unname(d.t, name(d.t, f), d.i, d.omega), f);
}

TEST(Exponential, CacheReturnsSameObject) {
  Delta1 d;
  auto a = d.t.exponential(d.i, d.two);
  auto b = d.t.exponential(d.i, d.two);
  EXPECT_EQ(a.get(), b.get());
}

TEST(Exponential, InternalCompositionAgreesWithCompose) {
  Delta1 d;
  InternalComposition ic = internal_composition(d.t, d.i, d.i, d.two);
  for (const auto& f : d.t.hom(d.i, d.i))
    for (const auto& g : d.t.hom(d.i, d.two)) {
      PresheafMap both = pair_maps(ic.domain, name(d.t, g), name(d.t, f));
      EXPECT_EQ(compose(ic.map, both), name(d.t, compose(g, f)));
    }
}

TEST(Exponential, DistributivityIsIso) {
  Delta1 d;
  EXPECT_TRUE(is_iso(distributivity_iso(d.t, d.i, d.one, d.two).alpha));
}

TEST(Exponential, SigmaAndEvaluation) {
  Delta1 d;
  PresheafMap s = sigma(d.t, d.two, d.i);
  for (const auto& p : d.t.points(d.i)) EXPECT_EQ(compose(ev_at(d.t, p, d.two), s), identity_map(d.two));
}

TEST(Topos, HomCountsMatchOracle) {
  Delta1 d;
  const auto& g = golden()["delta1"];
  EXPECT_EQ(d.t.hom_count(d.i, d.i), g["hom_I_I"].get<std::uint64_t>());
  EXPECT_EQ(d.t.hom_count(d.one, d.omega), g["hom_1_Omega"].get<std::uint64_t>());
  EXPECT_EQ(d.t.hom_count(d.omega, d.omega), g["hom_Omega_Omega"].get<std::uint64_t>());
}

TEST(Topos, NsSiteFlag) {
  EXPECT_TRUE(Topos(builtin_site("delta1")).ns_site());
  EXPECT_TRUE(Topos(builtin_site("one")).ns_site());
  EXPECT_FALSE(Topos(builtin_site("parallel_pair")).ns_site());
  EXPECT_FALSE(Topos(builtin_site("two_discrete")).ns_site());
}
