// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "brute_force.hpp"
#include "htopos/error.hpp"
#include "htopos/hom_search.hpp"
#include "htopos/presheaf.hpp"
#include "htopos/topos.hpp"

using namespace htopos;

namespace {

SiteRef delta1() { return builtin_site("delta1"); }

}  // namespace

TEST(Presheaf, Interval) {
  Presheaf i = yoneda(delta1(), 1);
  EXPECT_EQ(i.sizes(), (std::vector<std::size_t>{2, 3}));
  EXPECT_TRUE(i.validate().empty());
}

TEST(Presheaf, CheckedRejectsBrokenFunctor) {
  SiteRef s = delta1();
  Presheaf i = yoneda(s, 1);
  std::vector<Function> act;
  for (Index f = 0; f < s->morphism_count(); ++f) act.push_back(i.action(f));
  const Index d0 = *s->find_morphism("d0");
  std::fill(act[d0].begin(), act[d0].end(), Elem{0});
  EXPECT_THROW(Presheaf::checked(s, i.sizes(), act), SemanticError);
}

TEST(Presheaf, NaturalityViolationNamesSquare) {
  SiteRef s = delta1();
  Presheaf i = yoneda(s, 1);
  Presheaf two = discrete(s, 2);
  PresheafMap bad(i, two, {{0, 1}, {0, 1, 1}});
  EXPECT_FALSE(bad.validate().empty());
  EXPECT_THROW(PresheafMap::checked(i, two, {{0, 1}, {0, 1, 1}}), SemanticError);
}

TEST(Presheaf, ProductProjectionsAndPairing) {
  SiteRef s = delta1();
  Presheaf i = yoneda(s, 1);
  Product p = product(i, i);
  EXPECT_EQ(p.object.sizes(), (std::vector<std::size_t>{4, 9}));
  PresheafMap d = pair_maps(p, identity_map(i), identity_map(i));
  EXPECT_EQ(compose(p.p1, d), identity_map(i));
  EXPECT_EQ(compose(p.p2, d), identity_map(i));
  EXPECT_TRUE(is_mono(d));
  EXPECT_FALSE(is_epi(d));
}

TEST(Presheaf, CoproductCopairing) {
  SiteRef s = delta1();
  Presheaf i = yoneda(s, 1), one = terminal(s);
  Coproduct c = coproduct(i, one);
  PresheafMap k = copair_maps(c, bang(i), identity_map(one));
  EXPECT_EQ(compose(k, c.i1), bang(i));
  EXPECT_EQ(compose(k, c.i2), identity_map(one));
}

TEST(Presheaf, EqualizerAndPullback) {
  SiteRef s = delta1();
  Presheaf i = yoneda(s, 1);
  auto pts = global_elements(i);
  ASSERT_EQ(pts.size(), 2u);
  Inclusion e = equalizer(identity_map(i), identity_map(i));
  EXPECT_TRUE(is_iso(e.incl));
  Pullback pb = pullback(pts[0], pts[1]);
  EXPECT_EQ(pb.object.total_size(), 0u);
  Pullback same = pullback(pts[0], pts[0]);
  EXPECT_EQ(same.object.sizes(), terminal(s).sizes());
}

TEST(Presheaf, CoequalizerOfEndpointsIsCircle) {
  SiteRef s = delta1();
  Presheaf i = yoneda(s, 1);
  auto pts = global_elements(i);
  Quotient q = coequalizer(pts[0], pts[1]);
  EXPECT_EQ(q.object.sizes(), (std::vector<std::size_t>{1, 2}));
  EXPECT_TRUE(is_epi(q.q));
}

TEST(Presheaf, ImageFactorization) {
  SiteRef s = delta1();
  Presheaf i = yoneda(s, 1);
  PresheafMap to_one = bang(i);
  auto f = image_factorization(global_elements(i)[0]);
  EXPECT_TRUE(is_epi(f.epi));
  EXPECT_TRUE(is_mono(f.mono));
  auto g = image_factorization(to_one);
  EXPECT_TRUE(is_iso(g.mono));
}

TEST(Presheaf, InverseRefusesNonIso) {
  Presheaf i = yoneda(delta1(), 1);
  EXPECT_THROW(inverse(bang(i)), PreconditionError);
  Product p = product(i, terminal(delta1()));
  EXPECT_EQ(compose(inverse(p.p1), p.p1), identity_map(p.object));
}

TEST(Presheaf, DigestIgnoresHandle) {
  Presheaf a = yoneda(delta1(), 1), b = yoneda(delta1(), 1);
  EXPECT_FALSE(a.same_handle(b));
  EXPECT_EQ(a.digest(), b.digest());
  EXPECT_EQ(serialize(a), serialize(b));
  EXPECT_NE(a.digest(), terminal(delta1()).digest());
}

TEST(Presheaf, MixedSitesRejected) {
  Presheaf a = terminal(builtin_site("one"));
  Presheaf b = terminal(delta1());
  EXPECT_THROW(product(a, b), ShapeError);
}

TEST(HomSearch, MatchesBruteForceOnNamedObjects) {
  SiteRef s = delta1();
  Presheaf i = yoneda(s, 1), one = terminal(s), two = discrete(s, 2);
  Presheaf ii = product(i, i).object;
  for (const auto& x : {one, two, i, ii})
    for (const auto& y : {one, two, i}) EXPECT_EQ(hom_count(x, y), oracle::hom_count(x, y));
}

TEST(HomSearch, SolutionsAreSortedAndNatural) {
  SiteRef s = delta1();
  Presheaf i = yoneda(s, 1);
  Presheaf ii = product(i, i).object;
  auto maps = hom_set(ii, i);
  for (std::size_t k = 0; k < maps.size(); ++k) {
    EXPECT_TRUE(maps[k].validate().empty());
    if (k) EXPECT_LT(flatten(maps[k - 1]), flatten(maps[k]));
  }
}

TEST(HomSearch, BudgetRaisesResourceError) {
  SiteRef s = delta1();
  Presheaf i = yoneda(s, 1);
  Presheaf big = product(i, product(i, i).object).object;
  EXPECT_THROW(hom_count(big, Omega(s).object(), 5), ResourceError);
}

TEST(HomSearch, PinRestrictsSolutions) {
  SiteRef s = delta1();
  Presheaf i = yoneda(s, 1);
  HomSearch h(i, i);
  h.pin(0, 0, 0);
  h.pin(0, 1, 1);
  EXPECT_EQ(h.count(), 1u);
}

class RandomPresheaves : public ::testing::TestWithParam<std::string> {};

TEST_P(RandomPresheaves, HomCountMatchesBruteForce) {
  SiteRef s = builtin_site(GetParam());
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    Presheaf x = oracle::random_presheaf(s, rng);
    Presheaf y = oracle::random_presheaf(s, rng);
    if (x.total_size() > 8 || y.total_size() > 8) continue;
    EXPECT_TRUE(x.validate().empty());
    EXPECT_EQ(hom_count(x, y), oracle::hom_count(x, y)) << "trial " << trial;
  }
}

TEST_P(RandomPresheaves, ProductUniversalProperty) {
  SiteRef s = builtin_site(GetParam());
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    Presheaf x = oracle::random_presheaf(s, rng), y = oracle::random_presheaf(s, rng);
    Presheaf z = oracle::random_presheaf(s, rng);
    if (x.total_size() + y.total_size() + z.total_size() > 10) continue;
    Product p = product(x, y);
    EXPECT_EQ(hom_count(z, p.object), hom_count(z, x) * hom_count(z, y));
    Coproduct c = coproduct(x, y);
    EXPECT_EQ(hom_count(c.object, z), hom_count(x, z) * hom_count(y, z));
  }
}

INSTANTIATE_TEST_SUITE_P(Sites, RandomPresheaves,
                         ::testing::Values("one", "delta1", "two_discrete", "parallel_pair"));
