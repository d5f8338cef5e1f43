// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <map>

#include "golden.hpp"
#include "htopos/ccc.hpp"
#include "htopos/error.hpp"
#include "htopos/homotopy.hpp"

using namespace htopos;

namespace {

struct Fixture {
  Topos t{builtin_site("delta1")};
  Presheaf i = t.yoneda(1);
  std::map<std::string, Presheaf> obj{{"0", t.initial()},
                                      {"1", t.terminal()},
                                      {"2", t.two()},
                                      {"I", i},
                                      {"Omega", t.omega().object()},
                                      {"IxI", product(i, i).object}};
  std::vector<Presheaf> family() const {
    std::vector<Presheaf> out;
    for (const auto& n : names()) out.push_back(obj.at(n));
    return out;
  }
  std::vector<std::string> names() const { return {"0", "1", "2", "I", "Omega"}; }
};

}  // namespace

TEST(HomClasses, MatchIntervalHomotopyOracle) {
  Fixture f;
  HomotopyTheory th(f.t, TheoryKind::Pieces);
  for (const auto& [key, v] : golden()["delta1"]["homotopy_classes"].items()) {
    const auto comma = key.find(',');
    const Presheaf& x = f.obj.at(key.substr(0, comma));
    const Presheaf& y = f.obj.at(key.substr(comma + 1));
    auto h = hom_classes(th, x, y);
    EXPECT_EQ(h->classes, v[0].get<std::size_t>()) << key;
    if (h->enumerated) EXPECT_EQ(h->count, v[1].get<std::size_t>()) << key;
  }
}

TEST(HomClasses, ReflectionPointsAgree) {
  Fixture f;
  HomotopyTheory th(f.t, TheoryKind::Pieces);
  for (const auto& x : f.family())
    for (const auto& y : f.family()) {
      auto h = hom_classes(th, x, y);
      ASSERT_TRUE(h->reflection_points);
      EXPECT_EQ(*h->reflection_points, h->classes);
    }
}

TEST(HomClasses, FastRouteAgreesWithDefinition) {
  Fixture f;
  for (TheoryKind k : {TheoryKind::Identity, TheoryKind::Bang, TheoryKind::Pieces}) {
    HomotopyTheory th(f.t, k);
    for (const auto& x : {f.obj.at("1"), f.i})
      for (const auto& y : {f.obj.at("2"), f.i, f.obj.at("Omega")}) {
        auto hs = f.t.hom(x, y);
        for (const auto& a : hs)
          for (const auto& b : hs) EXPECT_EQ(homotopic(th, a, b), homotopic_by_definition(th, a, b)) << th.name();
      }
  }
}

TEST(Theories, CertifyOnReflexiveGraphs) {
  Fixture f;
  EXPECT_TRUE(certify_theory(HomotopyTheory(f.t, TheoryKind::Identity), f.family(), f.names()).verified());
  EXPECT_TRUE(certify_theory(HomotopyTheory(f.t, TheoryKind::Pieces), f.family(), f.names()).verified());
  for (const auto& j : enumerate_topologies(f.t))
    EXPECT_TRUE(certify_theory(HomotopyTheory(f.t, TheoryKind::Topology, j), f.family(), f.names()).verified())
        << j.name;
}

TEST(Theories, BangFailsAtInitialObject) {
  Fixture f;
  TheoryCertificate c = certify_theory(HomotopyTheory(f.t, TheoryKind::Bang), f.family(), f.names());
  EXPECT_FALSE(c.verified());
  std::vector<Presheaf> pointed{f.obj.at("1"), f.obj.at("2"), f.i, f.obj.at("Omega")};
  EXPECT_TRUE(certify_theory(HomotopyTheory(f.t, TheoryKind::Bang), pointed, {"1", "2", "I", "Omega"}).verified());
}

TEST(Theories, PiecesFailsOnIrreflexiveGraphs) {
  Topos t(builtin_site("parallel_pair"));
  Presheaf e = t.yoneda(1);
  TheoryCertificate c = certify_theory(HomotopyTheory(t, TheoryKind::Pieces), {t.terminal(), e}, {"1", "I"});
  EXPECT_FALSE(c.verified());
  bool product_line = false;
  for (const auto& l : c.lines)
    if (!l.ok && l.witness.find("Π₀(I×I) = 3") != std::string::npos) product_line = true;
  EXPECT_TRUE(product_line);
}

TEST(Theories, IdentityClassesAreArrows) {
  Fixture f;
  HomotopyTheory th(f.t, TheoryKind::Identity);
  auto h = hom_classes(th, f.i, f.obj.at("Omega"));
  EXPECT_EQ(h->classes, h->count);
}

TEST(TheoremA, ProductExponentialSum) {
  Fixture f;
  HomotopyTheory th(f.t, TheoryKind::Pieces);
  const auto fam = f.family();
  for (const auto& a : fam)
    for (const auto& b : fam)
      for (const auto& c : {f.obj.at("1"), f.obj.at("2"), f.i}) {
        EXPECT_TRUE(theorem_a_product(th, c, a, b, "").ok);
        EXPECT_TRUE(theorem_a_sum(th, a, b, c, "").ok);
        EXPECT_TRUE(theorem_a_exponential(th, c, a, f.obj.at("2"), "").ok);
      }
}

TEST(TheoremA, RepresentativeIndependence) {
  Fixture f;
  HomotopyTheory th(f.t, TheoryKind::Pieces);
  const auto fam = f.family();
  for (const auto& a : fam)
    for (const auto& b : fam) {
      EXPECT_TRUE(ep_compose_check(th, a, b, f.obj.at("2"), "").ok);
      EXPECT_TRUE(ep_pair_check(th, a, b, f.i, "").ok);
      EXPECT_TRUE(ep_copair_check(th, a, b, f.i, "").ok);
      EXPECT_TRUE(ep_transpose_check(th, a, f.obj.at("2"), b, "").ok);
    }
}

TEST(Contraction, FoundForIntervalAndOmega) {
  Fixture f;
  for (const auto& y : {f.i, f.obj.at("Omega"), f.obj.at("IxI")}) {
    auto c = find_contraction(f.t, y);
    ASSERT_TRUE(c);
    EXPECT_TRUE(verify_contraction(f.t, *c).empty());
    Contraction e = exponential_contraction(f.t, *c, f.obj.at("2"));
    EXPECT_TRUE(verify_contraction(f.t, e).empty());
  }
  EXPECT_FALSE(find_contraction(f.t, f.obj.at("2")));
}

TEST(Contraction, HintAgreesWithEnumeration) {
  Fixture f;
  HomotopyTheory th(f.t, TheoryKind::Pieces);
  auto c = find_contraction(f.t, f.obj.at("Omega"));
  ASSERT_TRUE(c);
  auto a = hom_classes(th, f.i, f.obj.at("Omega"), &*c);
  EXPECT_EQ(a->classes, 1u);
}

TEST(HomAction, SquareCommutes) {
  Fixture f;
  HomotopyTheory th(f.t, TheoryKind::Pieces);
  for (const auto& p : f.t.points(f.i))
    for (const auto& r : f.t.hom(f.i, f.obj.at("2"))) EXPECT_TRUE(ep_hom_action(th, p, r, "").ok);
}

TEST(Extensivity, HoldsOnSmallFamily) {
  Fixture f;
  HomotopyTheory th(f.t, TheoryKind::Pieces);
  for (const auto& l : ep_extensivity_check(th, {f.obj.at("1"), f.obj.at("2"), f.i}, {"1", "2", "I"}))
    EXPECT_TRUE(l.ok) << l.check << ": " << l.witness;
}
