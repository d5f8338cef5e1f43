// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "htopos/ccc.hpp"
#include "htopos/cohesion.hpp"
#include "htopos/error.hpp"

using namespace htopos;

namespace {

struct Fixture {
  explicit Fixture(const char* site = "delta1") : t(builtin_site(site)) {}
  Topos t;
  Presheaf i = t.yoneda(t.category().object_count() - 1);
  std::vector<Presheaf> family{t.initial(), t.terminal(), t.two(), i};
  std::vector<std::string> names{"0", "1", "2", "I"};
};

}  // namespace

TEST(Decidable, DiscreteYesOmegaNo) {
  Fixture f;
  EXPECT_TRUE(is_decidable(f.t.two()).decidable);
  EXPECT_TRUE(is_decidable(f.t.discrete(3)).decidable);
  Decidability d = is_decidable(f.t.omega().object());
  EXPECT_FALSE(d.decidable);
  EXPECT_FALSE(d.witness.empty());
  EXPECT_FALSE(is_decidable(f.i).decidable);
}

TEST(Postulates, HoldOnReflexiveGraphs) {
  Fixture f;
  EXPECT_TRUE(check_NS(f.t, f.family, f.names).holds);
  EXPECT_TRUE(check_WDQO(f.t, f.family, f.names).holds);
  EXPECT_TRUE(check_DSO(f.t, f.family, f.names).holds);
}

TEST(Postulates, NsRefutedOnIrreflexiveGraphs) {
  Fixture f("parallel_pair");
  PostulateCertificate ns = check_NS(f.t, f.family, f.names);
  EXPECT_FALSE(ns.holds);
  EXPECT_EQ(ns.route, "refuted");
}

TEST(Classify, ReflexiveGraphsSufficientlyCohesive) {
  Fixture f;
  CohesionReport r = classify(f.t, f.family, f.names);
  ASSERT_TRUE(r.sufficiently_cohesive && r.quality_type);
  EXPECT_TRUE(*r.sufficiently_cohesive);
  EXPECT_FALSE(*r.quality_type);
  EXPECT_TRUE(r.omega_contractible);
  EXPECT_TRUE(r.omega_connected);
  EXPECT_TRUE(r.bipointed_connected);
  EXPECT_TRUE(r.consistent());
}

TEST(Classify, SetsAreQualityType) {
  Fixture f("one");
  CohesionReport r = classify(f.t, {f.t.initial(), f.t.terminal(), f.t.two(), f.t.discrete(3)}, {"0", "1", "2", "3"});
  ASSERT_TRUE(r.sufficiently_cohesive && r.quality_type);
  EXPECT_TRUE(*r.quality_type);
  EXPECT_FALSE(*r.sufficiently_cohesive);
  EXPECT_TRUE(r.consistent());
}

TEST(Classify, NotApplicableWithoutPostulates) {
  Fixture f("parallel_pair");
  CohesionReport r = classify(f.t, f.family, f.names);
  EXPECT_FALSE(r.postulates);
  EXPECT_FALSE(r.sufficiently_cohesive.has_value());
  EXPECT_TRUE(r.consistent());
}

TEST(Contractible, RoutesAgree) {
  Fixture f;
  HomotopyTheory th(f.t, TheoryKind::Pieces);
  for (const auto& [a, want] : std::vector<std::pair<Presheaf, bool>>{
           {f.t.terminal(), true}, {f.i, true}, {f.t.omega().object(), true}, {f.t.two(), false}}) {
    ContractibilityReport r = is_contractible(th, a, f.family, f.names);
    EXPECT_TRUE(r.agree);
    EXPECT_EQ(r.contractible, want);
  }
}

TEST(ExplicitHomotopy, FoundExactlyForHomotopicPairs) {
  Fixture f;
  HomotopyTheory th(f.t, TheoryKind::Pieces);
  for (const auto& [x, y] : std::vector<std::pair<Presheaf, Presheaf>>{
           {f.i, f.i}, {f.t.terminal(), f.t.omega().object()}, {f.i, f.t.two()}}) {
    auto hs = f.t.hom(x, y);
    for (const auto& a : hs)
      for (const auto& b : hs) {
        auto e = explicit_homotopy_search(th, a, b);
        EXPECT_EQ(e.has_value(), homotopic(th, a, b));
        if (e) {
          EXPECT_TRUE(verify_explicit_homotopy(f.t, *e, a, b).empty());
          EXPECT_TRUE(verify_explicit_implies_homotopic(th, *e, a, b));
        }
      }
  }
}

TEST(ExplicitHomotopy, RejectsWrongEndpoints) {
  Fixture f;
  HomotopyTheory th(f.t, TheoryKind::Pieces);
  auto hs = f.t.hom(f.i, f.i);
  auto e = explicit_homotopy_search(th, hs[0], hs[1]);
  ASSERT_TRUE(e);
  EXPECT_FALSE(verify_explicit_homotopy(f.t, *e, hs[1], hs[1]).empty());
}

TEST(NoMotion, BijectiveForDiscreteTargets) {
  Fixture f;
  auto pts = f.t.points(f.i);
  for (std::size_t k = 1; k <= 3; ++k) EXPECT_TRUE(no_motion(f.t, f.i, pts[0], f.t.discrete(k)).iso);
  EXPECT_THROW(no_motion(f.t, f.i, pts[0], f.t.omega().object()), PreconditionError);
  EXPECT_THROW(no_motion(f.t, f.t.two(), f.t.points(f.t.two())[0], f.t.two()), PreconditionError);
}

TEST(Monoid, OmegaMeetIsContractibleMonoid) {
  Fixture f;
  HomotopyTheory th(f.t, TheoryKind::Pieces);
  const Omega& om = f.t.omega();
  MonoidZeroReport r = monoid_zero_check(th, om.object(), om.meet_map(), om.top_map(), om.bottom_map());
  EXPECT_TRUE(r.axiom_violations.empty());
  EXPECT_TRUE(r.connected);
  EXPECT_TRUE(r.contractible);
  EXPECT_TRUE(r.homotopy.has_value());
  EXPECT_TRUE(r.consistent());
}

TEST(Monoid, JoinIsNotAMonoidWithZeroBottom) {
  Fixture f;
  HomotopyTheory th(f.t, TheoryKind::Pieces);
  const Omega& om = f.t.omega();
  MonoidZeroReport r = monoid_zero_check(th, om.object(), om.join_map(), om.top_map(), om.bottom_map());
  EXPECT_FALSE(r.axiom_violations.empty());
}

TEST(Monoid, BuildRForInterval) {
  Fixture f;
  HomotopyTheory th(f.t, TheoryKind::Pieces);
  RReport r = build_R(th, f.i, f.t.points(f.i)[0]);
  EXPECT_EQ(r.r.sizes(), (std::vector<std::size_t>{2, 3}));
  EXPECT_TRUE(r.monoid.axiom_violations.empty());
  EXPECT_TRUE(r.consistent());
}

TEST(TheoremB, CertificatePasses) {
  Fixture f;
  AdjunctionCertificate c = certify_theorem_b(HomotopyTheory(f.t, TheoryKind::Pieces), f.family, f.names);
  for (const auto& l : c.lines) EXPECT_TRUE(l.ok) << l.check << ": " << l.witness;
}

TEST(Sheaves, ConnectednessReportConsistent) {
  Fixture f;
  SheafConnectednessReport r = sheaf_connectedness_check(f.t, f.family, f.names);
  EXPECT_TRUE(r.consistent());
  EXPECT_TRUE(r.sufficiently_cohesive);
}
