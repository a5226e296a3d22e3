#include <gtest/gtest.h>

#include "oracle.hpp"
#include "qset/universe.hpp"
#include "world.hpp"

namespace qset {
namespace {

using testing::qs;
using testing::World;

bool has_witness(const std::vector<Defect>& list, const Element& w) {
  for (const auto& d : list) {
    for (const auto& x : d.witnesses) {
      if (x == w) return true;
    }
  }
  return false;
}

TEST(BuildFragment, DepthZeroIsTheSeed) {
  World w;
  QSet seed = qs({{w.m(w.k), 1}});
  Fragment f = build_fragment(qs({{seed, 1}}), 0);
  EXPECT_EQ(f.elements(), qs({{seed, 1}}));
  EXPECT_EQ(qcard(f.elements()), 1u);
  EXPECT_EQ(f.ledger().size(), 1u);
}

TEST(BuildFragment, DepthOneContainsEveryConstruct) {
  World w;
  QSet seed = qs({{w.m(w.k), 1}});
  QSet u0 = qs({{seed, 1}});
  Fragment f = build_fragment(u0, 1);
  const QSet& u = f.elements();
  EXPECT_TRUE(u.contains(seed));
  EXPECT_TRUE(u.contains(power(seed)));
  EXPECT_TRUE(u.contains(singleton_in(seed, u0)));
  EXPECT_TRUE(u.contains(union_of(seed, seed)));
  EXPECT_TRUE(u.contains(product(seed, seed)));
  EXPECT_TRUE(u.contains(opair_in(seed, seed, u0)));
  // seed, P(seed), [seed], <seed, seed> = {{{K}}} and seed x seed
  EXPECT_EQ(u.distinct(), 5u);
  EXPECT_EQ(replay_ledger(f.ledger()), u);
}

TEST(BuildFragment, NoSeedsIsAnError) {
  try {
    build_fragment(QSet(), 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::empty_universe);
  }
  std::vector<Element> none;
  EXPECT_THROW(build_fragment(none, 1), Error);
}

TEST(BuildFragment, SeedsOverTheCap) {
  World w;
  FragmentLimits limits;
  limits.max_elements = 1;
  try {
    build_fragment(qs({{w.m(w.k), 1}, {w.c(w.a1), 1}}), 0, limits);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::cap_exceeded);
  }
}

TEST(BuildFragment, CutoffsAreLedgered) {
  World w;
  FragmentLimits limits;
  limits.max_elements = 6;
  limits.algebra.power_operand = 1;
  Fragment f = build_fragment(qs({{qs({{w.m(w.k), 2}}), 1}, {w.c(w.a1), 1}}), 2, limits);
  EXPECT_LE(f.elements().distinct(), 6u);
  EXPECT_GT(f.cutoffs(), 0u);
  bool saw_power_cutoff = false;
  for (const auto& e : f.ledger()) {
    if (!e.result && e.op == "power") saw_power_cutoff = true;
  }
  EXPECT_TRUE(saw_power_cutoff);
  EXPECT_EQ(replay_ledger(f.ledger(), limits.algebra), f.elements());
}

TEST(BuildFragment, KeepsSeedMultiplicities) {
  World w;
  Fragment f = build_fragment(qs({{w.m(w.k), 3}}), 1);
  EXPECT_EQ(f.elements().count_of(w.m(w.k)), 3u);
  EXPECT_TRUE(f.elements().contains(qs({{w.m(w.k), 3}})));
}

TEST(BuildFragment, RanksAreWellFounded) {
  World w;
  Fragment f = build_fragment(qs({{qs({{w.m(w.k), 1}}), 1}, {w.c(w.a1), 1}}), 2);
  auto ranks = f.ranks();
  for (const auto& [e, r] : ranks) {
    if (!e.is_set()) continue;
    for (const auto& inner : e.set().entries()) EXPECT_LT(inner.element.rank(), r);
  }
}

TEST(ReplayLedger, DetectsTampering) {
  World w;
  Fragment f = build_fragment(qs({{qs({{w.m(w.k), 1}}), 1}}), 1);
  auto ledger = f.ledger();
  for (auto& e : ledger) {
    if (e.op == "power") e.result = Element(QSet());
  }
  EXPECT_THROW(replay_ledger(ledger), Error);
}

TEST(CheckQed, EmptySetUniverseMissesItsPower) {
  QSet u = qs({{QSet(), 1}});
  ClosureReport r = check_qed(u);
  ASSERT_GE(r.cond1.size(), 1u);
  EXPECT_EQ(r.cond1[0].witnesses[0], Element(QSet()));
  EXPECT_EQ(*r.cond1[0].missing, Element(qs({{QSet(), 1}})));
}

TEST(CheckQed, PaddedSingletonHasNoDefectAtTheAtom) {
  World w;
  QSet u0 = qs({{w.m(w.k), 1}});
  QSet u = union_of(u0, qs({{singleton_in(w.m(w.k), u0), 1}}));
  ClosureReport r = check_qed(u);
  EXPECT_FALSE(has_witness(r.cond2, w.m(w.k)));
  EXPECT_EQ(r.checked2, 2u);
}

TEST(CheckQed, EmptyUniverseIsAnError) { EXPECT_THROW(check_qed(QSet()), Error); }

TEST(CheckQed, ClosedUnderSingletonsWhenPadded) {
  World w;
  QSet u = qs({{w.c(w.a1), 1}, {qs({{w.c(w.a1), 1}}), 1}, {qs({{qs({{w.c(w.a1), 1}}), 1}}), 1}});
  ClosureReport r = check_qed(u);
  EXPECT_EQ(r.cond2.size(), 1u);
  EXPECT_FALSE(r.cond1.empty());
}

TEST(CheckQed, FamilyUnionsNeedClassicalIndexElements) {
  World w;
  QSet x = qs({{w.m(w.k), 1}});
  QSet y = qs({{w.m(w.j), 1}});
  // No classical members: only the empty family can be indexed.
  ClosureReport r = check_qed(qs({{x, 1}, {y, 1}}));
  EXPECT_EQ(r.checked4, 1u);
  ASSERT_EQ(r.cond4.size(), 1u);
  EXPECT_TRUE(r.cond4[0].witnesses.empty());
  // Two classical members allow families of up to two distinct entries.
  ClosureReport r2 = check_qed(qs({{x, 1}, {y, 1}, {w.c(w.a1), 1}, {w.c(w.a2), 1}}));
  EXPECT_EQ(r2.checked4, 4u);
}

TEST(CheckQed, TheoremOneDefectsInFragmentsAreExplained) {
  World w;
  Fragment f = build_fragment(qs({{w.m(w.k), 2}, {w.c(w.a1), 1}}), 1);
  ClosureReport r = check_qed(f);
  EXPECT_FALSE(r.theorem1.empty());
  EXPECT_EQ(r.unexplained_theorem1(), 0u);
}

// Outside of built fragments the (1)-(3) attribution is not enough: here
// singletons of k and A1 are present but their pair is not, a gap only the
// family-union condition sees.
TEST(CheckQed, HandBuiltUniverseCanMissAPairWithoutPrimitiveDefect) {
  World w;
  QSet u = qs({{w.m(w.k), 1}, {w.c(w.a1), 1}, {qs({{w.m(w.k), 1}}), 1}, {qs({{w.c(w.a1), 1}}), 1}});
  ClosureReport r = check_qed(u);
  EXPECT_GT(r.unexplained_theorem1(), 0u);
}

TEST(Classify, Examples) {
  World w;
  Fragment f = build_fragment(qs({{qs({{w.m(w.k), 1}}), 1}}), 1);
  const QSet& u = f.elements();
  EXPECT_EQ(classify(qs({{w.m(w.k), 1}}), u).verdict, Verdict::u_qset);
  Classification whole = classify(u, u);
  EXPECT_EQ(whole.verdict, Verdict::u_proper_qclass);
  EXPECT_TRUE(whole.subclass);
  EXPECT_FALSE(whole.member);
  EXPECT_EQ(classify(qs({{w.c(w.a2), 1}}), u).verdict, Verdict::neither);
  EXPECT_EQ(to_string(Verdict::u_proper_qclass), "UProperQclass");
}

TEST(Classify, CountsMatter) {
  World w;
  QSet u = qs({{w.m(w.k), 2}, {w.c(w.a1), 1}});
  EXPECT_EQ(classify(qs({{w.m(w.k), 2}}), u).verdict, Verdict::u_proper_qclass);
  EXPECT_EQ(classify(qs({{w.m(w.k), 3}}), u).verdict, Verdict::neither);
}

TEST(SmallCategory, Examples) {
  World w;
  QSet a = qs({{w.m(w.k), 1}});
  CategoryPresentation c = CategoryPresentation::make(qs({{a, 1}}), std::vector<QuasiFunction>{identity(a)});
  QSet u = qs({{a, 1}, {c.objects, 1}, {c.morphisms, 1}});
  EXPECT_TRUE(is_small_category(c, u));

  QSet without_morphisms = qs({{a, 1}, {c.objects, 1}});
  EXPECT_FALSE(is_small_category(c, without_morphisms));

  Fragment f = build_fragment(qs({{a, 1}}), 1);
  EXPECT_FALSE(is_small_category(category_of_all(f.elements()), f.elements()));
}

TEST(FragmentJson, Schema) {
  World w;
  Fragment f = build_fragment(qs({{w.m(w.k), 1}}), 1);
  auto j = to_json(f, w.vocab);
  std::vector<std::string> keys;
  for (auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"elements", "rank", "depth", "ledger"}));
  EXPECT_EQ(j["elements"][0][0], "K");
  EXPECT_EQ(j["rank"]["{K}"], 1);

  auto r = to_json(check_qed(f), w.vocab);
  std::vector<std::string> dkeys;
  for (auto& [k, v] : r["defects"].items()) dkeys.push_back(k);
  EXPECT_EQ(dkeys, (std::vector<std::string>{"cond1", "cond2", "cond3", "cond4", "theorem1"}));
  EXPECT_TRUE(r.contains("totals"));
}

TEST(UniverseProperty, LedgerReplayAndMonotonicity) {
  World w;
  Rng rng(41);
  QSetShape shape{3, 1, 30, 0};
  for (int i = 0; i < 15; ++i) {
    QSet seeds;
    while (seeds.empty()) seeds = random_qset(rng, w.alphabet(), shape);
    Fragment f1 = build_fragment(seeds, 1);
    Fragment f2 = build_fragment(seeds, 2);
    ASSERT_EQ(replay_ledger(f1.ledger()), f1.elements());
    ASSERT_EQ(replay_ledger(f2.ledger()), f2.elements());
    if (f2.cutoffs() == 0) {
      for (const auto& e : f1.elements().entries()) ASSERT_EQ(f2.elements().count_of(e.element), e.count);
    }
  }
}

TEST(UniverseProperty, BuildIsDeterministic) {
  World w;
  QSet seeds = qs({{w.m(w.k), 2}, {qs({{w.c(w.a1), 1}}), 1}});
  EXPECT_EQ(to_json(build_fragment(seeds, 2), w.vocab).dump(), to_json(build_fragment(seeds, 2), w.vocab).dump());
}

TEST(UniverseProperty, ClassifyIsEquivariant) {
  World w;
  Rng rng(42);
  for (int i = 0; i < 100; ++i) {
    LabeledQSet bu = oracle::random_build(rng, w.vocab, w.alphabet(), 5, 1);
    LabeledQSet bx;
    for (const auto& e : bu.elements) {
      if (coin(rng, 50)) bx.elements.push_back(e);
    }
    if (coin(rng, 30)) bx.elements.push_back(LabeledElement{AtomRef::catom(w.a2)});
    LabeledQSet joint{{LabeledElement{bu}, LabeledElement{bx}}};
    LabelPermutation perm = oracle::random_permutation(rng, w.vocab, joint);
    Classification before = classify(canonicalize(bx), canonicalize(bu));
    Classification after = classify(relabel(bx, perm), relabel(bu, perm));
    ASSERT_EQ(before.verdict, after.verdict);
  }
}

}  // namespace
}  // namespace qset
