#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "advspec/ltl.hpp"
#include "oracle.hpp"

using namespace advspec;

namespace {

EventLabel L(const char* s) { return parse_event(s); }
Trace T(const char* s) { return parse_trace(s); }
TemporalProperty P(PropertyKind k, const char* a, const char* b) { return {k, L(a), L(b)}; }

struct Alphabet3 {
  std::vector<EventLabel> letters = {L("p"), L("x"), L("y")};
  PuritySet purity;
  Alphabet3() { purity.add_action("p"); }
};

Trace reverse_body(const Trace& t) {
  auto ev = body(t);
  std::reverse(ev.begin(), ev.end());
  ev.push_back(EventLabel::end());
  return Trace(ev);
}

}  // namespace

TEST(Check, WorkedExamples) {
  PuritySet none;
  auto ap = P(PropertyKind::AP, "isEmpty:FALSE", "push:TRUE");
  EXPECT_TRUE(check(ap, T("<init> pushAll:TRUE isEmpty:FALSE"), none).falsified);

  auto v = check(P(PropertyKind::AP, "A", "B"), T("B X Y A"), none);
  EXPECT_FALSE(v.falsified);
  EXPECT_TRUE(v.supported);

  auto e = check(P(PropertyKind::NF, "a", "b"), Trace{}, none);
  EXPECT_FALSE(e.trigger_seen);
  EXPECT_FALSE(e.falsified);
}

TEST(Check, ImmediateFollowsSkipsPureEvents) {
  auto aif = P(PropertyKind::AIF, "clear", "isEmpty:TRUE");
  auto t = T("clear getAll isEmpty:TRUE getAll");
  PuritySet pure_get;
  pure_get.add_action("getAll");
  pure_get.add_action("isEmpty");
  EXPECT_TRUE(check(aif, t, pure_get).supported);
  PuritySet impure_get;
  impure_get.add_action("isEmpty");
  EXPECT_TRUE(check(aif, t, impure_get).falsified);
}

TEST(Check, NifFalsifiedByFirstImpureEvent) {
  PuritySet pure;
  pure.add_action("p");
  auto nif = P(PropertyKind::NIF, "a", "b");
  EXPECT_TRUE(check(nif, T("a p p b END"), pure).falsified);
  EXPECT_FALSE(check(nif, T("a c b END"), pure).falsified);
  EXPECT_TRUE(check(nif, T("a c a b END"), pure).falsified);
}

TEST(Check, AipEveryOccurrence) {
  PuritySet pure;
  pure.add_action("p");
  auto aip = P(PropertyKind::AIP, "a", "b");
  EXPECT_FALSE(check(aip, T("b p a b a END"), pure).falsified);
  EXPECT_TRUE(check(aip, T("b a a END"), pure).falsified);
}

TEST(Check, RejectsEndInProperty) {
  PuritySet none;
  TemporalProperty p{PropertyKind::AF, L("a"), EventLabel::end()};
  EXPECT_THROW(check(p, T("a END"), none), std::invalid_argument);
}

TEST(Check, MatchesTemporalLogicOracleExhaustively) {
  Alphabet3 al;
  auto traces = oracle::all_traces(al.letters, 6);
  auto props = oracle::all_properties(al.letters);
  std::size_t mismatches = 0;
  for (const auto& p : props) {
    for (const auto& t : traces) {
      auto v = check(p, t, al.purity);
      bool expect = !oracle::satisfies(p, t, al.purity);
      if (v.falsified != expect) ++mismatches;
      if (v.trigger_seen != oracle::mentions(t, p.a)) ++mismatches;
      if (v.supported != (v.trigger_seen && !v.falsified)) ++mismatches;
    }
  }
  EXPECT_EQ(mismatches, 0u);
}

TEST(Check, ReversalDuality) {
  Alphabet3 al;
  for (const auto& t : oracle::all_traces(al.letters, 5)) {
    auto r = reverse_body(t);
    for (const auto& a : al.letters) {
      for (const auto& b : al.letters) {
        if (!(a == b)) {
          EXPECT_EQ(check({PropertyKind::AF, a, b}, t, al.purity).falsified,
                    check({PropertyKind::AP, a, b}, r, al.purity).falsified);
        }
        EXPECT_EQ(check({PropertyKind::AIF, a, b}, t, al.purity).falsified,
                  check({PropertyKind::AIP, a, b}, r, al.purity).falsified);
      }
    }
  }
}

TEST(Monitor, AgreesWithCheckOnEveryPrefix) {
  Alphabet3 al;
  for (const auto& p : oracle::all_properties(al.letters)) {
    PropertyMonitor mon(p, al.purity);
    for (const auto& t : oracle::all_traces(al.letters, 5)) {
      PropertyMonitor::State s = PropertyMonitor::kInitial;
      for (const auto& e : t.events) s = mon.step(s, e);
      EXPECT_EQ(s == PropertyMonitor::kBad, check(p, t, al.purity).falsified)
          << p.str() << " on " << format_trace(t);
    }
  }
}

TEST(Monitor, BadIsAbsorbing) {
  for (auto k : kAllKinds) {
    for (int bits = 0; bits < 16; ++bits) {
      EXPECT_EQ(PropertyMonitor::step(k, PropertyMonitor::kBad, bits & 1, bits & 2, bits & 4,
                                      bits & 8),
                PropertyMonitor::kBad);
    }
  }
}

TEST(PurityClosure, MatchesVariantEnumeration) {
  Alphabet3 al;
  al.purity.add_action("y");  // two pure letters so blocks can mix
  for (const auto& p : oracle::all_properties(al.letters)) {
    for (const auto& t : oracle::all_traces(al.letters, 5)) {
      bool any = false;
      oracle::pure_block_variants(t, al.purity, 3, [&](const Trace& v) {
        if (!oracle::satisfies(p, v, al.purity)) any = true;
      });
      EXPECT_EQ(refuted_under_purity(p, t, al.purity), any) << p.str() << " on "
                                                             << format_trace(t);
    }
  }
}

TEST(PurityClosure, ImpliedByPlainFalsification) {
  Alphabet3 al;
  for (const auto& p : oracle::all_properties(al.letters)) {
    for (const auto& t : oracle::all_traces(al.letters, 5)) {
      if (check(p, t, al.purity).falsified) EXPECT_TRUE(refuted_under_purity(p, t, al.purity));
    }
  }
}

TEST(Candidates, Counts) {
  std::vector<EventLabel> one = {L("a")};
  EXPECT_EQ(enumerate_candidates(one).size(), 6u);
  std::vector<EventLabel> eight, ten;
  for (int i = 0; i < 10; ++i) {
    auto l = EventLabel::of("m" + std::to_string(i));
    if (i < 8) eight.push_back(l);
    ten.push_back(l);
  }
  EXPECT_EQ(enumerate_candidates(eight).size(), 384u);
  EXPECT_EQ(enumerate_candidates(ten).size(), 600u);
  auto c = enumerate_candidates(ten);
  EXPECT_TRUE(std::is_sorted(c.begin(), c.end()));
}

TEST(Mine, SmallCorpus) {
  PuritySet none;
  std::vector<Trace> c1 = {T("A B END")};
  auto m = mine(c1, none);
  EXPECT_TRUE(m.contains(P(PropertyKind::AF, "A", "B")));
  EXPECT_TRUE(m.contains(P(PropertyKind::AP, "B", "A")));
  EXPECT_TRUE(m.contains(P(PropertyKind::NF, "B", "A")));
  EXPECT_FALSE(m.contains(P(PropertyKind::NF, "A", "B")));

  std::vector<Trace> c2 = {T("A END"), T("B A END")};
  EXPECT_FALSE(mine(c2, none).contains(P(PropertyKind::AP, "A", "B")));
}

TEST(Mine, BruteForceAgreement) {
  // Without the closure, mining is exactly: no falsifier, some supporter.
  Alphabet3 al;
  std::mt19937_64 rng(7);
  auto pool = oracle::all_traces(al.letters, 4);
  for (int round = 0; round < 30; ++round) {
    std::vector<Trace> corpus;
    for (int i = 0; i < 4; ++i) corpus.push_back(pool[rng() % pool.size()]);
    MineOptions opts;
    opts.purity_closure = false;
    auto m = mine(corpus, al.purity, opts);
    for (const auto& p : oracle::all_properties(al.letters)) {
      std::size_t support = 0;
      bool falsified = false;
      for (const auto& t : corpus) {
        bool sat = oracle::satisfies(p, t, al.purity);
        falsified |= !sat;
        support += (sat && oracle::mentions(t, p.a)) ? 1 : 0;
      }
      auto alpha = alphabet_of(corpus);
      auto seen = [&](const EventLabel& e) {
        return std::find(alpha.begin(), alpha.end(), e) != alpha.end();
      };
      bool expect = !falsified && support > 0 && seen(p.a) && seen(p.b);
      ASSERT_EQ(m.contains(p), expect) << p.str();
      if (expect) EXPECT_EQ(m.support.at(p), support);
    }
  }
}

TEST(Mine, MonotoneFalsification) {
  Alphabet3 al;
  std::mt19937_64 rng(11);
  auto pool = oracle::all_traces(al.letters, 4);
  for (int round = 0; round < 30; ++round) {
    std::vector<Trace> corpus = {pool[rng() % pool.size()]};
    auto before = mine(corpus, al.purity);
    corpus.push_back(pool[rng() % pool.size()]);
    auto after = mine(corpus, al.purity);
    for (const auto& p : oracle::all_properties(al.letters)) {
      bool refuted_before = false;
      for (std::size_t i = 0; i + 1 < corpus.size(); ++i)
        refuted_before |= refuted_under_purity(p, corpus[i], al.purity);
      if (refuted_before) EXPECT_FALSE(after.contains(p));
    }
    for (const auto& p : after.properties()) {
      for (const auto& t : corpus) EXPECT_FALSE(check(p, t, al.purity).falsified);
    }
    (void)before;
  }
}

TEST(Mine, EmptyCorpusIsError) {
  std::vector<Trace> none;
  EXPECT_THROW(mine(none, PuritySet{}), ConfigError);
}

TEST(Mine, RetainConsistentDropsFalsified) {
  PuritySet none;
  std::vector<Trace> c1 = {T("A B END")};
  auto m = mine(c1, none);
  std::vector<Trace> c2 = {T("A B END"), T("A END")};
  auto kept = retain_consistent(m, c2, none);
  EXPECT_FALSE(kept.contains(P(PropertyKind::AF, "A", "B")));
  for (const auto& p : kept.properties()) EXPECT_TRUE(m.contains(p));
}

TEST(PropertyFile, RoundTripWithSupport) {
  PuritySet none;
  std::vector<Trace> c = {T("A B END"), T("A A B END")};
  auto m = mine(c, none);
  std::stringstream ss;
  write_properties(ss, m);
  EXPECT_EQ(read_properties(ss), m);
  EXPECT_EQ(parse_property("NIF isEmpty:TRUE get"),
            P(PropertyKind::NIF, "isEmpty:TRUE", "get"));
  EXPECT_THROW(parse_property("NIF a"), ParseError);
  EXPECT_THROW(parse_property("AF a END"), ParseError);
}
