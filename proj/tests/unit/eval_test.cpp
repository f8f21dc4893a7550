#include <gtest/gtest.h>

#include "advspec/eval.hpp"
#include "advspec/subjects.hpp"

using namespace advspec;

namespace {

EventLabel L(const char* s) { return parse_event(s); }

Automaton chain_a_end() {
  Automaton a;
  auto s = a.add_state(), f = a.add_state(true);
  a.add_transition(0, L("A"), s);
  a.add_transition(s, EventLabel::end(), f);
  return a;
}

EvalConfig cfg(std::size_t samples = 300, std::uint64_t seed = 1) {
  EvalConfig c;
  c.samples_per_side = samples;
  c.rng_seed = seed;
  return c;
}

}  // namespace

TEST(Sample, ChainHasOneTrace) {
  for (const auto& t : sample_traces(chain_a_end(), cfg(50))) {
    EXPECT_EQ(t, parse_trace("A END"));
  }
}

TEST(Sample, TokenizerCoversBothShapes) {
  auto truth = *find_subject("Tokenizer").ground_truth();
  bool empty_shape = false, looped = false;
  for (const auto& t : sample_traces(truth, cfg(500))) {
    EXPECT_TRUE(t.complete());
    EXPECT_LE(t.size(), 50u);
    if (t == parse_trace("<init> hasMoreTokens:FALSE END")) empty_shape = true;
    std::size_t next = 0;
    for (const auto& e : t.events) next += e.action == "nextToken" ? 1 : 0;
    if (next >= 2) looped = true;
  }
  EXPECT_TRUE(empty_shape);
  EXPECT_TRUE(looped);
}

TEST(Sample, DeterministicUnderSeed) {
  auto truth = *find_subject("BoundedStack").ground_truth();
  EXPECT_EQ(sample_traces(truth, cfg(200, 4)), sample_traces(truth, cfg(200, 4)));
  EXPECT_NE(sample_traces(truth, cfg(200, 4)), sample_traces(truth, cfg(200, 5)));
}

TEST(Sample, NoAcceptingPathIsError) {
  Automaton a;
  a.add_transition(0, L("A"), a.add_state());
  EXPECT_THROW(sample_traces(a, cfg()), std::runtime_error);
  EvalConfig bad = cfg();
  bad.samples_per_side = 0;
  EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(Evaluate, IdentityScoresOne) {
  for (const auto& name : subject_names()) {
    auto truth = *find_subject(name).ground_truth();
    auto r = evaluate(truth, truth, cfg());
    EXPECT_DOUBLE_EQ(r.precision, 1.0);
    EXPECT_DOUBLE_EQ(r.recall, 1.0);
    EXPECT_DOUBLE_EQ(r.f_measure, 1.0);
  }
}

TEST(Evaluate, SpuriousEdgeLowersPrecisionOnly) {
  auto truth = chain_a_end();
  auto inferred = truth;
  inferred.add_transition(1, L("B"), 1);
  auto r = evaluate(inferred, truth, cfg(400));
  EXPECT_LT(r.precision, 1.0);
  EXPECT_GT(r.precision, 0.0);
  EXPECT_DOUBLE_EQ(r.recall, 1.0);
}

TEST(Evaluate, DisjointAlphabets) {
  Automaton other;
  auto s = other.add_state(), f = other.add_state(true);
  other.add_transition(0, L("Z"), s);
  other.add_transition(s, EventLabel::end(), f);
  auto r = evaluate(other, chain_a_end(), cfg(50));
  EXPECT_DOUBLE_EQ(r.precision, 0.0);
  EXPECT_DOUBLE_EQ(r.recall, 0.0);
  EXPECT_DOUBLE_EQ(r.f_measure, 0.0);
}

TEST(Evaluate, UnreachableAdditionsChangeNothing) {
  auto truth = *find_subject("KeyedStore").ground_truth();
  auto inferred = *find_subject("KeyedStore").ground_truth();
  auto orphan = inferred.add_state();
  inferred.add_transition(orphan, L("put"), orphan);
  inferred.add_transition(orphan, L("bogus"), 1);
  auto a = evaluate(truth, truth, cfg(300, 9));
  auto b = evaluate(inferred, truth, cfg(300, 9));
  EXPECT_EQ(a.to_json().dump(), b.to_json().dump());
}

TEST(Evaluate, FMeasureIsHarmonicMean) {
  EXPECT_DOUBLE_EQ(f_measure(0.0, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(f_measure(1.0, 0.5), 2.0 * 0.5 / 1.5);
  EXPECT_DOUBLE_EQ(f_measure(0.8, 0.8), 0.8);
}

TEST(Evaluate, SummaryFormat) {
  auto truth = chain_a_end();
  auto r = evaluate(truth, truth, cfg(10));
  EXPECT_EQ(r.summary(), "P=1.0000 R=1.0000 F=1.0000");
}
