#include <gtest/gtest.h>

#include <cstdio>

#include "advspec/automaton.hpp"
#include "advspec/subjects.hpp"

using namespace advspec;

namespace {

Automaton chain(const Trace& t) {
  Automaton a;
  Automaton::StateId cur = a.initial();
  for (const auto& e : t.events) {
    auto next = a.add_state(e.is_end);
    a.add_transition(cur, e, next);
    cur = next;
  }
  return a;
}

}  // namespace

TEST(Automaton, ChainAcceptsOnlyItsTrace) {
  auto a = chain(parse_trace("A END"));
  EXPECT_TRUE(a.accepts(parse_trace("A END")));
  EXPECT_FALSE(a.accepts(parse_trace("B END")));
  EXPECT_FALSE(a.accepts(parse_trace("A")));
  EXPECT_FALSE(a.accepts(parse_trace("A A END")));
}

TEST(Automaton, NondeterministicAcceptance) {
  Automaton a;
  auto s1 = a.add_state(), s2 = a.add_state(), f = a.add_state(true);
  a.add_transition(0, parse_event("x"), s1);
  a.add_transition(0, parse_event("x"), s2);
  a.add_transition(s2, parse_event("y"), s2);
  a.add_transition(s2, EventLabel::end(), f);
  a.add_transition(s1, parse_event("z"), f);
  EXPECT_TRUE(a.accepts(parse_trace("x y y END")));
  EXPECT_TRUE(a.accepts(parse_trace("x z")));
  EXPECT_FALSE(a.accepts(parse_trace("x z END")));
}

TEST(Automaton, TokenizerTruthMatchesFigureShape) {
  auto truth = find_subject("Tokenizer").ground_truth();
  ASSERT_TRUE(truth);
  EXPECT_TRUE(truth->accepts(
      parse_trace("<init> hasMoreTokens:TRUE nextToken hasMoreTokens:FALSE END")));
  EXPECT_TRUE(truth->accepts(parse_trace("<init> hasMoreTokens:FALSE END")));
  EXPECT_FALSE(truth->accepts(parse_trace("<init> hasMoreTokens:FALSE nextToken END")));
}

TEST(Automaton, DuplicateTransitionsCollapse) {
  Automaton a;
  auto s = a.add_state(true);
  a.add_transition(0, parse_event("x"), s);
  a.add_transition(0, parse_event("x"), s);
  EXPECT_EQ(a.num_transitions(), 1u);
}

TEST(Automaton, JsonRoundTrip) {
  for (const auto& name : subject_names()) {
    auto truth = find_subject(name).ground_truth();
    ASSERT_TRUE(truth);
    auto j = truth->to_json();
    EXPECT_EQ(Automaton::from_json(j), *truth);
    EXPECT_EQ(Automaton::from_json(nlohmann::json::parse(j.dump())).to_json().dump(), j.dump());
  }
}

TEST(Automaton, FileRoundTrip) {
  auto truth = *find_subject("BoundedStack").ground_truth();
  std::string path = ::testing::TempDir() + "/bs.json";
  write_automaton_file(path, truth);
  EXPECT_EQ(read_automaton_file(path), truth);
  std::remove(path.c_str());
}

TEST(Automaton, MalformedJson) {
  EXPECT_THROW(Automaton::from_json(nlohmann::json::parse(R"({"states": 0})")), ConfigError);
  EXPECT_THROW(Automaton::from_json(nlohmann::json::parse(
                   R"({"states":2,"initial":0,"accepting":[1],"transitions":[[0,"a"]]})")),
               ConfigError);
  EXPECT_THROW(Automaton::from_json(nlohmann::json::parse(
                   R"({"states":2,"initial":0,"accepting":[1],"transitions":[[0,"a",7]]})")),
               ConfigError);
  EXPECT_THROW(read_automaton_file("/nonexistent.json"), ConfigError);
}

TEST(Automaton, ReachabilitySets) {
  Automaton a;
  auto s1 = a.add_state(), dead = a.add_state(), f = a.add_state(true), orphan = a.add_state();
  a.add_transition(0, parse_event("x"), s1);
  a.add_transition(0, parse_event("y"), dead);
  a.add_transition(s1, EventLabel::end(), f);
  auto r = a.reachable();
  auto c = a.coreachable();
  EXPECT_TRUE(r[dead]);
  EXPECT_FALSE(r[orphan]);
  EXPECT_FALSE(c[dead]);
  EXPECT_TRUE(c[0]);
}

TEST(Automaton, DotMarksAcceptingAndInitial) {
  auto a = chain(parse_trace("<init> isEmpty:TRUE END"));
  auto dot = a.to_dot();
  EXPECT_NE(dot.find("doublecircle"), std::string::npos);
  EXPECT_NE(dot.find("isEmpty:TRUE"), std::string::npos);
  EXPECT_NE(dot.find("<init>"), std::string::npos);
  EXPECT_NE(dot.find("->"), std::string::npos);
}
