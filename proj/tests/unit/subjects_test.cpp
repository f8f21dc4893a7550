#include <gtest/gtest.h>

#include <functional>

#include "advspec/subjects.hpp"

using namespace advspec;

namespace {

// Every single-instance test of length <= max_len: constructor first, then
// methods with argument seeds drawn from `args` where the action takes one.
void for_each_test(const Subject& s, std::size_t max_len, const std::vector<std::int64_t>& args,
                   const std::function<void(const TestCase&)>& visit) {
  std::vector<Invocation> choices;
  std::vector<Invocation> ctors;
  for (const auto& a : s.alphabet()) {
    auto& dst = a.is_constructor ? ctors : choices;
    if (a.arg_arity > 0) {
      for (auto v : args) dst.push_back({0, a.action, v});
    } else {
      dst.push_back({0, a.action, 0});
    }
  }
  std::function<void(TestCase&)> rec = [&](TestCase& t) {
    visit(t);
    if (t.size() == max_len) return;
    for (const auto& c : choices) {
      t.invocations.push_back(c);
      rec(t);
      t.invocations.pop_back();
    }
  };
  for (const auto& c : ctors) {
    TestCase t;
    t.invocations.push_back(c);
    rec(t);
  }
}

TestCase plan(std::initializer_list<std::pair<const char*, std::int64_t>> calls, int instance = 0) {
  TestCase t;
  for (const auto& [a, arg] : calls) t.invocations.push_back({instance, a, arg});
  return t;
}

}  // namespace

class GroundTruth : public ::testing::TestWithParam<std::string> {};

TEST_P(GroundTruth, AcceptsEverySanitizedTraceUpToLengthSix) {
  const Subject& s = find_subject(GetParam());
  auto truth = s.ground_truth();
  ASSERT_TRUE(truth);
  std::size_t checked = 0;
  for_each_test(s, 6, {0, 1, 2}, [&](const TestCase& t) {
    for (const auto& tr : sanitize(execute(s, t))) {
      ++checked;
      ASSERT_TRUE(truth->accepts(tr)) << format_test(t) << " -> " << format_trace(tr);
    }
  });
  EXPECT_GT(checked, 100u);
}

TEST_P(GroundTruth, LabelsCoverTruthAlphabet) {
  const Subject& s = find_subject(GetParam());
  auto labels = s.labels();
  for (const auto& l : s.ground_truth()->alphabet()) {
    if (l.is_end) continue;
    EXPECT_NE(std::find(labels.begin(), labels.end(), l), labels.end()) << l.str();
  }
}

TEST_P(GroundTruth, ExecutionIsDeterministic) {
  const Subject& s = find_subject(GetParam());
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    auto t = random_test(s, rng, 12, 3);
    auto a = execute(s, t, 5), b = execute(s, t, 5);
    EXPECT_EQ(a.traces, b.traces);
    EXPECT_EQ(a.outcomes, b.outcomes);
    EXPECT_EQ(a.leaked, b.leaked);
  }
}

INSTANTIATE_TEST_SUITE_P(All, GroundTruth,
                         ::testing::Values("BoundedStack", "Tokenizer", "KeyedStore",
                                           "Connection"));

TEST(Execute, BoundedStackPushThenIsEmpty) {
  const Subject& s = find_subject("BoundedStack");
  auto r = execute(s, plan({{"<init>", 0}, {"push", 0}, {"isEmpty", 0}}));
  ASSERT_EQ(r.traces.size(), 1u);
  EXPECT_EQ(r.traces[0], parse_trace("<init> push:TRUE isEmpty:FALSE END"));
}

TEST(Execute, ExceptionTruncatesTrace) {
  const Subject& s = find_subject("Tokenizer");
  // Pool index 1 is the single-token input.
  auto r = execute(s, plan({{"<init>", 1}, {"nextToken", 0}, {"nextToken", 0},
                            {"hasMoreTokens", 0}}));
  ASSERT_EQ(r.traces.size(), 1u);
  EXPECT_EQ(r.traces[0], parse_trace("<init> nextToken"));
  EXPECT_EQ(r.outcomes[2], Outcome::Raised);
  EXPECT_EQ(r.outcomes[3], Outcome::Skipped);
  EXPECT_EQ(sanitize(r), std::vector<Trace>{parse_trace("<init> nextToken END")});
}

TEST(Execute, LeakDropsEveryTraceOfTheTest) {
  const Subject& s = find_subject("Connection");
  TestCase t = plan({{"<init>", 0}, {"connect", 0}});
  t.invocations.push_back({1, "<init>", 0});
  t.invocations.push_back({1, "close", 0});
  auto r = execute(s, t);
  EXPECT_EQ(r.leaked, 1);
  EXPECT_EQ(r.traces.size(), 2u);
  EXPECT_TRUE(sanitize(r).empty());
}

TEST(Execute, CleanRunPassesThrough) {
  const Subject& s = find_subject("Connection");
  auto r = execute(s, plan({{"<init>", 0}, {"connect", 0}, {"send", 4}, {"close", 0}}));
  EXPECT_EQ(sanitize(r), r.traces);
}

TEST(Execute, Errors) {
  const Subject& s = find_subject("BoundedStack");
  EXPECT_THROW(execute(s, plan({{"<init>", 0}, {"frobnicate", 0}})), ConfigError);
  auto empty = make_empty_subject();
  EXPECT_THROW(execute(*empty, plan({{"<init>", 0}})), ConfigError);
  EXPECT_THROW(find_subject("Nope"), ConfigError);
}

TEST(Execute, SeedShiftsArguments) {
  const Subject& s = find_subject("Tokenizer");
  auto t = plan({{"<init>", 0}, {"hasMoreTokens", 0}});
  // Input pool index 0 is empty, index 1 is not.
  EXPECT_EQ(execute(s, t, 0).traces[0], parse_trace("<init> hasMoreTokens:FALSE END"));
  EXPECT_EQ(execute(s, t, 1).traces[0], parse_trace("<init> hasMoreTokens:TRUE END"));
}

TEST(Tests, NormalizeEnforcesConstructorFirstAndDenseIds) {
  const Subject& s = find_subject("BoundedStack");
  TestCase t;
  t.invocations = {{3, "push", 0}, {3, "<init>", 1}, {3, "<init>", 2}, {7, "<init>", 0},
                   {3, "pop", 0},  {7, "push", 1},   {5, "pop", 0}};
  auto n = normalize_test(s, t, 100);
  std::vector<Invocation> expect = {{0, "<init>", 1}, {1, "<init>", 0}, {0, "pop", 0},
                                    {1, "push", 1}};
  EXPECT_EQ(n.invocations, expect);
  EXPECT_EQ(normalize_test(s, t, 2).size(), 2u);
}

TEST(Tests, RandomTestsAreWellFormed) {
  for (const auto& name : subject_names()) {
    const Subject& s = find_subject(name);
    std::mt19937_64 rng(1);
    for (int i = 0; i < 100; ++i) {
      auto t = random_test(s, rng, 1 + i % 15, 1 + i % 3);
      EXPECT_EQ(normalize_test(s, t, 1000), t);
      EXPECT_FALSE(t.empty());
    }
  }
}

TEST(Subjects, Metadata) {
  auto names = subject_names();
  EXPECT_EQ(names.size(), 4u);
  auto j = subject_metadata(find_subject("Tokenizer"));
  EXPECT_EQ(j["name"], "Tokenizer");
  EXPECT_TRUE(j.dump().find("hasMoreTokens") != std::string::npos);
  EXPECT_TRUE(find_subject("Tokenizer").purity().contains_action("hasMoreTokens"));
  EXPECT_FALSE(find_subject("Tokenizer").purity().contains_action("nextToken"));
}
