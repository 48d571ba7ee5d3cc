#include <gtest/gtest.h>

#include <sstream>

#include "harness.hpp"

using namespace dyncolor;

TEST(Trace, ZeroOpsIsEmpty) {
  const Trace t = generate({10, 4, 0, 1, TraceMode::UniformRandom});
  EXPECT_TRUE(t.events.empty());
}

TEST(Trace, GeneratedTracesAreLegal) {
  for (auto mode : {TraceMode::UniformRandom, TraceMode::InsertHeavy, TraceMode::SlidingWindow,
                    TraceMode::ConflictHeavy}) {
    const Trace t = generate({100, 8, 10000, 3, mode});
    ASSERT_EQ(t.events.size(), 10000u) << to_string(mode);
    DynamicGraph g(t.n, t.bound());
    std::uint64_t deletes = 0;
    for (const auto& e : t.events) {
      ASSERT_NO_THROW(g.apply(e)) << to_string(mode);
      deletes += e.kind == UpdateKind::Delete;
    }
    EXPECT_GT(deletes, 0u) << to_string(mode);
    EXPECT_TRUE(g.check_adjacency());
  }
}

TEST(Trace, AdaptiveTraceIsLegal) {
  const Trace t = generate({50, std::nullopt, 3000, 9, TraceMode::SlidingWindow});
  DynamicGraph g(t.n, t.bound());
  for (const auto& e : t.events) ASSERT_NO_THROW(g.apply(e));
}

TEST(Trace, GenerationIsPure) {
  const TraceSpec spec{80, 16, 5000, 42, TraceMode::ConflictHeavy};
  EXPECT_EQ(generate(spec), generate(spec));
  EXPECT_NE(generate(spec), generate({80, 16, 5000, 43, TraceMode::ConflictHeavy}));
}

TEST(Trace, ConflictHeavyJoinsEqualColorsUnderGreedy) {
  const Trace t = generate({200, 16, 10000, 5, TraceMode::ConflictHeavy});
  DynamicGraph g(t.n, t.bound());
  GreedyColoring greedy(g);
  g.attach(&greedy);
  std::uint64_t inserts = 0, conflicts = 0;
  for (const auto& e : t.events) {
    const UpdateReceipt r = g.apply(e);
    if (r.kind == UpdateKind::Insert) {
      ++inserts;
      conflicts += r.conflicts;
    }
  }
  EXPECT_GE(10 * conflicts, 3 * inserts);
}

TEST(Trace, RoundTrip) {
  const Trace t = generate({30, 5, 500, 7, TraceMode::SlidingWindow});
  EXPECT_EQ(parse_trace(print_trace(t)), t);
  const Trace a = generate({30, std::nullopt, 200, 7, TraceMode::InsertHeavy});
  EXPECT_EQ(parse_trace(print_trace(a)), a);
}

TEST(Trace, ParseErrors) {
  for (const char* text : {"+ 0 1\n", "# n=3 delta=2\n* 0 1\n", "# n=3 delta=2\n+ 0 7\n", "# n=3 delta=x\n",
                           "# n=3\n+ 0 1 2\n"}) {
    try {
      parse_trace(std::string(text));
      ADD_FAILURE() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::TraceParseError) << text;
    }
  }
}

TEST(Harness, EmptyTracePasses) {
  Trace t;
  t.n = 5;
  t.delta = 4;
  std::ostringstream csv;
  const RunSummary s = run(t, {}, &csv);
  EXPECT_TRUE(s.passed());
  EXPECT_EQ(csv.str(), std::string(kCsvHeader) + "\n");
}

TEST(Harness, RunIsDeterministic) {
  const Trace t = generate({100, 8, 3000, 11, TraceMode::UniformRandom});
  RunOptions opt;
  opt.engine_options.seed = 11;
  opt.audit_every = 500;
  std::ostringstream a, b, audits;
  EXPECT_TRUE(run(t, opt, &a, &audits).passed());
  EXPECT_TRUE(run(t, opt, &b).passed());
  EXPECT_EQ(a.str(), b.str());
  // 3000 / 500 periodic audits plus the final one, one JSON object per line.
  std::istringstream lines(audits.str());
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_TRUE(j.at("passed").get<bool>());
    ++count;
  }
  EXPECT_EQ(count, 7);
}

TEST(Harness, AllEnginesPassOnEveryMode) {
  for (auto mode : {TraceMode::UniformRandom, TraceMode::InsertHeavy, TraceMode::SlidingWindow,
                    TraceMode::ConflictHeavy}) {
    const Trace t = generate({150, 20, 4000, 2, mode});
    for (const char* engine : kEngineNames) {
      RunOptions opt;
      opt.engine = engine;
      opt.audit_every = 400;
      const RunSummary s = run(t, opt);
      EXPECT_TRUE(s.passed()) << engine << " " << to_string(mode);
      EXPECT_LE(s.palette_used, s.palette) << engine;
    }
  }
}

TEST(Harness, CompareTable) {
  const Trace t = generate({120, 32, 3000, 4, TraceMode::ConflictHeavy});
  RunOptions opt;
  opt.audit_every = 0;
  const auto rows = compare(t, {"greedy-baseline", "rand-vc", "det-vc"}, opt);
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& r : rows) EXPECT_TRUE(r.passed()) << r.engine;
  EXPECT_EQ(rows[2].palette, DetParams::compute(32).palette());
  std::ostringstream table;
  print_summary_table(table, rows);
  EXPECT_NE(table.str().find("rand-vc"), std::string::npos);

  const auto one = compare(t, {"edge-c"}, opt);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].engine, "edge-c");
}

TEST(Harness, DetFallsBackBelowMinimumDelta) {
  DynamicGraph g(10, DegreeBound::bounded(8));
  const auto eng = make_engine("det-vc", g);
  EXPECT_EQ(eng->kind(), EngineKind::Greedy);
  DynamicGraph a(10, DegreeBound::adaptive());
  EXPECT_THROW(make_engine("det-vc", a), Error);
  EXPECT_THROW(make_engine("nope", g), Error);
}
