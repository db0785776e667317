#include "cobp/events.hpp"

#include <gtest/gtest.h>

using namespace cobp;

TEST(Event, RejectsEmptyLabel) { EXPECT_THROW(Event(""), ConfigError); }

TEST(Event, StructuralEqualityAndOrder) {
  EXPECT_EQ(Event("Cold", 1), Event("Cold", 1));
  EXPECT_NE(Event("Cold", 1), Event("Cold", 2));
  EXPECT_LT(Event("Cold", 1), Event("Hot", 0));
  EXPECT_LT(Event("Cold", 1), Event("Cold", 2));
}

TEST(Event, ContextNoticesAreDistinctFromProgramEvents) {
  const Event n = Event::ended("Q1", "5,5");
  EXPECT_TRUE(n.is_context());
  EXPECT_FALSE(Event("CTX.Ended").is_context());
  EXPECT_NE(n, Event("CTX.Ended", n.payload()));
}

TEST(Event, Display) {
  EXPECT_EQ(Event("tick").display(), "tick");
  EXPECT_EQ(Event("Cold", 1).display(), "Cold(1)");
  EXPECT_EQ(Event("die", Value::array({5, 4})).display(), "die(5,4)");
  EXPECT_EQ(Event("on", Value::array({"r1", "light"})).display(), "on(r1,light)");
  EXPECT_EQ(Event::ended("Q1", "5,4").display(), "CTX.Ended(Q1,5,4)");
}

TEST(Event, JsonRoundTrip) {
  for (const auto& e : {Event("move", Value::array({0.3, 0})), Event::ended("Target", "1,3"),
                        Event::ended("NoMovement", "r1", Value{{"seconds", 180}})}) {
    EXPECT_EQ(event_from_json(Value(e)), e);
  }
  EXPECT_THROW(event_from_json(Value{{"payload", 1}}), ConfigError);
}

TEST(EventSet, BasicForms) {
  const Event a("a");
  const Event b("b");
  EXPECT_FALSE(EventSet::none().matches(a));
  EXPECT_FALSE(EventSet().matches(a));
  EXPECT_TRUE(EventSet::all().matches(a));
  EXPECT_TRUE(EventSet::of({a, a}).matches(a));
  EXPECT_FALSE(EventSet::of(a).matches(b));
  EXPECT_TRUE((~EventSet::of(a)).matches(b));
  EXPECT_FALSE((~EventSet::of(a)).matches(a));
  EXPECT_TRUE((EventSet::of(a) | EventSet::of(b)).matches(b));
  EXPECT_EQ((~EventSet::of(a)).kind(), EventSet::Kind::complement);
}

TEST(EventSet, LabelAndPredicates) {
  const Event d("die", Value::array({5, 4}));
  EXPECT_TRUE(EventSet::label("die").matches(d));
  EXPECT_FALSE(EventSet::label("reproduce").matches(d));
  EXPECT_TRUE(EventSet::label("die", "prefix", Value::array({5})).matches(d));
  EXPECT_FALSE(EventSet::label("die", "prefix", Value::array({4})).matches(d));
  const Event o("enter", Value{{"worker", "w1"}, {"room", "r1"}});
  EXPECT_TRUE(EventSet::label("enter", "fields", Value{{"room", "r1"}}).matches(o));
  EXPECT_FALSE(EventSet::label("enter", "fields", Value{{"room", "r2"}}).matches(o));
  EXPECT_THROW(EventSet::label("die", "nope").matches(d), ConfigError);
}

TEST(EventSet, CustomPredicateRegistry) {
  PredicateRegistry reg;
  reg.add("even", [](const Value& p, const Value&) { return p.is_number_integer() && p.get<int>() % 2 == 0; });
  EXPECT_THROW(reg.add("even", nullptr), ConfigError);
  const auto set = EventSet::label("n", "even");
  EXPECT_TRUE(set.matches(Event("n", 4), reg));
  EXPECT_FALSE(set.matches(Event("n", 3), reg));
}

TEST(EventSet, EndedMatchesOnlyItsNotice) {
  const auto s = EventSet::ended("Target", "1,3");
  EXPECT_TRUE(s.matches(Event::ended("Target", "1,3")));
  EXPECT_FALSE(s.matches(Event::ended("Target", "1,5")));
  EXPECT_FALSE(s.matches(Event("CTX.Ended", Value{{"query", "Target"}, {"key", "1,3"}})));
}

TEST(EventSet, JsonForms) {
  EXPECT_EQ(EventSet::all().to_json(), "all");
  EXPECT_EQ(EventSet::none().to_json(), "none");
  EXPECT_TRUE(EventSet::of(Event("a")).to_json().contains("explicit"));
  EXPECT_TRUE((~EventSet::all()).to_json().contains("not"));
  EXPECT_TRUE((EventSet::all() | EventSet::none()).to_json().contains("union"));
  EXPECT_EQ(EventSet::label("die").to_json().at("label"), "die");
  // Explicit sets are normalised.
  EXPECT_EQ(EventSet::of({Event("b"), Event("a")}).to_json(), EventSet::of({Event("a"), Event("b"), Event("a")}).to_json());
}

TEST(SyncStatement, DedupKeepsFirstOccurrence) {
  const SyncStatement s({Event("b"), Event("a"), Event("b")}, EventSet::none(), EventSet::none());
  ASSERT_EQ(s.requested().size(), 2u);
  EXPECT_EQ(s.requested()[0], Event("b"));
  EXPECT_EQ(s.requested()[1], Event("a"));
}

TEST(SyncStatement, ResumesOnRequestedOrWaited) {
  const SyncStatement s({Event("a")}, EventSet::of(Event("w")), EventSet::of(Event("x")));
  EXPECT_TRUE(s.resumes_on(Event("a")));
  EXPECT_TRUE(s.resumes_on(Event("w")));
  EXPECT_FALSE(s.resumes_on(Event("x")));
  EXPECT_TRUE(s.blocks(Event("x")));
  const auto j = s.to_json();
  EXPECT_TRUE(j.contains("request") && j.contains("waitFor") && j.contains("block"));
  EXPECT_EQ(s.canonical_text(), j.dump());
}

TEST(SyncStatement, Builders) {
  const SyncStatement s = SyncStatement().requesting({Event("a")}).waiting_for(EventSet::all()).blocking(EventSet::of(Event("b")));
  EXPECT_EQ(s.requested().size(), 1u);
  EXPECT_TRUE(s.waited_for().matches(Event("z")));
  EXPECT_TRUE(s.blocks(Event("b")));
}

TEST(Selectable, RequestedMinusBlockedSortedUnique) {
  const std::vector<SyncStatement> stmts = {
      SyncStatement({Event("c"), Event("a")}, EventSet::none(), EventSet::none()),
      SyncStatement({Event("a"), Event("b")}, EventSet::none(), EventSet::of(Event("c"))),
  };
  const auto sel = selectable(stmts);
  ASSERT_EQ(sel.size(), 2u);
  EXPECT_EQ(sel[0], Event("a"));
  EXPECT_EQ(sel[1], Event("b"));
  EXPECT_TRUE(selectable({}).empty());
}

TEST(Selectable, WaitedEventsAreNotSelectable) {
  EXPECT_TRUE(selectable({SyncStatement({}, EventSet::all(), EventSet::none())}).empty());
}
