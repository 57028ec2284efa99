#include <doctest.h>

#include "walksense/feedback.hpp"
#include "walksense/rng.hpp"

using namespace walksense;

namespace {

DirectionDecision decision(WalkAction action, double angle = 0.0) {
  DirectionDecision d;
  d.action = action;
  d.turn_angle_deg = angle;
  d.chosen_sector = 58;
  return d;
}

FusedObject object(const std::string& label, double distance, double theta_h) {
  FusedObject obj;
  obj.label = label;
  obj.distance = distance;
  obj.location.theta_h_deg = theta_h;
  obj.bucket = direction_bucket(theta_h, 5.0);
  return obj;
}

}  // namespace

TEST_SUITE("feedback") {

TEST_CASE("rule table: blocked, straight, turn") {
  FeedbackState state;

  SUBCASE("idle + blocked starts the beep with a search hint") {
    const auto events = navigation_feedback(decision(WalkAction::blocked), state, 3, 100);
    REQUIRE(events.size() == 2);
    CHECK(events[0].kind == EventKind::beep_start);
    CHECK(events[1].kind == EventKind::turn_hint);
    CHECK(events[1].payload == "search left or right");
    CHECK(events[0].frame_index == 3);
    CHECK(events[0].timestamp_us == 100);
    CHECK(state.beeping);
  }

  SUBCASE("beeping + blocked stays silent") {
    navigation_feedback(decision(WalkAction::blocked), state, 0, 0);
    CHECK(navigation_feedback(decision(WalkAction::blocked), state, 1, 0).empty());
  }

  SUBCASE("beeping + straight stops the beep") {
    navigation_feedback(decision(WalkAction::blocked), state, 0, 0);
    const auto events = navigation_feedback(decision(WalkAction::straight), state, 1, 0);
    REQUIRE(events.size() == 1);
    CHECK(events[0].kind == EventKind::beep_stop);
    CHECK_FALSE(state.beeping);
  }

  SUBCASE("idle + straight emits nothing") {
    CHECK(navigation_feedback(decision(WalkAction::straight), state, 0, 0).empty());
  }

  SUBCASE("turn emits a hint with angle and side") {
    auto events = navigation_feedback(decision(WalkAction::turn, 12.5), state, 0, 0);
    REQUIRE(events.size() == 1);
    CHECK(events[0].kind == EventKind::turn_hint);
    CHECK(events[0].payload == "turn right 12.5 degrees");

    events = navigation_feedback(decision(WalkAction::turn, -7.0), state, 1, 0);
    CHECK(events[0].payload == "turn left 7.0 degrees");
  }

  SUBCASE("beeping + turn stops the beep before the hint") {
    navigation_feedback(decision(WalkAction::blocked), state, 0, 0);
    const auto events = navigation_feedback(decision(WalkAction::turn, -9.5), state, 1, 0);
    REQUIRE(events.size() == 2);
    CHECK(events[0].kind == EventKind::beep_stop);
    CHECK(events[1].kind == EventKind::turn_hint);
  }
}

TEST_CASE("beep alternation over a scripted 500-frame run") {
  Rng rng(71);
  FeedbackState state;
  std::vector<EventKind> beeps;
  int blocked_episodes = 0;
  bool in_episode = false;

  for (int frame = 0; frame < 500; ++frame) {
    // scripted episodes: blocked stretches every ~60 frames
    const bool blocked =
        (frame / 30) % 2 == 1 && frame % 30 < 10 + static_cast<int>(rng.bounded(10));
    DirectionDecision d = blocked
        ? decision(WalkAction::blocked)
        : (rng.unit() < 0.5 ? decision(WalkAction::straight)
                            : decision(WalkAction::turn, rng.uniform(5.5, 25.0)));
    if (blocked && !in_episode) ++blocked_episodes;
    in_episode = blocked;

    for (const FeedbackEvent& e : navigation_feedback(d, state, frame, frame * 33333)) {
      if (e.kind == EventKind::beep_start || e.kind == EventKind::beep_stop) {
        beeps.push_back(e.kind);
      }
    }
  }

  REQUIRE(blocked_episodes >= 5);
  REQUIRE(!beeps.empty());
  CHECK(beeps[0] == EventKind::beep_start);
  for (std::size_t i = 1; i < beeps.size(); ++i) {
    CHECK(beeps[i] != beeps[i - 1]);
  }
}

TEST_CASE("describe: payload format and nearest-first order") {
  const auto events = describe_objects(
      {object("chair", 2.4, 10.0), object("person", 1.1, -12.0)}, 40, 0);
  REQUIRE(events.size() == 2);
  CHECK(events[0].kind == EventKind::speech);
  CHECK(events[0].payload == "person, 1.1 meters, left-front");
  CHECK(events[1].payload == "chair, 2.4 meters, right-front");
  CHECK(events[0].frame_index == 40);
}

TEST_CASE("describe: figure example wording") {
  const auto events = describe_objects({object("chair", 1.8, -12.0)}, 0, 0);
  REQUIRE(events.size() == 1);
  CHECK(events[0].payload == "chair, 1.8 meters, left-front");
}

TEST_CASE("describe: bucket boundaries are closed") {
  const auto front_lo = describe_objects({object("box", 1.0, -5.0)}, 0, 0);
  const auto front_hi = describe_objects({object("box", 1.0, 5.0)}, 0, 0);
  CHECK(front_lo[0].payload == "box, 1.0 meters, front");
  CHECK(front_hi[0].payload == "box, 1.0 meters, front");
}

TEST_CASE("describe: distance ties order by label, rounding to 0.1 m") {
  const auto events = describe_objects(
      {object("table", 2.0, 0.0), object("chair", 2.0, 0.0), object("bag", 1.97, 0.0)}, 0, 0);
  REQUIRE(events.size() == 3);
  CHECK(events[0].payload == "bag, 2.0 meters, front");  // 1.97 rounds to 2.0
  CHECK(events[1].payload == "chair, 2.0 meters, front");
  CHECK(events[2].payload == "table, 2.0 meters, front");
}

TEST_CASE("describe: empty set speaks once") {
  const auto events = describe_objects({}, 7, 0);
  REQUIRE(events.size() == 1);
  CHECK(events[0].kind == EventKind::speech);
  CHECK(events[0].payload == "no objects detected");
}

TEST_CASE("event kind names round-trip") {
  for (EventKind kind : {EventKind::beep_start, EventKind::beep_stop, EventKind::turn_hint,
                         EventKind::speech}) {
    CHECK(event_kind_from_string(to_string(kind)) == kind);
  }
  CHECK_THROWS_AS(event_kind_from_string("hum"), std::invalid_argument);
}

}  // TEST_SUITE
