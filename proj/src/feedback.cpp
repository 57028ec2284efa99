#include "walksense/feedback.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace walksense {

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::beep_start: return "beep_start";
    case EventKind::beep_stop: return "beep_stop";
    case EventKind::turn_hint: return "turn_hint";
    case EventKind::speech: return "speech";
  }
  return "?";
}

EventKind event_kind_from_string(const std::string& name) {
  if (name == "beep_start") return EventKind::beep_start;
  if (name == "beep_stop") return EventKind::beep_stop;
  if (name == "turn_hint") return EventKind::turn_hint;
  if (name == "speech") return EventKind::speech;
  throw std::invalid_argument("unknown event kind: " + name);
}

namespace {

std::string format_angle(double deg) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", std::abs(deg));
  return buf;
}

}  // namespace

std::vector<FeedbackEvent> navigation_feedback(const DirectionDecision& decision,
                                               FeedbackState& state, std::int64_t frame_index,
                                               std::int64_t timestamp_us) {
  std::vector<FeedbackEvent> events;
  const auto emit = [&](EventKind kind, std::string payload) {
    events.push_back({frame_index, kind, std::move(payload), timestamp_us});
  };

  switch (decision.action) {
    case WalkAction::blocked:
      if (!state.beeping) {
        emit(EventKind::beep_start, "");
        emit(EventKind::turn_hint, "search left or right");
        state.beeping = true;
      }
      break;
    case WalkAction::straight:
      if (state.beeping) {
        emit(EventKind::beep_stop, "");
        state.beeping = false;
      }
      break;
    case WalkAction::turn:
      if (state.beeping) {
        emit(EventKind::beep_stop, "");
        state.beeping = false;
      }
      emit(EventKind::turn_hint,
           std::string("turn ") + (decision.turn_angle_deg > 0.0 ? "right " : "left ") +
               format_angle(decision.turn_angle_deg) + " degrees");
      break;
  }
  state.last_decision = decision;
  return events;
}

std::vector<FeedbackEvent> describe_objects(const std::vector<FusedObject>& objects,
                                            std::int64_t frame_index,
                                            std::int64_t timestamp_us) {
  std::vector<FeedbackEvent> events;
  if (objects.empty()) {
    events.push_back({frame_index, EventKind::speech, "no objects detected", timestamp_us});
    return events;
  }

  std::vector<const FusedObject*> order;
  order.reserve(objects.size());
  for (const FusedObject& obj : objects) order.push_back(&obj);
  std::stable_sort(order.begin(), order.end(), [](const FusedObject* a, const FusedObject* b) {
    if (a->distance != b->distance) return a->distance < b->distance;
    return a->label < b->label;
  });

  for (const FusedObject* obj : order) {
    char dist[32];
    std::snprintf(dist, sizeof(dist), "%.1f", obj->distance);
    events.push_back({frame_index, EventKind::speech,
                      obj->label + ", " + dist + " meters, " + to_string(obj->bucket),
                      timestamp_us});
  }
  return events;
}

}  // namespace walksense
