#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "walksense/direction.hpp"
#include "walksense/fusion.hpp"

namespace walksense {

enum class EventKind { beep_start, beep_stop, turn_hint, speech };

const char* to_string(EventKind kind);

/// Parses the serialized kind name back; throws std::invalid_argument on
/// unknown names.
EventKind event_kind_from_string(const std::string& name);

struct FeedbackEvent {
  std::int64_t frame_index = 0;
  EventKind kind = EventKind::turn_hint;
  std::string payload;
  std::int64_t timestamp_us = 0;
};

/// Per-stream beeper state; beep_start and beep_stop strictly alternate.
struct FeedbackState {
  bool beeping = false;
  std::optional<DirectionDecision> last_decision;
};

/// Blocked raises the beep (once) plus a search hint; leaving Blocked
/// stops it; turns add a hint with angle and side. Positive turn angles
/// are to the user's right.
std::vector<FeedbackEvent> navigation_feedback(const DirectionDecision& decision,
                                               FeedbackState& state, std::int64_t frame_index,
                                               std::int64_t timestamp_us);

/// One speech event per object, nearest first (ties by label), payload
/// "<label>, <distance> meters, <bucket>" with the distance rounded to
/// 0.1 m. No objects yields a single "no objects detected" event.
std::vector<FeedbackEvent> describe_objects(const std::vector<FusedObject>& objects,
                                            std::int64_t frame_index,
                                            std::int64_t timestamp_us);

}  // namespace walksense
