#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "walksense/fusion.hpp"
#include "walksense/geometry.hpp"

namespace walksense {

/// Where Detection2D payloads come from: an ndrec replay file for offline
/// datasets or a remote inference endpoint for live use.
struct DetectionSource {
  enum class Kind { replay, remote };
  Kind kind = Kind::replay;
  std::string target;  // file path or http://host:port
  int timeout_ms = 1000;
  int retries = 2;
};

struct TimeoutError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TransportError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MalformedResponseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LoadedDetections {
  std::map<std::int64_t, std::vector<Detection2D>> by_frame;
  std::vector<std::string> warnings;  // e.g. clipped boxes
};

/// Parses an ndrec file (one JSON detection record per line: frame,
/// label, score, bbox [x,y,w,h]). Scores are clamped to [0,1]; boxes are
/// clipped to frame_width x frame_height with a warning. Throws
/// std::runtime_error with the line number on malformed records.
LoadedDetections load_detections(const std::string& path, int frame_width, int frame_height);

/// Serializes one detection in the ndrec line format.
std::string to_ndrec_line(const Detection2D& det);

/// Parses one ndrec line; context is prepended to error messages.
Detection2D parse_ndrec_line(const std::string& line, const std::string& context);

/// Sends the PNG-encoded frame to <target>/detect with the frame index in
/// the X-Frame-Index header and parses the ndrec response body. Each
/// returned detection carries the request's frame_index. Throws
/// TimeoutError after the retry budget, TransportError on connection
/// failures, MalformedResponseError on invalid payloads. Never returns a
/// partial list.
std::vector<Detection2D> query_remote_detector(const RgbFrame& rgb,
                                               const DetectionSource& source);

}  // namespace walksense
