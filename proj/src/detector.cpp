#include "walksense/detector.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#define CPPHTTPLIB_NO_EXCEPTIONS
#include <httplib.h>

#include "walksense/image_io.hpp"

namespace walksense {

using nlohmann::json;

std::string to_ndrec_line(const Detection2D& det) {
  json j;
  j["frame"] = det.frame_index;
  j["label"] = det.label;
  j["score"] = det.score;
  j["bbox"] = {det.x, det.y, det.w, det.h};
  return j.dump();
}

Detection2D parse_ndrec_line(const std::string& line, const std::string& context) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw std::runtime_error(context + ": not a JSON object");
  }
  for (const char* key : {"frame", "label", "score", "bbox"}) {
    if (!j.contains(key)) throw std::runtime_error(context + ": missing field '" + key + "'");
  }
  if (!j["frame"].is_number_integer() || !j["label"].is_string() || !j["score"].is_number() ||
      !j["bbox"].is_array() || j["bbox"].size() != 4) {
    throw std::runtime_error(context + ": wrong field types");
  }
  for (const auto& v : j["bbox"]) {
    if (!v.is_number_integer()) throw std::runtime_error(context + ": bbox must hold integers");
  }

  Detection2D det;
  det.frame_index = j["frame"].get<std::int64_t>();
  det.label = j["label"].get<std::string>();
  det.score = j["score"].get<double>();
  det.x = j["bbox"][0].get<int>();
  det.y = j["bbox"][1].get<int>();
  det.w = j["bbox"][2].get<int>();
  det.h = j["bbox"][3].get<int>();
  if (det.w < 0 || det.h < 0) throw std::runtime_error(context + ": negative bbox size");
  return det;
}

namespace {

// Clips the box to [0,w)x[0,h); returns false when nothing remains.
bool clip_bbox(Detection2D& det, int frame_width, int frame_height) {
  const int x0 = std::max(det.x, 0);
  const int y0 = std::max(det.y, 0);
  const int x1 = std::min(det.x + det.w, frame_width);
  const int y1 = std::min(det.y + det.h, frame_height);
  if (x1 <= x0 || y1 <= y0) return false;
  det.x = x0;
  det.y = y0;
  det.w = x1 - x0;
  det.h = y1 - y0;
  return true;
}

}  // namespace

LoadedDetections load_detections(const std::string& path, int frame_width, int frame_height) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open detections file: " + path);

  LoadedDetections out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    Detection2D det = parse_ndrec_line(line, path + ":" + std::to_string(line_no));
    det.score = std::clamp(det.score, 0.0, 1.0);

    Detection2D clipped = det;
    if (!clip_bbox(clipped, frame_width, frame_height)) {
      out.warnings.push_back(path + ":" + std::to_string(line_no) +
                             ": bbox entirely outside frame, dropped");
      continue;
    }
    if (clipped.x != det.x || clipped.y != det.y || clipped.w != det.w || clipped.h != det.h) {
      out.warnings.push_back(path + ":" + std::to_string(line_no) + ": bbox clipped to frame");
    }
    out.by_frame[clipped.frame_index].push_back(std::move(clipped));
  }
  return out;
}

std::vector<Detection2D> query_remote_detector(const RgbFrame& rgb,
                                               const DetectionSource& source) {
  if (source.kind != DetectionSource::Kind::remote) {
    throw std::invalid_argument("query_remote_detector: source is not remote");
  }

  const std::vector<std::uint8_t> body = encode_png_rgb8(rgb);
  httplib::Client client(source.target);
  client.set_connection_timeout(0, source.timeout_ms * 1000);
  client.set_read_timeout(0, source.timeout_ms * 1000);
  client.set_write_timeout(0, source.timeout_ms * 1000);

  httplib::Headers headers{{"X-Frame-Index", std::to_string(rgb.frame_index)}};

  httplib::Error last_error = httplib::Error::Success;
  for (int attempt = 0; attempt <= source.retries; ++attempt) {
    httplib::Result res = client.Post("/detect", headers,
                                      reinterpret_cast<const char*>(body.data()), body.size(),
                                      "image/png");
    if (!res) {
      last_error = res.error();
      continue;  // timeouts and transport hiccups consume the retry budget
    }
    if (res->status != 200) {
      throw TransportError("detector returned HTTP " + std::to_string(res->status));
    }

    std::vector<Detection2D> detections;
    std::istringstream lines(res->body);
    std::string line;
    int line_no = 0;
    while (std::getline(lines, line)) {
      ++line_no;
      if (line.empty()) continue;
      Detection2D det;
      try {
        det = parse_ndrec_line(line, "response line " + std::to_string(line_no));
      } catch (const std::runtime_error& e) {
        throw MalformedResponseError(e.what());
      }
      if (det.score < 0.0 || det.score > 1.0) {
        throw MalformedResponseError("response line " + std::to_string(line_no) +
                                     ": score " + std::to_string(det.score) +
                                     " outside [0, 1]");
      }
      det.frame_index = rgb.frame_index;  // caller correlates by request frame
      detections.push_back(std::move(det));
    }
    return detections;
  }

  const std::string detail = httplib::to_string(last_error);
  if (last_error == httplib::Error::ConnectionTimeout || last_error == httplib::Error::Read ||
      last_error == httplib::Error::Write) {
    throw TimeoutError("detector timed out after " + std::to_string(source.retries + 1) +
                       " attempts (" + detail + ")");
  }
  throw TransportError("detector unreachable: " + detail);
}

}  // namespace walksense
