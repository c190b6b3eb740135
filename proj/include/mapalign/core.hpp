#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace mapalign {

using Json = nlohmann::json;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class MaskError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

/// Run-length encoded binary mask. Runs traverse the pixel grid in
/// column-major order and alternate background/foreground, starting with
/// the background run (length 0 when the first pixel is foreground).
struct RleMask {
    int height = 0;
    int width = 0;
    std::vector<std::uint32_t> counts;

    bool operator==(const RleMask&) const = default;
};

// Empty string when the mask is canonical, otherwise the violated rule.
// Canonical form: positive dimensions, sum(counts) == height*width, and no
// zero-length run after the first.
std::string check_rle(const RleMask& mask);

/// One entity's mask sequence across the frames of a video. An absent slot
/// means the entity does not exist in that frame and behaves as an all-zero
/// mask in any algebra.
struct InstanceTrack {
    std::int64_t track_id = 0;
    int category_id = 1;
    std::optional<double> score;  // absent for ground truth
    std::vector<std::optional<RleMask>> masks;

    bool operator==(const InstanceTrack&) const = default;
};

struct VideoRecord {
    std::int64_t video_id = 0;
    int frame_count = 0;
    int height = 0;
    int width = 0;
    std::vector<std::string> frame_names;
    std::optional<std::vector<std::string>> timestamps;  // e.g. map years
    Json extra = Json::object();  // unknown manifest fields, kept for round-trip

    bool operator==(const VideoRecord&) const = default;
};

struct Detection {
    RleMask mask;
    double score = 0.0;
    int category_id = 1;

    bool operator==(const Detection&) const = default;
};

/// Scored instance masks of a single frame, the linker's unit of input.
struct FrameDetections {
    int frame_index = 0;
    std::vector<Detection> detections;

    bool operator==(const FrameDetections&) const = default;
};

struct TrackAnnotation {
    std::int64_t video_id = 0;
    InstanceTrack track;
    Json extra = Json::object();

    bool operator==(const TrackAnnotation&) const = default;
};

struct Category {
    int category_id = 1;
    std::string name;
    Json extra = Json::object();

    bool operator==(const Category&) const = default;
};

/// YouTube-VIS style container of videos, track annotations and categories.
struct DatasetManifest {
    std::vector<VideoRecord> videos;
    std::vector<TrackAnnotation> annotations;
    std::vector<Category> categories;
    Json extra = Json::object();

    bool operator==(const DatasetManifest&) const = default;

    const VideoRecord* find_video(std::int64_t video_id) const;
};

// Single-class default used when nothing else is declared.
std::vector<Category> default_categories();

struct Violation {
    std::string record;  // offending record, e.g. "annotation id=7"
    std::string rule;
    std::string detail;
};

std::string to_string(const Violation& v);

// Empty result iff every manifest invariant holds. Violations are data, not
// failures; callers decide whether to refuse the manifest.
std::vector<Violation> validate_manifest(const DatasetManifest& manifest);

}  // namespace mapalign
