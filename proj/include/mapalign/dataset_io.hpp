#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mapalign/core.hpp"

namespace mapalign::dataset_io {

struct LoadedManifest {
    DatasetManifest manifest;
    std::vector<Violation> violations;  // validate_manifest at load time
};

// Parses a manifest file (schema below). Structural problems throw ParseError
// with byte/field context; invariant breaches come back as violations.
//
// Schema, chosen to match the YouTube-VIS ecosystem:
//   videos:      [{id, height, width, file_names, timestamps?}]
//   annotations: [{id, video_id, category_id, score?, segmentations:
//                  [null | {size:[H,W], counts: [ints] | "compressed"}]}]
//   categories:  [{id, name}]
// Unknown fields anywhere are preserved opaquely and re-emitted on write.
LoadedManifest read_manifest(const std::filesystem::path& path);

enum class CountsEncoding { Plain, Compressed };

struct WriteOptions {
    CountsEncoding counts = CountsEncoding::Plain;
};

// Refuses invalid manifests (ValidationError listing the violations).
// Output is deterministic: repeated writes of one manifest are byte-identical.
void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path,
                    const WriteOptions& options = {});

/// Serialized per-frame detections of one video series.
struct DetectionSeries {
    std::int64_t video_id = 0;
    std::vector<FrameDetections> frames;  // ordered by frame index
};

DetectionSeries read_detections(const std::filesystem::path& path);
void write_detections(const DetectionSeries& series, const std::filesystem::path& path);

// Wraps tracks into a single-video manifest. Tracks with track_id <= 0 get
// fresh ids; duplicate supplied ids are an error. An empty category list
// falls back to default_categories() plus entries for any other ids present.
DatasetManifest tracks_to_manifest(const VideoRecord& video,
                                   std::vector<InstanceTrack> tracks,
                                   std::vector<Category> categories = {});

// COCO-style compressed RLE strings (LEB128 variant, 6 bits per char).
std::string rle_counts_to_string(const std::vector<std::uint32_t>& counts);
std::vector<std::uint32_t> rle_counts_from_string(const std::string& s);

}  // namespace mapalign::dataset_io
