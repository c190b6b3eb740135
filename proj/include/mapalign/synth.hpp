#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mapalign/core.hpp"

namespace mapalign::synth {

struct SynthConfig {
    double score_threshold = 0.5;
    std::uint64_t min_instance_area = 1;
    int max_displacement = 0;  // pixels per axis; 0 disables displacement
    std::uint64_t random_seed = 0;
    int workers = 1;
};

void check_config(const SynthConfig& config);  // throws ConfigError

struct SyntheticVideo {
    VideoRecord video;  // video_id 0 until placed in a dataset
    std::vector<InstanceTrack> tracks;
};

// Duplicates an image's pseudo masks into a two-frame video: one track per
// kept detection, identical masks in both frames. Detections below the score
// or area threshold are dropped; with nothing kept the image is excluded and
// the result is absent.
std::optional<SyntheticVideo> make_synthetic_video(const std::string& image_name,
                                                   const FrameDetections& detections,
                                                   const SynthConfig& config);

// Translates each track's frame-1 mask by an independent uniform integer
// offset in [-d, d] per axis, drawn from the stream seeded by
// (config.random_seed, image_name). Pixels shifted out of bounds are dropped;
// a fully shifted-out mask becomes absent. d == 0 returns the input untouched.
std::vector<InstanceTrack> displace_second_frame(std::vector<InstanceTrack> tracks,
                                                 const SynthConfig& config,
                                                 std::string_view image_name);

struct SynthStats {
    std::size_t images_in = 0;
    std::size_t excluded = 0;
    std::size_t videos_out = 0;
    std::vector<std::string> warnings;
};

// One video per non-excluded image; detection files are processed in sorted
// filename order and track/video ids are assigned in that order, so output is
// deterministic for a given seed. Each detection file holds one frame of
// pseudo masks and pairs with <stem>.png inside image_dir.
DatasetManifest build_synthetic_dataset(std::vector<std::filesystem::path> detection_files,
                                        const std::filesystem::path& image_dir,
                                        const SynthConfig& config,
                                        SynthStats* stats = nullptr);

}  // namespace mapalign::synth
