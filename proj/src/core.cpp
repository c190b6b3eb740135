#include "mapalign/core.hpp"

#include <cstdint>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace mapalign {

std::string check_rle(const RleMask& mask) {
    if (mask.height <= 0 || mask.width <= 0)
        return "non-positive dimensions";
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < mask.counts.size(); ++i) {
        if (i > 0 && mask.counts[i] == 0)
            return "zero-length run after the first";
        total += mask.counts[i];
    }
    const std::uint64_t expected =
        static_cast<std::uint64_t>(mask.height) * static_cast<std::uint64_t>(mask.width);
    if (total != expected)
        return "run total " + std::to_string(total) + " != height*width " +
               std::to_string(expected);
    return {};
}

const VideoRecord* DatasetManifest::find_video(std::int64_t video_id) const {
    for (const auto& v : videos)
        if (v.video_id == video_id) return &v;
    return nullptr;
}

std::vector<Category> default_categories() {
    return {Category{1, "building", Json::object()}};
}

std::string to_string(const Violation& v) {
    return v.record + ": " + v.rule + (v.detail.empty() ? "" : " (" + v.detail + ")");
}

namespace {

std::uint64_t foreground_pixels(const RleMask& mask) {
    std::uint64_t n = 0;
    for (std::size_t i = 1; i < mask.counts.size(); i += 2) n += mask.counts[i];
    return n;
}

}  // namespace

std::vector<Violation> validate_manifest(const DatasetManifest& manifest) {
    std::vector<Violation> out;
    auto flag = [&out](std::string record, std::string rule, std::string detail = {}) {
        out.push_back({std::move(record), std::move(rule), std::move(detail)});
    };

    std::unordered_map<std::int64_t, const VideoRecord*> videos_by_id;
    for (const auto& video : manifest.videos) {
        const std::string rec = "video id=" + std::to_string(video.video_id);
        if (!videos_by_id.emplace(video.video_id, &video).second)
            flag(rec, "duplicate-video-id");
        if (video.frame_count < 1)
            flag(rec, "frame-count-not-positive",
                 "frame_count=" + std::to_string(video.frame_count));
        if (video.height <= 0 || video.width <= 0)
            flag(rec, "non-positive-dimensions",
                 std::to_string(video.height) + "x" + std::to_string(video.width));
        if (static_cast<int>(video.frame_names.size()) != video.frame_count)
            flag(rec, "frame-name-count-mismatch",
                 std::to_string(video.frame_names.size()) + " names for " +
                     std::to_string(video.frame_count) + " frames");
        if (video.timestamps &&
            static_cast<int>(video.timestamps->size()) != video.frame_count)
            flag(rec, "timestamp-count-mismatch",
                 std::to_string(video.timestamps->size()) + " timestamps for " +
                     std::to_string(video.frame_count) + " frames");
    }

    std::unordered_set<int> category_ids;
    for (const auto& cat : manifest.categories) {
        if (!category_ids.insert(cat.category_id).second)
            flag("category id=" + std::to_string(cat.category_id), "duplicate-category-id");
    }

    std::unordered_set<std::int64_t> track_ids;
    for (const auto& ann : manifest.annotations) {
        const auto& track = ann.track;
        const std::string rec = "annotation id=" + std::to_string(track.track_id);
        if (!track_ids.insert(track.track_id).second)
            flag(rec, "duplicate-track-id");
        if (!category_ids.count(track.category_id))
            flag(rec, "dangling-category-id",
                 "category_id=" + std::to_string(track.category_id));
        if (track.score && (*track.score < 0.0 || *track.score > 1.0))
            flag(rec, "score-out-of-range", "score=" + std::to_string(*track.score));

        auto it = videos_by_id.find(ann.video_id);
        if (it == videos_by_id.end()) {
            flag(rec, "dangling-video-id", "video_id=" + std::to_string(ann.video_id));
            continue;
        }
        const VideoRecord& video = *it->second;
        if (static_cast<int>(track.masks.size()) != video.frame_count)
            flag(rec, "mask-count-mismatch",
                 std::to_string(track.masks.size()) + " masks for " +
                     std::to_string(video.frame_count) + " frames");

        bool any_foreground = false;
        for (std::size_t t = 0; t < track.masks.size(); ++t) {
            if (!track.masks[t]) continue;
            const RleMask& mask = *track.masks[t];
            const std::string frame_rec = rec + " frame " + std::to_string(t);
            if (auto err = check_rle(mask); !err.empty()) {
                flag(frame_rec, "malformed-rle", err);
                continue;
            }
            if (mask.height != video.height || mask.width != video.width)
                flag(frame_rec, "mask-dimension-mismatch",
                     std::to_string(mask.height) + "x" + std::to_string(mask.width) +
                         " vs video " + std::to_string(video.height) + "x" +
                         std::to_string(video.width));
            if (foreground_pixels(mask) > 0) any_foreground = true;
        }
        if (!any_foreground)
            flag(rec, "empty-track", "no frame has a non-empty mask");
    }

    return out;
}

}  // namespace mapalign
