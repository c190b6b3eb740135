#include "mapalign/dataset_io.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_set>

#include "mapalign/mask_ops.hpp"

namespace mapalign::dataset_io {

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad())
        throw IoError("read failure on " + path.string());
    return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open " + path.string() + " for writing");
    out << data;
    out.flush();
    if (!out)
        throw IoError("write failure on " + path.string());
}

Json parse_json(const std::string& text, const std::filesystem::path& path) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ParseError(path.string() + ": JSON parse error at byte " +
                         std::to_string(e.byte) + ": " + e.what());
    }
}

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& where,
                       const std::string& what) {
    throw ParseError(path.string() + ": " + where + ": " + what);
}

std::int64_t as_int(const Json& j, const std::filesystem::path& path, const std::string& where) {
    if (!j.is_number_integer())
        fail(path, where, "expected an integer");
    return j.get<std::int64_t>();
}

double as_number(const Json& j, const std::filesystem::path& path, const std::string& where) {
    if (!j.is_number())
        fail(path, where, "expected a number");
    return j.get<double>();
}

std::string as_string(const Json& j, const std::filesystem::path& path, const std::string& where) {
    if (!j.is_string())
        fail(path, where, "expected a string");
    return j.get<std::string>();
}

std::vector<std::uint32_t> parse_counts(const Json& j, const std::filesystem::path& path,
                                        const std::string& where) {
    if (j.is_string()) {
        try {
            return rle_counts_from_string(j.get<std::string>());
        } catch (const ParseError& e) {
            fail(path, where, e.what());
        }
    }
    if (!j.is_array())
        fail(path, where, "counts must be an array of integers or a compressed string");
    std::vector<std::uint32_t> counts;
    counts.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto v = as_int(j[i], path, where + "[" + std::to_string(i) + "]");
        if (v < 0 || v > std::numeric_limits<std::uint32_t>::max())
            fail(path, where + "[" + std::to_string(i) + "]", "count out of range");
        counts.push_back(static_cast<std::uint32_t>(v));
    }
    return counts;
}

RleMask parse_segmentation(const Json& j, const std::filesystem::path& path,
                           const std::string& where) {
    if (!j.is_object() || !j.contains("size") || !j.contains("counts"))
        fail(path, where, "segmentation must be {size:[H,W], counts}");
    const Json& size = j["size"];
    if (!size.is_array() || size.size() != 2)
        fail(path, where + ".size", "expected [height, width]");
    RleMask mask;
    mask.height = static_cast<int>(as_int(size[0], path, where + ".size[0]"));
    mask.width = static_cast<int>(as_int(size[1], path, where + ".size[1]"));
    mask.counts = parse_counts(j["counts"], path, where + ".counts");
    return mask;
}

Json segmentation_to_json(const RleMask& mask, CountsEncoding encoding) {
    Json j = Json::object();
    j["size"] = Json::array({mask.height, mask.width});
    if (encoding == CountsEncoding::Compressed)
        j["counts"] = rle_counts_to_string(mask.counts);
    else
        j["counts"] = mask.counts;
    return j;
}

// Every key not consumed by the schema lands in `extra` untouched.
Json collect_extra(const Json& obj, std::initializer_list<const char*> known) {
    Json extra = Json::object();
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (std::find_if(known.begin(), known.end(),
                         [&](const char* k) { return it.key() == k; }) == known.end())
            extra[it.key()] = it.value();
    }
    return extra;
}

VideoRecord parse_video(const Json& j, const std::filesystem::path& path, std::size_t index) {
    const std::string where = "videos[" + std::to_string(index) + "]";
    if (!j.is_object())
        fail(path, where, "expected an object");
    VideoRecord video;
    if (!j.contains("id") || !j.contains("height") || !j.contains("width") ||
        !j.contains("file_names"))
        fail(path, where, "missing one of id/height/width/file_names");
    video.video_id = as_int(j["id"], path, where + ".id");
    video.height = static_cast<int>(as_int(j["height"], path, where + ".height"));
    video.width = static_cast<int>(as_int(j["width"], path, where + ".width"));
    const Json& names = j["file_names"];
    if (!names.is_array())
        fail(path, where + ".file_names", "expected an array");
    for (std::size_t i = 0; i < names.size(); ++i)
        video.frame_names.push_back(
            as_string(names[i], path, where + ".file_names[" + std::to_string(i) + "]"));
    video.frame_count = static_cast<int>(video.frame_names.size());
    if (j.contains("timestamps")) {
        const Json& ts = j["timestamps"];
        if (!ts.is_array())
            fail(path, where + ".timestamps", "expected an array");
        std::vector<std::string> labels;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const Json& t = ts[i];
            if (t.is_string())
                labels.push_back(t.get<std::string>());
            else if (t.is_number())
                labels.push_back(t.dump());
            else
                fail(path, where + ".timestamps[" + std::to_string(i) + "]",
                     "expected a string or number label");
        }
        video.timestamps = std::move(labels);
    }
    video.extra = collect_extra(j, {"id", "height", "width", "file_names", "timestamps"});
    return video;
}

TrackAnnotation parse_annotation(const Json& j, const std::filesystem::path& path,
                                 std::size_t index) {
    const std::string where = "annotations[" + std::to_string(index) + "]";
    if (!j.is_object())
        fail(path, where, "expected an object");
    if (!j.contains("id") || !j.contains("video_id") || !j.contains("category_id") ||
        !j.contains("segmentations"))
        fail(path, where, "missing one of id/video_id/category_id/segmentations");
    TrackAnnotation ann;
    ann.track.track_id = as_int(j["id"], path, where + ".id");
    ann.video_id = as_int(j["video_id"], path, where + ".video_id");
    ann.track.category_id =
        static_cast<int>(as_int(j["category_id"], path, where + ".category_id"));
    if (j.contains("score") && !j["score"].is_null())
        ann.track.score = as_number(j["score"], path, where + ".score");
    const Json& segs = j["segmentations"];
    if (!segs.is_array())
        fail(path, where + ".segmentations", "expected an array");
    for (std::size_t t = 0; t < segs.size(); ++t) {
        if (segs[t].is_null())
            ann.track.masks.push_back(std::nullopt);
        else
            ann.track.masks.push_back(parse_segmentation(
                segs[t], path, where + ".segmentations[" + std::to_string(t) + "]"));
    }
    ann.extra = collect_extra(j, {"id", "video_id", "category_id", "score", "segmentations"});
    return ann;
}

Category parse_category(const Json& j, const std::filesystem::path& path, std::size_t index) {
    const std::string where = "categories[" + std::to_string(index) + "]";
    if (!j.is_object() || !j.contains("id") || !j.contains("name"))
        fail(path, where, "expected an object with id and name");
    Category cat;
    cat.category_id = static_cast<int>(as_int(j["id"], path, where + ".id"));
    cat.name = as_string(j["name"], path, where + ".name");
    cat.extra = collect_extra(j, {"id", "name"});
    return cat;
}

}  // namespace

LoadedManifest read_manifest(const std::filesystem::path& path) {
    const Json root = parse_json(read_file(path), path);
    if (!root.is_object())
        fail(path, "top level", "expected an object");
    if (root.contains("schema_version")) {
        const Json& v = root["schema_version"];
        if (!v.is_number_integer() || v.get<std::int64_t>() != 1)
            throw ParseError(path.string() + ": schema-version mismatch: expected 1, got " +
                             v.dump());
    }

    LoadedManifest loaded;
    DatasetManifest& m = loaded.manifest;
    if (root.contains("videos") && !root["videos"].is_null()) {
        const Json& videos = root["videos"];
        if (!videos.is_array())
            fail(path, "videos", "expected an array");
        for (std::size_t i = 0; i < videos.size(); ++i)
            m.videos.push_back(parse_video(videos[i], path, i));
    }
    if (root.contains("annotations") && !root["annotations"].is_null()) {
        const Json& anns = root["annotations"];
        if (!anns.is_array())
            fail(path, "annotations", "expected an array");
        for (std::size_t i = 0; i < anns.size(); ++i)
            m.annotations.push_back(parse_annotation(anns[i], path, i));
    }
    if (root.contains("categories") && !root["categories"].is_null()) {
        const Json& cats = root["categories"];
        if (!cats.is_array())
            fail(path, "categories", "expected an array");
        for (std::size_t i = 0; i < cats.size(); ++i)
            m.categories.push_back(parse_category(cats[i], path, i));
    }
    m.extra = collect_extra(root, {"videos", "annotations", "categories", "schema_version"});
    loaded.violations = validate_manifest(m);
    return loaded;
}

void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path,
                    const WriteOptions& options) {
    const auto violations = validate_manifest(manifest);
    if (!violations.empty()) {
        std::string msg = "refusing to write invalid manifest to " + path.string() + ":";
        for (const auto& v : violations) msg += "\n  " + to_string(v);
        throw ValidationError(msg);
    }

    Json root = manifest.extra;
    root["schema_version"] = 1;

    Json videos = Json::array();
    for (const auto& v : manifest.videos) {
        Json j = v.extra;
        j["id"] = v.video_id;
        j["height"] = v.height;
        j["width"] = v.width;
        j["file_names"] = v.frame_names;
        if (v.timestamps) j["timestamps"] = *v.timestamps;
        videos.push_back(std::move(j));
    }
    root["videos"] = std::move(videos);

    Json annotations = Json::array();
    for (const auto& ann : manifest.annotations) {
        Json j = ann.extra;
        j["id"] = ann.track.track_id;
        j["video_id"] = ann.video_id;
        j["category_id"] = ann.track.category_id;
        if (ann.track.score) j["score"] = *ann.track.score;
        Json segs = Json::array();
        for (const auto& mask : ann.track.masks) {
            if (mask)
                segs.push_back(segmentation_to_json(*mask, options.counts));
            else
                segs.push_back(nullptr);
        }
        j["segmentations"] = std::move(segs);
        annotations.push_back(std::move(j));
    }
    root["annotations"] = std::move(annotations);

    Json categories = Json::array();
    for (const auto& c : manifest.categories) {
        Json j = c.extra;
        j["id"] = c.category_id;
        j["name"] = c.name;
        categories.push_back(std::move(j));
    }
    root["categories"] = std::move(categories);

    write_file(path, root.dump() + "\n");
}

DetectionSeries read_detections(const std::filesystem::path& path) {
    const Json root = parse_json(read_file(path), path);
    if (!root.is_object() || !root.contains("frames"))
        fail(path, "top level", "expected an object with video_id and frames");
    DetectionSeries series;
    if (root.contains("video_id"))
        series.video_id = as_int(root["video_id"], path, "video_id");
    const Json& frames = root["frames"];
    if (!frames.is_array())
        fail(path, "frames", "expected an array of per-frame detection arrays");

    int height = 0, width = 0;
    for (std::size_t f = 0; f < frames.size(); ++f) {
        const std::string where = "frames[" + std::to_string(f) + "]";
        if (!frames[f].is_array())
            fail(path, where, "expected an array of detections");
        FrameDetections frame;
        frame.frame_index = static_cast<int>(f);
        for (std::size_t d = 0; d < frames[f].size(); ++d) {
            const Json& j = frames[f][d];
            const std::string det_where = where + "[" + std::to_string(d) + "]";
            if (!j.is_object() || !j.contains("score") || !j.contains("segmentation"))
                fail(path, det_where, "expected {category_id, score, segmentation}");
            Detection det;
            det.category_id = j.contains("category_id")
                                  ? static_cast<int>(as_int(j["category_id"], path,
                                                            det_where + ".category_id"))
                                  : 1;
            det.score = as_number(j["score"], path, det_where + ".score");
            if (det.score < 0.0 || det.score > 1.0)
                fail(path, det_where + ".score",
                     "score " + std::to_string(det.score) + " outside [0,1]");
            det.mask = parse_segmentation(j["segmentation"], path, det_where + ".segmentation");
            if (auto err = check_rle(det.mask); !err.empty())
                fail(path, det_where + ".segmentation", "malformed RLE: " + err);
            if (height == 0) {
                height = det.mask.height;
                width = det.mask.width;
            } else if (det.mask.height != height || det.mask.width != width) {
                fail(path, det_where + ".segmentation",
                     "mask dimensions " + std::to_string(det.mask.height) + "x" +
                         std::to_string(det.mask.width) + " differ from " +
                         std::to_string(height) + "x" + std::to_string(width));
            }
            frame.detections.push_back(std::move(det));
        }
        series.frames.push_back(std::move(frame));
    }
    return series;
}

void write_detections(const DetectionSeries& series, const std::filesystem::path& path) {
    Json root = Json::object();
    root["video_id"] = series.video_id;
    Json frames = Json::array();
    for (const auto& frame : series.frames) {
        Json dets = Json::array();
        for (const auto& det : frame.detections) {
            Json j = Json::object();
            j["category_id"] = det.category_id;
            j["score"] = det.score;
            j["segmentation"] = segmentation_to_json(det.mask, CountsEncoding::Plain);
            dets.push_back(std::move(j));
        }
        frames.push_back(std::move(dets));
    }
    root["frames"] = std::move(frames);
    write_file(path, root.dump() + "\n");
}

DatasetManifest tracks_to_manifest(const VideoRecord& video,
                                   std::vector<InstanceTrack> tracks,
                                   std::vector<Category> categories) {
    std::unordered_set<std::int64_t> supplied;
    std::int64_t next_id = 0;
    for (const auto& t : tracks) {
        if (t.track_id > 0 && !supplied.insert(t.track_id).second)
            throw ValidationError("duplicate track_id " + std::to_string(t.track_id));
        next_id = std::max(next_id, t.track_id);
    }
    ++next_id;
    if (next_id < 1) next_id = 1;

    for (auto& t : tracks) {
        if (static_cast<int>(t.masks.size()) != video.frame_count)
            throw ValidationError("track " + std::to_string(t.track_id) + " has " +
                                  std::to_string(t.masks.size()) + " masks for a " +
                                  std::to_string(video.frame_count) + "-frame video");
        for (const auto& mask : t.masks) {
            if (mask && (mask->height != video.height || mask->width != video.width))
                throw ValidationError("track " + std::to_string(t.track_id) +
                                      " mask dimensions differ from video " +
                                      std::to_string(video.height) + "x" +
                                      std::to_string(video.width));
        }
        if (t.track_id <= 0) t.track_id = next_id++;
    }

    DatasetManifest manifest;
    manifest.videos.push_back(video);
    if (categories.empty()) categories = default_categories();
    std::set<int> declared;
    for (const auto& c : categories) declared.insert(c.category_id);
    std::set<int> missing;
    for (const auto& t : tracks)
        if (!declared.count(t.category_id)) missing.insert(t.category_id);
    for (int id : missing)
        categories.push_back(Category{id, "category-" + std::to_string(id), Json::object()});
    manifest.categories = std::move(categories);
    for (auto& t : tracks)
        manifest.annotations.push_back(TrackAnnotation{video.video_id, std::move(t), Json::object()});
    return manifest;
}

std::string rle_counts_to_string(const std::vector<std::uint32_t>& counts) {
    std::string s;
    s.reserve(counts.size() * 2);
    for (std::size_t i = 0; i < counts.size(); ++i) {
        std::int64_t x = counts[i];
        if (i > 2) x -= counts[i - 2];
        bool more = true;
        while (more) {
            const int c = static_cast<int>(x & 0x1f);
            x >>= 5;
            more = (c & 0x10) ? (x != -1) : (x != 0);
            s.push_back(static_cast<char>((more ? (c | 0x20) : c) + 48));
        }
    }
    return s;
}

std::vector<std::uint32_t> rle_counts_from_string(const std::string& s) {
    std::vector<std::uint32_t> counts;
    std::size_t p = 0;
    while (p < s.size()) {
        std::int64_t x = 0;
        int k = 0;
        bool more = true;
        while (more) {
            if (p >= s.size())
                throw ParseError("truncated compressed RLE string");
            const int c = s[p] - 48;
            if (c < 0 || c > 63)
                throw ParseError("invalid character in compressed RLE string");
            if (k >= 13)
                throw ParseError("compressed RLE run too long");
            x |= static_cast<std::int64_t>(c & 0x1f) << (5 * k);
            more = (c & 0x20) != 0;
            ++p;
            ++k;
            if (!more && (c & 0x10))
                x |= ~((static_cast<std::int64_t>(1) << (5 * k)) - 1);
        }
        if (counts.size() > 2) x += counts[counts.size() - 2];
        if (x < 0 || x > std::numeric_limits<std::uint32_t>::max())
            throw ParseError("compressed RLE count out of range");
        counts.push_back(static_cast<std::uint32_t>(x));
    }
    return counts;
}

}  // namespace mapalign::dataset_io
