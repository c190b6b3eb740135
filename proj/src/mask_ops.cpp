#include "mapalign/mask_ops.hpp"

#include <algorithm>
#include <string>

namespace mapalign::mask_ops {

namespace {

void require_canonical(const RleMask& mask) {
    if (auto err = check_rle(mask); !err.empty())
        throw MaskError("malformed RLE: " + err);
}

void require_same_shape(const RleMask& a, const RleMask& b) {
    if (a.height != b.height || a.width != b.width)
        throw MaskError("mask dimension mismatch: " + std::to_string(a.height) + "x" +
                        std::to_string(a.width) + " vs " + std::to_string(b.height) + "x" +
                        std::to_string(b.width));
}

}  // namespace

RleMask rle_encode(const PixelGrid& grid) {
    if (grid.height <= 0 || grid.width <= 0)
        throw MaskError("cannot encode a zero-sized grid");
    RleMask mask;
    mask.height = grid.height;
    mask.width = grid.width;
    bool current = false;  // runs start with background
    std::uint32_t run = 0;
    for (int c = 0; c < grid.width; ++c) {
        for (int r = 0; r < grid.height; ++r) {
            if (grid.at(r, c) == current) {
                ++run;
            } else {
                mask.counts.push_back(run);
                current = !current;
                run = 1;
            }
        }
    }
    mask.counts.push_back(run);
    return mask;
}

PixelGrid rle_decode(const RleMask& mask) {
    require_canonical(mask);
    PixelGrid grid(mask.height, mask.width);
    std::size_t pos = 0;
    bool value = false;
    for (std::uint32_t count : mask.counts) {
        if (value) {
            for (std::uint32_t i = 0; i < count; ++i) {
                const std::size_t p = pos + i;
                const int r = static_cast<int>(p % mask.height);
                const int c = static_cast<int>(p / mask.height);
                grid.set(r, c);
            }
        }
        pos += count;
        value = !value;
    }
    return grid;
}

std::uint64_t area(const RleMask& mask) {
    std::uint64_t n = 0;
    for (std::size_t i = 1; i < mask.counts.size(); i += 2) n += mask.counts[i];
    return n;
}

std::uint64_t area(const std::optional<RleMask>& mask) {
    return mask ? area(*mask) : 0;
}

std::uint64_t intersection_area(const std::optional<RleMask>& a,
                                const std::optional<RleMask>& b) {
    if (!a || !b) return 0;
    require_canonical(*a);
    require_canonical(*b);
    require_same_shape(*a, *b);

    const std::uint64_t total =
        static_cast<std::uint64_t>(a->height) * static_cast<std::uint64_t>(a->width);
    std::uint64_t remaining = total;
    std::uint64_t inter = 0;
    std::size_t ia = 0, ib = 0;
    std::uint64_t rem_a = a->counts.empty() ? 0 : a->counts[0];
    std::uint64_t rem_b = b->counts.empty() ? 0 : b->counts[0];
    bool val_a = false, val_b = false;
    while (remaining > 0) {
        while (rem_a == 0) {
            val_a = !val_a;
            rem_a = a->counts[++ia];
        }
        while (rem_b == 0) {
            val_b = !val_b;
            rem_b = b->counts[++ib];
        }
        const std::uint64_t step = std::min({rem_a, rem_b, remaining});
        if (val_a && val_b) inter += step;
        rem_a -= step;
        rem_b -= step;
        remaining -= step;
    }
    return inter;
}

std::uint64_t union_area(const std::optional<RleMask>& a,
                         const std::optional<RleMask>& b) {
    return area(a) + area(b) - intersection_area(a, b);
}

StIou spatio_temporal_iou(const InstanceTrack& pred, const InstanceTrack& gt) {
    if (pred.masks.size() != gt.masks.size())
        throw MaskError("track length mismatch: " + std::to_string(pred.masks.size()) +
                        " vs " + std::to_string(gt.masks.size()));
    std::uint64_t inter_sum = 0;
    std::uint64_t union_sum = 0;
    for (std::size_t t = 0; t < pred.masks.size(); ++t) {
        inter_sum += intersection_area(pred.masks[t], gt.masks[t]);
        union_sum += union_area(pred.masks[t], gt.masks[t]);
    }
    if (union_sum == 0) return {0.0, true};
    return {static_cast<double>(inter_sum) / static_cast<double>(union_sum), false};
}

std::optional<RleMask> translate(const RleMask& mask, int row_offset, int col_offset) {
    if (row_offset == 0 && col_offset == 0) return mask;
    const PixelGrid src = rle_decode(mask);
    PixelGrid dst(mask.height, mask.width);
    bool any = false;
    for (int r = 0; r < mask.height; ++r) {
        for (int c = 0; c < mask.width; ++c) {
            if (!src.at(r, c)) continue;
            const int nr = r + row_offset;
            const int nc = c + col_offset;
            if (nr < 0 || nr >= mask.height || nc < 0 || nc >= mask.width) continue;
            dst.set(nr, nc);
            any = true;
        }
    }
    if (!any) return std::nullopt;
    return rle_encode(dst);
}

}  // namespace mapalign::mask_ops
