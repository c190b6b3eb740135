#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mapalign/core.hpp"

namespace mapalign::mask_ops {

/// Dense binary occupancy grid, row-addressable. Mainly the decoded form of
/// an RleMask; also the natural input for rasterizing fixtures.
struct PixelGrid {
    int height = 0;
    int width = 0;
    std::vector<std::uint8_t> bits;  // row-major

    PixelGrid() = default;
    PixelGrid(int h, int w)
        : height(h), width(w),
          bits(static_cast<std::size_t>(h < 0 ? 0 : h) * static_cast<std::size_t>(w < 0 ? 0 : w), 0) {}

    bool at(int r, int c) const {
        return bits[static_cast<std::size_t>(r) * width + c] != 0;
    }
    void set(int r, int c, bool v = true) {
        bits[static_cast<std::size_t>(r) * width + c] = v ? 1 : 0;
    }

    bool operator==(const PixelGrid&) const = default;
};

// Column-major run-length encoding; counts alternate zero-run, one-run, ...
// beginning with the zero-run (possibly of length 0).
RleMask rle_encode(const PixelGrid& grid);

// Exact inverse of rle_encode. Throws MaskError on malformed input.
PixelGrid rle_decode(const RleMask& mask);

// Foreground pixel count, computed from the counts alone. Absent mask == 0.
std::uint64_t area(const RleMask& mask);
std::uint64_t area(const std::optional<RleMask>& mask);

// |a ∩ b| by merging runs, no dense decode. Any absent operand gives 0.
std::uint64_t intersection_area(const std::optional<RleMask>& a,
                                const std::optional<RleMask>& b);

// |a| + |b| - |a ∩ b|.
std::uint64_t union_area(const std::optional<RleMask>& a,
                         const std::optional<RleMask>& b);

struct StIou {
    double value = 0.0;
    bool degenerate = false;  // 0/0: both tracks empty in every frame
};

/// IoU of two mask sequences with intersections and unions summed over all
/// frames before the division. Sums are exact integers; the division is the
/// only floating-point step.
StIou spatio_temporal_iou(const InstanceTrack& pred, const InstanceTrack& gt);

// Translate by whole pixels; rows grow downward, columns rightward. Pixels
// pushed outside the grid are dropped; a mask left empty becomes absent.
std::optional<RleMask> translate(const RleMask& mask, int row_offset, int col_offset);

}  // namespace mapalign::mask_ops
