#pragma once

#include <cstdint>
#include <vector>

#include "hmrf/mrf.hpp"

namespace hmrf {

struct Point {
    int x = 0;
    int y = 0;
    bool operator==(const Point& o) const { return x == o.x && y == o.y; }
    bool operator<(const Point& o) const {  // raster order
        return y != o.y ? y < o.y : x < o.x;
    }
};

/// A maximal 4-connected region of like-labeled sites with its geometry.
struct Segment {
    int id = 0;
    std::vector<Point> pixels;  // sorted in raster order
    std::size_t pixel_count = 0;
    int x_min = 0, y_min = 0, x_max = 0, y_max = 0;
    double centroid_x = 0.0, centroid_y = 0.0;
    int length_x = 0, length_y = 0;  // bbox axis lengths
    Label label = 1;

    /// Recomputes count, bbox, centroid and axis lengths from `pixels`.
    void recompute_geometry();
};

/// Builds a segment from an explicit pixel set (geometry derived).
Segment make_segment(int id, std::vector<Point> pixels, Label label);

/// Partitions the active sites of each label into maximal 4-connected
/// regions. Ids are assigned in raster order of each segment's first pixel.
std::vector<Segment> connected_components(const LabelField& field);

/// Components of the mask's foreground only.
std::vector<Segment> connected_components(const BinaryMask& mask);

}  // namespace hmrf
