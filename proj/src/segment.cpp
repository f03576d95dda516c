#include "hmrf/segment.hpp"

#include <algorithm>
#include <stdexcept>

namespace hmrf {

void Segment::recompute_geometry() {
    if (pixels.empty()) throw std::logic_error("Segment: empty pixel set");
    std::sort(pixels.begin(), pixels.end());
    pixel_count = pixels.size();
    x_min = x_max = pixels[0].x;
    y_min = y_max = pixels[0].y;
    double sx = 0.0, sy = 0.0;
    for (const auto& p : pixels) {
        x_min = std::min(x_min, p.x);
        x_max = std::max(x_max, p.x);
        y_min = std::min(y_min, p.y);
        y_max = std::max(y_max, p.y);
        sx += p.x;
        sy += p.y;
    }
    centroid_x = sx / static_cast<double>(pixel_count);
    centroid_y = sy / static_cast<double>(pixel_count);
    length_x = x_max - x_min + 1;
    length_y = y_max - y_min + 1;
}

Segment make_segment(int id, std::vector<Point> pixels, Label label) {
    Segment seg;
    seg.id = id;
    seg.label = label;
    seg.pixels = std::move(pixels);
    seg.recompute_geometry();
    return seg;
}

std::vector<Segment> connected_components(const LabelField& field) {
    const int w = field.width, h = field.height;
    std::vector<std::uint8_t> visited(static_cast<std::size_t>(w) * h, 0);
    std::vector<Segment> segments;
    std::vector<Point> stack;
    for (int y0 = 0; y0 < h; ++y0) {
        for (int x0 = 0; x0 < w; ++x0) {
            const std::size_t i0 = field.idx(x0, y0);
            if (visited[i0] || !field.is_active(x0, y0)) continue;
            const Label lab = field.labels[i0];
            std::vector<Point> region;
            stack.clear();
            stack.push_back({x0, y0});
            visited[i0] = 1;
            while (!stack.empty()) {
                const Point p = stack.back();
                stack.pop_back();
                region.push_back(p);
                constexpr int dx[4] = {-1, 1, 0, 0};
                constexpr int dy[4] = {0, 0, -1, 1};
                for (int k = 0; k < 4; ++k) {
                    const int nx = p.x + dx[k], ny = p.y + dy[k];
                    if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                    const std::size_t ni = field.idx(nx, ny);
                    if (visited[ni] || !field.is_active(nx, ny)) continue;
                    if (field.labels[ni] != lab) continue;
                    visited[ni] = 1;
                    stack.push_back({nx, ny});
                }
            }
            segments.push_back(
                make_segment(static_cast<int>(segments.size()), std::move(region), lab));
        }
    }
    return segments;
}

std::vector<Segment> connected_components(const BinaryMask& mask) {
    LabelField field = LabelField::from_mask(mask);
    field.active = mask.bits;  // background is not a region of interest here
    return connected_components(field);
}

}  // namespace hmrf
