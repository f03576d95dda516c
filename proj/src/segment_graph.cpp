#include "hmrf/segment_graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace hmrf {

namespace {

constexpr double kDistanceFloor = 1e-6;  // keeps the prior finite on duplicate centroids

double centroid_distance(const GraphNode& a, const GraphNode& b) {
    const double dx = a.centroid_x - b.centroid_x;
    const double dy = a.centroid_y - b.centroid_y;
    const double d = std::sqrt(dx * dx + dy * dy);
    return d > kDistanceFloor ? d : kDistanceFloor;
}

}  // namespace

SegmentGraph build_knn_graph(const std::vector<Segment>& segments, int k,
                             const DataField& data) {
    if (segments.empty()) throw std::invalid_argument("build_knn_graph: no segments");
    if (k < 1) throw std::invalid_argument("build_knn_graph: k must be >= 1");
    SegmentGraph graph;
    graph.nodes.resize(segments.size());
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const Segment& s = segments[i];
        if (s.id != static_cast<int>(i))
            throw std::invalid_argument("build_knn_graph: segment ids must match positions");
        GraphNode& node = graph.nodes[i];
        node.segment_id = s.id;
        node.label = s.label;
        node.pixel_count = s.pixel_count;
        node.centroid_x = s.centroid_x;
        node.centroid_y = s.centroid_y;
        double sum = 0.0;
        for (const auto& p : s.pixels) sum += data.at(p.x, p.y);
        node.mean_gray = sum / static_cast<double>(s.pixel_count);
    }
    const int n = static_cast<int>(graph.nodes.size());
    const int kk = std::min(k, n - 1);
    std::vector<std::pair<double, int>> cand;
    for (int i = 0; i < n; ++i) {
        cand.clear();
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            cand.emplace_back(centroid_distance(graph.nodes[i], graph.nodes[j]), j);
        }
        std::sort(cand.begin(), cand.end(),
                  [](const auto& a, const auto& b) {
                      return a.first != b.first ? a.first < b.first : a.second < b.second;
                  });
        GraphNode& node = graph.nodes[i];
        for (int m = 0; m < kk; ++m) {
            node.neighbor_ids.push_back(cand[m].second);
            node.neighbor_dist.push_back(cand[m].first);
        }
        node.d_max = kk > 0 ? node.neighbor_dist.back() : 0.0;
    }
    return graph;
}

double node_prior_energy(const SegmentGraph& graph, int node_id, Label candidate) {
    const GraphNode& node = graph.nodes[node_id];
    double total = 0.0;
    for (std::size_t m = 0; m < node.neighbor_ids.size(); ++m) {
        const GraphNode& nb = graph.nodes[node.neighbor_ids[m]];
        const double diff = (candidate - nb.label) / 2.0;
        const double size_ratio = static_cast<double>(node.pixel_count) /
                                  static_cast<double>(nb.pixel_count);
        total += diff * diff * size_ratio * (node.neighbor_dist[m] / node.d_max);
    }
    return total;
}

double node_energy(const SegmentGraph& graph, int node_id, Label candidate,
                   double beta_u) {
    const GraphNode& node = graph.nodes[node_id];
    const double diff = (candidate - node.mean_gray) / 2.0;
    return diff * diff + beta_u * node_prior_energy(graph, node_id, candidate);
}

std::vector<int> icm_graph(SegmentGraph& graph, double beta_u, int iterations) {
    if (iterations < 1) throw std::invalid_argument("icm_graph: iterations must be >= 1");
    if (beta_u < 0.0) throw std::invalid_argument("icm_graph: beta_u must be >= 0");
    std::vector<int> flips_per_sweep;
    for (int it = 0; it < iterations; ++it) {
        int flips = 0;
        for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
            GraphNode& node = graph.nodes[i];
            const Label opp = static_cast<Label>(-node.label);
            const double e_cur = node_energy(graph, static_cast<int>(i), node.label, beta_u);
            const double e_opp = node_energy(graph, static_cast<int>(i), opp, beta_u);
            if (e_opp < e_cur) {
                node.label = opp;
                ++flips;
            }
        }
        flips_per_sweep.push_back(flips);
        if (flips == 0) break;
    }
    return flips_per_sweep;
}

double graph_energy(const SegmentGraph& graph, double beta_u) {
    double total = 0.0;
    for (std::size_t i = 0; i < graph.nodes.size(); ++i)
        total += node_energy(graph, static_cast<int>(i), graph.nodes[i].label, beta_u);
    return total;
}

namespace {

int find_root(std::vector<int>& parent, int a) {
    while (parent[a] != a) {
        parent[a] = parent[parent[a]];
        a = parent[a];
    }
    return a;
}

}  // namespace

std::vector<Segment> merge_segments(const SegmentGraph& graph,
                                    const std::vector<Segment>& segments) {
    const int n = static_cast<int>(segments.size());
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    for (int i = 0; i < n; ++i) {
        for (int j : graph.nodes[i].neighbor_ids) {
            if (graph.nodes[i].label != graph.nodes[j].label) continue;
            parent[find_root(parent, i)] = find_root(parent, j);
        }
    }
    std::vector<std::vector<Point>> groups(n);
    std::vector<Label> group_label(n, 1);
    for (int i = 0; i < n; ++i) {
        const int r = find_root(parent, i);
        auto& g = groups[r];
        g.insert(g.end(), segments[i].pixels.begin(), segments[i].pixels.end());
        group_label[r] = graph.nodes[r].label;
    }
    std::vector<Segment> merged;
    for (int r = 0; r < n; ++r)
        if (!groups[r].empty())
            merged.push_back(make_segment(0, std::move(groups[r]), group_label[r]));
    std::sort(merged.begin(), merged.end(), [](const Segment& a, const Segment& b) {
        return a.pixels.front() < b.pixels.front();
    });
    for (std::size_t i = 0; i < merged.size(); ++i)
        merged[i].id = static_cast<int>(i);
    return merged;
}

std::string dump_edges(const SegmentGraph& graph) {
    std::string out;
    char line[128];
    for (const auto& node : graph.nodes) {
        for (std::size_t m = 0; m < node.neighbor_ids.size(); ++m) {
            const GraphNode& nb = graph.nodes[node.neighbor_ids[m]];
            std::snprintf(line, sizeof(line), "%d %d %.6f %.6f\n", node.segment_id,
                          nb.segment_id, node.neighbor_dist[m],
                          static_cast<double>(node.pixel_count) /
                              static_cast<double>(nb.pixel_count));
            out += line;
        }
    }
    return out;
}

}  // namespace hmrf
