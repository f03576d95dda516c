#pragma once

#include <string>
#include <vector>

#include "hmrf/segment.hpp"

namespace hmrf {

/// k-nearest-neighbor graph over segments: the unstructured layer of the
/// partially-structured model. Edges are directional (no symmetric closure).
struct GraphNode {
    int segment_id = 0;
    Label label = 1;
    std::size_t pixel_count = 0;         // S_i
    double centroid_x = 0.0, centroid_y = 0.0;
    double mean_gray = 0.0;              // observation in [-1, +1]
    std::vector<int> neighbor_ids;       // ascending by distance, ties by lower id
    std::vector<double> neighbor_dist;   // D_{i,i'}
    double d_max = 0.0;                  // max distance among own neighbors
};

struct SegmentGraph {
    std::vector<GraphNode> nodes;  // indexed by segment id
};

/// Builds the kNN graph from segment geometry; per-segment observation is
/// the mean of `data` over the segment's pixels. Duplicate centroids get an
/// epsilon distance floor of 1e-6 pixels.
SegmentGraph build_knn_graph(const std::vector<Segment>& segments, int k,
                             const DataField& data);

/// Size- and distance-weighted disagreement prior:
///   sum over neighbors of ((cand - f_n)/2)^2 * (S_i/S_n) * (D_in/d_max)
double node_prior_energy(const SegmentGraph& graph, int node_id, Label candidate);

double node_energy(const SegmentGraph& graph, int node_id, Label candidate,
                   double beta_u);

/// Per-node ICM in ascending segment-id order with asynchronous updates;
/// stops early on a zero-flip sweep. Returns flips per executed sweep.
std::vector<int> icm_graph(SegmentGraph& graph, double beta_u, int iterations);

/// Sum of node_energy over all nodes at their current labels.
double graph_energy(const SegmentGraph& graph, double beta_u);

/// Unions segments that share a final label and are adjacent in the
/// undirected closure of the kNN edge set. Ids are reassigned in raster
/// order of each merged segment's first pixel.
std::vector<Segment> merge_segments(const SegmentGraph& graph,
                                    const std::vector<Segment>& segments);

/// Debug edge list: node_id, neighbor_id, distance, S_i/S_n per line.
std::string dump_edges(const SegmentGraph& graph);

}  // namespace hmrf
