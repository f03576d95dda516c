#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "hmrf/segment_graph.hpp"

using namespace hmrf;

namespace {

// single-pixel or block segment helpers on a shared data field
Segment pixel_segment(int id, int x, int y, Label label) {
    return make_segment(id, {{x, y}}, label);
}

Segment block_segment(int id, int x0, int y0, int w, int h, Label label) {
    std::vector<Point> px;
    for (int y = y0; y < y0 + h; ++y)
        for (int x = x0; x < x0 + w; ++x) px.push_back({x, y});
    return make_segment(id, std::move(px), label);
}

DataField flat_data(int w, int h, double v = 0.0) { return DataField(w, h, v); }

DataField data_with(const std::vector<Segment>& segs, int w, int h,
                    const std::vector<double>& values) {
    DataField d(w, h, 0.0);
    for (std::size_t i = 0; i < segs.size(); ++i)
        for (const auto& p : segs[i].pixels) d.set(p.x, p.y, values[i]);
    return d;
}

}  // namespace

TEST_CASE("knn graph: single segment has no edges") {
    const std::vector<Segment> segs{pixel_segment(0, 3, 3, 1)};
    const SegmentGraph g = build_knn_graph(segs, 3, flat_data(8, 8));
    REQUIRE(g.nodes.size() == 1);
    CHECK(g.nodes[0].neighbor_ids.empty());
    CHECK(node_prior_energy(g, 0, 1) == doctest::Approx(0.0));
}

TEST_CASE("knn graph: collinear nearest neighbors") {
    const std::vector<Segment> segs{pixel_segment(0, 0, 0, 1), pixel_segment(1, 10, 0, 1),
                                    pixel_segment(2, 25, 0, 1)};
    const SegmentGraph g = build_knn_graph(segs, 1, flat_data(30, 1));
    CHECK(g.nodes[0].neighbor_ids == std::vector<int>{1});
    CHECK(g.nodes[1].neighbor_ids == std::vector<int>{0});
    CHECK(g.nodes[2].neighbor_ids == std::vector<int>{1});
    CHECK(g.nodes[2].d_max == doctest::Approx(15.0));
}

TEST_CASE("knn graph: matches the all-pairs oracle on random centroids") {
    std::mt19937_64 rng(47);
    std::vector<Segment> segs;
    std::vector<std::pair<double, double>> centroids;
    for (int i = 0; i < 20; ++i) {
        const int x = static_cast<int>(rng() % 60);
        const int y = static_cast<int>(rng() % 40);
        if (std::any_of(centroids.begin(), centroids.end(), [&](const auto& c) {
                return c.first == x && c.second == y;
            })) {
            continue;
        }
        centroids.emplace_back(x, y);
        segs.push_back(pixel_segment(static_cast<int>(segs.size()), x, y, 1));
    }
    const int k = 3;
    const SegmentGraph g = build_knn_graph(segs, k, flat_data(60, 40));
    for (std::size_t i = 0; i < segs.size(); ++i) {
        std::vector<std::pair<double, int>> all;
        for (std::size_t j = 0; j < segs.size(); ++j) {
            if (i == j) continue;
            const double dx = centroids[i].first - centroids[j].first;
            const double dy = centroids[i].second - centroids[j].second;
            all.emplace_back(std::sqrt(dx * dx + dy * dy), static_cast<int>(j));
        }
        std::sort(all.begin(), all.end());
        for (int m = 0; m < k; ++m) {
            CHECK(g.nodes[i].neighbor_ids[m] == all[m].second);
            CHECK(g.nodes[i].neighbor_dist[m] == doctest::Approx(all[m].first));
        }
    }
}

TEST_CASE("knn graph: duplicate centroids get the epsilon floor") {
    // {(0,0),(2,0)} and {(1,0)} share centroid (1, 0)
    std::vector<Segment> segs{make_segment(0, {{0, 0}, {2, 0}}, 1),
                              pixel_segment(1, 1, 0, -1)};
    const SegmentGraph g = build_knn_graph(segs, 1, flat_data(4, 1));
    CHECK(g.nodes[0].neighbor_dist[0] == doctest::Approx(1e-6));
    CHECK(g.nodes[0].d_max > 0.0);
    CHECK(std::isfinite(node_prior_energy(g, 0, 1)));
}

TEST_CASE("prior energy: the size-ratio asymmetry pair") {
    std::vector<Segment> segs{block_segment(0, 0, 0, 2, 2, -1),       // S = 4
                              block_segment(1, 20, 0, 10, 10, 1)};    // S = 100
    const SegmentGraph g = build_knn_graph(segs, 1, flat_data(40, 12));
    // sole neighbor sits at distance d_max, so the ratio term is exactly 1
    CHECK(node_prior_energy(g, 0, -1) == 0.04);
    CHECK(node_prior_energy(g, 1, 1) == 25.0);
    CHECK(node_prior_energy(g, 0, 1) == 0.0);
    CHECK(node_prior_energy(g, 1, -1) == 0.0);
}

TEST_CASE("graph icm: agreeing nodes are a fixed point") {
    std::vector<Segment> segs{block_segment(0, 0, 0, 3, 3, 1),
                              block_segment(1, 6, 0, 3, 3, 1),
                              block_segment(2, 0, 6, 3, 3, 1)};
    const DataField data = data_with(segs, 12, 12, {0.8, 0.8, 0.8});
    SegmentGraph g = build_knn_graph(segs, 2, data);
    const auto flips = icm_graph(g, 1.0, 3);
    CHECK(flips.size() == 1);
    CHECK(flips[0] == 0);
}

TEST_CASE("graph icm: ambiguous fragment joins the large close segment") {
    // fragment S=2 labeled -1 with a barely negative observation; the large
    // +1 segment next to it tips the balance through the prior
    std::vector<Segment> segs{make_segment(0, {{24, 10}, {25, 10}}, -1),
                              block_segment(1, 0, 0, 20, 25, 1)};
    DataField data = flat_data(30, 26, 0.0);
    for (const auto& p : segs[0].pixels) data.set(p.x, p.y, -0.002);
    for (const auto& p : segs[1].pixels) data.set(p.x, p.y, 0.8);
    SegmentGraph g = build_knn_graph(segs, 1, data);

    // oracle: evaluate both candidate energies directly
    const double keep = node_energy(g, 0, -1, 1.0);
    const double flip = node_energy(g, 0, 1, 1.0);
    CHECK(flip < keep);

    icm_graph(g, 1.0, 2);
    CHECK(g.nodes[0].label == 1);
    CHECK(g.nodes[1].label == 1);
}

TEST_CASE("graph icm: far-apart opposite clusters are both retained") {
    std::vector<Segment> segs;
    std::vector<double> grays;
    // two clusters of four equal blocks, opposite labels, far apart
    const int base_x[2] = {0, 200};
    const Label labels[2] = {1, -1};
    const double gray[2] = {0.8, -0.8};
    for (int c = 0; c < 2; ++c)
        for (int i = 0; i < 4; ++i) {
            segs.push_back(block_segment(static_cast<int>(segs.size()),
                                         base_x[c] + (i % 2) * 8, (i / 2) * 8, 4, 4,
                                         labels[c]));
            grays.push_back(gray[c]);
        }
    const DataField data = data_with(segs, 240, 20, grays);
    SegmentGraph g = build_knn_graph(segs, 3, data);
    for (int i = 0; i < 8; ++i)  // oracle: keeping is strictly cheaper everywhere
        CHECK(node_energy(g, i, g.nodes[i].label, 1.0) <
              node_energy(g, i, static_cast<Label>(-g.nodes[i].label), 1.0));
    icm_graph(g, 1.0, 3);
    for (int i = 0; i < 4; ++i) CHECK(g.nodes[i].label == 1);
    for (int i = 4; i < 8; ++i) CHECK(g.nodes[i].label == -1);
}

TEST_CASE("graph icm: energy non-increasing per sweep") {
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Segment> segs;
        std::vector<double> grays;
        for (int i = 0; i < 12; ++i) {
            const int x = static_cast<int>(rng() % 20) * 6;
            const int y = static_cast<int>(rng() % 10) * 6;
            const int size = 1 + static_cast<int>(rng() % 4);
            segs.push_back(block_segment(i, x, y, size, size,
                                         rng() % 2 == 0 ? Label{1} : Label{-1}));
            grays.push_back((rng() % 2 == 0 ? 1.0 : -1.0) * 0.5);
        }
        const DataField data = data_with(segs, 140, 80, grays);
        SegmentGraph g = build_knn_graph(segs, 3, data);
        double prev = graph_energy(g, 1.0);
        for (int sweep = 0; sweep < 4; ++sweep) {
            SegmentGraph step = g;
            const auto flips = icm_graph(step, 1.0, 1);
            const double e = graph_energy(step, 1.0);
            CHECK(e <= prev + 1e-9);
            prev = e;
            g = std::move(step);
            if (flips[0] == 0) break;
        }
    }
}

TEST_CASE("merge: chain of agreeing pieces becomes one segment") {
    std::vector<Segment> segs{block_segment(0, 0, 0, 4, 2, 1),
                              block_segment(1, 10, 0, 4, 2, 1),
                              block_segment(2, 20, 0, 4, 2, 1)};
    const DataField data = data_with(segs, 30, 4, {0.8, 0.8, 0.8});
    SegmentGraph g = build_knn_graph(segs, 1, data);
    const auto merged = merge_segments(g, segs);
    REQUIRE(merged.size() == 1);
    CHECK(merged[0].pixel_count == 24);
    CHECK(merged[0].id == 0);
}

TEST_CASE("merge: agreement without adjacency keeps segments apart") {
    // the decoys absorb each endpoint's single edge slot
    std::vector<Segment> segs{block_segment(0, 0, 0, 2, 2, 1),
                              pixel_segment(1, 3, 0, -1),
                              block_segment(2, 40, 0, 2, 2, 1),
                              pixel_segment(3, 43, 0, -1)};
    const DataField data = data_with(segs, 50, 4, {0.5, -0.5, 0.5, -0.5});
    SegmentGraph g = build_knn_graph(segs, 1, data);
    const auto merged = merge_segments(g, segs);
    CHECK(merged.size() == 4);  // opposite labels on every edge: identity
}

TEST_CASE("merge: conserves pixels and stays disjoint") {
    std::mt19937_64 rng(59);
    std::vector<Segment> segs;
    std::vector<double> grays;
    std::size_t total = 0;
    for (int i = 0; i < 10; ++i) {
        // disjoint 20x25 cells with jitter inside
        const int x = (i % 5) * 20 + static_cast<int>(rng() % 10);
        const int y = (i / 5) * 25 + static_cast<int>(rng() % 12);
        const int size = 1 + static_cast<int>(rng() % 5);
        segs.push_back(block_segment(i, x, y, size, size,
                                     rng() % 2 == 0 ? Label{1} : Label{-1}));
        total += segs.back().pixel_count;
        grays.push_back(0.3);
    }
    const DataField data = data_with(segs, 120, 60, grays);
    SegmentGraph g = build_knn_graph(segs, 3, data);
    icm_graph(g, 1.0, 2);
    const auto merged = merge_segments(g, segs);
    std::size_t merged_total = 0;
    std::set<std::pair<int, int>> seen;
    for (const auto& s : merged) {
        merged_total += s.pixel_count;
        for (const auto& p : s.pixels) CHECK(seen.insert({p.x, p.y}).second);
    }
    CHECK(merged_total == total);
    for (std::size_t i = 1; i < merged.size(); ++i) {
        CHECK(merged[i].id == static_cast<int>(i));
        CHECK(merged[i - 1].pixels.front() < merged[i].pixels.front());
    }
}

TEST_CASE("graph determinism: identical inputs build identical graphs") {
    std::mt19937_64 rng(61);
    std::vector<Segment> segs;
    for (int i = 0; i < 15; ++i)
        segs.push_back(pixel_segment(i, static_cast<int>(rng() % 40),
                                     static_cast<int>(rng() % 40),
                                     rng() % 2 == 0 ? Label{1} : Label{-1}));
    const DataField data = flat_data(40, 40);
    const SegmentGraph a = build_knn_graph(segs, 3, data);
    const SegmentGraph b = build_knn_graph(segs, 3, data);
    REQUIRE(a.nodes.size() == b.nodes.size());
    for (std::size_t i = 0; i < a.nodes.size(); ++i) {
        CHECK(a.nodes[i].neighbor_ids == b.nodes[i].neighbor_ids);
        CHECK(a.nodes[i].neighbor_dist == b.nodes[i].neighbor_dist);
        CHECK(a.nodes[i].d_max == b.nodes[i].d_max);
    }
    CHECK(dump_edges(a) == dump_edges(b));
}
