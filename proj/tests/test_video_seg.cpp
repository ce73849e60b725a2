#include <cmath>

#include "doctest.h"
#include "mhms/prng.hpp"
#include "mhms/video_seg.hpp"

using namespace mhms;
using namespace mhms::video;

namespace {

ShotSequence make_shots(std::initializer_list<std::initializer_list<double>> data) {
    ShotSequence s;
    s.shots.resize(static_cast<long>(data.size()), static_cast<long>(data.begin()->size()));
    long r = 0;
    for (const auto& row : data) {
        long c = 0;
        for (double v : row) s.shots(r, c++) = v;
        ++r;
    }
    return s;
}

double logistic_scorer_reference(double diff) {
    // The documented formula, evaluated independently of the implementation.
    const double d = (diff + 1.0) / 2.0;
    return 1.0 / (1.0 + std::exp(-10.0 * (0.5 - d)));
}

}  // namespace

TEST_CASE("boundary_representation pools windows as documented") {
    SUBCASE("identical shots give diff 1 and the shared vector back") {
        const auto shots = make_shots({{0, 1}, {0, 1}, {0, 1}, {0, 1}});
        for (int i = 1; i <= 3; ++i) {
            const auto repr = boundary_representation(shots, i, 2);
            CHECK(repr.diff_score == doctest::Approx(1.0));
            CHECK(repr.relation_vector(0) == doctest::Approx(0.0));
            CHECK(repr.relation_vector(1) == doctest::Approx(1.0));
        }
    }
    SUBCASE("orthogonal windows give diff 0") {
        const auto shots = make_shots({{1, 0}, {1, 0}, {0, 1}, {0, 1}});
        const auto repr = boundary_representation(shots, 2, 2);
        CHECK(repr.diff_score == doctest::Approx(0.0));
        // Hand max-pool over all four vectors.
        CHECK(repr.relation_vector(0) == doctest::Approx(1.0));
        CHECK(repr.relation_vector(1) == doctest::Approx(1.0));
    }
    SUBCASE("windows truncate at the edges") {
        const auto shots = make_shots({{1, 0}, {0, 1}, {0, 1}});
        const auto repr = boundary_representation(shots, 1, 2);  // one shot on the left
        CHECK(repr.diff_score == doctest::Approx(0.0));
    }
}

TEST_CASE("boundary_representation errors") {
    const auto shots = make_shots({{1, 0}, {0, 1}});
    CHECK_THROWS_AS(boundary_representation(shots, 0, 2), IndexOutOfRange);
    CHECK_THROWS_AS(boundary_representation(shots, 2, 2), IndexOutOfRange);
    CHECK_THROWS_AS(boundary_representation(shots, 1, 0), EmptyWindow);
}

TEST_CASE("diff_score is invariant to permutations inside each window") {
    const auto a = make_shots({{1, 0}, {0.5, 0.5}, {0, 1}, {0.2, 0.8}});
    auto b = a;
    b.shots.row(0) = a.shots.row(1);
    b.shots.row(1) = a.shots.row(0);  // permute the before-window
    b.shots.row(2) = a.shots.row(3);
    b.shots.row(3) = a.shots.row(2);  // permute the after-window
    const auto ra = boundary_representation(a, 2, 2);
    const auto rb = boundary_representation(b, 2, 2);
    CHECK(ra.diff_score == rb.diff_score);
}

TEST_CASE("default scorer follows the documented logistic formula") {
    const auto identical = make_shots({{0, 1}, {0, 1}, {0, 1}});
    const auto reprs = all_boundary_representations(identical, 2);
    const auto scores = coarse_scores(reprs, LogisticDiffScorer());
    REQUIRE(scores.scores.size() == 2);
    CHECK(scores.scores[0] == doctest::Approx(logistic_scorer_reference(1.0)));
    CHECK(scores.scores[0] < 0.1);

    const auto antipodal = make_shots({{1, 0}, {-1, 0}});
    const auto flip = coarse_scores(all_boundary_representations(antipodal, 1),
                                    LogisticDiffScorer());
    CHECK(flip.scores[0] == doctest::Approx(logistic_scorer_reference(-1.0)));
    CHECK(flip.scores[0] > 0.9);

    CHECK_THROWS_AS(coarse_scores({}, LogisticDiffScorer()), InvalidArgument);
}

TEST_CASE("binarize is strict and monotone in tau") {
    CoarseScores s;
    s.scores = {0.2, 0.9};
    CHECK(binarize(s, 0.5) == std::vector<int>{0, 1});
    CoarseScores boundary;
    boundary.scores = {0.5};
    CHECK(binarize(boundary, 0.5) == std::vector<int>{0});
    CoarseScores zeros;
    zeros.scores = {0.0, 0.0, 0.0};
    CHECK(binarize(zeros, 0.3) == std::vector<int>{0, 0, 0});

    Prng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        CoarseScores random;
        const int count = 1 + static_cast<int>(rng.next_below(12));
        for (int i = 0; i < count; ++i) random.scores.push_back(rng.next_double());
        int previous = count + 1;
        for (double tau : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            const auto flags = binarize(random, tau);
            int scenes = 1;
            for (int f : flags) scenes += f;
            CHECK(scenes <= previous);
            previous = scenes;
        }
    }
}

TEST_CASE("assemble_scenes splits exactly at raised flags") {
    const auto four = make_shots({{1, 0}, {1, 0}, {0, 1}, {0, 1}});
    const auto seg = assemble_scenes(four, {0, 1, 0});
    REQUIRE(seg.scenes.size() == 2);
    CHECK(seg.scenes[0] == std::pair(0, 2));
    CHECK(seg.scenes[1] == std::pair(2, 4));

    const auto one = make_shots({{1, 0}});
    const auto single = assemble_scenes(one, {});
    REQUIRE(single.scenes.size() == 1);
    CHECK(single.scenes[0] == std::pair(0, 1));

    const auto five = make_shots({{1, 0}, {1, 0}, {1, 0}, {1, 0}, {1, 0}});
    const auto singletons = assemble_scenes(five, {1, 1, 1, 1});
    CHECK(singletons.scenes.size() == 5);
    for (int i = 0; i < 5; ++i) CHECK(singletons.scenes[static_cast<std::size_t>(i)] == std::pair(i, i + 1));

    CHECK_THROWS_AS(assemble_scenes(four, {0, 1}), LengthMismatch);
}

TEST_CASE("scene assembly partitions the shot range for random flags") {
    Prng rng(37);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 1 + static_cast<int>(rng.next_below(20));
        ShotSequence shots;
        shots.shots = Eigen::MatrixXd::Ones(n, 2);
        std::vector<int> flags(static_cast<std::size_t>(n - 1));
        for (auto& f : flags) f = static_cast<int>(rng.next_below(2));
        const auto seg = assemble_scenes(shots, flags);

        int raised = 0;
        for (int f : flags) raised += f;
        CHECK(static_cast<int>(seg.scenes.size()) == raised + 1);

        int cursor = 0;
        for (const auto& [b, e] : seg.scenes) {
            CHECK(b == cursor);
            CHECK(e > b);
            cursor = e;
        }
        CHECK(cursor == n);
    }
}

TEST_CASE("segmentation is deterministic") {
    const auto shots = make_shots({{1, 0}, {0.9, 0.1}, {0, 1}, {0.1, 0.9}});
    const LogisticDiffScorer scorer;
    const auto a = segment_shots(shots, 2, 0.5, scorer);
    const auto b = segment_shots(shots, 2, 0.5, scorer);
    CHECK(a.scenes == b.scenes);
    CHECK(a.boundary_flags == b.boundary_flags);
}
