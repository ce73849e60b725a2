#include <cmath>

#include "doctest.h"
#include "mhms/prng.hpp"
#include "mhms/visual_sum.hpp"
#include "test_support.hpp"

using namespace mhms;
using namespace mhms::visual;
using test_support::random_unit_rows;

namespace {

FrameFeatures make_frames(std::initializer_list<std::initializer_list<double>> data) {
    FrameFeatures f;
    f.frames.resize(static_cast<long>(data.size()), static_cast<long>(data.begin()->size()));
    long r = 0;
    for (const auto& row : data) {
        long c = 0;
        for (double v : row) f.frames(r, c++) = v;
        ++r;
    }
    return f;
}

}  // namespace

TEST_CASE("attention_scores is the multiplicative form") {
    SUBCASE("identity weight with orthonormal frames picks out the state") {
        const auto frames = make_frames({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
        AttentionState state;
        state.weight_matrix = Eigen::MatrixXd::Identity(3, 3);
        state.decoder_state = frames.frames.row(0).transpose();
        const auto beta = attention_scores(state, frames);
        CHECK(beta(0) == doctest::Approx(1.0));
        CHECK(beta(1) == doctest::Approx(0.0));
        CHECK(beta(2) == doctest::Approx(0.0));
    }
    SUBCASE("zero weight matrix zeroes every score") {
        const auto frames = make_frames({{1, 2}, {3, 4}});
        AttentionState state;
        state.weight_matrix = Eigen::MatrixXd::Zero(2, 2);
        state.decoder_state = Eigen::VectorXd::Ones(2);
        CHECK(attention_scores(state, frames).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("hand product") {
        const auto frames = make_frames({{1, 0}, {0, 2}});
        AttentionState state;
        state.weight_matrix = Eigen::MatrixXd::Identity(2, 2);
        state.decoder_state = Eigen::VectorXd::Ones(2);
        const auto beta = attention_scores(state, frames);
        CHECK(beta(0) == doctest::Approx(1.0));
        CHECK(beta(1) == doctest::Approx(2.0));
    }
    SUBCASE("shape errors") {
        const auto frames = make_frames({{1, 0}});
        AttentionState state;
        state.weight_matrix = Eigen::MatrixXd::Identity(3, 3);
        state.decoder_state = Eigen::VectorXd::Ones(3);
        CHECK_THROWS_AS(attention_scores(state, frames), ShapeMismatch);
    }
}

TEST_CASE("attention_weights is a stabilized softmax") {
    SUBCASE("constant scores give uniform weights") {
        const auto alpha = attention_weights(Eigen::VectorXd::Constant(4, 3.7));
        for (int i = 0; i < 4; ++i) CHECK(alpha(i) == doctest::Approx(0.25));
    }
    SUBCASE("hand softmax of (0, ln 3)") {
        Eigen::VectorXd beta(2);
        beta << 0.0, std::log(3.0);
        const auto alpha = attention_weights(beta);
        CHECK(alpha(0) == doctest::Approx(0.25));
        CHECK(alpha(1) == doctest::Approx(0.75));
    }
    SUBCASE("single frame gets everything") {
        const auto alpha = attention_weights(Eigen::VectorXd::Zero(1));
        CHECK(alpha(0) == doctest::Approx(1.0));
    }
}

TEST_CASE("attention weight properties over random draws") {
    Prng rng(43);
    for (int trial = 0; trial < 1000; ++trial) {
        const long m = 1 + static_cast<long>(rng.next_below(12));
        Eigen::VectorXd beta(m);
        for (long i = 0; i < m; ++i) beta(i) = 40.0 * (rng.next_double() - 0.5);
        const auto alpha = attention_weights(beta);

        CHECK(std::abs(alpha.sum() - 1.0) <= 1e-9);
        CHECK(alpha.minCoeff() > 0.0);
        long beta_argmax = 0;
        long alpha_argmax = 0;
        beta.maxCoeff(&beta_argmax);
        alpha.maxCoeff(&alpha_argmax);
        CHECK(alpha(beta_argmax) == alpha.maxCoeff());
        (void)alpha_argmax;

        // Shift invariance.
        const double shift = 100.0 * (rng.next_double() - 0.5);
        const auto shifted = attention_weights((beta.array() + shift).matrix());
        CHECK((alpha - shifted).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("attention_context is a convex combination") {
    SUBCASE("uniform mean of two basis frames") {
        const auto frames = make_frames({{1, 0}, {0, 1}});
        Eigen::VectorXd alpha(2);
        alpha << 0.5, 0.5;
        const auto ctx = attention_context(alpha, frames);
        CHECK(ctx(0) == doctest::Approx(0.5));
        CHECK(ctx(1) == doctest::Approx(0.5));
    }
    SUBCASE("point mass reproduces the frame") {
        const auto frames = make_frames({{0.3, 0.7}, {0.9, 0.1}});
        Eigen::VectorXd alpha(2);
        alpha << 1.0, 0.0;
        CHECK((attention_context(alpha, frames) - frames.frames.row(0).transpose())
                  .cwiseAbs()
                  .maxCoeff() == 0.0);
    }
    SUBCASE("hand combination") {
        const auto frames = make_frames({{2, 0}, {0, 4}});
        Eigen::VectorXd alpha(2);
        alpha << 0.25, 0.75;
        const auto ctx = attention_context(alpha, frames);
        CHECK(ctx(0) == doctest::Approx(0.5));
        CHECK(ctx(1) == doctest::Approx(3.0));
    }
    SUBCASE("unnormalized weights are rejected") {
        const auto frames = make_frames({{1, 0}, {0, 1}});
        Eigen::VectorXd alpha(2);
        alpha << 0.7, 0.7;
        CHECK_THROWS_AS(attention_context(alpha, frames), WeightsNotNormalized);
    }
}

TEST_CASE("contexts stay in the convex hull componentwise") {
    Prng rng(47);
    for (int trial = 0; trial < 1000; ++trial) {
        const long m = 1 + static_cast<long>(rng.next_below(8));
        const long d = 1 + static_cast<long>(rng.next_below(6));
        FrameFeatures frames;
        frames.frames = random_unit_rows(rng, m, d);
        Eigen::VectorXd beta(m);
        for (long i = 0; i < m; ++i) beta(i) = 10.0 * (rng.next_double() - 0.5);
        const auto ctx = attention_context(attention_weights(beta), frames);
        for (long c = 0; c < d; ++c) {
            CHECK(ctx(c) >= frames.frames.col(c).minCoeff() - 1e-12);
            CHECK(ctx(c) <= frames.frames.col(c).maxCoeff() + 1e-12);
        }
    }
}

TEST_CASE("default frame scorer") {
    SUBCASE("identical frames score uniformly") {
        const auto frames = make_frames({{1, 1}, {1, 1}, {1, 1}});
        const auto scores = score_frames(frames, CentroidAttentionScorer());
        for (int i = 0; i < 3; ++i) CHECK(scores(i) == doctest::Approx(1.0 / 3.0));
    }
    SUBCASE("the centroid-aligned frame wins") {
        const auto frames = make_frames({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 0, 0}});
        // Centroid leans towards (1,0,0): frames 0 and 3 score highest.
        const auto scores = score_frames(frames, CentroidAttentionScorer());
        CHECK(scores(0) > scores(1));
        CHECK(scores(0) > scores(2));
        CHECK(scores(0) == doctest::Approx(scores(3)));
    }
    SUBCASE("empty scene is an error") {
        FrameFeatures frames;
        frames.frames = Eigen::MatrixXd(0, 3);
        CHECK_THROWS_AS(score_frames(frames, CentroidAttentionScorer()), InvalidArgument);
    }
    SUBCASE("sharpness multiplies importance") {
        auto frames = make_frames({{1, 1}, {1, 1}});
        frames.sharpness = Eigen::VectorXd(2);
        (*frames.sharpness) << 0.1, 0.9;
        const auto scores = score_frames(frames, CentroidAttentionScorer());
        CHECK(scores(0) == doctest::Approx(0.05));
        CHECK(scores(1) == doctest::Approx(0.45));
    }
}

TEST_CASE("select_keyframes ranks with index tie-breaks") {
    Eigen::VectorXd scores(3);
    scores << 0.1, 0.9, 0.9;
    const auto top2 = select_keyframes(scores, 2);
    REQUIRE(top2.ranked.size() == 2);
    CHECK(top2.ranked[0].first == 1);
    CHECK(top2.ranked[1].first == 2);

    const auto all = select_keyframes(scores, 10);
    CHECK(all.ranked.size() == 3);
    CHECK(all.ranked[2].first == 0);

    Eigen::VectorXd one(1);
    one << 0.3;
    const auto single = select_keyframes(one, 1);
    CHECK(single.ranked[0] == std::pair(0, 0.3));

    CHECK_THROWS_AS(select_keyframes(scores, 0), InvalidArgument);
}

TEST_CASE("adding a frame below the cut leaves the selection unchanged") {
    Prng rng(53);
    for (int trial = 0; trial < 200; ++trial) {
        const long m = 3 + static_cast<long>(rng.next_below(8));
        Eigen::VectorXd scores(m);
        for (long i = 0; i < m; ++i) scores(i) = rng.next_double();
        const int k = 1 + static_cast<int>(rng.next_below(3));
        const auto before = select_keyframes(scores, k);

        double kth = before.ranked.back().second;
        Eigen::VectorXd extended(m + 1);
        extended.head(m) = scores;
        extended(m) = kth - 0.5 * (kth + 0.01);  // strictly below the current k-th
        const auto after = select_keyframes(extended, k);

        REQUIRE(after.ranked.size() == before.ranked.size());
        for (std::size_t i = 0; i < before.ranked.size(); ++i) {
            CHECK(after.ranked[i].first == before.ranked[i].first);
        }
    }
}
