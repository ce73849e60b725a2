#include "mhms/visual_sum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace mhms::visual {

Eigen::VectorXd attention_scores(const AttentionState& state, const FrameFeatures& frames) {
    if (frames.count() < 1) throw InvalidArgument("attention_scores: no frames");
    if (state.weight_matrix.rows() != frames.dimension()) {
        throw ShapeMismatch("attention_scores: W_a rows (" +
                            std::to_string(state.weight_matrix.rows()) +
                            ") != frame dimension (" + std::to_string(frames.dimension()) + ")");
    }
    if (state.weight_matrix.cols() != state.decoder_state.size()) {
        throw ShapeMismatch("attention_scores: W_a cols (" +
                            std::to_string(state.weight_matrix.cols()) +
                            ") != state dimension (" + std::to_string(state.decoder_state.size()) + ")");
    }
    return frames.frames * (state.weight_matrix * state.decoder_state);
}

Eigen::VectorXd attention_weights(const Eigen::VectorXd& beta) {
    if (beta.size() < 1) throw InvalidArgument("attention_weights: empty score vector");
    if (!beta.allFinite()) throw NonFinite("attention_weights: scores contain NaN or infinity");
    const Eigen::ArrayXd shifted = beta.array() - beta.maxCoeff();
    const Eigen::ArrayXd e = shifted.exp();
    return (e / e.sum()).matrix();
}

Eigen::VectorXd attention_context(const Eigen::VectorXd& alpha, const FrameFeatures& frames) {
    if (alpha.size() != frames.count()) {
        throw ShapeMismatch("attention_context: weight count != frame count");
    }
    if (std::abs(alpha.sum() - 1.0) > 1e-9) {
        throw WeightsNotNormalized("attention_context: weights sum to " + std::to_string(alpha.sum()));
    }
    return frames.frames.transpose() * alpha;
}

Eigen::VectorXd CentroidAttentionScorer::score(const FrameFeatures& frames) const {
    AttentionState state;
    state.decoder_state = frames.frames.colwise().mean().transpose();
    state.weight_matrix = Eigen::MatrixXd::Identity(frames.dimension(), frames.dimension());
    return attention_weights(attention_scores(state, frames));
}

Eigen::VectorXd score_frames(const FrameFeatures& frames, const ImportanceScorer& scorer) {
    if (frames.count() < 1) throw InvalidArgument("score_frames: empty scene");
    Eigen::VectorXd scores = scorer.score(frames);
    if (scores.size() != frames.count()) {
        throw ShapeMismatch("score_frames: scorer returned " + std::to_string(scores.size()) +
                            " scores for " + std::to_string(frames.count()) + " frames");
    }
    if (!scores.allFinite()) throw NonFinite("score_frames: scorer produced non-finite scores");
    if (frames.sharpness) {
        if (frames.sharpness->size() != frames.count()) {
            throw ShapeMismatch("score_frames: sharpness count != frame count");
        }
        scores = scores.cwiseProduct(*frames.sharpness);
    }
    return scores;
}

KeyframeCandidates select_keyframes(const Eigen::VectorXd& scores, int k) {
    if (k < 1) throw InvalidArgument("select_keyframes: k must be >= 1");
    std::vector<int> order(static_cast<std::size_t>(scores.size()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (scores(a) != scores(b)) return scores(a) > scores(b);
        return a < b;
    });

    KeyframeCandidates out;
    const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k), order.size());
    out.ranked.reserve(take);
    for (std::size_t r = 0; r < take; ++r) {
        out.ranked.emplace_back(order[r], scores(order[r]));
    }
    return out;
}

}  // namespace mhms::visual
