// Keyframe candidate generation for one scene. The attention primitives
// (multiplicative score, stabilized softmax, context vector) are exposed
// directly; frame importance comes from a pluggable scorer whose default is
// one attention step against the scene centroid with an identity weight
// matrix. Optional per-frame sharpness scalars multiply importance before
// ranking.

#ifndef MHMS_VISUAL_SUM_HPP
#define MHMS_VISUAL_SUM_HPP

#include <Eigen/Core>
#include <optional>
#include <utility>
#include <vector>

#include "mhms/errors.hpp"

namespace mhms::visual {

struct FrameFeatures {
    Eigen::MatrixXd frames;                   // one row per frame
    std::optional<Eigen::VectorXd> sharpness; // nonnegative, one per frame

    long count() const noexcept { return frames.rows(); }
    long dimension() const noexcept { return frames.cols(); }
};

struct AttentionState {
    Eigen::VectorXd decoder_state;  // s
    Eigen::MatrixXd weight_matrix;  // W_a, frame_dim x state_dim
};

struct KeyframeCandidates {
    std::vector<std::pair<int, double>> ranked;  // (frame index, score), descending
};

class ImportanceScorer {
public:
    virtual ~ImportanceScorer() = default;
    virtual Eigen::VectorXd score(const FrameFeatures& frames) const = 0;
};

/// Default scorer: attention weights of a single step with the decoder state
/// set to the mean frame vector and W_a = identity.
class CentroidAttentionScorer final : public ImportanceScorer {
public:
    Eigen::VectorXd score(const FrameFeatures& frames) const override;
};

/// beta_i = e_i^T W_a s for every frame i.
Eigen::VectorXd attention_scores(const AttentionState& state, const FrameFeatures& frames);

/// Softmax with max-subtraction; sums to 1 for any finite input.
Eigen::VectorXd attention_weights(const Eigen::VectorXd& beta);

/// Context vector sum_i alpha_i e_i. Weights must sum to 1 within 1e-9.
Eigen::VectorXd attention_context(const Eigen::VectorXd& alpha, const FrameFeatures& frames);

/// Per-frame importance from the scorer; sharpness scalars, when present,
/// multiply the scores.
Eigen::VectorXd score_frames(const FrameFeatures& frames, const ImportanceScorer& scorer);

/// Top min(k, m) frames by score, descending, ties to the lower index.
KeyframeCandidates select_keyframes(const Eigen::VectorXd& scores, int k);

}  // namespace mhms::visual

#endif  // MHMS_VISUAL_SUM_HPP
