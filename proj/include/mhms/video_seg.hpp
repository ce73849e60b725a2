// Scene segmentation over a shot sequence. Each internal shot boundary gets
// a two-branch representation (difference + relation), a pluggable scorer
// turns representations into per-boundary scene-change probabilities, and a
// threshold binarization splits the sequence into contiguous scenes.
//
// The shipped scorer is training-free: the difference branch is the inner
// product of the mean-pooled, L2-normalized windows on both sides of the
// boundary; the relation branch is an elementwise max-pool over the full
// window. A trained sequence model can replace it behind BoundaryScorer.

#ifndef MHMS_VIDEO_SEG_HPP
#define MHMS_VIDEO_SEG_HPP

#include <Eigen/Core>
#include <optional>
#include <utility>
#include <vector>

#include "mhms/errors.hpp"

namespace mhms::video {

struct ShotSequence {
    Eigen::MatrixXd shots;  // one row per shot
    std::optional<std::vector<std::pair<long, long>>> shot_spans;  // (start_frame, end_frame)

    long count() const noexcept { return shots.rows(); }
};

struct BoundaryRepr {
    double diff_score = 0.0;          // inner product of pooled side windows
    Eigen::VectorXd relation_vector;  // max-pool over the full window
    int index = 0;                    // boundary i in [1, n-1]
};

struct CoarseScores {
    std::vector<double> scores;  // one per internal boundary, each in [0, 1]
};

struct SceneSegmentation {
    std::vector<int> boundary_flags;             // 0/1 per internal boundary
    std::vector<std::pair<int, int>> scenes;     // contiguous [begin, end) shot ranges
};

class BoundaryScorer {
public:
    virtual ~BoundaryScorer() = default;
    virtual std::vector<double> score(const std::vector<BoundaryRepr>& reprs) const = 0;
};

/// Default scorer: score_i = 1 / (1 + exp(-kappa * (0.5 - d))) where
/// d = (diff_score + 1) / 2 maps the inner product into [0, 1]. Dissimilar
/// windows (low diff_score) score close to 1.
class LogisticDiffScorer final : public BoundaryScorer {
public:
    explicit LogisticDiffScorer(double kappa = 10.0) : kappa_(kappa) {}
    std::vector<double> score(const std::vector<BoundaryRepr>& reprs) const override;

private:
    double kappa_;
};

/// Representation of boundary i (between shots i-1 and i, 1 <= i <= n-1)
/// using up to `window` shots per side; windows truncate at sequence edges.
BoundaryRepr boundary_representation(const ShotSequence& shots, int i, int window);

/// Representations for every internal boundary.
std::vector<BoundaryRepr> all_boundary_representations(const ShotSequence& shots, int window);

CoarseScores coarse_scores(const std::vector<BoundaryRepr>& reprs, const BoundaryScorer& scorer);

/// flag_i = 1 iff score_i > tau (strict).
std::vector<int> binarize(const CoarseScores& scores, double tau);

SceneSegmentation assemble_scenes(const ShotSequence& shots, const std::vector<int>& flags);

/// Convenience: representations -> scores -> flags -> scenes with defaults.
SceneSegmentation segment_shots(const ShotSequence& shots, int window, double tau,
                                const BoundaryScorer& scorer);

}  // namespace mhms::video

#endif  // MHMS_VIDEO_SEG_HPP
