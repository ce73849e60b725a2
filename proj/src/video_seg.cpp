#include "mhms/video_seg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mhms::video {

namespace {
constexpr double kNormFloor = 1e-12;
}

std::vector<double> LogisticDiffScorer::score(const std::vector<BoundaryRepr>& reprs) const {
    std::vector<double> out;
    out.reserve(reprs.size());
    for (const auto& r : reprs) {
        const double d = std::clamp((r.diff_score + 1.0) / 2.0, 0.0, 1.0);
        out.push_back(1.0 / (1.0 + std::exp(-kappa_ * (0.5 - d))));
    }
    return out;
}

BoundaryRepr boundary_representation(const ShotSequence& shots, int i, int window) {
    const long n = shots.count();
    if (n < 1) throw InvalidArgument("boundary_representation: empty shot sequence");
    if (window < 1) throw EmptyWindow("boundary_representation: window must be >= 1");
    if (i < 1 || i > n - 1) {
        throw IndexOutOfRange("boundary_representation: boundary " + std::to_string(i) +
                              " outside [1, " + std::to_string(n - 1) + "]");
    }

    const long before_begin = std::max<long>(0, i - window);
    const long after_end = std::min<long>(n, i + window);

    Eigen::VectorXd before = shots.shots.middleRows(before_begin, i - before_begin)
                                 .colwise().mean().transpose();
    Eigen::VectorXd after = shots.shots.middleRows(i, after_end - i)
                                .colwise().mean().transpose();

    // A pooled window that cancels to zero carries no direction; treat it as
    // orthogonal to anything.
    double diff = 0.0;
    if (before.norm() > kNormFloor && after.norm() > kNormFloor) {
        diff = before.normalized().dot(after.normalized());
    }

    BoundaryRepr repr;
    repr.diff_score = diff;
    repr.relation_vector = shots.shots.middleRows(before_begin, after_end - before_begin)
                               .colwise().maxCoeff().transpose();
    repr.index = i;
    return repr;
}

std::vector<BoundaryRepr> all_boundary_representations(const ShotSequence& shots, int window) {
    std::vector<BoundaryRepr> reprs;
    const long n = shots.count();
    if (n < 1) throw InvalidArgument("all_boundary_representations: empty shot sequence");
    reprs.reserve(static_cast<std::size_t>(std::max<long>(0, n - 1)));
    for (int i = 1; i <= n - 1; ++i) {
        reprs.push_back(boundary_representation(shots, i, window));
    }
    return reprs;
}

CoarseScores coarse_scores(const std::vector<BoundaryRepr>& reprs, const BoundaryScorer& scorer) {
    if (reprs.empty()) {
        throw InvalidArgument("coarse_scores: boundary representation list is empty");
    }
    CoarseScores out;
    out.scores = scorer.score(reprs);
    if (out.scores.size() != reprs.size()) {
        throw LengthMismatch("coarse_scores: scorer returned " + std::to_string(out.scores.size()) +
                             " scores for " + std::to_string(reprs.size()) + " boundaries");
    }
    for (double& s : out.scores) s = std::clamp(s, 0.0, 1.0);
    return out;
}

std::vector<int> binarize(const CoarseScores& scores, double tau) {
    if (!(tau > 0.0) || !(tau < 1.0)) {
        throw InvalidArgument("binarize: tau must lie in (0, 1)");
    }
    std::vector<int> flags;
    flags.reserve(scores.scores.size());
    for (double s : scores.scores) flags.push_back(s > tau ? 1 : 0);
    return flags;
}

SceneSegmentation assemble_scenes(const ShotSequence& shots, const std::vector<int>& flags) {
    const long n = shots.count();
    if (n < 1) throw InvalidArgument("assemble_scenes: empty shot sequence");
    if (static_cast<long>(flags.size()) != n - 1) {
        throw LengthMismatch("assemble_scenes: expected " + std::to_string(n - 1) +
                             " flags, got " + std::to_string(flags.size()));
    }

    SceneSegmentation seg;
    seg.boundary_flags = flags;
    int begin = 0;
    for (long b = 0; b < n - 1; ++b) {
        if (flags[b] == 1) {
            seg.scenes.emplace_back(begin, static_cast<int>(b) + 1);
            begin = static_cast<int>(b) + 1;
        }
    }
    seg.scenes.emplace_back(begin, static_cast<int>(n));
    return seg;
}

SceneSegmentation segment_shots(const ShotSequence& shots, int window, double tau,
                                const BoundaryScorer& scorer) {
    if (shots.count() == 1) {
        return assemble_scenes(shots, {});
    }
    const auto reprs = all_boundary_representations(shots, window);
    return assemble_scenes(shots, binarize(coarse_scores(reprs, scorer), tau));
}

}  // namespace mhms::video
