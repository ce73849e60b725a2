#include "mhms/text_seg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mhms::text {

namespace {
constexpr double kNormFloor = 1e-12;
}

std::vector<double> coherence_depth_scores(const SentenceSequence& seq, int window) {
    const long n = seq.count();
    if (n < 2) throw InvalidArgument("coherence_depth_scores: need at least two sentences");
    if (window < 1) throw InvalidArgument("coherence_depth_scores: window must be >= 1");

    // sims[b] is the window similarity at the boundary between sentences b and b+1.
    std::vector<double> sims(static_cast<std::size_t>(n - 1));
    for (long i = 1; i <= n - 1; ++i) {
        const long before_begin = std::max<long>(0, i - window);
        const long after_end = std::min<long>(n, i + window);
        Eigen::VectorXd before = seq.embeddings.middleRows(before_begin, i - before_begin)
                                     .colwise().mean().transpose();
        Eigen::VectorXd after = seq.embeddings.middleRows(i, after_end - i)
                                    .colwise().mean().transpose();
        if (before.norm() <= kNormFloor) {
            throw ZeroNormVector("coherence_depth_scores: pooled window before boundary " +
                                     std::to_string(i) + " has zero norm", i);
        }
        if (after.norm() <= kNormFloor) {
            throw ZeroNormVector("coherence_depth_scores: pooled window after boundary " +
                                     std::to_string(i) + " has zero norm", i);
        }
        sims[static_cast<std::size_t>(i - 1)] = before.normalized().dot(after.normalized());
    }

    std::vector<double> depth(sims.size());
    for (std::size_t b = 0; b < sims.size(); ++b) {
        double peak_left = sims[b];
        for (std::size_t j = b; j-- > 0;) peak_left = std::max(peak_left, sims[j]);
        double peak_right = sims[b];
        for (std::size_t j = b + 1; j < sims.size(); ++j) peak_right = std::max(peak_right, sims[j]);
        depth[b] = (peak_left - sims[b]) + (peak_right - sims[b]);
    }
    return depth;
}

std::vector<double> WindowDepthScorer::depth_scores(const SentenceSequence& seq) const {
    return coherence_depth_scores(seq, window_);
}

TextSegmentation segment_text(const std::vector<double>& depth_scores, long sentence_count,
                              const SegmentPolicy& policy) {
    if (sentence_count < 1) throw InvalidArgument("segment_text: empty sentence sequence");
    if (static_cast<long>(depth_scores.size()) != sentence_count - 1) {
        throw LengthMismatch("segment_text: expected " + std::to_string(sentence_count - 1) +
                             " depth scores, got " + std::to_string(depth_scores.size()));
    }

    std::vector<char> chosen(depth_scores.size(), 0);
    switch (policy.kind) {
        case SegmentPolicy::Kind::Threshold: {
            if (!std::isfinite(policy.tau_text)) {
                throw InvalidPolicy("segment_text: threshold is not finite");
            }
            for (std::size_t b = 0; b < depth_scores.size(); ++b) {
                chosen[b] = depth_scores[b] > policy.tau_text ? 1 : 0;
            }
            break;
        }
        case SegmentPolicy::Kind::FixedCount: {
            if (policy.count < 0) throw InvalidPolicy("segment_text: fixed count must be >= 0");
            std::vector<std::size_t> order(depth_scores.size());
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                if (depth_scores[a] != depth_scores[b]) return depth_scores[a] > depth_scores[b];
                return a < b;
            });
            const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(policy.count),
                                                           order.size());
            for (std::size_t r = 0; r < take; ++r) chosen[order[r]] = 1;
            break;
        }
        default:
            throw InvalidPolicy("segment_text: unknown policy");
    }

    TextSegmentation seg;
    seg.depth_scores = depth_scores;
    int begin = 0;
    for (std::size_t b = 0; b < chosen.size(); ++b) {
        if (chosen[b]) {
            seg.segments.emplace_back(begin, static_cast<int>(b) + 1);
            begin = static_cast<int>(b) + 1;
        }
    }
    seg.segments.emplace_back(begin, static_cast<int>(sentence_count));
    return seg;
}

}  // namespace mhms::text
