// Topical segmentation of a sentence sequence behind a pluggable coherence
// scorer. The default scorer measures, at each candidate boundary, the cosine
// similarity of the mean-pooled sentence windows on both sides and converts
// the dips into depth scores: depth_i = (peak_left - sim_i) + (peak_right -
// sim_i), where each peak is the running maximum of the similarity curve
// moving away from the boundary.

#ifndef MHMS_TEXT_SEG_HPP
#define MHMS_TEXT_SEG_HPP

#include <Eigen/Core>
#include <string>
#include <utility>
#include <vector>

#include "mhms/errors.hpp"

namespace mhms::text {

struct SentenceSequence {
    std::vector<std::string> texts;
    Eigen::MatrixXd embeddings;  // one row per sentence
    std::string source_id;

    long count() const noexcept { return embeddings.rows(); }
    long dimension() const noexcept { return embeddings.cols(); }
};

struct TextSegmentation {
    std::vector<std::pair<int, int>> segments;  // contiguous [begin, end) sentence ranges
    std::vector<double> depth_scores;           // one per internal boundary
};

struct SegmentPolicy {
    enum class Kind { Threshold, FixedCount };
    Kind kind = Kind::Threshold;
    double tau_text = 0.4;  // Threshold: boundary chosen iff depth > tau_text
    int count = 1;          // FixedCount: top-`count` boundaries by depth

    static SegmentPolicy threshold(double tau) { return {Kind::Threshold, tau, 1}; }
    static SegmentPolicy fixed_count(int c) { return {Kind::FixedCount, 0.0, c}; }
};

class CoherenceScorer {
public:
    virtual ~CoherenceScorer() = default;
    virtual std::vector<double> depth_scores(const SentenceSequence& seq) const = 0;
};

/// Default scorer implementing the windowed depth formula above.
class WindowDepthScorer final : public CoherenceScorer {
public:
    explicit WindowDepthScorer(int window = 2) : window_(window) {}
    std::vector<double> depth_scores(const SentenceSequence& seq) const override;

private:
    int window_;
};

/// Depth scores for every internal boundary (n-1 values for n sentences).
std::vector<double> coherence_depth_scores(const SentenceSequence& seq, int window);

/// Choose boundaries per policy and assemble the partition.
TextSegmentation segment_text(const std::vector<double>& depth_scores, long sentence_count,
                              const SegmentPolicy& policy);

}  // namespace mhms::text

#endif  // MHMS_TEXT_SEG_HPP
