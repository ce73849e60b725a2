// Summary-quality and ranking metrics: ROUGE-1/2/L full-length F1, mean
// average precision, recall at position k, and cosine image similarity.
//
// Tokenization is fixed and documented: lowercase, split on any run of
// non-alphanumeric bytes, no stemming, no stopword removal. ROUGE-L uses
// summary-level LCS over the full token sequences.

#ifndef MHMS_METRICS_HPP
#define MHMS_METRICS_HPP

#include <Eigen/Core>
#include <string>
#include <vector>

#include "mhms/errors.hpp"

namespace mhms::metrics {

struct RougeScore {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct RankedJudgment {
    int candidate_count = 0;  // n
    int positive_rank = 0;    // 1-based rank of the positive sample
};

std::vector<std::string> tokenize(const std::string& text);

/// Clipped n-gram overlap, n in {1, 2}. Throws EmptyReference when the
/// reference has no tokens.
RougeScore rouge_n(const std::vector<std::string>& candidate,
                   const std::vector<std::string>& reference, int n);

/// Longest-common-subsequence F1 over full token sequences.
RougeScore rouge_l(const std::vector<std::string>& candidate,
                   const std::vector<std::string>& reference);

/// 1 iff the positive sample ranks in the top k of n candidates.
int recall_at_k(const RankedJudgment& judgment, int k);

/// Mean of recall_at_k over a batch.
double recall_at_k_batch(const std::vector<RankedJudgment>& judgments, int k);

/// Standard MAP: per query, average precision over the relevant positions;
/// mean over queries. Each relevance list holds 0/1 by rank (best first).
double mean_average_precision(const std::vector<std::vector<int>>& relevance_lists);

/// 100 * cos(a, b), clamped to [-100, 100].
double cosine_image_similarity(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

}  // namespace mhms::metrics

#endif  // MHMS_METRICS_HPP
