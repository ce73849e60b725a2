#include "mhms/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <unordered_map>

namespace mhms::metrics {

namespace {

constexpr double kNormFloor = 1e-12;

double f1_of(double p, double r) {
    return (p + r > 0.0) ? 2.0 * p * r / (p + r) : 0.0;
}

/// n-gram multiset; grams joined with an unprintable separator.
std::unordered_map<std::string, long> ngram_counts(const std::vector<std::string>& tokens, int n) {
    std::unordered_map<std::string, long> counts;
    if (static_cast<int>(tokens.size()) < n) return counts;
    for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= tokens.size(); ++i) {
        std::string gram = tokens[i];
        for (int j = 1; j < n; ++j) {
            gram += '\x1f';
            gram += tokens[i + static_cast<std::size_t>(j)];
        }
        ++counts[gram];
    }
    return counts;
}

}  // namespace

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string current;
    for (unsigned char c : text) {
        if (std::isalnum(c)) {
            current += static_cast<char>(std::tolower(c));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

RougeScore rouge_n(const std::vector<std::string>& candidate,
                   const std::vector<std::string>& reference, int n) {
    if (n != 1 && n != 2) throw InvalidArgument("rouge_n: n must be 1 or 2");
    if (reference.empty()) throw EmptyReference("rouge_n: reference has no tokens");

    const auto cand = ngram_counts(candidate, n);
    const auto ref = ngram_counts(reference, n);
    long cand_total = 0;
    long ref_total = 0;
    for (const auto& [gram, c] : cand) cand_total += c;
    for (const auto& [gram, c] : ref) ref_total += c;

    long overlap = 0;
    for (const auto& [gram, c] : cand) {
        const auto it = ref.find(gram);
        if (it != ref.end()) overlap += std::min(c, it->second);
    }

    RougeScore s;
    s.precision = cand_total > 0 ? static_cast<double>(overlap) / static_cast<double>(cand_total) : 0.0;
    s.recall = ref_total > 0 ? static_cast<double>(overlap) / static_cast<double>(ref_total) : 0.0;
    s.f1 = f1_of(s.precision, s.recall);
    return s;
}

RougeScore rouge_l(const std::vector<std::string>& candidate,
                   const std::vector<std::string>& reference) {
    if (reference.empty()) throw EmptyReference("rouge_l: reference has no tokens");

    const std::size_t nc = candidate.size();
    const std::size_t nr = reference.size();
    std::vector<long> prev(nr + 1, 0), curr(nr + 1, 0);
    for (std::size_t i = 1; i <= nc; ++i) {
        for (std::size_t j = 1; j <= nr; ++j) {
            curr[j] = candidate[i - 1] == reference[j - 1] ? prev[j - 1] + 1
                                                           : std::max(prev[j], curr[j - 1]);
        }
        std::swap(prev, curr);
    }
    const double lcs = static_cast<double>(prev[nr]);

    RougeScore s;
    s.precision = nc > 0 ? lcs / static_cast<double>(nc) : 0.0;
    s.recall = lcs / static_cast<double>(nr);
    s.f1 = f1_of(s.precision, s.recall);
    return s;
}

int recall_at_k(const RankedJudgment& judgment, int k) {
    if (judgment.candidate_count < 1 || judgment.positive_rank < 1 ||
        judgment.positive_rank > judgment.candidate_count) {
        throw InvalidArgument("recall_at_k: rank must lie in [1, n]");
    }
    if (k < 1 || k > judgment.candidate_count) {
        throw KExceedsN("recall_at_k: k = " + std::to_string(k) + " outside [1, n = " +
                        std::to_string(judgment.candidate_count) + "]");
    }
    return judgment.positive_rank <= k ? 1 : 0;
}

double recall_at_k_batch(const std::vector<RankedJudgment>& judgments, int k) {
    if (judgments.empty()) throw InvalidArgument("recall_at_k_batch: no judgments");
    long hits = 0;
    for (const auto& j : judgments) hits += recall_at_k(j, k);
    return static_cast<double>(hits) / static_cast<double>(judgments.size());
}

double mean_average_precision(const std::vector<std::vector<int>>& relevance_lists) {
    if (relevance_lists.empty()) throw InvalidArgument("mean_average_precision: no queries");
    double sum_ap = 0.0;
    for (std::size_t q = 0; q < relevance_lists.size(); ++q) {
        const auto& rel = relevance_lists[q];
        long relevant_seen = 0;
        double ap = 0.0;
        for (std::size_t pos = 0; pos < rel.size(); ++pos) {
            if (rel[pos] != 0) {
                ++relevant_seen;
                ap += static_cast<double>(relevant_seen) / static_cast<double>(pos + 1);
            }
        }
        if (relevant_seen == 0) {
            throw NoRelevantItems("mean_average_precision: query " + std::to_string(q) +
                                  " has no relevant items");
        }
        sum_ap += ap / static_cast<double>(relevant_seen);
    }
    return sum_ap / static_cast<double>(relevance_lists.size());
}

double cosine_image_similarity(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    if (a.size() != b.size()) throw DimensionMismatch("cosine_image_similarity: dimensions differ");
    const double na = a.norm();
    const double nb = b.norm();
    if (na <= kNormFloor) throw ZeroNormVector("cosine_image_similarity: first vector has zero norm", 0);
    if (nb <= kNormFloor) throw ZeroNormVector("cosine_image_similarity: second vector has zero norm", 1);
    return std::clamp(100.0 * a.dot(b) / (na * nb), -100.0, 100.0);
}

}  // namespace mhms::metrics
