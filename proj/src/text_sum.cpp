#include "mhms/text_sum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mhms/prng.hpp"

namespace mhms::text {

namespace {
constexpr double kNormFloor = 1e-12;
}

ClusterAssignment kmeans_lloyd(const Eigen::MatrixXd& vectors,
                               const std::vector<long>& initial_indices, int max_iter) {
    const long count = vectors.rows();
    const int k = static_cast<int>(initial_indices.size());
    if (count < 1) throw InvalidArgument("kmeans: no input vectors");
    if (k < 1) throw InvalidArgument("kmeans: k must be >= 1");
    if (k > count) {
        throw KTooLarge("kmeans: k = " + std::to_string(k) + " exceeds point count " +
                        std::to_string(count));
    }
    if (max_iter < 1) throw InvalidArgument("kmeans: max_iter must be >= 1");

    ClusterAssignment out;
    out.centroids.resize(k, vectors.cols());
    for (int c = 0; c < k; ++c) {
        const long idx = initial_indices[static_cast<std::size_t>(c)];
        if (idx < 0 || idx >= count) throw IndexOutOfRange("kmeans: initial index out of range");
        out.centroids.row(c) = vectors.row(idx);
    }

    out.labels.assign(static_cast<std::size_t>(count), 0);
    std::vector<double> dist2(static_cast<std::size_t>(count), 0.0);

    auto assign = [&]() {
        double inertia = 0.0;
        for (long p = 0; p < count; ++p) {
            int best = 0;
            double best_d = (vectors.row(p) - out.centroids.row(0)).squaredNorm();
            for (int c = 1; c < k; ++c) {
                const double d = (vectors.row(p) - out.centroids.row(c)).squaredNorm();
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            out.labels[static_cast<std::size_t>(p)] = best;
            dist2[static_cast<std::size_t>(p)] = best_d;
            inertia += best_d;
        }
        return inertia;
    };

    std::vector<int> prev_labels;
    for (int iter = 0; iter < max_iter; ++iter) {
        out.inertia = assign();
        out.inertia_history.push_back(out.inertia);
        out.iterations = iter + 1;

        // Re-seed empty clusters with the farthest point before updating.
        std::vector<long> sizes(static_cast<std::size_t>(k), 0);
        for (int label : out.labels) ++sizes[static_cast<std::size_t>(label)];
        for (int c = 0; c < k; ++c) {
            if (sizes[static_cast<std::size_t>(c)] > 0) continue;
            long far = 0;
            for (long p = 1; p < count; ++p) {
                if (dist2[static_cast<std::size_t>(p)] > dist2[static_cast<std::size_t>(far)]) far = p;
            }
            --sizes[static_cast<std::size_t>(out.labels[static_cast<std::size_t>(far)])];
            out.labels[static_cast<std::size_t>(far)] = c;
            dist2[static_cast<std::size_t>(far)] = 0.0;
            sizes[static_cast<std::size_t>(c)] = 1;
        }

        if (out.labels == prev_labels) break;
        prev_labels = out.labels;

        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, vectors.cols());
        for (long p = 0; p < count; ++p) {
            sums.row(out.labels[static_cast<std::size_t>(p)]) += vectors.row(p);
        }
        for (int c = 0; c < k; ++c) {
            out.centroids.row(c) = sums.row(c) / static_cast<double>(sizes[static_cast<std::size_t>(c)]);
        }
    }

    // Final inertia against the final centroids/labels.
    out.inertia = 0.0;
    for (long p = 0; p < count; ++p) {
        out.inertia += (vectors.row(p) - out.centroids.row(out.labels[static_cast<std::size_t>(p)]))
                           .squaredNorm();
    }
    return out;
}

ClusterAssignment kmeans(const Eigen::MatrixXd& vectors, int k, std::uint64_t seed,
                         int max_iter) {
    const long count = vectors.rows();
    if (count < 1) throw InvalidArgument("kmeans: no input vectors");
    if (k < 1) throw InvalidArgument("kmeans: k must be >= 1");
    if (k > count) {
        throw KTooLarge("kmeans: k = " + std::to_string(k) + " exceeds point count " +
                        std::to_string(count));
    }

    // k distinct start indices via partial Fisher-Yates on the child stream.
    Prng rng = Prng(seed).split(0x6b6d65616e73ULL);  // "kmeans"
    std::vector<long> pool(static_cast<std::size_t>(count));
    std::iota(pool.begin(), pool.end(), 0L);
    std::vector<long> initial;
    initial.reserve(static_cast<std::size_t>(k));
    for (int c = 0; c < k; ++c) {
        const std::size_t j = static_cast<std::size_t>(c) +
                              rng.next_below(static_cast<std::uint64_t>(count - c));
        std::swap(pool[static_cast<std::size_t>(c)], pool[j]);
        initial.push_back(pool[static_cast<std::size_t>(c)]);
    }
    return kmeans_lloyd(vectors, initial, max_iter);
}

std::string segment_text_of(const SentenceSequence& seq, int begin, int end) {
    std::string joined;
    for (int s = begin; s < end; ++s) {
        if (!joined.empty()) joined += ' ';
        joined += seq.texts[static_cast<std::size_t>(s)];
    }
    return joined;
}

TextCandidates extractive_candidates(const SentenceSequence& seq, int begin, int end, int n) {
    if (begin < 0 || end > seq.count() || begin >= end) {
        throw IndexOutOfRange("extractive_candidates: segment [" + std::to_string(begin) + ", " +
                              std::to_string(end) + ") out of range");
    }
    if (n < 1) throw InvalidArgument("extractive_candidates: n must be >= 1");

    const long len = end - begin;
    Eigen::VectorXd centroid =
        seq.embeddings.middleRows(begin, len).colwise().mean().transpose();
    const double centroid_norm = centroid.norm();

    std::vector<std::pair<int, double>> scored;
    scored.reserve(static_cast<std::size_t>(len));
    for (int s = begin; s < end; ++s) {
        const Eigen::VectorXd v = seq.embeddings.row(s).transpose();
        const double vn = v.norm();
        const double score = (vn > kNormFloor && centroid_norm > kNormFloor)
                                 ? v.dot(centroid) / (vn * centroid_norm)
                                 : 0.0;
        scored.emplace_back(s, score);
    }
    std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    TextCandidates out;
    out.provenance = "extractive";
    const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(n), scored.size());
    out.ranked.reserve(take);
    for (std::size_t r = 0; r < take; ++r) {
        TextCandidate cand;
        cand.sentence_indices = {scored[r].first};
        cand.text = seq.texts[static_cast<std::size_t>(scored[r].first)];
        cand.score = scored[r].second;
        out.ranked.push_back(std::move(cand));
    }
    return out;
}

TextCandidates abstractive_candidates(const SentenceSequence& seq, int begin, int end, int n,
                                      AdapterClient* client, bool fallback_enabled,
                                      const std::string& request_id) {
    if (client == nullptr) {
        if (!fallback_enabled) {
            throw AdapterUnavailable("abstractive_candidates: no adapter configured");
        }
        TextCandidates out = extractive_candidates(seq, begin, end, n);
        out.provenance = "extractive-fallback";
        return out;
    }

    const std::string text = segment_text_of(seq, begin, end);
    if (text.empty()) throw InvalidArgument("abstractive_candidates: segment text is empty");

    const std::vector<std::string> summaries = client->summarize(request_id, text, n);
    TextCandidates out;
    out.provenance = "abstractive";
    out.ranked.reserve(summaries.size());
    for (std::size_t r = 0; r < summaries.size(); ++r) {
        TextCandidate cand;
        cand.text = summaries[r];
        cand.score = 1.0;  // adapter rank order is preserved
        out.ranked.push_back(std::move(cand));
    }
    return out;
}

}  // namespace mhms::text
