// Textual summary candidates per segment.
//
// In-process: centroid-cosine extractive ranking and seeded k-means (the
// ablation path for unimodal summaries). Out-of-process: an adapter client
// for an external abstractive summarizer speaking a line-delimited JSON
// protocol over a spawned process's standard streams or a TCP endpoint:
//
//   request:  {"id": string, "v": 1, "text": string, "n": int}\n
//   response: {"id": string, "v": 1, "candidates": [string, ...]}\n
//
// UTF-8, one JSON document per line, newlines inside strings escaped. When
// no adapter is configured (and fallback is enabled) extractive candidates
// are returned with provenance "extractive-fallback".

#ifndef MHMS_TEXT_SUM_HPP
#define MHMS_TEXT_SUM_HPP

#include <Eigen/Core>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "mhms/errors.hpp"
#include "mhms/text_seg.hpp"

namespace mhms::text {

struct TextCandidate {
    std::vector<int> sentence_indices;  // absolute indices; empty for adapter output
    std::string text;
    double score = 0.0;
};

struct TextCandidates {
    std::vector<TextCandidate> ranked;  // descending score, lexicographic tie-break
    std::string provenance;             // "extractive", "extractive-fallback", "abstractive"
};

struct ClusterAssignment {
    std::vector<int> labels;             // per input row
    Eigen::MatrixXd centroids;           // k rows
    double inertia = 0.0;                // sum of squared distances to assigned centroid
    std::vector<double> inertia_history; // one entry per Lloyd iteration
    int iterations = 0;
};

/// Lloyd's algorithm from explicit initial centroid rows. Empty clusters are
/// re-seeded to the point farthest from its assigned centroid. Permuting the
/// input rows together with the initial indices permutes the labels.
ClusterAssignment kmeans_lloyd(const Eigen::MatrixXd& vectors,
                               const std::vector<long>& initial_indices, int max_iter = 100);

/// Seeded k-means: k distinct start indices drawn from the engine PRNG, then
/// kmeans_lloyd. Deterministic for fixed input, k and seed.
ClusterAssignment kmeans(const Eigen::MatrixXd& vectors, int k, std::uint64_t seed,
                         int max_iter = 100);

/// Rank the sentences of [begin, end) by cosine similarity to the segment
/// centroid; candidates are the top-n singletons (ties to the lower index).
TextCandidates extractive_candidates(const SentenceSequence& seq, int begin, int end, int n);

// --------------------------------------------------------------------------
// Abstractive adapter
// --------------------------------------------------------------------------

struct AdapterConfig {
    enum class Mode { None, Process, Tcp };
    Mode mode = Mode::None;
    std::string command;       // Process: shell command line
    std::string host;          // Tcp
    int port = 0;              // Tcp
    bool fallback = true;      // fall back to extractive when no adapter runs
    double timeout_s = 30.0;   // per request
    int parallelism = 1;       // max in-flight requests
};

/// Client for the adapter line protocol. Requests carry unique ids and
/// responses are matched by id, never by arrival order.
class AdapterClient {
public:
    explicit AdapterClient(const AdapterConfig& config);
    ~AdapterClient();

    AdapterClient(const AdapterClient&) = delete;
    AdapterClient& operator=(const AdapterClient&) = delete;

    /// One request; blocks until the matching response or timeout.
    std::vector<std::string> summarize(const std::string& id, const std::string& text, int n);

    /// Issue up to `parallelism` requests at a time for a batch of texts;
    /// results come back in input order regardless of response order.
    std::vector<std::vector<std::string>> summarize_batch(const std::vector<std::string>& texts,
                                                          int n);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Abstractive candidates for one segment; `client` may be null (adapter
/// absent), in which case the extractive fallback applies when enabled.
TextCandidates abstractive_candidates(const SentenceSequence& seq, int begin, int end, int n,
                                      AdapterClient* client, bool fallback_enabled,
                                      const std::string& request_id);

/// Join the sentences of [begin, end) with single spaces.
std::string segment_text_of(const SentenceSequence& seq, int begin, int end);

}  // namespace mhms::text

#endif  // MHMS_TEXT_SUM_HPP
