// Pipeline orchestration: pair video scenes with text segments, compute the
// transport distance between every keyframe-sentence candidate pair, and emit
// the final multimodal summary. Also hosts the unimodal k-means fallbacks.
//
// Keyframe candidates enter alignment as single-vector embedding sets (the
// frame's feature vector). Extractive text candidates carry their selected
// sentence vectors; abstractive candidates carry the mean of their segment's
// sentence vectors. Argmin ties break to the lowest (i, j) pair.

#ifndef MHMS_ALIGN_SELECT_HPP
#define MHMS_ALIGN_SELECT_HPP

#include <Eigen/Core>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mhms/io/manifest.hpp"
#include "mhms/ot_align.hpp"
#include "mhms/text_seg.hpp"
#include "mhms/text_sum.hpp"
#include "mhms/video_seg.hpp"
#include "mhms/visual_sum.hpp"

namespace mhms::align {

struct SegmentPairing {
    std::vector<std::pair<int, int>> pairs;  // (scene index, text segment index), by scene
    std::string policy_tag;
    std::vector<int> unpaired_scenes;
    std::vector<int> unpaired_segments;
};

struct PairSelection {
    int scene = 0;
    int segment = 0;
    int keyframe_candidate = 0;             // row of the distance matrix
    int text_candidate = 0;                 // column of the distance matrix
    int frame_index = 0;                    // frame within the scene
    text::TextCandidate chosen_text;
    double distance = 0.0;
    Eigen::MatrixXd distance_matrix;        // keyframe candidates x text candidates
};

struct MultimodalSummary {
    std::vector<PairSelection> selections;  // one per pair (or one total in global scope)
    SegmentPairing pairing;
};

struct SceneCandidates {
    visual::KeyframeCandidates keyframes;
    Eigen::MatrixXd scene_frames;  // frames of the whole scene, for embedding lookup
};

struct PipelineResult {
    video::SceneSegmentation scenes;
    std::vector<double> boundary_scores;
    text::TextSegmentation text_segments;
    std::vector<SceneCandidates> scene_candidates;
    std::vector<text::TextCandidates> segment_candidates;
    MultimodalSummary summary;
};

struct PairingPolicy {
    enum class Kind { Index, Proportional };
    Kind kind = Kind::Index;
};

SegmentPairing pair_segments(const video::SceneSegmentation& scenes, long shot_count,
                             const text::TextSegmentation& tsegs, long sentence_count,
                             const PairingPolicy& policy);

/// Alignment embedding sets for the candidates of one scene / one segment.
std::vector<EmbeddingSet> keyframe_embedding_sets(const SceneCandidates& scene);
std::vector<EmbeddingSet> text_embedding_sets(const text::TextCandidates& candidates,
                                              const text::SentenceSequence& seq,
                                              std::pair<int, int> segment_range);

MultimodalSummary select_summary(const SegmentPairing& pairing,
                                 const std::vector<SceneCandidates>& scene_candidates,
                                 const std::vector<text::TextCandidates>& segment_candidates,
                                 const text::SentenceSequence& sentences,
                                 const std::vector<std::pair<int, int>>& segment_ranges,
                                 const ot::SolverConfig& solver_config);

/// Global scope: every keyframe candidate across scenes against every text
/// candidate across segments; the single best pair is returned.
MultimodalSummary select_summary_global(const std::vector<SceneCandidates>& scene_candidates,
                                        const std::vector<text::TextCandidates>& segment_candidates,
                                        const text::SentenceSequence& sentences,
                                        const std::vector<std::pair<int, int>>& segment_ranges,
                                        const ot::SolverConfig& solver_config);

// Pipeline stages. run_pipeline composes them; the CLI stage subcommands
// call them individually.

struct VideoStage {
    video::SceneSegmentation scenes;
    std::vector<double> boundary_scores;
};

VideoStage segment_video_stage(const io::VideoData& data, const io::PipelineConfig& config);
std::vector<SceneCandidates> visual_stage(const io::VideoData& data,
                                          const video::SceneSegmentation& scenes,
                                          const io::PipelineConfig& config);
text::TextSegmentation segment_text_stage(const text::SentenceSequence& sentences,
                                          const io::PipelineConfig& config);
std::vector<text::TextCandidates> text_stage(const text::SentenceSequence& sentences,
                                             const text::TextSegmentation& segments,
                                             const io::PipelineConfig& config);

/// Full deterministic pipeline over a validated manifest.
PipelineResult run_pipeline(const io::Manifest& manifest);

struct UnimodalSummary {
    std::string mode;                      // "text-only" | "video-only"
    std::vector<int> selected;             // sentence or frame indices, ascending
    std::vector<int> cluster_of_selected;  // cluster id per selected item
    double inertia = 0.0;
};

enum class UnimodalMode { TextOnly, VideoOnly };

UnimodalSummary unimodal_fallback(const io::Manifest& manifest, UnimodalMode mode);

}  // namespace mhms::align

#endif  // MHMS_ALIGN_SELECT_HPP
