#include "mhms/align_select.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mhms::align {

namespace {

ot::SolverConfig solver_config_from(const io::PipelineConfig& c) {
    ot::SolverConfig s;
    s.kind = c.solver == "sinkhorn" ? ot::SolverKind::Sinkhorn : ot::SolverKind::Ipot;
    s.beta = c.beta;
    s.outer_iters = c.outer_iters;
    s.inner_iters = c.inner_iters;
    s.lambda = c.lambda;
    s.tol = c.tol;
    s.max_iter = c.max_iter;
    return s;
}

/// Argmin over a distance matrix, ties to the lowest (row, col) pair.
std::pair<int, int> argmin_cell(const Eigen::MatrixXd& m) {
    int bi = 0;
    int bj = 0;
    double best = m(0, 0);
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) {
            if (m(i, j) < best) {
                best = m(i, j);
                bi = i;
                bj = j;
            }
        }
    }
    return {bi, bj};
}

}  // namespace

SegmentPairing pair_segments(const video::SceneSegmentation& scenes, long shot_count,
                             const text::TextSegmentation& tsegs, long sentence_count,
                             const PairingPolicy& policy) {
    if (scenes.scenes.empty() || tsegs.segments.empty()) {
        throw InvalidArgument("pair_segments: both segmentations must be nonempty");
    }
    const int ns = static_cast<int>(scenes.scenes.size());
    const int nt = static_cast<int>(tsegs.segments.size());

    SegmentPairing out;
    std::vector<char> scene_used(static_cast<std::size_t>(ns), 0);
    std::vector<char> seg_used(static_cast<std::size_t>(nt), 0);

    if (policy.kind == PairingPolicy::Kind::Index) {
        out.policy_tag = "index";
        for (int i = 0; i < std::min(ns, nt); ++i) {
            out.pairs.emplace_back(i, i);
            scene_used[static_cast<std::size_t>(i)] = 1;
            seg_used[static_cast<std::size_t>(i)] = 1;
        }
    } else {
        out.policy_tag = "proportional";
        // Normalized midpoints; greedy nearest-midpoint matching.
        struct Cand {
            double gap;
            int scene;
            int seg;
        };
        std::vector<Cand> cands;
        cands.reserve(static_cast<std::size_t>(ns) * static_cast<std::size_t>(nt));
        for (int i = 0; i < ns; ++i) {
            const double ms = (scenes.scenes[static_cast<std::size_t>(i)].first +
                               scenes.scenes[static_cast<std::size_t>(i)].second) /
                              (2.0 * static_cast<double>(shot_count));
            for (int j = 0; j < nt; ++j) {
                const double mt = (tsegs.segments[static_cast<std::size_t>(j)].first +
                                   tsegs.segments[static_cast<std::size_t>(j)].second) /
                                  (2.0 * static_cast<double>(sentence_count));
                cands.push_back({std::abs(ms - mt), i, j});
            }
        }
        std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
            if (a.gap != b.gap) return a.gap < b.gap;
            if (a.scene != b.scene) return a.scene < b.scene;
            return a.seg < b.seg;
        });
        for (const Cand& c : cands) {
            if (scene_used[static_cast<std::size_t>(c.scene)] ||
                seg_used[static_cast<std::size_t>(c.seg)]) {
                continue;
            }
            out.pairs.emplace_back(c.scene, c.seg);
            scene_used[static_cast<std::size_t>(c.scene)] = 1;
            seg_used[static_cast<std::size_t>(c.seg)] = 1;
        }
        std::sort(out.pairs.begin(), out.pairs.end());
    }

    for (int i = 0; i < ns; ++i) {
        if (!scene_used[static_cast<std::size_t>(i)]) out.unpaired_scenes.push_back(i);
    }
    for (int j = 0; j < nt; ++j) {
        if (!seg_used[static_cast<std::size_t>(j)]) out.unpaired_segments.push_back(j);
    }
    return out;
}

std::vector<EmbeddingSet> keyframe_embedding_sets(const SceneCandidates& scene) {
    std::vector<EmbeddingSet> sets;
    sets.reserve(scene.keyframes.ranked.size());
    for (const auto& [frame, score] : scene.keyframes.ranked) {
        sets.emplace_back(scene.scene_frames.row(frame));
    }
    return sets;
}

std::vector<EmbeddingSet> text_embedding_sets(const text::TextCandidates& candidates,
                                              const text::SentenceSequence& seq,
                                              std::pair<int, int> segment_range) {
    std::vector<EmbeddingSet> sets;
    sets.reserve(candidates.ranked.size());
    for (const auto& cand : candidates.ranked) {
        if (!cand.sentence_indices.empty()) {
            Eigen::MatrixXd rows(static_cast<long>(cand.sentence_indices.size()),
                                 seq.dimension());
            for (std::size_t r = 0; r < cand.sentence_indices.size(); ++r) {
                rows.row(static_cast<long>(r)) = seq.embeddings.row(cand.sentence_indices[r]);
            }
            sets.emplace_back(std::move(rows));
        } else {
            // Adapter text has no in-process embedder; stand in with the
            // segment's mean sentence vector.
            const auto [begin, end] = segment_range;
            sets.emplace_back(
                seq.embeddings.middleRows(begin, end - begin).colwise().mean().eval());
        }
    }
    return sets;
}

MultimodalSummary select_summary(const SegmentPairing& pairing,
                                 const std::vector<SceneCandidates>& scene_candidates,
                                 const std::vector<text::TextCandidates>& segment_candidates,
                                 const text::SentenceSequence& sentences,
                                 const std::vector<std::pair<int, int>>& segment_ranges,
                                 const ot::SolverConfig& solver_config) {
    MultimodalSummary summary;
    summary.pairing = pairing;

    for (const auto& [scene, segment] : pairing.pairs) {
        const auto& sc = scene_candidates[static_cast<std::size_t>(scene)];
        const auto& tc = segment_candidates[static_cast<std::size_t>(segment)];
        if (sc.keyframes.ranked.empty() || tc.ranked.empty()) {
            throw MissingCandidates("pair (scene " + std::to_string(scene) + ", segment " +
                                    std::to_string(segment) + ") has an empty candidate side");
        }

        const auto kf_sets = keyframe_embedding_sets(sc);
        const auto tx_sets = text_embedding_sets(tc, sentences,
                                                 segment_ranges[static_cast<std::size_t>(segment)]);
        PairSelection sel;
        sel.scene = scene;
        sel.segment = segment;
        sel.distance_matrix = ot::pairwise_alignment_matrix(kf_sets, tx_sets, solver_config);
        const auto [i, j] = argmin_cell(sel.distance_matrix);
        sel.keyframe_candidate = i;
        sel.text_candidate = j;
        sel.frame_index = sc.keyframes.ranked[static_cast<std::size_t>(i)].first;
        sel.chosen_text = tc.ranked[static_cast<std::size_t>(j)];
        sel.distance = sel.distance_matrix(i, j);
        summary.selections.push_back(std::move(sel));
    }
    return summary;
}

MultimodalSummary select_summary_global(const std::vector<SceneCandidates>& scene_candidates,
                                        const std::vector<text::TextCandidates>& segment_candidates,
                                        const text::SentenceSequence& sentences,
                                        const std::vector<std::pair<int, int>>& segment_ranges,
                                        const ot::SolverConfig& solver_config) {
    std::vector<EmbeddingSet> kf_sets;
    std::vector<std::pair<int, int>> kf_owner;  // (scene, frame index)
    for (std::size_t s = 0; s < scene_candidates.size(); ++s) {
        for (const auto& set : keyframe_embedding_sets(scene_candidates[s])) {
            kf_sets.push_back(set);
        }
        for (const auto& [frame, score] : scene_candidates[s].keyframes.ranked) {
            kf_owner.emplace_back(static_cast<int>(s), frame);
        }
    }
    std::vector<EmbeddingSet> tx_sets;
    std::vector<std::pair<int, int>> tx_owner;  // (segment, candidate index)
    for (std::size_t t = 0; t < segment_candidates.size(); ++t) {
        const auto sets = text_embedding_sets(segment_candidates[t], sentences, segment_ranges[t]);
        for (std::size_t c = 0; c < sets.size(); ++c) {
            tx_sets.push_back(sets[c]);
            tx_owner.emplace_back(static_cast<int>(t), static_cast<int>(c));
        }
    }
    if (kf_sets.empty() || tx_sets.empty()) {
        throw MissingCandidates("global selection has an empty candidate side");
    }

    MultimodalSummary summary;
    summary.pairing.policy_tag = "global";
    PairSelection sel;
    sel.distance_matrix = ot::pairwise_alignment_matrix(kf_sets, tx_sets, solver_config);
    const auto [i, j] = argmin_cell(sel.distance_matrix);
    sel.keyframe_candidate = i;
    sel.text_candidate = tx_owner[static_cast<std::size_t>(j)].second;
    sel.scene = kf_owner[static_cast<std::size_t>(i)].first;
    sel.frame_index = kf_owner[static_cast<std::size_t>(i)].second;
    sel.segment = tx_owner[static_cast<std::size_t>(j)].first;
    sel.chosen_text =
        segment_candidates[static_cast<std::size_t>(sel.segment)]
            .ranked[static_cast<std::size_t>(sel.text_candidate)];
    sel.distance = sel.distance_matrix(i, j);
    summary.selections.push_back(std::move(sel));
    return summary;
}

VideoStage segment_video_stage(const io::VideoData& data, const io::PipelineConfig& config) {
    VideoStage stage;
    const video::LogisticDiffScorer scorer(config.kappa);
    if (data.shots.count() > 1) {
        const auto reprs = video::all_boundary_representations(data.shots, config.omega_b);
        const auto scores = video::coarse_scores(reprs, scorer);
        stage.boundary_scores = scores.scores;
        stage.scenes = video::assemble_scenes(data.shots, video::binarize(scores, config.tau));
    } else {
        stage.scenes = video::assemble_scenes(data.shots, {});
    }
    return stage;
}

std::vector<SceneCandidates> visual_stage(const io::VideoData& data,
                                          const video::SceneSegmentation& scenes,
                                          const io::PipelineConfig& config) {
    std::vector<SceneCandidates> out;
    const visual::CentroidAttentionScorer importance;
    for (const auto& [begin, end] : scenes.scenes) {
        long total = 0;
        for (int s = begin; s < end; ++s) {
            total += data.frames_per_shot[static_cast<std::size_t>(s)].frames.rows();
        }
        if (total < 1) {
            throw MissingCandidates("scene [" + std::to_string(begin) + ", " +
                                    std::to_string(end) + ") has no frames");
        }
        SceneCandidates sc;
        sc.scene_frames.resize(total, data.frames_per_shot[0].frames.cols());
        visual::FrameFeatures scene_frames;
        Eigen::VectorXd sharpness(total);
        bool has_sharpness = false;
        long row = 0;
        for (int s = begin; s < end; ++s) {
            const auto& f = data.frames_per_shot[static_cast<std::size_t>(s)];
            sc.scene_frames.middleRows(row, f.frames.rows()) = f.frames;
            if (f.sharpness) {
                sharpness.segment(row, f.frames.rows()) = *f.sharpness;
                has_sharpness = true;
            }
            row += f.frames.rows();
        }
        scene_frames.frames = sc.scene_frames;
        if (has_sharpness) scene_frames.sharpness = sharpness;
        sc.keyframes = visual::select_keyframes(visual::score_frames(scene_frames, importance),
                                                config.k);
        out.push_back(std::move(sc));
    }
    return out;
}

text::TextSegmentation segment_text_stage(const text::SentenceSequence& sentences,
                                          const io::PipelineConfig& config) {
    if (sentences.count() > 1) {
        const text::WindowDepthScorer scorer(config.w);
        const auto depths = scorer.depth_scores(sentences);
        const auto policy = config.text_policy == "fixed-count"
                                ? text::SegmentPolicy::fixed_count(config.text_fixed_count)
                                : text::SegmentPolicy::threshold(config.tau_text);
        return text::segment_text(depths, sentences.count(), policy);
    }
    return text::segment_text({}, sentences.count(),
                              text::SegmentPolicy::threshold(config.tau_text));
}

std::vector<text::TextCandidates> text_stage(const text::SentenceSequence& sentences,
                                             const text::TextSegmentation& segments,
                                             const io::PipelineConfig& config) {
    std::vector<text::TextCandidates> out;
    if (config.adapter.mode == text::AdapterConfig::Mode::None) {
        for (const auto& [begin, end] : segments.segments) {
            out.push_back(text::extractive_candidates(sentences, begin, end, config.n));
        }
        return out;
    }

    // Abstractive path: one request per segment, pipelined up to the
    // parallelism cap, matched by id. Any unavailability (spawn failure,
    // dead stream, timeout) degrades every segment to the extractive
    // fallback when enabled; protocol violations always propagate.
    try {
        text::AdapterClient adapter(config.adapter);
        std::vector<std::string> texts;
        for (const auto& [begin, end] : segments.segments) {
            texts.push_back(text::segment_text_of(sentences, begin, end));
        }
        const auto batches = adapter.summarize_batch(texts, config.n);
        for (const auto& summaries : batches) {
            text::TextCandidates cands;
            cands.provenance = "abstractive";
            for (const auto& summary : summaries) {
                text::TextCandidate cand;
                cand.text = summary;
                cand.score = 1.0;
                cands.ranked.push_back(std::move(cand));
            }
            out.push_back(std::move(cands));
        }
        return out;
    } catch (const AdapterUnavailable&) {
        if (!config.adapter.fallback) throw;
    }
    out.clear();
    for (const auto& [begin, end] : segments.segments) {
        auto cands = text::extractive_candidates(sentences, begin, end, config.n);
        cands.provenance = "extractive-fallback";
        out.push_back(std::move(cands));
    }
    return out;
}

PipelineResult run_pipeline(const io::Manifest& manifest) {
    if (!manifest.video || !manifest.text) {
        throw MissingModality("run_pipeline: the full pipeline needs both modalities");
    }
    const io::PipelineConfig& cfg = manifest.config;

    const io::VideoData video_data = io::load_video(manifest);
    const text::SentenceSequence sentences = io::load_text(manifest);

    PipelineResult result;
    VideoStage video_stage = segment_video_stage(video_data, cfg);
    result.scenes = std::move(video_stage.scenes);
    result.boundary_scores = std::move(video_stage.boundary_scores);
    result.text_segments = segment_text_stage(sentences, cfg);
    result.scene_candidates = visual_stage(video_data, result.scenes, cfg);
    result.segment_candidates = text_stage(sentences, result.text_segments, cfg);

    // Pair and select.
    const ot::SolverConfig solver = solver_config_from(cfg);
    if (cfg.align_scope == "global") {
        result.summary = select_summary_global(result.scene_candidates, result.segment_candidates,
                                               sentences, result.text_segments.segments, solver);
    } else {
        PairingPolicy policy;
        policy.kind = cfg.pairing_policy == "proportional" ? PairingPolicy::Kind::Proportional
                                                           : PairingPolicy::Kind::Index;
        const SegmentPairing pairing =
            pair_segments(result.scenes, video_data.shots.count(), result.text_segments,
                          sentences.count(), policy);
        result.summary = select_summary(pairing, result.scene_candidates,
                                        result.segment_candidates, sentences,
                                        result.text_segments.segments, solver);
    }
    return result;
}

UnimodalSummary unimodal_fallback(const io::Manifest& manifest, UnimodalMode mode) {
    const io::PipelineConfig& cfg = manifest.config;
    UnimodalSummary out;

    if (mode == UnimodalMode::TextOnly) {
        out.mode = "text-only";
        if (!manifest.text) throw MissingModality("text-only fallback requires a text section");
        const text::SentenceSequence sentences = io::load_text(manifest);
        const int k = static_cast<int>(std::min<long>(cfg.unimodal_k, sentences.count()));
        const auto clusters = text::kmeans(sentences.embeddings, k, cfg.seed);
        out.inertia = clusters.inertia;

        for (int c = 0; c < k; ++c) {
            long best = -1;
            double best_d = std::numeric_limits<double>::infinity();
            for (long p = 0; p < sentences.count(); ++p) {
                if (clusters.labels[static_cast<std::size_t>(p)] != c) continue;
                const double d =
                    (sentences.embeddings.row(p) - clusters.centroids.row(c)).squaredNorm();
                if (d < best_d) {
                    best_d = d;
                    best = p;
                }
            }
            out.selected.push_back(static_cast<int>(best));
            out.cluster_of_selected.push_back(c);
        }
    } else {
        out.mode = "video-only";
        if (!manifest.video) throw MissingModality("video-only fallback requires a video section");
        const io::VideoData video_data = io::load_video(manifest);
        long total = 0;
        for (const auto& f : video_data.frames_per_shot) total += f.frames.rows();
        if (total < 1) throw MissingModality("video-only fallback: no frames");

        Eigen::MatrixXd frames(total, video_data.frames_per_shot[0].frames.cols());
        Eigen::VectorXd sharpness = Eigen::VectorXd::Zero(total);
        bool has_sharpness = false;
        long row = 0;
        for (const auto& f : video_data.frames_per_shot) {
            frames.middleRows(row, f.frames.rows()) = f.frames;
            if (f.sharpness) {
                sharpness.segment(row, f.frames.rows()) = *f.sharpness;
                has_sharpness = true;
            }
            row += f.frames.rows();
        }

        const int k = static_cast<int>(std::min<long>(cfg.unimodal_k, total));
        const auto clusters = text::kmeans(frames, k, cfg.seed);
        out.inertia = clusters.inertia;

        for (int c = 0; c < k; ++c) {
            long best = -1;
            double best_key = -std::numeric_limits<double>::infinity();
            for (long p = 0; p < total; ++p) {
                if (clusters.labels[static_cast<std::size_t>(p)] != c) continue;
                // Prefer the sharpest frame when sharpness is supplied,
                // otherwise the frame closest to the centroid.
                const double key = has_sharpness
                                       ? sharpness(p)
                                       : -(frames.row(p) - clusters.centroids.row(c)).squaredNorm();
                if (key > best_key) {
                    best_key = key;
                    best = p;
                }
            }
            out.selected.push_back(static_cast<int>(best));
            out.cluster_of_selected.push_back(c);
        }
    }

    // Present selections in source order.
    std::vector<std::size_t> order(out.selected.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return out.selected[a] < out.selected[b]; });
    UnimodalSummary sorted;
    sorted.mode = out.mode;
    sorted.inertia = out.inertia;
    for (std::size_t i : order) {
        sorted.selected.push_back(out.selected[i]);
        sorted.cluster_of_selected.push_back(out.cluster_of_selected[i]);
    }
    return sorted;
}

}  // namespace mhms::align
