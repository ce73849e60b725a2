// Report emission. Reports are JSON documents with insertion-ordered keys and
// every floating-point value printed with 17 significant digits, so a parsed
// report reproduces the original doubles exactly and two identical runs emit
// identical bytes.

#ifndef MHMS_IO_REPORT_HPP
#define MHMS_IO_REPORT_HPP

#include <optional>
#include <string>

#include "json.hpp"
#include "mhms/align_select.hpp"
#include "mhms/io/manifest.hpp"

namespace mhms::io {

using Report = nlohmann::ordered_json;

/// Serialize with 17-significant-digit doubles and 2-space indentation.
std::string dump_report(const Report& report);

Report parse_report(const std::string& text);

/// Full config table (defaults plus overrides) for embedding into reports.
Report config_echo(const PipelineConfig& config);

Report report_header(const std::string& command, const PipelineConfig& config);

Report video_section(const video::SceneSegmentation& scenes,
                     const std::vector<double>& boundary_scores, long shot_count);
Report text_section(const text::TextSegmentation& segments, long sentence_count);
Report visual_candidates_section(const std::vector<align::SceneCandidates>& scene_candidates);
Report text_candidates_section(const std::vector<text::TextCandidates>& segment_candidates);
Report alignment_section(const align::MultimodalSummary& summary);
Report unimodal_section(const align::UnimodalSummary& summary);

Report pipeline_report(const align::PipelineResult& result, const PipelineConfig& config);

}  // namespace mhms::io

#endif  // MHMS_IO_REPORT_HPP
