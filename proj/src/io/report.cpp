#include "mhms/io/report.hpp"

#include <cstdio>
#include <string>

namespace mhms::io {

namespace {

std::string format_double(double value) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    std::string s(buf);
    // Keep the value a JSON float so parse(dump(r)) == r holds type-exactly.
    if (s.find_first_of(".eE") == std::string::npos) s += ".0";
    return s;
}

void dump_value(const Report& v, std::string& out, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent) * static_cast<std::size_t>(depth), ' ');
    const std::string pad_in(static_cast<std::size_t>(indent) * static_cast<std::size_t>(depth + 1),
                             ' ');
    switch (v.type()) {
        case nlohmann::json::value_t::object: {
            if (v.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (const auto& [key, value] : v.items()) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in;
                out += nlohmann::json(key).dump();
                out += ": ";
                dump_value(value, out, indent, depth + 1);
            }
            out += "\n" + pad + "}";
            return;
        }
        case nlohmann::json::value_t::array: {
            if (v.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            bool first = true;
            for (const auto& value : v) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in;
                dump_value(value, out, indent, depth + 1);
            }
            out += "\n" + pad + "]";
            return;
        }
        case nlohmann::json::value_t::number_float:
            out += format_double(v.get<double>());
            return;
        default:
            out += v.dump();
            return;
    }
}

}  // namespace

std::string dump_report(const Report& report) {
    std::string out;
    dump_value(report, out, 2, 0);
    out += "\n";
    return out;
}

Report parse_report(const std::string& text) {
    Report r = Report::parse(text, nullptr, false);
    if (r.is_discarded()) throw IoError("report is not valid JSON");
    return r;
}

Report config_echo(const PipelineConfig& c) {
    Report j;
    j["omega_b"] = c.omega_b;
    j["tau"] = c.tau;
    j["kappa"] = c.kappa;
    j["omega_t"] = c.omega_t;
    j["w"] = c.w;
    j["tau_text"] = c.tau_text;
    j["text_policy"] = c.text_policy;
    j["text_fixed_count"] = c.text_fixed_count;
    j["k"] = c.k;
    j["n"] = c.n;
    j["solver"] = c.solver;
    j["beta"] = c.beta;
    j["outer_iters"] = c.outer_iters;
    j["inner_iters"] = c.inner_iters;
    j["lambda"] = c.lambda;
    j["tol"] = c.tol;
    j["max_iter"] = c.max_iter;
    j["pairing_policy"] = c.pairing_policy;
    j["align_scope"] = c.align_scope;
    j["seed"] = c.seed;
    j["unimodal_k"] = c.unimodal_k;
    switch (c.adapter.mode) {
        case text::AdapterConfig::Mode::None:
            j["adapter"] = nullptr;
            break;
        case text::AdapterConfig::Mode::Process:
            j["adapter"] = {{"mode", "process"},
                            {"command", c.adapter.command},
                            {"fallback", c.adapter.fallback},
                            {"timeout_s", c.adapter.timeout_s},
                            {"parallelism", c.adapter.parallelism}};
            break;
        case text::AdapterConfig::Mode::Tcp:
            j["adapter"] = {{"mode", "tcp"},
                            {"host", c.adapter.host},
                            {"port", c.adapter.port},
                            {"fallback", c.adapter.fallback},
                            {"timeout_s", c.adapter.timeout_s},
                            {"parallelism", c.adapter.parallelism}};
            break;
    }
    return j;
}

Report report_header(const std::string& command, const PipelineConfig& config) {
    Report r;
    r["schema"] = "mhms-report/1";
    r["command"] = command;
    r["config"] = config_echo(config);
    return r;
}

Report video_section(const video::SceneSegmentation& scenes,
                     const std::vector<double>& boundary_scores, long shot_count) {
    Report j;
    j["num_shots"] = shot_count;
    j["boundary_scores"] = boundary_scores;
    j["boundary_flags"] = scenes.boundary_flags;
    Report ranges = Report::array();
    for (const auto& [b, e] : scenes.scenes) ranges.push_back({b, e});
    j["scenes"] = std::move(ranges);
    return j;
}

Report text_section(const text::TextSegmentation& segments, long sentence_count) {
    Report j;
    j["num_sentences"] = sentence_count;
    j["depth_scores"] = segments.depth_scores;
    Report ranges = Report::array();
    for (const auto& [b, e] : segments.segments) ranges.push_back({b, e});
    j["segments"] = std::move(ranges);
    return j;
}

Report visual_candidates_section(const std::vector<align::SceneCandidates>& scene_candidates) {
    Report per_scene = Report::array();
    for (std::size_t s = 0; s < scene_candidates.size(); ++s) {
        Report entry;
        entry["scene"] = s;
        Report cands = Report::array();
        for (const auto& [frame, score] : scene_candidates[s].keyframes.ranked) {
            cands.push_back({{"frame", frame}, {"score", score}});
        }
        entry["candidates"] = std::move(cands);
        per_scene.push_back(std::move(entry));
    }
    return per_scene;
}

Report text_candidates_section(const std::vector<text::TextCandidates>& segment_candidates) {
    Report per_segment = Report::array();
    for (std::size_t t = 0; t < segment_candidates.size(); ++t) {
        Report entry;
        entry["segment"] = t;
        entry["provenance"] = segment_candidates[t].provenance;
        Report cands = Report::array();
        for (const auto& cand : segment_candidates[t].ranked) {
            cands.push_back({{"sentences", cand.sentence_indices},
                             {"text", cand.text},
                             {"score", cand.score}});
        }
        entry["candidates"] = std::move(cands);
        per_segment.push_back(std::move(entry));
    }
    return per_segment;
}

Report alignment_section(const align::MultimodalSummary& summary) {
    Report j;
    j["policy"] = summary.pairing.policy_tag;
    Report pairs = Report::array();
    for (const auto& sel : summary.selections) {
        Report p;
        p["scene"] = sel.scene;
        p["segment"] = sel.segment;
        Report matrix = Report::array();
        for (long i = 0; i < sel.distance_matrix.rows(); ++i) {
            Report row = Report::array();
            for (long jj = 0; jj < sel.distance_matrix.cols(); ++jj) {
                row.push_back(sel.distance_matrix(i, jj));
            }
            matrix.push_back(std::move(row));
        }
        p["distance_matrix"] = std::move(matrix);
        p["chosen"] = {{"keyframe_candidate", sel.keyframe_candidate},
                       {"text_candidate", sel.text_candidate},
                       {"frame", sel.frame_index},
                       {"sentences", sel.chosen_text.sentence_indices},
                       {"text", sel.chosen_text.text},
                       {"distance", sel.distance}};
        pairs.push_back(std::move(p));
    }
    j["pairs"] = std::move(pairs);
    j["unpaired_scenes"] = summary.pairing.unpaired_scenes;
    j["unpaired_segments"] = summary.pairing.unpaired_segments;
    return j;
}

Report unimodal_section(const align::UnimodalSummary& summary) {
    Report j;
    j["mode"] = summary.mode;
    j["selected"] = summary.selected;
    j["cluster_of_selected"] = summary.cluster_of_selected;
    j["inertia"] = summary.inertia;
    return j;
}

Report pipeline_report(const align::PipelineResult& result, const PipelineConfig& config) {
    Report r = report_header("pipeline", config);
    long shot_count = 0;
    if (!result.scenes.scenes.empty()) shot_count = result.scenes.scenes.back().second;
    long sentence_count = 0;
    if (!result.text_segments.segments.empty()) {
        sentence_count = result.text_segments.segments.back().second;
    }
    r["video"] = video_section(result.scenes, result.boundary_scores, shot_count);
    r["text"] = text_section(result.text_segments, sentence_count);
    r["visual_candidates"] = visual_candidates_section(result.scene_candidates);
    r["text_candidates"] = text_candidates_section(result.segment_candidates);
    r["alignment"] = alignment_section(result.summary);
    return r;
}

}  // namespace mhms::io
