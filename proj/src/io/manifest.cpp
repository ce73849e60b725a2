#include "mhms/io/manifest.hpp"

#include <fstream>
#include <iostream>
#include <set>

#include "json.hpp"
#include "mhms/io/embedding_file.hpp"

namespace mhms::io {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

class Validator {
public:
    explicit Validator(std::filesystem::path manifest_path, bool strict)
        : path_(std::move(manifest_path)), strict_(strict) {}

    Manifest run() {
        json doc = parse_document();
        Manifest m;
        m.path = path_;
        if (!issues_.empty()) {  // unreadable / not JSON: nothing else to check
            throw ManifestError(std::move(issues_));
        }

        if (!doc.contains("version") || !doc["version"].is_number_integer()) {
            issue("missing-version", "manifest must carry an integer \"version\"");
        } else if (doc["version"].get<int>() != 1) {
            issue("version-unsupported",
                  "manifest version " + doc["version"].dump() + " unsupported (expected 1)");
        } else {
            m.version = 1;
        }

        if (doc.contains("video")) m.video = parse_video(doc["video"]);
        if (doc.contains("text")) m.text = parse_text(doc["text"]);
        if (!doc.contains("video") && !doc.contains("text")) {
            issue("missing-modality", "manifest must declare \"video\" and/or \"text\"");
        }
        if (doc.contains("config")) parse_config(doc["config"], m.config);

        cross_checks(m);

        if (!issues_.empty()) throw ManifestError(std::move(issues_));
        return m;
    }

private:
    void issue(std::string code, std::string message) {
        issues_.push_back({std::move(code), std::move(message)});
    }

    std::filesystem::path resolve(const std::string& rel) const {
        std::filesystem::path p(rel);
        return p.is_absolute() ? p : path_.parent_path() / p;
    }

    json parse_document() {
        std::ifstream in(path_);
        if (!in) {
            issue("io-error", "cannot open manifest: " + path_.string());
            return json();
        }
        json doc = json::parse(in, nullptr, false);
        if (doc.is_discarded() || !doc.is_object()) {
            issue("parse-error", "manifest is not a JSON object: " + path_.string());
            return json();
        }
        return doc;
    }

    /// Path field that must reference a readable embedding file; returns the
    /// row count and dimension through out-params when it parses.
    bool check_embedding_file(const std::filesystem::path& p, const std::string& what,
                              long& rows, long& dim) {
        try {
            const Eigen::MatrixXd m = read_matrix(p);
            rows = m.rows();
            dim = m.cols();
            return true;
        } catch (const Error& e) {
            issue(e.code(), what + ": " + e.what());
            return false;
        }
    }

    std::optional<VideoInputs> parse_video(const json& v) {
        if (!v.is_object()) {
            issue("bad-video", "\"video\" must be an object");
            return std::nullopt;
        }
        VideoInputs inputs;
        if (!v.contains("shots") || !v["shots"].is_string()) {
            issue("missing-shots", "video.shots must name the shot feature file");
            return std::nullopt;
        }
        inputs.shots_file = resolve(v["shots"].get<std::string>());
        long shot_count = 0;
        long shot_dim = 0;
        if (!check_embedding_file(inputs.shots_file, "video.shots", shot_count, shot_dim)) {
            return std::nullopt;
        }
        if (shot_count < 1) issue("empty-shots", "video.shots has zero rows");

        if (!v.contains("frames")) {
            issue("missing-frames", "video.frames must list per-shot files or name one file");
            return std::nullopt;
        }
        long total_frames = 0;
        if (v["frames"].is_array()) {
            if (static_cast<long>(v["frames"].size()) != shot_count) {
                issue("count-mismatch",
                      "video.frames lists " + std::to_string(v["frames"].size()) +
                          " files but video.shots has " + std::to_string(shot_count) + " shots");
            }
            long frame_dim = -1;
            for (const auto& f : v["frames"]) {
                if (!f.is_string()) {
                    issue("bad-frames", "video.frames entries must be file names");
                    continue;
                }
                inputs.frame_files.push_back(resolve(f.get<std::string>()));
                long rows = 0;
                long dim = 0;
                if (check_embedding_file(inputs.frame_files.back(), "video.frames", rows, dim)) {
                    total_frames += rows;
                    if (frame_dim >= 0 && dim != frame_dim) {
                        issue("dimension-mismatch", "video.frames files disagree on dimension");
                    }
                    frame_dim = dim;
                }
            }
            frame_dim_ = frame_dim;
        } else if (v["frames"].is_string()) {
            inputs.frames_file = resolve(v["frames"].get<std::string>());
            long rows = 0;
            long dim = 0;
            if (!check_embedding_file(inputs.frames_file, "video.frames", rows, dim)) {
                return std::nullopt;
            }
            total_frames = rows;
            frame_dim_ = dim;
            if (!v.contains("frame_offsets") || !v["frame_offsets"].is_array()) {
                issue("missing-frame-offsets",
                      "single-file video.frames requires \"frame_offsets\" (start row per shot)");
            } else {
                for (const auto& o : v["frame_offsets"]) {
                    if (!o.is_number_integer()) {
                        issue("bad-frame-offsets", "frame_offsets must be integers");
                        break;
                    }
                    inputs.frame_offsets.push_back(o.get<long>());
                }
                if (static_cast<long>(inputs.frame_offsets.size()) != shot_count) {
                    issue("count-mismatch",
                          "frame_offsets has " + std::to_string(inputs.frame_offsets.size()) +
                              " entries but video.shots has " + std::to_string(shot_count) +
                              " shots");
                } else {
                    if (!inputs.frame_offsets.empty() && inputs.frame_offsets.front() != 0) {
                        issue("bad-frame-offsets", "frame_offsets must start at 0");
                    }
                    for (std::size_t i = 1; i < inputs.frame_offsets.size(); ++i) {
                        if (inputs.frame_offsets[i] < inputs.frame_offsets[i - 1]) {
                            issue("bad-frame-offsets", "frame_offsets must be non-decreasing");
                            break;
                        }
                    }
                    if (!inputs.frame_offsets.empty() && inputs.frame_offsets.back() > rows) {
                        issue("bad-frame-offsets", "frame_offsets exceed the frame row count");
                    }
                }
            }
        } else {
            issue("bad-frames", "video.frames must be a file name or an array of file names");
        }
        total_frames_ = total_frames;

        if (v.contains("sharpness")) {
            if (!v["sharpness"].is_string()) {
                issue("bad-sharpness", "video.sharpness must be a file name");
            } else {
                inputs.sharpness_file = resolve(v["sharpness"].get<std::string>());
                long rows = 0;
                long dim = 0;
                if (check_embedding_file(*inputs.sharpness_file, "video.sharpness", rows, dim)) {
                    if (dim != 1) issue("bad-sharpness", "video.sharpness must have dimension 1");
                    if (rows != total_frames) {
                        issue("count-mismatch", "video.sharpness has " + std::to_string(rows) +
                                                    " rows but there are " +
                                                    std::to_string(total_frames) + " frames");
                    }
                }
            }
        }
        return inputs;
    }

    std::optional<TextInputs> parse_text(const json& t) {
        if (!t.is_object()) {
            issue("bad-text", "\"text\" must be an object");
            return std::nullopt;
        }
        TextInputs inputs;
        if (!t.contains("sentences") || !t["sentences"].is_string()) {
            issue("missing-sentences", "text.sentences must name the sentence file");
            return std::nullopt;
        }
        if (!t.contains("embeddings") || !t["embeddings"].is_string()) {
            issue("missing-embeddings", "text.embeddings must name the embedding file");
            return std::nullopt;
        }
        inputs.sentences_file = resolve(t["sentences"].get<std::string>());
        inputs.embeddings_file = resolve(t["embeddings"].get<std::string>());

        long line_count = 0;
        bool sentences_read = false;
        std::ifstream in(inputs.sentences_file);
        if (!in) {
            issue("io-error", "cannot open text.sentences: " + inputs.sentences_file.string());
        } else {
            sentences_read = true;
            std::string line;
            while (std::getline(in, line)) {
                ++line_count;
                if (trim(line).empty()) {
                    issue("empty-sentence",
                          "text.sentences line " + std::to_string(line_count) + " is empty");
                }
            }
            if (line_count == 0) issue("empty-sentences", "text.sentences has no lines");
        }

        long rows = 0;
        long dim = 0;
        if (check_embedding_file(inputs.embeddings_file, "text.embeddings", rows, dim)) {
            sentence_dim_ = dim;
            if (sentences_read && rows != line_count) {
                issue("count-mismatch", "text.sentences has " + std::to_string(line_count) +
                                            " lines but text.embeddings has " +
                                            std::to_string(rows) + " rows");
            }
        }
        return inputs;
    }

    void parse_config(const json& c, PipelineConfig& config) {
        if (!c.is_object()) {
            issue("bad-config", "\"config\" must be an object");
            return;
        }
        static const std::set<std::string> known = {
            "omega_b", "tau", "kappa", "omega_t", "w", "tau_text", "text_policy",
            "text_fixed_count", "k", "n", "solver", "beta", "outer_iters", "inner_iters",
            "lambda", "tol", "max_iter", "pairing_policy", "align_scope", "seed",
            "unimodal_k", "adapter"};
        for (const auto& [key, value] : c.items()) {
            if (known.count(key) == 0) {
                if (strict_) {
                    issue("unknown-key", "unknown config key \"" + key + "\"");
                } else {
                    std::cerr << "mhms: warning: ignoring unknown config key \"" << key << "\"\n";
                }
            }
        }

        auto get_int = [&](const char* key, int& slot, int min_value) {
            if (!c.contains(key)) return;
            if (!c[key].is_number_integer() || c[key].get<long>() < min_value) {
                issue("bad-config", std::string("config.") + key + " must be an integer >= " +
                                        std::to_string(min_value));
                return;
            }
            slot = c[key].get<int>();
        };
        auto get_positive = [&](const char* key, double& slot) {
            if (!c.contains(key)) return;
            if (!c[key].is_number() || !(c[key].get<double>() > 0.0)) {
                issue("bad-config", std::string("config.") + key + " must be > 0");
                return;
            }
            slot = c[key].get<double>();
        };
        auto get_unit_open = [&](const char* key, double& slot) {
            if (!c.contains(key)) return;
            if (!c[key].is_number() || !(c[key].get<double>() > 0.0) ||
                !(c[key].get<double>() < 1.0)) {
                issue("bad-config", std::string("config.") + key + " must lie in (0, 1)");
                return;
            }
            slot = c[key].get<double>();
        };
        auto get_choice = [&](const char* key, std::string& slot,
                              std::initializer_list<const char*> allowed) {
            if (!c.contains(key)) return;
            if (c[key].is_string()) {
                const std::string v = c[key].get<std::string>();
                for (const char* a : allowed) {
                    if (v == a) {
                        slot = v;
                        return;
                    }
                }
            }
            std::string opts;
            for (const char* a : allowed) {
                if (!opts.empty()) opts += " | ";
                opts += a;
            }
            issue("bad-config", std::string("config.") + key + " must be one of: " + opts);
        };

        get_int("omega_b", config.omega_b, 1);
        get_unit_open("tau", config.tau);
        get_positive("kappa", config.kappa);
        get_int("omega_t", config.omega_t, 1);
        get_int("w", config.w, 1);
        if (c.contains("tau_text")) {
            if (!c["tau_text"].is_number()) {
                issue("bad-config", "config.tau_text must be a number");
            } else {
                config.tau_text = c["tau_text"].get<double>();
            }
        }
        get_choice("text_policy", config.text_policy, {"threshold", "fixed-count"});
        get_int("text_fixed_count", config.text_fixed_count, 0);
        get_int("k", config.k, 1);
        get_int("n", config.n, 1);
        get_choice("solver", config.solver, {"ipot", "sinkhorn"});
        get_positive("beta", config.beta);
        get_int("outer_iters", config.outer_iters, 1);
        get_int("inner_iters", config.inner_iters, 1);
        get_positive("lambda", config.lambda);
        get_positive("tol", config.tol);
        get_int("max_iter", config.max_iter, 1);
        get_choice("pairing_policy", config.pairing_policy, {"index", "proportional"});
        get_choice("align_scope", config.align_scope, {"per-pair", "global"});
        if (c.contains("seed")) {
            if (!c["seed"].is_number_integer()) {
                issue("bad-config", "config.seed must be an integer");
            } else {
                config.seed = c["seed"].get<std::uint64_t>();
            }
        }
        get_int("unimodal_k", config.unimodal_k, 1);

        if (c.contains("adapter") && !c["adapter"].is_null()) {
            parse_adapter(c["adapter"], config.adapter);
        }
    }

    void parse_adapter(const json& a, text::AdapterConfig& adapter) {
        if (!a.is_object()) {
            issue("bad-config", "config.adapter must be an object");
            return;
        }
        std::string mode;
        if (!a.contains("mode") || !a["mode"].is_string()) {
            issue("bad-config", "config.adapter.mode must be \"process\" or \"tcp\"");
            return;
        }
        mode = a["mode"].get<std::string>();
        if (mode == "process") {
            adapter.mode = text::AdapterConfig::Mode::Process;
            if (!a.contains("command") || !a["command"].is_string() ||
                a["command"].get<std::string>().empty()) {
                issue("bad-config", "config.adapter.command required for process mode");
            } else {
                adapter.command = a["command"].get<std::string>();
            }
        } else if (mode == "tcp") {
            adapter.mode = text::AdapterConfig::Mode::Tcp;
            if (!a.contains("host") || !a["host"].is_string() || !a.contains("port") ||
                !a["port"].is_number_integer()) {
                issue("bad-config", "config.adapter tcp mode requires host and port");
            } else {
                adapter.host = a["host"].get<std::string>();
                adapter.port = a["port"].get<int>();
            }
        } else {
            issue("bad-config", "config.adapter.mode must be \"process\" or \"tcp\"");
            return;
        }
        if (a.contains("fallback")) {
            if (!a["fallback"].is_boolean()) {
                issue("bad-config", "config.adapter.fallback must be a boolean");
            } else {
                adapter.fallback = a["fallback"].get<bool>();
            }
        }
        if (a.contains("timeout_s")) {
            if (!a["timeout_s"].is_number() || !(a["timeout_s"].get<double>() > 0.0)) {
                issue("bad-config", "config.adapter.timeout_s must be > 0");
            } else {
                adapter.timeout_s = a["timeout_s"].get<double>();
            }
        }
        if (a.contains("parallelism")) {
            if (!a["parallelism"].is_number_integer() || a["parallelism"].get<int>() < 1) {
                issue("bad-config", "config.adapter.parallelism must be >= 1");
            } else {
                adapter.parallelism = a["parallelism"].get<int>();
            }
        }
    }

    void cross_checks(const Manifest& m) {
        if (m.video && m.text && frame_dim_ > 0 && sentence_dim_ > 0 &&
            frame_dim_ != sentence_dim_) {
            issue("dimension-mismatch",
                  "frame features (dim " + std::to_string(frame_dim_) +
                      ") and sentence embeddings (dim " + std::to_string(sentence_dim_) +
                      ") must share one dimension for alignment");
        }
    }

    std::filesystem::path path_;
    bool strict_;
    std::vector<ManifestIssue> issues_;
    long frame_dim_ = -1;
    long sentence_dim_ = -1;
    long total_frames_ = 0;
};

}  // namespace

Manifest validate_manifest(const std::filesystem::path& path, bool strict) {
    return Validator(path, strict).run();
}

VideoData load_video(const Manifest& manifest) {
    if (!manifest.video) throw MissingModality("manifest has no video section");
    const VideoInputs& in = *manifest.video;

    VideoData data;
    data.shots.shots = read_matrix(in.shots_file);
    const long n = data.shots.shots.rows();

    std::optional<Eigen::VectorXd> sharpness_all;
    if (in.sharpness_file) {
        sharpness_all = read_matrix(*in.sharpness_file).col(0);
    }

    long frame_cursor = 0;
    if (in.per_shot_files()) {
        for (long s = 0; s < n; ++s) {
            visual::FrameFeatures f;
            f.frames = read_matrix(in.frame_files[static_cast<std::size_t>(s)]);
            if (sharpness_all) {
                f.sharpness = sharpness_all->segment(frame_cursor, f.frames.rows());
            }
            frame_cursor += f.frames.rows();
            data.frames_per_shot.push_back(std::move(f));
        }
    } else {
        const Eigen::MatrixXd all = read_matrix(in.frames_file);
        for (long s = 0; s < n; ++s) {
            const long begin = in.frame_offsets[static_cast<std::size_t>(s)];
            const long end = s + 1 < n ? in.frame_offsets[static_cast<std::size_t>(s + 1)]
                                       : all.rows();
            visual::FrameFeatures f;
            f.frames = all.middleRows(begin, end - begin);
            if (sharpness_all) f.sharpness = sharpness_all->segment(begin, end - begin);
            data.frames_per_shot.push_back(std::move(f));
        }
    }
    return data;
}

text::SentenceSequence load_text(const Manifest& manifest) {
    if (!manifest.text) throw MissingModality("manifest has no text section");
    const TextInputs& in = *manifest.text;

    text::SentenceSequence seq;
    seq.source_id = in.sentences_file.filename().string();
    std::ifstream file(in.sentences_file);
    if (!file) throw IoError("cannot open sentence file: " + in.sentences_file.string());
    std::string line;
    while (std::getline(file, line)) seq.texts.push_back(trim(line));
    seq.embeddings = read_matrix(in.embeddings_file);
    if (static_cast<long>(seq.texts.size()) != seq.embeddings.rows()) {
        throw LengthMismatch("sentence count does not match embedding rows");
    }
    return seq;
}

}  // namespace mhms::io
