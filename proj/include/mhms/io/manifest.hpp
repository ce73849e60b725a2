// Manifest: the JSON description of one multimedia item's feature files plus
// configuration overrides. Validation checks every cross-file invariant and
// reports all violations at once (ManifestError).
//
// Schema (version 1):
// {
//   "version": 1,
//   "video": {
//     "shots": "shots.mheb",
//     "frames": ["shot0.mheb", ...],            // one file per shot, OR
//     "frames": "frames.mheb",
//     "frame_offsets": [0, 2, ...],             // start row per shot
//     "sharpness": "sharpness.mheb"             // optional, dim 1
//   },
//   "text": {
//     "sentences": "sentences.txt",             // UTF-8, one per line
//     "embeddings": "sentences.mheb"
//   },
//   "config": { ... overrides, see default table ... }
// }
//
// Relative paths resolve against the manifest's directory. At least one
// modality must be present; the full pipeline needs both.

#ifndef MHMS_IO_MANIFEST_HPP
#define MHMS_IO_MANIFEST_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mhms/errors.hpp"
#include "mhms/text_seg.hpp"
#include "mhms/text_sum.hpp"
#include "mhms/video_seg.hpp"
#include "mhms/visual_sum.hpp"

namespace mhms::io {

/// Engine defaults. Reports echo the full table so runs are self-describing.
struct PipelineConfig {
    // video segmentation
    int omega_b = 2;
    double tau = 0.5;
    double kappa = 10.0;
    int omega_t = 4;  // carried for trained scorer plugins; unused by the default scorer
    // text segmentation
    int w = 2;
    double tau_text = 0.4;
    std::string text_policy = "threshold";  // or "fixed-count"
    int text_fixed_count = 1;
    // candidate counts
    int k = 3;  // keyframe candidates per scene
    int n = 3;  // text candidates per segment
    // alignment solver
    std::string solver = "ipot";  // or "sinkhorn"
    double beta = 0.5;
    int outer_iters = 200;
    int inner_iters = 1;
    double lambda = 0.1;
    double tol = 1e-8;
    int max_iter = 2000;
    // pairing / selection
    std::string pairing_policy = "index";  // or "proportional"
    std::string align_scope = "per-pair";  // or "global"
    // misc
    std::uint64_t seed = 0;
    int unimodal_k = 3;
    text::AdapterConfig adapter;
};

struct VideoInputs {
    std::filesystem::path shots_file;
    std::vector<std::filesystem::path> frame_files;  // per-shot layout
    std::filesystem::path frames_file;               // single-file layout
    std::vector<long> frame_offsets;
    std::optional<std::filesystem::path> sharpness_file;

    bool per_shot_files() const noexcept { return !frame_files.empty(); }
};

struct TextInputs {
    std::filesystem::path sentences_file;
    std::filesystem::path embeddings_file;
};

struct Manifest {
    int version = 1;
    std::optional<VideoInputs> video;
    std::optional<TextInputs> text;
    PipelineConfig config;
    std::filesystem::path path;
};

struct VideoData {
    video::ShotSequence shots;
    std::vector<visual::FrameFeatures> frames_per_shot;
};

/// Parse and fully validate; throws ManifestError listing every violation.
/// With strict=false, unknown config keys warn instead of failing.
Manifest validate_manifest(const std::filesystem::path& path, bool strict = true);

VideoData load_video(const Manifest& manifest);
text::SentenceSequence load_text(const Manifest& manifest);

}  // namespace mhms::io

#endif  // MHMS_IO_MANIFEST_HPP
