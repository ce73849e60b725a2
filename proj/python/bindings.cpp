// Python bindings for the engine's main operations: the transport solvers,
// segmentation and summarization primitives, evaluation metrics, and the
// full pipeline runner.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "mhms/align_select.hpp"
#include "mhms/io/embedding_file.hpp"
#include "mhms/io/manifest.hpp"
#include "mhms/io/report.hpp"
#include "mhms/metrics.hpp"
#include "mhms/oracle_check.hpp"
#include "mhms/ot_align.hpp"
#include "mhms/text_seg.hpp"
#include "mhms/text_sum.hpp"
#include "mhms/video_seg.hpp"
#include "mhms/visual_sum.hpp"

namespace py = pybind11;
using namespace mhms;

namespace {

ot::CostMatrix cost_from(const Eigen::MatrixXd& entries) {
    ot::CostMatrix c;
    c.entries = entries;
    c.metric_tag = "raw";
    return c;
}

py::dict solution_dict(const ot::OtSolution& sol) {
    py::dict out;
    out["plan"] = sol.plan.matrix;
    out["distance"] = sol.distance;
    out["iterations_used"] = sol.plan.iterations_used;
    out["converged"] = sol.plan.converged;
    return out;
}

EmbeddingSet set_from(const Eigen::MatrixXd& vectors, const Eigen::VectorXd& weights) {
    if (weights.size() == 0) return EmbeddingSet(vectors);
    return EmbeddingSet(vectors, weights);
}

}  // namespace

PYBIND11_MODULE(_mhms, m) {
    m.doc() = "Multimodal summarization engine: optimal-transport alignment, "
              "segmentation, summarization, and evaluation metrics";

    py::register_exception<Error>(m, "MhmsError");

    // ---- optimal transport ----
    m.def(
        "cosine_cost",
        [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
            return ot::cosine_cost(EmbeddingSet(a), EmbeddingSet(b)).entries;
        },
        py::arg("a"), py::arg("b"),
        "Pairwise cosine distance between row sets; entries in [0, 2]");

    m.def(
        "sinkhorn_entropic",
        [](const Eigen::MatrixXd& cost, const Eigen::VectorXd& mu, const Eigen::VectorXd& nu,
           double lam, double tol, int max_iter) {
            return solution_dict(ot::sinkhorn_entropic(cost_from(cost), mu, nu, lam, tol, max_iter));
        },
        py::arg("cost"), py::arg("mu"), py::arg("nu"), py::arg("lam") = 0.1,
        py::arg("tol") = 1e-8, py::arg("max_iter") = 2000,
        "Entropic-regularized transport; the distance is the unregularized <C, T>");

    m.def(
        "ipot_align_distance",
        [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double beta, int outer_iters,
           int inner_iters, const Eigen::VectorXd& a_weights, const Eigen::VectorXd& b_weights) {
            return solution_dict(ot::ipot_align_distance(set_from(a, a_weights),
                                                         set_from(b, b_weights), beta,
                                                         outer_iters, inner_iters));
        },
        py::arg("a"), py::arg("b"), py::arg("beta") = 0.5, py::arg("outer_iters") = 200,
        py::arg("inner_iters") = 1, py::arg("a_weights") = Eigen::VectorXd(),
        py::arg("b_weights") = Eigen::VectorXd(),
        "Proximal-point alignment distance between two embedding sets");

    m.def(
        "lp_oracle",
        [](const Eigen::MatrixXd& cost, const Eigen::VectorXd& mu, const Eigen::VectorXd& nu) {
            return solution_dict(ot::lp_oracle(cost_from(cost), mu, nu));
        },
        py::arg("cost"), py::arg("mu"), py::arg("nu"),
        "Exact transport optimum (K*M <= 400)");

    m.def(
        "oracle_check",
        [](int trials, std::uint64_t seed) {
            const auto o = ot::oracle_check(trials, seed);
            py::dict out;
            out["pass"] = o.pass;
            out["max_ipot_gap"] = o.max_ipot_gap;
            out["max_sinkhorn_gap"] = o.max_sinkhorn_gap;
            out["max_marginal_residual"] = o.max_marginal_residual;
            return out;
        },
        py::arg("trials") = 100, py::arg("seed") = 7);

    // ---- attention / visual summarization ----
    m.def(
        "attention_weights",
        [](const Eigen::VectorXd& beta) { return visual::attention_weights(beta); },
        py::arg("beta"), "Stabilized softmax");

    m.def(
        "select_keyframes",
        [](const Eigen::VectorXd& scores, int k) {
            return visual::select_keyframes(scores, k).ranked;
        },
        py::arg("scores"), py::arg("k") = 3);

    m.def(
        "score_frames",
        [](const Eigen::MatrixXd& frames) {
            visual::FrameFeatures f;
            f.frames = frames;
            return visual::score_frames(f, visual::CentroidAttentionScorer());
        },
        py::arg("frames"), "Default centroid-attention importance per frame");

    // ---- segmentation ----
    m.def(
        "binarize_scores",
        [](const std::vector<double>& scores, double tau) {
            video::CoarseScores s;
            s.scores = scores;
            return video::binarize(s, tau);
        },
        py::arg("scores"), py::arg("tau") = 0.5);

    m.def(
        "coherence_depth_scores",
        [](const Eigen::MatrixXd& embeddings, int window) {
            text::SentenceSequence seq;
            seq.embeddings = embeddings;
            for (long i = 0; i < embeddings.rows(); ++i) seq.texts.push_back("");
            return text::coherence_depth_scores(seq, window);
        },
        py::arg("embeddings"), py::arg("window") = 2);

    // ---- clustering / extractive ----
    m.def(
        "kmeans",
        [](const Eigen::MatrixXd& vectors, int k, std::uint64_t seed, int max_iter) {
            const auto r = text::kmeans(vectors, k, seed, max_iter);
            py::dict out;
            out["labels"] = r.labels;
            out["centroids"] = r.centroids;
            out["inertia"] = r.inertia;
            out["inertia_history"] = r.inertia_history;
            return out;
        },
        py::arg("vectors"), py::arg("k"), py::arg("seed") = 0, py::arg("max_iter") = 100);

    // ---- metrics ----
    m.def("tokenize", &metrics::tokenize, py::arg("text"));
    m.def(
        "rouge_n",
        [](const std::string& candidate, const std::string& reference, int n) {
            const auto s = metrics::rouge_n(metrics::tokenize(candidate),
                                            metrics::tokenize(reference), n);
            py::dict out;
            out["precision"] = s.precision;
            out["recall"] = s.recall;
            out["f1"] = s.f1;
            return out;
        },
        py::arg("candidate"), py::arg("reference"), py::arg("n") = 1);
    m.def(
        "rouge_l",
        [](const std::string& candidate, const std::string& reference) {
            const auto s =
                metrics::rouge_l(metrics::tokenize(candidate), metrics::tokenize(reference));
            py::dict out;
            out["precision"] = s.precision;
            out["recall"] = s.recall;
            out["f1"] = s.f1;
            return out;
        },
        py::arg("candidate"), py::arg("reference"));
    m.def("mean_average_precision", &metrics::mean_average_precision, py::arg("relevance_lists"));
    m.def(
        "recall_at_k",
        [](int n, int rank, int k) { return metrics::recall_at_k({n, rank}, k); },
        py::arg("n"), py::arg("rank"), py::arg("k"));
    m.def("cosine_image_similarity", &metrics::cosine_image_similarity, py::arg("a"), py::arg("b"));

    // ---- embedding files / pipeline ----
    m.def("read_embeddings", [](const std::filesystem::path& p) { return io::read_matrix(p); },
          py::arg("path"));
    m.def("write_embeddings",
          [](const Eigen::MatrixXd& values, const std::filesystem::path& p) {
              io::write_matrix(values, p);
          },
          py::arg("values"), py::arg("path"));

    m.def(
        "run_pipeline",
        [](const std::filesystem::path& manifest_path, bool strict) {
            const auto manifest = io::validate_manifest(manifest_path, strict);
            const auto result = align::run_pipeline(manifest);
            return io::dump_report(io::pipeline_report(result, manifest.config));
        },
        py::arg("manifest_path"), py::arg("strict") = true,
        "Run the full pipeline; returns the report JSON text");
}
