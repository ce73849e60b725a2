// mhms: deterministic multimodal summarization engine CLI.
//
// Subcommands: segment-video, segment-text, summarize-video, summarize-text,
// align, pipeline, evaluate, oracle-check. Each reads a manifest (or explicit
// file flags) and writes a JSON report to --out (stdout by default).
// Exit codes: 0 success, 1 validation/usage error, 2 runtime error.
//
// MHMS_LOG=debug|info|warn|error controls stderr verbosity only; no
// environment variable changes behavior.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "mhms/align_select.hpp"
#include "mhms/io/embedding_file.hpp"
#include "mhms/io/manifest.hpp"
#include "mhms/io/report.hpp"
#include "mhms/metrics.hpp"
#include "mhms/ot_align.hpp"
#include "mhms/prng.hpp"
#include "mhms/oracle_check.hpp"

namespace {

using namespace mhms;

int log_level() {
    const char* env = std::getenv("MHMS_LOG");
    if (env == nullptr) return 1;  // warn
    const std::string v(env);
    if (v == "debug") return 3;
    if (v == "info") return 2;
    if (v == "warn") return 1;
    return 0;
}

void log_info(const std::string& message) {
    if (log_level() >= 2) std::cerr << "mhms: " << message << "\n";
}

void emit(const io::Report& report, const std::string& out_path) {
    const std::string text = io::dump_report(report);
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open output file: " + out_path);
    out << text;
}

struct StageTimer {
    using Clock = std::chrono::steady_clock;
    io::Report timings = io::Report::object();
    Clock::time_point mark = Clock::now();

    void lap(const std::string& stage) {
        const auto now = Clock::now();
        timings[stage] = std::chrono::duration<double>(now - mark).count();
        mark = now;
    }
};

struct CommonOptions {
    std::string manifest_path;
    std::string out_path;
    bool lenient = false;
    bool timings = false;
};

void add_common(CLI::App* cmd, CommonOptions& opts, bool manifest_required = true) {
    auto* m = cmd->add_option("--manifest", opts.manifest_path, "Manifest JSON file");
    if (manifest_required) m->required();
    cmd->add_option("--out", opts.out_path, "Report output path (default: stdout)");
    cmd->add_flag("--lenient", opts.lenient, "Warn on unknown config keys instead of failing");
    cmd->add_flag("--timings", opts.timings,
                  "Embed per-stage wall-clock timings (breaks byte-identity across runs)");
}

io::Manifest load_manifest(const CommonOptions& opts) {
    const auto manifest = io::validate_manifest(opts.manifest_path, !opts.lenient);
    log_info("validated manifest " + opts.manifest_path);
    return manifest;
}

int run_segment_video(const CommonOptions& opts) {
    const auto manifest = load_manifest(opts);
    StageTimer timer;
    const auto data = io::load_video(manifest);
    const auto stage = align::segment_video_stage(data, manifest.config);
    timer.lap("segment-video");
    io::Report r = io::report_header("segment-video", manifest.config);
    r["video"] = io::video_section(stage.scenes, stage.boundary_scores, data.shots.count());
    if (opts.timings) r["timings"] = timer.timings;
    emit(r, opts.out_path);
    return 0;
}

int run_segment_text(const CommonOptions& opts) {
    const auto manifest = load_manifest(opts);
    StageTimer timer;
    const auto sentences = io::load_text(manifest);
    const auto segments = align::segment_text_stage(sentences, manifest.config);
    timer.lap("segment-text");
    io::Report r = io::report_header("segment-text", manifest.config);
    r["text"] = io::text_section(segments, sentences.count());
    if (opts.timings) r["timings"] = timer.timings;
    emit(r, opts.out_path);
    return 0;
}

int run_summarize_video(const CommonOptions& opts) {
    const auto manifest = load_manifest(opts);
    StageTimer timer;
    const auto data = io::load_video(manifest);
    const auto stage = align::segment_video_stage(data, manifest.config);
    timer.lap("segment-video");
    const auto candidates = align::visual_stage(data, stage.scenes, manifest.config);
    timer.lap("summarize-video");
    io::Report r = io::report_header("summarize-video", manifest.config);
    r["video"] = io::video_section(stage.scenes, stage.boundary_scores, data.shots.count());
    r["visual_candidates"] = io::visual_candidates_section(candidates);
    if (opts.timings) r["timings"] = timer.timings;
    emit(r, opts.out_path);
    return 0;
}

int run_summarize_text(const CommonOptions& opts) {
    const auto manifest = load_manifest(opts);
    StageTimer timer;
    const auto sentences = io::load_text(manifest);
    const auto segments = align::segment_text_stage(sentences, manifest.config);
    timer.lap("segment-text");
    const auto candidates = align::text_stage(sentences, segments, manifest.config);
    timer.lap("summarize-text");
    io::Report r = io::report_header("summarize-text", manifest.config);
    r["text"] = io::text_section(segments, sentences.count());
    r["text_candidates"] = io::text_candidates_section(candidates);
    if (opts.timings) r["timings"] = timer.timings;
    emit(r, opts.out_path);
    return 0;
}

struct AlignOptions {
    std::string a_path;
    std::string b_path;
    std::string solver = "ipot";
    double beta = 0.5;
    int outer_iters = 200;
    int inner_iters = 1;
    double lambda = 0.1;
    double tol = 1e-8;
    int max_iter = 2000;
};

int run_align(const AlignOptions& opts, const std::string& out_path) {
    const EmbeddingSet a = io::read_embeddings(opts.a_path);
    const EmbeddingSet b = io::read_embeddings(opts.b_path);

    ot::SolverConfig config;
    config.kind = opts.solver == "sinkhorn" ? ot::SolverKind::Sinkhorn : ot::SolverKind::Ipot;
    config.beta = opts.beta;
    config.outer_iters = opts.outer_iters;
    config.inner_iters = opts.inner_iters;
    config.lambda = opts.lambda;
    config.tol = opts.tol;
    config.max_iter = opts.max_iter;
    const ot::OtSolution sol = ot::solve_pair(a, b, config);

    io::Report r;
    r["schema"] = "mhms-report/1";
    r["command"] = "align";
    r["solver"] = opts.solver;
    r["a"] = {{"path", opts.a_path}, {"count", a.count()}, {"dimension", a.dimension()}};
    r["b"] = {{"path", opts.b_path}, {"count", b.count()}, {"dimension", b.dimension()}};
    r["distance"] = sol.distance;
    r["iterations_used"] = sol.plan.iterations_used;
    r["converged"] = sol.plan.converged;
    io::Report plan = io::Report::array();
    for (long i = 0; i < sol.plan.matrix.rows(); ++i) {
        io::Report row = io::Report::array();
        for (long j = 0; j < sol.plan.matrix.cols(); ++j) row.push_back(sol.plan.matrix(i, j));
        plan.push_back(std::move(row));
    }
    r["plan"] = std::move(plan);
    emit(r, out_path);
    return 0;
}

int run_pipeline_cmd(const CommonOptions& opts, const std::string& unimodal) {
    const auto manifest = load_manifest(opts);
    StageTimer timer;
    io::Report r = io::report_header("pipeline", manifest.config);

    if (!unimodal.empty()) {
        const auto mode = unimodal == "video-only" ? align::UnimodalMode::VideoOnly
                                                   : align::UnimodalMode::TextOnly;
        const auto summary = align::unimodal_fallback(manifest, mode);
        timer.lap("unimodal");
        r["unimodal"] = io::unimodal_section(summary);
        if (opts.timings) r["timings"] = timer.timings;
        emit(r, opts.out_path);
        return 0;
    }

    const auto result = align::run_pipeline(manifest);
    timer.lap("pipeline");
    r = io::pipeline_report(result, manifest.config);
    if (opts.timings) r["timings"] = timer.timings;
    emit(r, opts.out_path);
    return 0;
}

struct EvaluateOptions {
    std::string pred_path;
    std::string ref_path;
    std::string pred_emb_path;
    std::string ref_emb_path;
    std::string ranking_path;
};

std::string slurp_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open file: " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int run_evaluate(const EvaluateOptions& opts, const std::string& out_path) {
    io::Report r;
    r["schema"] = "mhms-report/1";
    r["command"] = "evaluate";

    if (!opts.pred_path.empty() || !opts.ref_path.empty()) {
        if (opts.pred_path.empty() || opts.ref_path.empty()) {
            throw InvalidArgument("evaluate: --pred and --ref must be given together");
        }
        const auto cand = metrics::tokenize(slurp_text(opts.pred_path));
        const auto ref = metrics::tokenize(slurp_text(opts.ref_path));
        io::Report rouge;
        for (int n : {1, 2}) {
            const auto s = metrics::rouge_n(cand, ref, n);
            rouge["rouge-" + std::to_string(n)] = {
                {"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
        }
        const auto l = metrics::rouge_l(cand, ref);
        rouge["rouge-l"] = {{"precision", l.precision}, {"recall", l.recall}, {"f1", l.f1}};
        rouge["note"] = "rouge-l uses summary-level LCS";
        r["rouge"] = std::move(rouge);
    }

    if (!opts.pred_emb_path.empty() || !opts.ref_emb_path.empty()) {
        if (opts.pred_emb_path.empty() || opts.ref_emb_path.empty()) {
            throw InvalidArgument("evaluate: --pred-emb and --ref-emb must be given together");
        }
        const Eigen::MatrixXd pred = io::read_matrix(opts.pred_emb_path);
        const Eigen::MatrixXd ref = io::read_matrix(opts.ref_emb_path);
        if (pred.rows() != ref.rows()) {
            throw LengthMismatch("evaluate: embedding files have different row counts");
        }
        io::Report per_row = io::Report::array();
        double total = 0.0;
        for (long i = 0; i < pred.rows(); ++i) {
            const double cos = metrics::cosine_image_similarity(pred.row(i).transpose(),
                                                                ref.row(i).transpose());
            per_row.push_back(cos);
            total += cos;
        }
        r["cosine_similarity"] = {{"per_row", std::move(per_row)},
                                  {"mean", total / static_cast<double>(pred.rows())}};
    }

    if (!opts.ranking_path.empty()) {
        const auto doc = io::parse_report(slurp_text(opts.ranking_path));
        io::Report ranking;
        if (doc.contains("relevance")) {
            std::vector<std::vector<int>> lists;
            for (const auto& q : doc["relevance"]) lists.push_back(q.get<std::vector<int>>());
            ranking["map"] = metrics::mean_average_precision(lists);
        }
        if (doc.contains("judgments")) {
            std::vector<metrics::RankedJudgment> judgments;
            for (const auto& j : doc["judgments"]) {
                judgments.push_back({j.at("n").get<int>(), j.at("rank").get<int>()});
            }
            std::vector<int> ks = {1, 2, 5};
            if (doc.contains("k")) ks = doc["k"].get<std::vector<int>>();
            io::Report recall;
            for (int k : ks) {
                recall["r@" + std::to_string(k)] = metrics::recall_at_k_batch(judgments, k);
            }
            ranking["recall_at_k"] = std::move(recall);
        }
        r["ranking"] = std::move(ranking);
    }

    emit(r, out_path);
    return 0;
}

int run_oracle_check(int trials, std::uint64_t seed, const std::string& out_path) {
    const auto outcome = ot::oracle_check(trials, seed);
    io::Report r;
    r["schema"] = "mhms-report/1";
    r["command"] = "oracle-check";
    r["trials"] = trials;
    r["seed"] = seed;
    r["max_ipot_gap"] = outcome.max_ipot_gap;
    r["max_sinkhorn_gap"] = outcome.max_sinkhorn_gap;
    r["max_marginal_residual"] = outcome.max_marginal_residual;
    r["gap_tolerance"] = outcome.gap_tolerance;
    r["residual_tolerance"] = outcome.residual_tolerance;
    r["pass"] = outcome.pass;
    emit(r, out_path);
    return outcome.pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mhms: multimodal summarization engine"};
    app.require_subcommand(1);

    CommonOptions seg_video_opts;
    add_common(app.add_subcommand("segment-video", "Split the shot sequence into scenes"),
               seg_video_opts);

    CommonOptions seg_text_opts;
    add_common(app.add_subcommand("segment-text", "Split the sentence sequence into segments"),
               seg_text_opts);

    CommonOptions sum_video_opts;
    add_common(app.add_subcommand("summarize-video", "Scenes plus keyframe candidates"),
               sum_video_opts);

    CommonOptions sum_text_opts;
    add_common(app.add_subcommand("summarize-text", "Segments plus textual candidates"),
               sum_text_opts);

    AlignOptions align_opts;
    std::string align_out;
    auto* align_cmd = app.add_subcommand("align", "Transport distance between two embedding files");
    align_cmd->add_option("--a", align_opts.a_path, "First embedding file")->required();
    align_cmd->add_option("--b", align_opts.b_path, "Second embedding file")->required();
    align_cmd->add_option("--solver", align_opts.solver, "ipot | sinkhorn")
        ->check(CLI::IsMember({"ipot", "sinkhorn"}));
    align_cmd->add_option("--beta", align_opts.beta, "Proximal kernel width");
    align_cmd->add_option("--outer-iters", align_opts.outer_iters, "Outer iterations");
    align_cmd->add_option("--inner-iters", align_opts.inner_iters, "Inner iterations");
    align_cmd->add_option("--lambda", align_opts.lambda, "Entropic regularization");
    align_cmd->add_option("--tol", align_opts.tol, "Marginal residual tolerance");
    align_cmd->add_option("--max-iter", align_opts.max_iter, "Sinkhorn iteration cap");
    align_cmd->add_option("--out", align_out, "Report output path (default: stdout)");

    CommonOptions pipeline_opts;
    std::string unimodal_mode;
    auto* pipeline_cmd = app.add_subcommand("pipeline", "Full multimodal summarization");
    add_common(pipeline_cmd, pipeline_opts);
    pipeline_cmd->add_option("--unimodal", unimodal_mode,
                             "Run the k-means fallback instead: text-only | video-only")
        ->check(CLI::IsMember({"text-only", "video-only"}));

    EvaluateOptions eval_opts;
    std::string eval_out;
    auto* eval_cmd = app.add_subcommand("evaluate", "Score predictions against references");
    eval_cmd->add_option("--pred", eval_opts.pred_path, "Predicted summary text file");
    eval_cmd->add_option("--ref", eval_opts.ref_path, "Reference summary text file");
    eval_cmd->add_option("--pred-emb", eval_opts.pred_emb_path, "Predicted embedding file");
    eval_cmd->add_option("--ref-emb", eval_opts.ref_emb_path, "Reference embedding file");
    eval_cmd->add_option("--ranking", eval_opts.ranking_path,
                         "Ranking JSON: {relevance: [[0,1,...]], judgments: [{n, rank}], k: [..]}");
    eval_cmd->add_option("--out", eval_out, "Report output path (default: stdout)");

    int trials = 100;
    std::uint64_t seed = 7;
    std::string oracle_out;
    auto* oracle_cmd = app.add_subcommand("oracle-check",
                                          "Verify both solvers against the exact LP oracle");
    oracle_cmd->add_option("--trials", trials, "Number of random instances");
    oracle_cmd->add_option("--seed", seed, "Instance generator seed");
    oracle_cmd->add_option("--out", oracle_out, "Report output path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand("segment-video")) return run_segment_video(seg_video_opts);
        if (app.got_subcommand("segment-text")) return run_segment_text(seg_text_opts);
        if (app.got_subcommand("summarize-video")) return run_summarize_video(sum_video_opts);
        if (app.got_subcommand("summarize-text")) return run_summarize_text(sum_text_opts);
        if (app.got_subcommand("align")) return run_align(align_opts, align_out);
        if (app.got_subcommand("pipeline")) return run_pipeline_cmd(pipeline_opts, unimodal_mode);
        if (app.got_subcommand("evaluate")) return run_evaluate(eval_opts, eval_out);
        if (app.got_subcommand("oracle-check")) return run_oracle_check(trials, seed, oracle_out);
    } catch (const ManifestError& e) {
        io::Report err;
        err["error"] = e.code();
        io::Report issues = io::Report::array();
        for (const auto& issue : e.issues()) {
            issues.push_back({{"code", issue.code}, {"message", issue.message}});
        }
        err["issues"] = std::move(issues);
        std::cerr << io::dump_report(err);
        return 1;
    } catch (const Error& e) {
        io::Report err;
        err["error"] = e.code();
        err["message"] = e.what();
        std::cerr << io::dump_report(err);
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "mhms: error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
