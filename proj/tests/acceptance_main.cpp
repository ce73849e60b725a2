// Acceptance suite: one line per criterion, [PASS]/[FAIL], nonzero exit on
// any failure. Tolerances are pinned in code next to each check.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "mhms/align_select.hpp"
#include "mhms/io/embedding_file.hpp"
#include "mhms/io/manifest.hpp"
#include "mhms/io/report.hpp"
#include "mhms/metrics.hpp"
#include "mhms/oracle_check.hpp"
#include "mhms/ot_align.hpp"
#include "mhms/prng.hpp"
#include "mhms/text_seg.hpp"
#include "mhms/text_sum.hpp"
#include "mhms/video_seg.hpp"
#include "mhms/visual_sum.hpp"
#include "test_support.hpp"

using namespace mhms;
using test_support::random_unit_rows;

namespace {

int failures = 0;

void report(const std::string& name, bool pass, const std::string& detail) {
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << name << ": " << detail << "\n";
    if (!pass) ++failures;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

// --- 1. OT oracle agreement -------------------------------------------------

void criterion_ot_oracle_agreement() {
    const auto start = std::chrono::steady_clock::now();
    const auto outcome = ot::oracle_check(100, 20240817);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = outcome.pass && elapsed <= 10.0;
    report("ot-oracle-agreement", pass,
           "100 instances; ipot gap " + fmt(outcome.max_ipot_gap) + ", sinkhorn gap " +
               fmt(outcome.max_sinkhorn_gap) + " (tol 5e-2); marginal residual " +
               fmt(outcome.max_marginal_residual) + " (tol 1e-6); " + fmt(elapsed) + "s (cap 10s)");
}

// --- 2. Entropic monotonicity -----------------------------------------------

void criterion_entropic_monotonicity() {
    Prng rng(314159);
    int violations = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const long k = 2 + static_cast<long>(rng.next_below(7));
        const long m = 2 + static_cast<long>(rng.next_below(7));
        const EmbeddingSet a(random_unit_rows(rng, k, 5));
        const EmbeddingSet b(random_unit_rows(rng, m, 5));
        const auto cost = ot::cosine_cost(a, b);
        const double lp = ot::lp_oracle(cost, a.weights(), b.weights()).distance;
        double previous = std::numeric_limits<double>::infinity();
        for (double lambda : {1.0, 0.1, 0.01}) {
            const double gap = std::abs(
                ot::sinkhorn_entropic(cost, a.weights(), b.weights(), lambda).distance - lp);
            if (gap > previous + 1e-12) ++violations;
            previous = gap;
        }
    }
    report("entropic-monotonicity", violations == 0,
           "20 instances, lambda in {1, 0.1, 0.01}; " + std::to_string(violations) + " violations");
}

// --- 3. Cosine cost exactness -----------------------------------------------

void criterion_cosine_cost() {
    Eigen::MatrixXd e1(1, 2), e2(1, 2), e3(1, 2);
    e1 << 1, 0;
    e2 << 0, 1;
    e3 << -1, 0;
    const EmbeddingSet a(e1), b(e2), c(e3);
    bool analytic = std::abs(ot::cosine_cost(a, a).entries(0, 0) - 0.0) <= 1e-12 &&
                    std::abs(ot::cosine_cost(a, b).entries(0, 0) - 1.0) <= 1e-12 &&
                    std::abs(ot::cosine_cost(a, c).entries(0, 0) - 2.0) <= 1e-12;

    Prng rng(2718);
    bool symmetric = true;
    bool scale_invariant = true;
    for (int trial = 0; trial < 1000; ++trial) {
        const long d = 2 + static_cast<long>(rng.next_below(5));
        const long ka = 1 + static_cast<long>(rng.next_below(4));
        const long kb = 1 + static_cast<long>(rng.next_below(4));
        const Eigen::MatrixXd ma = random_unit_rows(rng, ka, d);
        const Eigen::MatrixXd mb = random_unit_rows(rng, kb, d);
        const EmbeddingSet sa(ma), sb(mb);
        const auto fwd = ot::cosine_cost(sa, sb);
        const auto bwd = ot::cosine_cost(sb, sa);
        if (!(fwd.entries.array() == bwd.entries.transpose().array()).all()) symmetric = false;

        Eigen::MatrixXd scaled = ma;
        scaled.row(0) *= 0.001 + 500.0 * rng.next_double();
        const auto rescaled = ot::cosine_cost(EmbeddingSet(scaled), sb);
        if ((fwd.entries - rescaled.entries).cwiseAbs().maxCoeff() > 1e-12) {
            scale_invariant = false;
        }
    }
    report("cosine-cost-exactness", analytic && symmetric && scale_invariant,
           std::string("analytic cases ") + (analytic ? "exact" : "WRONG") + "; symmetry " +
               (symmetric ? "exact" : "BROKEN") + "; scale invariance " +
               (scale_invariant ? "within 1e-12" : "BROKEN") + " over 1000 pairs");
}

// --- 4. Attention math --------------------------------------------------------

void criterion_attention() {
    Prng rng(6021023);
    bool normalized = true;
    bool shift_ok = true;
    bool argmax_ok = true;
    bool hull_ok = true;
    for (int trial = 0; trial < 1000; ++trial) {
        const long m = 1 + static_cast<long>(rng.next_below(10));
        const long d = 1 + static_cast<long>(rng.next_below(6));
        Eigen::VectorXd beta(m);
        for (long i = 0; i < m; ++i) beta(i) = 30.0 * (rng.next_double() - 0.5);
        const auto alpha = visual::attention_weights(beta);
        if (std::abs(alpha.sum() - 1.0) > 1e-9) normalized = false;

        const double shift = 200.0 * (rng.next_double() - 0.5);
        const auto shifted = visual::attention_weights((beta.array() + shift).matrix());
        if ((alpha - shifted).cwiseAbs().maxCoeff() > 1e-12) shift_ok = false;

        long bi = 0, ai = 0;
        beta.maxCoeff(&bi);
        alpha.maxCoeff(&ai);
        if (alpha(bi) != alpha.maxCoeff()) argmax_ok = false;
        (void)ai;

        visual::FrameFeatures frames;
        frames.frames = random_unit_rows(rng, m, d);
        const auto ctx = visual::attention_context(alpha, frames);
        for (long c = 0; c < d; ++c) {
            if (ctx(c) < frames.frames.col(c).minCoeff() - 1e-12 ||
                ctx(c) > frames.frames.col(c).maxCoeff() + 1e-12) {
                hull_ok = false;
            }
        }
    }
    report("attention-math", normalized && shift_ok && argmax_ok && hull_ok,
           std::string("1000 draws; softmax sum ") + (normalized ? "1±1e-9" : "BROKEN") +
               ", shift invariance " + (shift_ok ? "±1e-12" : "BROKEN") + ", argmax " +
               (argmax_ok ? "preserved" : "BROKEN") + ", hull containment " +
               (hull_ok ? "holds" : "BROKEN"));
}

// --- 5. Segmentation partitions ----------------------------------------------

void criterion_segmentation() {
    Prng rng(112358);
    bool partition_ok = true;
    bool monotone_ok = true;
    for (int trial = 0; trial < 1000; ++trial) {
        // Video: random flags.
        const int n = 1 + static_cast<int>(rng.next_below(25));
        video::ShotSequence shots;
        shots.shots = Eigen::MatrixXd::Ones(n, 2);
        std::vector<int> flags(static_cast<std::size_t>(n - 1));
        for (auto& f : flags) f = static_cast<int>(rng.next_below(2));
        const auto seg = video::assemble_scenes(shots, flags);
        int cursor = 0;
        for (const auto& [b, e] : seg.scenes) {
            if (b != cursor || e <= b) partition_ok = false;
            cursor = e;
        }
        if (cursor != n) partition_ok = false;

        // Video: tau monotonicity over random scores.
        video::CoarseScores scores;
        const int nb = 1 + static_cast<int>(rng.next_below(15));
        for (int i = 0; i < nb; ++i) scores.scores.push_back(rng.next_double());
        int prev_scenes = nb + 2;
        for (double tau : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            int raised = 0;
            for (int f : video::binarize(scores, tau)) raised += f;
            if (raised + 1 > prev_scenes) monotone_ok = false;
            prev_scenes = raised + 1;
        }

        // Text: random depths under both policies.
        const long ns = 1 + static_cast<long>(rng.next_below(20));
        std::vector<double> depth(static_cast<std::size_t>(ns - 1));
        for (auto& d : depth) d = 2.0 * rng.next_double();
        const auto policy =
            rng.next_below(2) == 0
                ? text::SegmentPolicy::threshold(2.0 * rng.next_double())
                : text::SegmentPolicy::fixed_count(static_cast<int>(rng.next_below(8)));
        const auto tseg = text::segment_text(depth, ns, policy);
        cursor = 0;
        for (const auto& [b, e] : tseg.segments) {
            if (b != cursor || e <= b) partition_ok = false;
            cursor = e;
        }
        if (cursor != ns) partition_ok = false;

        std::size_t prev_count = depth.size() + 2;
        for (double tau : {0.2, 0.6, 1.0, 1.4, 1.8}) {
            const auto t = text::segment_text(depth, ns, text::SegmentPolicy::threshold(tau));
            if (t.segments.size() > prev_count) monotone_ok = false;
            prev_count = t.segments.size();
        }
    }
    report("segmentation-partitions", partition_ok && monotone_ok,
           std::string("1000 random vectors; partitions ") + (partition_ok ? "exact" : "BROKEN") +
               "; tau monotonicity " + (monotone_ok ? "holds" : "BROKEN"));
}

// --- 6. Metric oracles ---------------------------------------------------------

void criterion_metrics() {
    using namespace mhms::metrics;
    bool ok = true;
    std::string detail;

    const auto r1 = rouge_n(tokenize("the cat sat"), tokenize("the cat ran"), 1);
    ok &= std::abs(r1.f1 - 2.0 / 3.0) <= 1e-12;

    const auto rl = rouge_l(tokenize("a b c d"), tokenize("a c d"));
    ok &= std::abs(rl.precision - 0.75) <= 1e-12;
    ok &= std::abs(rl.recall - 1.0) <= 1e-12;
    ok &= std::abs(rl.f1 - 6.0 / 7.0) <= 1e-12;  // 0.857...

    ok &= std::abs(mean_average_precision({{0, 1}}) - 0.5) <= 1e-12;
    ok &= std::abs(mean_average_precision({{1, 0}, {0, 1}}) - 0.75) <= 1e-12;

    ok &= recall_at_k({10, 1}, 1) == 1;
    ok &= recall_at_k({10, 5}, 2) == 0;
    ok &= std::abs(recall_at_k_batch({{10, 1}, {10, 3}}, 2) - 0.5) <= 1e-12;

    Eigen::VectorXd va(2), vb(2);
    va << 1, 1;
    vb << 1, 0;
    const double cos = cosine_image_similarity(va, vb);
    ok &= std::abs(cos - 100.0 / std::sqrt(2.0)) <= 1e-9;
    ok &= std::abs(cos - 70.71) <= 0.005;

    report("metric-oracles", ok,
           "ROUGE-1 2/3, ROUGE-L 6/7, MAP 0.5 and 0.75, R@k, cosine 70.71 all reproduce");
}

// --- 7. End-to-end determinism ---------------------------------------------------

void criterion_e2e_determinism() {
#if defined(MHMS_TOY_DIR) && defined(MHMS_CLI_PATH)
    const std::filesystem::path toy_dir = MHMS_TOY_DIR;
    const std::filesystem::path cli = MHMS_CLI_PATH;
    const auto manifest = toy_dir / "manifest.json";
    if (!std::filesystem::exists(manifest) || !std::filesystem::exists(cli)) {
        report("e2e-determinism", false,
               "missing bundled manifest or CLI binary (" + manifest.string() + ")");
        return;
    }
    const auto out_dir = test_support::scratch_dir("acceptance-e2e");
    const auto out1 = out_dir / "run1.json";
    const auto out2 = out_dir / "run2.json";
    auto run = [&](const std::filesystem::path& out) {
        const std::string cmd = "\"" + cli.string() + "\" pipeline --manifest \"" +
                                manifest.string() + "\" --out \"" + out.string() + "\"";
        return std::system(cmd.c_str());
    };
    if (run(out1) != 0 || run(out2) != 0) {
        report("e2e-determinism", false, "pipeline run failed");
        return;
    }
    auto slurp = [](const std::filesystem::path& p) {
        std::ifstream in(p, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    };
    const std::string b1 = slurp(out1);
    const std::string b2 = slurp(out2);
    const bool identical = !b1.empty() && b1 == b2;

    bool traced = false;
    double worst_distance = std::numeric_limits<double>::infinity();
    try {
        const auto r = io::parse_report(b1);
        const auto& pairs = r.at("alignment").at("pairs");
        // Hand trace: scenes [0,2),[2,4); segments [0,2),[2,4); the chosen
        // pair of each block is its exact frame/sentence match.
        traced = pairs.size() == 2 &&
                 r.at("video").at("scenes") == io::Report::parse("[[0,2],[2,4]]") &&
                 r.at("text").at("segments") == io::Report::parse("[[0,2],[2,4]]") &&
                 pairs.at(0).at("chosen").at("frame") == 0 &&
                 pairs.at(0).at("chosen").at("sentences") == io::Report::parse("[0]") &&
                 pairs.at(1).at("chosen").at("frame") == 0 &&
                 pairs.at(1).at("chosen").at("sentences") == io::Report::parse("[2]");
        worst_distance = 0.0;
        for (const auto& p : pairs) {
            worst_distance =
                std::max(worst_distance, p.at("chosen").at("distance").get<double>());
        }
    } catch (...) {
        traced = false;
    }
    const bool pass = identical && traced && worst_distance < 0.05;
    report("e2e-determinism", pass,
           std::string("two pipeline runs ") + (identical ? "byte-identical" : "DIFFER") +
               "; matched pair " + (traced ? "as hand-traced" : "WRONG") + "; max distance " +
               fmt(worst_distance) + " (cap 0.05)");
#else
    report("e2e-determinism", false, "toy manifest / CLI path not configured at build time");
#endif
}

// --- 8. Embedding format round-trip ------------------------------------------------

void criterion_embedding_roundtrip() {
    const auto dir = test_support::scratch_dir("acceptance-embedding");
    Prng rng(8675309);
    bool ok = true;
    for (int trial = 0; trial < 100; ++trial) {
        const long rows = trial == 0 ? 1 : 1 + static_cast<long>(rng.next_below(16));
        const long cols = trial <= 1 ? 1 : 1 + static_cast<long>(rng.next_below(9));
        Eigen::MatrixXd values(rows, cols);
        for (long r = 0; r < rows; ++r) {
            for (long c = 0; c < cols; ++c) {
                values(r, c) =
                    static_cast<double>(static_cast<float>(100.0 * (rng.next_double() - 0.5)));
            }
        }
        const auto p1 = dir / "a.mheb";
        const auto p2 = dir / "b.mheb";
        io::write_matrix(values, p1);
        const Eigen::MatrixXd back = io::read_matrix(p1);
        if (!(back.array() == values.array()).all()) ok = false;
        io::write_matrix(back, p2);
        std::ifstream f1(p1, std::ios::binary), f2(p2, std::ios::binary);
        const std::string s1((std::istreambuf_iterator<char>(f1)),
                             std::istreambuf_iterator<char>());
        const std::string s2((std::istreambuf_iterator<char>(f2)),
                             std::istreambuf_iterator<char>());
        if (s1 != s2 || s1.empty()) ok = false;
    }
    report("embedding-roundtrip", ok,
           "100 random matrices incl. dim=1 and count=1: bitwise write/read identity");
}

// --- 9. k-means ---------------------------------------------------------------------

void criterion_kmeans() {
    Prng rng(424243);
    bool monotone = true;
    for (int trial = 0; trial < 100; ++trial) {
        const long count = 5 + static_cast<long>(rng.next_below(40));
        const long dim = 1 + static_cast<long>(rng.next_below(6));
        Eigen::MatrixXd pts(count, dim);
        for (long r = 0; r < count; ++r) {
            for (long c = 0; c < dim; ++c) pts(r, c) = 5.0 * rng.next_normal();
        }
        const int k = 1 + static_cast<int>(rng.next_below(5));
        const auto result = text::kmeans(pts, std::min<int>(k, static_cast<int>(count)),
                                         rng.next_u64());
        for (std::size_t i = 1; i < result.inertia_history.size(); ++i) {
            if (result.inertia_history[i] > result.inertia_history[i - 1] + 1e-9) {
                monotone = false;
            }
        }
    }

    Eigen::MatrixXd singleton(3, 2);
    singleton << 0, 0, 4, 4, -2, 7;
    const bool exact_each = text::kmeans(singleton, 3, 5).inertia <= 1e-12;
    Eigen::MatrixXd pairs(4, 2);
    pairs << 9, 9, -9, -9, 9, 9, -9, -9;
    const bool exact_pairs = text::kmeans(pairs, 2, 5).inertia <= 1e-12;

    report("kmeans", monotone && exact_each && exact_pairs,
           std::string("inertia monotone on 100 seeded runs: ") + (monotone ? "yes" : "NO") +
               "; exact-cluster inertia 0: " + (exact_each && exact_pairs ? "yes" : "NO"));
}

}  // namespace

int main() {
    criterion_ot_oracle_agreement();
    criterion_entropic_monotonicity();
    criterion_cosine_cost();
    criterion_attention();
    criterion_segmentation();
    criterion_metrics();
    criterion_e2e_determinism();
    criterion_embedding_roundtrip();
    criterion_kmeans();

    if (failures > 0) {
        std::cout << failures << " criterion(s) failed\n";
        return 1;
    }
    std::cout << "all acceptance criteria passed\n";
    return 0;
}
