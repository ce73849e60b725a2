// Entropic-regularized optimal transport between embedding sets.
//
// Three solvers share one contract: the reported distance is always the
// unregularized transport cost <C, T> of the returned plan, so numbers from
// the iterative solvers are directly comparable with the exact LP oracle.
//
//  - sinkhorn_entropic: alternating scaling for the entropy-regularized
//    objective min <C,T> + lambda * sum T log T. Runs in the exponential
//    domain for lambda >= 0.05 and switches to log-domain (log-sum-exp)
//    updates below that to avoid underflow.
//  - ipot_align_distance: proximal-point iteration with kernel
//    G = exp(-C/beta), Q = G .* T, inner scaling loop, T <- diag(d) Q diag(s).
//    Converges to the unregularized optimum as the outer loop proceeds.
//  - lp_oracle: exact transportation simplex for desk-scale verification
//    (K*M <= 400). Its value is a true lower bound for any feasible plan.
//
// Zero-weight marginal entries are removed before solving and reinserted as
// zero rows/columns of the plan.

#ifndef MHMS_OT_ALIGN_HPP
#define MHMS_OT_ALIGN_HPP

#include <Eigen/Core>
#include <string>
#include <vector>

#include "mhms/embedding_set.hpp"
#include "mhms/errors.hpp"

namespace mhms::ot {

struct CostMatrix {
    Eigen::MatrixXd entries;  // K x M
    std::string metric_tag;

    long rows() const noexcept { return entries.rows(); }
    long cols() const noexcept { return entries.cols(); }
};

struct TransportPlan {
    Eigen::MatrixXd matrix;        // K x M, nonnegative
    Eigen::VectorXd row_marginal;  // length K
    Eigen::VectorXd col_marginal;  // length M
    int iterations_used = 0;
    bool converged = false;
};

struct OtSolution {
    TransportPlan plan;
    double distance = 0.0;  // <C, T> of the returned plan
};

enum class SolverKind { Ipot, Sinkhorn };

/// Shared solver settings. Defaults are the engine-wide defaults.
struct SolverConfig {
    SolverKind kind = SolverKind::Ipot;
    // Proximal-point solver
    double beta = 0.5;
    int outer_iters = 200;
    int inner_iters = 1;
    // Entropic solver
    double lambda = 0.1;
    double tol = 1e-8;
    int max_iter = 2000;
};

/// Pairwise cosine distance 1 - <a_k, b_m> / (|a_k||b_m|); entries lie in
/// [0, 2]. Throws DimensionMismatch, or ZeroNormVector naming the offending
/// side and index when a vector has norm <= 1e-12.
CostMatrix cosine_cost(const EmbeddingSet& a, const EmbeddingSet& b);

/// Domain selection for the scaling updates. Auto picks the exponential
/// domain for lambda >= 0.05 and log-sum-exp below; the explicit values
/// exist so the two paths can be cross-checked against each other.
enum class SinkhornDomain { Auto, Exponential, Log };

/// Entropic-regularized transport via alternating scaling. The plan's
/// marginal residual is driven to `tol` (max abs row/column deviation) or
/// the solver stops at max_iter with converged=false.
OtSolution sinkhorn_entropic(const CostMatrix& cost,
                             const Eigen::VectorXd& mu,
                             const Eigen::VectorXd& nu,
                             double lambda,
                             double tol = 1e-8,
                             int max_iter = 2000,
                             SinkhornDomain domain = SinkhornDomain::Auto);

/// Alignment distance between two embedding sets via the proximal-point
/// iteration. Stops early when the plan moves less than 1e-10 in max norm.
/// Throws NumericUnderflow when exp(-C/beta) underflows to zero.
OtSolution ipot_align_distance(const EmbeddingSet& a,
                               const EmbeddingSet& b,
                               double beta = 0.5,
                               int outer_iters = 200,
                               int inner_iters = 1);

/// Exact optimum of the transport LP, solved by the transportation simplex
/// with Bland's anti-cycling rule. Guardrail: K*M <= 400 (TooLarge beyond).
OtSolution lp_oracle(const CostMatrix& cost,
                     const Eigen::VectorXd& mu,
                     const Eigen::VectorXd& nu);

/// Distance between every keyframe-sentence candidate pair, solved with the
/// configured solver. Cell (i, j) couples keyframes[i] with sentences[j];
/// evaluation order is fixed so results are deterministic. Solver errors are
/// rethrown with the (i, j) context prepended.
Eigen::MatrixXd pairwise_alignment_matrix(const std::vector<EmbeddingSet>& keyframes,
                                          const std::vector<EmbeddingSet>& sentences,
                                          const SolverConfig& config = {});

/// Solve one pair under `config` (used by pairwise_alignment_matrix and the
/// pipeline's per-pair reporting).
OtSolution solve_pair(const EmbeddingSet& a, const EmbeddingSet& b, const SolverConfig& config);

}  // namespace mhms::ot

#endif  // MHMS_OT_ALIGN_HPP
