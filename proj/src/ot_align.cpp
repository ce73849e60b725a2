#include "mhms/ot_align.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace mhms::ot {

namespace {

constexpr double kNormFloor = 1e-12;
constexpr double kReducedCostTol = 1e-12;
constexpr double kIpotStopTol = 1e-10;

void check_marginal(const Eigen::VectorXd& w, long expected, const char* name) {
    if (w.size() != expected) {
        throw ShapeMismatch(std::string(name) + " marginal length does not match cost shape");
    }
    if (!w.allFinite() || (w.array() < 0.0).any()) {
        throw DegenerateMarginal(std::string(name) + " marginal has negative or non-finite entries");
    }
    if (std::abs(w.sum() - 1.0) > kWeightSumTolerance) {
        throw DegenerateMarginal(std::string(name) + " marginal does not sum to 1 within 1e-9");
    }
}

/// Indices of strictly positive marginal entries.
std::vector<long> active_indices(const Eigen::VectorXd& w) {
    std::vector<long> idx;
    idx.reserve(w.size());
    for (long i = 0; i < w.size(); ++i) {
        if (w(i) > 0.0) idx.push_back(i);
    }
    return idx;
}

Eigen::VectorXd gather(const Eigen::VectorXd& v, const std::vector<long>& idx) {
    Eigen::VectorXd out(static_cast<long>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) out(static_cast<long>(i)) = v(idx[i]);
    return out;
}

Eigen::MatrixXd gather(const Eigen::MatrixXd& m,
                       const std::vector<long>& rows,
                       const std::vector<long>& cols) {
    Eigen::MatrixXd out(static_cast<long>(rows.size()), static_cast<long>(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < cols.size(); ++j) {
            out(static_cast<long>(i), static_cast<long>(j)) = m(rows[i], cols[j]);
        }
    }
    return out;
}

/// Scatter a compact plan back into full shape, zero rows/columns for the
/// removed marginal entries.
Eigen::MatrixXd scatter(const Eigen::MatrixXd& compact,
                        long rows, long cols,
                        const std::vector<long>& row_idx,
                        const std::vector<long>& col_idx) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rows, cols);
    for (std::size_t i = 0; i < row_idx.size(); ++i) {
        for (std::size_t j = 0; j < col_idx.size(); ++j) {
            out(row_idx[i], col_idx[j]) = compact(static_cast<long>(i), static_cast<long>(j));
        }
    }
    return out;
}

double marginal_residual(const Eigen::MatrixXd& plan,
                         const Eigen::VectorXd& mu,
                         const Eigen::VectorXd& nu) {
    double row = (plan.rowwise().sum() - mu).cwiseAbs().maxCoeff();
    double col = (plan.colwise().sum().transpose() - nu).cwiseAbs().maxCoeff();
    return std::max(row, col);
}

OtSolution finish(Eigen::MatrixXd plan,
                  const Eigen::MatrixXd& cost,
                  Eigen::VectorXd mu,
                  Eigen::VectorXd nu,
                  int iterations,
                  bool converged) {
    OtSolution sol;
    sol.distance = (cost.array() * plan.array()).sum();
    sol.plan.matrix = std::move(plan);
    sol.plan.row_marginal = std::move(mu);
    sol.plan.col_marginal = std::move(nu);
    sol.plan.iterations_used = iterations;
    sol.plan.converged = converged;
    return sol;
}

// --------------------------------------------------------------------------
// Transportation simplex (exact LP oracle)
// --------------------------------------------------------------------------

struct BasisCell {
    int row;
    int col;
};

/// Solve min <C,T> over the transportation polytope for strictly positive
/// marginals. Northwest-corner start, Bland's rule pivots (first cell in
/// row-major order with negative reduced cost enters; smallest-index tie
/// break on the leaving cell), which rules out cycling under degeneracy.
Eigen::MatrixXd transport_simplex(const Eigen::MatrixXd& cost,
                                  const Eigen::VectorXd& mu,
                                  const Eigen::VectorXd& nu) {
    const int K = static_cast<int>(cost.rows());
    const int M = static_cast<int>(cost.cols());

    Eigen::MatrixXd plan = Eigen::MatrixXd::Zero(K, M);
    std::vector<BasisCell> basis;
    basis.reserve(K + M - 1);

    // Northwest-corner initial basic feasible solution. Exactly K+M-1 cells
    // enter the basis; ties produce degenerate (zero) basic cells.
    {
        Eigen::VectorXd a = mu;
        Eigen::VectorXd b = nu;
        int i = 0;
        int j = 0;
        while (true) {
            double t = std::min(a(i), b(j));
            plan(i, j) = t;
            basis.push_back({i, j});
            a(i) -= t;
            b(j) -= t;
            if (i == K - 1 && j == M - 1) break;
            if (a(i) <= b(j) && i < K - 1) {
                ++i;
            } else {
                ++j;
            }
        }
    }

    std::vector<std::vector<int>> row_cells(K), col_cells(M);
    auto rebuild_adjacency = [&]() {
        for (auto& v : row_cells) v.clear();
        for (auto& v : col_cells) v.clear();
        for (int c = 0; c < static_cast<int>(basis.size()); ++c) {
            row_cells[basis[c].row].push_back(c);
            col_cells[basis[c].col].push_back(c);
        }
    };

    Eigen::VectorXd u(K), v(M);
    std::vector<char> u_set(K), v_set(M);

    const long max_pivots = 1000L * (K + M) * std::max(K, M);
    for (long pivot = 0; pivot < max_pivots; ++pivot) {
        rebuild_adjacency();

        // Duals from the basis tree: u_i + v_j = C_ij on basic cells.
        std::fill(u_set.begin(), u_set.end(), 0);
        std::fill(v_set.begin(), v_set.end(), 0);
        u(0) = 0.0;
        u_set[0] = 1;
        std::vector<int> queue = {0};  // row nodes 0..K-1, col nodes K..K+M-1
        while (!queue.empty()) {
            int node = queue.back();
            queue.pop_back();
            if (node < K) {
                for (int c : row_cells[node]) {
                    int col = basis[c].col;
                    if (!v_set[col]) {
                        v(col) = cost(node, col) - u(node);
                        v_set[col] = 1;
                        queue.push_back(K + col);
                    }
                }
            } else {
                int col = node - K;
                for (int c : col_cells[col]) {
                    int row = basis[c].row;
                    if (!u_set[row]) {
                        u(row) = cost(row, col) - v(col);
                        u_set[row] = 1;
                        queue.push_back(row);
                    }
                }
            }
        }

        // Entering cell: Bland's rule, first negative reduced cost row-major.
        int enter_i = -1, enter_j = -1;
        for (int i = 0; i < K && enter_i < 0; ++i) {
            for (int j = 0; j < M; ++j) {
                if (cost(i, j) - u(i) - v(j) < -kReducedCostTol) {
                    bool basic = false;
                    for (int c : row_cells[i]) {
                        if (basis[c].col == j) { basic = true; break; }
                    }
                    if (!basic) {
                        enter_i = i;
                        enter_j = j;
                        break;
                    }
                }
            }
        }
        if (enter_i < 0) {
            return plan;  // optimal
        }

        // Unique cycle: path from the entering row node to the entering col
        // node through the basis tree, found by DFS.
        const int n_nodes = K + M;
        std::vector<int> parent_cell(n_nodes, -1), parent_node(n_nodes, -1);
        std::vector<char> seen(n_nodes, 0);
        std::vector<int> stack = {enter_i};
        seen[enter_i] = 1;
        while (!stack.empty()) {
            int node = stack.back();
            stack.pop_back();
            if (node == K + enter_j) break;
            const auto& cells = node < K ? row_cells[node] : col_cells[node - K];
            for (int c : cells) {
                int next = node < K ? K + basis[c].col : basis[c].row;
                if (!seen[next]) {
                    seen[next] = 1;
                    parent_cell[next] = c;
                    parent_node[next] = node;
                    stack.push_back(next);
                }
            }
        }

        // Walk the path back; cells alternate -,+,-,... after the entering +.
        std::vector<int> minus_cells, plus_cells;
        {
            int node = K + enter_j;
            bool minus = true;
            while (node != enter_i) {
                int c = parent_cell[node];
                (minus ? minus_cells : plus_cells).push_back(c);
                minus = !minus;
                node = parent_node[node];
            }
        }

        // Leaving cell: smallest value; ties resolved by the fixed (row, col)
        // order so Bland's anti-cycling argument applies.
        double theta = std::numeric_limits<double>::infinity();
        int leave = -1;
        for (int c : minus_cells) {
            const double val = plan(basis[c].row, basis[c].col);
            const bool tie_wins =
                val == theta && leave >= 0 &&
                (basis[c].row < basis[leave].row ||
                 (basis[c].row == basis[leave].row && basis[c].col < basis[leave].col));
            if (val < theta || tie_wins) {
                theta = val;
                leave = c;
            }
        }

        plan(enter_i, enter_j) += theta;
        for (int c : plus_cells) plan(basis[c].row, basis[c].col) += theta;
        for (int c : minus_cells) plan(basis[c].row, basis[c].col) -= theta;
        plan(basis[leave].row, basis[leave].col) = 0.0;  // exact zero on exit
        basis[leave] = {enter_i, enter_j};
    }
    throw Error("lp-stalled", "transportation simplex failed to terminate");
}

}  // namespace

CostMatrix cosine_cost(const EmbeddingSet& a, const EmbeddingSet& b) {
    if (a.dimension() != b.dimension()) {
        throw DimensionMismatch("cosine_cost: embedding dimensions differ (" +
                                std::to_string(a.dimension()) + " vs " +
                                std::to_string(b.dimension()) + ")");
    }
    Eigen::VectorXd na = a.vectors().rowwise().norm();
    Eigen::VectorXd nb = b.vectors().rowwise().norm();
    for (long k = 0; k < na.size(); ++k) {
        if (na(k) <= kNormFloor) {
            throw ZeroNormVector("cosine_cost: left vector " + std::to_string(k) + " has zero norm", k);
        }
    }
    for (long m = 0; m < nb.size(); ++m) {
        if (nb(m) <= kNormFloor) {
            throw ZeroNormVector("cosine_cost: right vector " + std::to_string(m) + " has zero norm", m);
        }
    }

    const Eigen::MatrixXd an = a.vectors().array().colwise() / na.array();
    const Eigen::MatrixXd bn = b.vectors().array().colwise() / nb.array();

    CostMatrix cost;
    cost.metric_tag = "cosine";
    cost.entries.resize(a.count(), b.count());
    // Explicit dot products keep cost(a,b) and cost(b,a) exact transposes of
    // each other; clamping removes floating-point residue outside [0, 2].
    for (long k = 0; k < a.count(); ++k) {
        for (long m = 0; m < b.count(); ++m) {
            cost.entries(k, m) = std::clamp(1.0 - an.row(k).dot(bn.row(m)), 0.0, 2.0);
        }
    }
    return cost;
}

OtSolution sinkhorn_entropic(const CostMatrix& cost,
                             const Eigen::VectorXd& mu,
                             const Eigen::VectorXd& nu,
                             double lambda,
                             double tol,
                             int max_iter,
                             SinkhornDomain domain) {
    if (!(lambda > 0.0)) throw InvalidArgument("sinkhorn_entropic: lambda must be > 0");
    if (!(tol > 0.0)) throw InvalidArgument("sinkhorn_entropic: tol must be > 0");
    if (max_iter < 1) throw InvalidArgument("sinkhorn_entropic: max_iter must be >= 1");
    if (!cost.entries.allFinite()) throw NonFinite("sinkhorn_entropic: cost contains NaN or infinity");
    check_marginal(mu, cost.rows(), "row");
    check_marginal(nu, cost.cols(), "column");

    const auto rows = active_indices(mu);
    const auto cols = active_indices(nu);
    const Eigen::MatrixXd c = gather(cost.entries, rows, cols);
    const Eigen::VectorXd a = gather(mu, rows);
    const Eigen::VectorXd b = gather(nu, cols);
    const long k = c.rows();
    const long m = c.cols();

    Eigen::MatrixXd plan;
    int iterations = 0;
    bool converged = false;

    const bool exponential = domain == SinkhornDomain::Auto ? lambda >= 0.05
                                                            : domain == SinkhornDomain::Exponential;
    if (exponential) {
        // Exponential-domain scaling: T = diag(u) exp(-C/lambda) diag(v).
        const Eigen::MatrixXd kernel = (-c / lambda).array().exp();
        if (kernel.minCoeff() <= 0.0) {
            throw NumericUnderflow("sinkhorn_entropic: exp(-C/lambda) underflowed; use a larger lambda");
        }
        Eigen::VectorXd u = Eigen::VectorXd::Ones(k);
        Eigen::VectorXd v = Eigen::VectorXd::Ones(m);
        for (iterations = 1; iterations <= max_iter; ++iterations) {
            u = a.array() / (kernel * v).array();
            v = b.array() / (kernel.transpose() * u).array();
            plan = u.asDiagonal() * kernel * v.asDiagonal();
            if (marginal_residual(plan, a, b) <= tol) {
                converged = true;
                break;
            }
        }
    } else {
        // Log-domain potentials: T = exp((f + g - C) / lambda).
        const Eigen::VectorXd log_a = a.array().log();
        const Eigen::VectorXd log_b = b.array().log();
        Eigen::VectorXd f = Eigen::VectorXd::Zero(k);
        Eigen::VectorXd g = Eigen::VectorXd::Zero(m);
        auto lse_rows = [&](const Eigen::MatrixXd& x) -> Eigen::VectorXd {
            const Eigen::VectorXd mx = x.rowwise().maxCoeff();
            return (mx.array() +
                    ((x.colwise() - mx).array().exp().rowwise().sum()).log())
                .matrix();
        };
        for (iterations = 1; iterations <= max_iter; ++iterations) {
            Eigen::MatrixXd gc = ((-c).rowwise() + g.transpose()) / lambda;
            f = lambda * (log_a - lse_rows(gc));
            Eigen::MatrixXd fc = (((-c).colwise() + f).transpose()) / lambda;
            g = lambda * (log_b - lse_rows(fc));
            plan = ((((-c).colwise() + f).rowwise() + g.transpose()) / lambda).array().exp();
            if (marginal_residual(plan, a, b) <= tol) {
                converged = true;
                break;
            }
        }
    }
    if (!converged) iterations = max_iter;

    return finish(scatter(plan, cost.rows(), cost.cols(), rows, cols),
                  cost.entries, mu, nu, iterations, converged);
}

OtSolution ipot_align_distance(const EmbeddingSet& a,
                               const EmbeddingSet& b,
                               double beta,
                               int outer_iters,
                               int inner_iters) {
    if (!(beta > 0.0)) throw InvalidArgument("ipot_align_distance: beta must be > 0");
    if (outer_iters < 1 || inner_iters < 1) {
        throw InvalidArgument("ipot_align_distance: iteration counts must be >= 1");
    }
    const CostMatrix cost = cosine_cost(a, b);

    const auto rows = active_indices(a.weights());
    const auto cols = active_indices(b.weights());
    const Eigen::MatrixXd c = gather(cost.entries, rows, cols);
    const Eigen::VectorXd mu = gather(a.weights(), rows);
    const Eigen::VectorXd nu = gather(b.weights(), cols);
    const long k = c.rows();
    const long m = c.cols();

    const Eigen::MatrixXd g = (-c / beta).array().exp();
    if (g.minCoeff() <= 0.0) {
        throw NumericUnderflow("ipot_align_distance: exp(-C/beta) underflowed; beta too small");
    }

    // Initial plan normalized to total mass 1; sigma starts uniform.
    Eigen::MatrixXd plan = Eigen::MatrixXd::Constant(k, m, 1.0 / static_cast<double>(k * m));
    Eigen::VectorXd sigma = Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(m));
    Eigen::VectorXd delta(k);

    int iterations = 0;
    bool converged = false;
    for (int t = 1; t <= outer_iters; ++t) {
        Eigen::MatrixXd q = g.array() * plan.array();
        for (int l = 0; l < inner_iters; ++l) {
            delta = mu.array() / (q * sigma).array();
            sigma = nu.array() / (q.transpose() * delta).array();
        }
        Eigen::MatrixXd next = delta.asDiagonal() * q * sigma.asDiagonal();
        const double step = (next - plan).cwiseAbs().maxCoeff();
        plan = std::move(next);
        iterations = t;
        if (step < kIpotStopTol) {
            converged = true;
            break;
        }
    }

    return finish(scatter(plan, cost.rows(), cost.cols(), rows, cols),
                  cost.entries, a.weights(), b.weights(), iterations, converged);
}

OtSolution lp_oracle(const CostMatrix& cost,
                     const Eigen::VectorXd& mu,
                     const Eigen::VectorXd& nu) {
    if (cost.rows() < 1 || cost.cols() < 1) {
        throw ShapeMismatch("lp_oracle: cost matrix is empty");
    }
    if (cost.rows() * cost.cols() > 400) {
        throw TooLarge("lp_oracle: instance exceeds the K*M <= 400 guardrail");
    }
    if (!cost.entries.allFinite()) throw NonFinite("lp_oracle: cost contains NaN or infinity");
    check_marginal(mu, cost.rows(), "row");
    check_marginal(nu, cost.cols(), "column");

    const auto rows = active_indices(mu);
    const auto cols = active_indices(nu);
    const Eigen::MatrixXd compact = transport_simplex(gather(cost.entries, rows, cols),
                                                      gather(mu, rows), gather(nu, cols));

    return finish(scatter(compact, cost.rows(), cost.cols(), rows, cols),
                  cost.entries, mu, nu, 0, true);
}

OtSolution solve_pair(const EmbeddingSet& a, const EmbeddingSet& b, const SolverConfig& config) {
    if (config.kind == SolverKind::Sinkhorn) {
        return sinkhorn_entropic(cosine_cost(a, b), a.weights(), b.weights(),
                                 config.lambda, config.tol, config.max_iter);
    }
    return ipot_align_distance(a, b, config.beta, config.outer_iters, config.inner_iters);
}

Eigen::MatrixXd pairwise_alignment_matrix(const std::vector<EmbeddingSet>& keyframes,
                                          const std::vector<EmbeddingSet>& sentences,
                                          const SolverConfig& config) {
    if (keyframes.empty() || sentences.empty()) {
        throw InvalidArgument("pairwise_alignment_matrix: candidate lists must be nonempty");
    }
    Eigen::MatrixXd distances(static_cast<long>(keyframes.size()),
                              static_cast<long>(sentences.size()));
    for (std::size_t i = 0; i < keyframes.size(); ++i) {
        for (std::size_t j = 0; j < sentences.size(); ++j) {
            try {
                distances(static_cast<long>(i), static_cast<long>(j)) =
                    solve_pair(keyframes[i], sentences[j], config).distance;
            } catch (const Error& e) {
                throw Error(e.code(), "pair (" + std::to_string(i) + ", " + std::to_string(j) +
                                          "): " + e.what());
            }
        }
    }
    return distances;
}

}  // namespace mhms::ot
