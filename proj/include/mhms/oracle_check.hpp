// Solver-versus-oracle verification: random unit-vector instances with
// K, M <= 10, both iterative solvers checked against the exact LP value and
// against their own marginal constraints.

#ifndef MHMS_ORACLE_CHECK_HPP
#define MHMS_ORACLE_CHECK_HPP

#include <cstdint>

namespace mhms::ot {

struct OracleCheckOutcome {
    int trials = 0;
    double max_ipot_gap = 0.0;
    double max_sinkhorn_gap = 0.0;
    double max_marginal_residual = 0.0;
    double gap_tolerance = 5e-2;
    double residual_tolerance = 1e-6;
    bool pass = false;
};

/// ipot (beta 0.5, N 200, L 1) and sinkhorn (lambda 0.01) against lp_oracle
/// on `trials` seeded instances.
OracleCheckOutcome oracle_check(int trials, std::uint64_t seed);

}  // namespace mhms::ot

#endif  // MHMS_ORACLE_CHECK_HPP
