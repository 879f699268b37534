#pragma once

#include <vector>

#include <Eigen/Dense>

namespace dpgeom::lp {

enum class Status { optimal, infeasible, unbounded, iteration_limit };

struct Options {
    double pivot_tol = 1e-11;
    double cost_tol = 1e-11;
    double feasibility_tol = 1e-9;
    long max_iterations = 0;  // 0 selects 50 * (rows + cols) + 1000
};

struct Solution {
    Status status = Status::infeasible;
    Eigen::VectorXd x;
    double objective = 0.0;
    /// Basic column per constraint row; -1 for rows found redundant.
    std::vector<Eigen::Index> basis;
    long iterations = 0;
};

/// Solves  min c'x  s.t.  A x = b, x >= 0  with a two-phase dense tableau
/// simplex. Entering and leaving variables follow Bland's rule, so the
/// result is a deterministic function of (A, b, c) and cycling is excluded.
Solution minimize(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                  const Options& opts = {});

}  // namespace dpgeom::lp
