#include "dpgeom/linprog.hpp"

#include <limits>

#include "dpgeom/errors.hpp"

namespace dpgeom::lp {

namespace {

using Index = Eigen::Index;
using Tableau = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Simplex {
    Tableau T;  // rows 0..m-1 constraints, row m reduced costs; last column rhs
    std::vector<Index> basis;
    Index m;
    Index n;  // structural columns; artificials occupy n..n+m-1
    const Options& opts;
    long iterations = 0;
    long max_iterations;

    Index rhs() const { return T.cols() - 1; }

    void pivot(Index row, Index col) {
        T.row(row) /= T(row, col);
        for (Index i = 0; i <= m; ++i) {
            if (i == row) continue;
            const double f = T(i, col);
            if (f != 0.0) T.row(i) -= f * T.row(row);
        }
        basis[row] = col;
        ++iterations;
    }

    // Runs Bland pivots over columns [0, limit). Returns optimal or unbounded.
    Status run(Index limit) {
        while (true) {
            if (iterations >= max_iterations) return Status::iteration_limit;
            Index enter = -1;
            for (Index j = 0; j < limit; ++j) {
                if (T(m, j) < -opts.cost_tol) {
                    enter = j;
                    break;
                }
            }
            if (enter < 0) return Status::optimal;

            Index leave = -1;
            double best = std::numeric_limits<double>::infinity();
            for (Index i = 0; i < m; ++i) {
                const double a = T(i, enter);
                if (a <= opts.pivot_tol) continue;
                const double ratio = T(i, rhs()) / a;
                if (leave < 0 || ratio < best - 1e-14) {
                    best = ratio;
                    leave = i;
                } else if (ratio <= best + 1e-14 && basis[i] < basis[leave]) {
                    leave = i;
                }
            }
            if (leave < 0) return Status::unbounded;
            pivot(leave, enter);
        }
    }
};

}  // namespace

Solution minimize(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                  const Options& opts) {
    const Index m = A.rows();
    const Index n = A.cols();
    if (b.size() != m || c.size() != n) throw InputError("lp::minimize: dimension mismatch");

    Simplex s{Tableau::Zero(m + 1, n + m + 1), std::vector<Index>(m), m, n, opts, 0,
              opts.max_iterations > 0 ? opts.max_iterations : 50 * (m + n) + 1000};

    for (Index i = 0; i < m; ++i) {
        const double sign = b[i] < 0 ? -1.0 : 1.0;
        s.T.row(i).head(n) = sign * A.row(i);
        s.T(i, n + i) = 1.0;
        s.T(i, s.rhs()) = sign * b[i];
        s.basis[i] = n + i;
    }
    // Phase 1 reduced costs for  min sum(artificials).
    for (Index i = 0; i < m; ++i) {
        s.T.row(m).head(n) -= s.T.row(i).head(n);
        s.T(m, s.rhs()) -= s.T(i, s.rhs());
    }

    Solution out;
    Status st = s.run(n + m);
    out.iterations = s.iterations;
    if (st == Status::iteration_limit) {
        out.status = st;
        return out;
    }
    if (-s.T(m, s.rhs()) > opts.feasibility_tol) {
        out.status = Status::infeasible;
        return out;
    }

    // Drive artificial variables out of the basis; rows with no structural
    // pivot are linearly dependent and are retired.
    std::vector<bool> redundant(m, false);
    for (Index i = 0; i < m; ++i) {
        if (s.basis[i] < n) continue;
        Index col = -1;
        for (Index j = 0; j < n; ++j) {
            if (std::abs(s.T(i, j)) > 1e-9) {
                col = j;
                break;
            }
        }
        if (col >= 0)
            s.pivot(i, col);
        else
            redundant[i] = true;
    }

    // Phase 2 reduced costs.
    s.T.row(m).setZero();
    s.T.row(m).head(n) = c.transpose();
    for (Index i = 0; i < m; ++i) {
        if (redundant[i]) continue;
        const double cb = c[s.basis[i]];
        if (cb != 0.0) s.T.row(m) -= cb * s.T.row(i);
    }
    // Artificial columns must never re-enter.
    st = s.run(n);
    out.iterations = s.iterations;
    out.status = st;
    if (st != Status::optimal) return out;

    out.x = Eigen::VectorXd::Zero(n);
    out.basis.assign(m, -1);
    for (Index i = 0; i < m; ++i) {
        if (redundant[i]) continue;
        out.basis[i] = s.basis[i];
        out.x[s.basis[i]] = std::max(0.0, s.T(i, s.rhs()));
    }
    out.objective = c.dot(out.x);
    return out;
}

}  // namespace dpgeom::lp
