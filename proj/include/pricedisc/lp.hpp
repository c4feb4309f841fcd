#pragma once

#include <string>
#include <vector>

#include "pricedisc/errors.hpp"
#include "pricedisc/scalar.hpp"

namespace pricedisc {

/// maximize c·x  s.t.  A_eq x = b_eq,  A_ub x <= b_ub,  x >= 0.
template <class Scalar>
struct LinearProgram {
    Vector<Scalar> objective;
    Matrix<Scalar> eq_matrix;
    Vector<Scalar> eq_rhs;
    Matrix<Scalar> ub_matrix;
    Vector<Scalar> ub_rhs;

    Index num_variables() const { return objective.size(); }
};

enum class LpStatus { optimal, infeasible, unbounded };

inline std::string to_string(LpStatus s)
{
    switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    }
    return "?";
}

template <class Scalar>
struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    Vector<Scalar> x;
    Scalar objective{0};
};

namespace detail {

/// Dense simplex tableau. Row r holds basis variable basis[r]; the last
/// column is the right-hand side.
template <class Scalar>
class Tableau {
public:
    Tableau(Matrix<Scalar> rows, std::vector<Index> basis) : t_(std::move(rows)), basis_(std::move(basis)) {}

    Index rows() const { return t_.rows(); }
    Index cols() const { return t_.cols() - 1; }
    const std::vector<Index>& basis() const { return basis_; }
    Scalar rhs(Index r) const { return t_(r, t_.cols() - 1); }
    Scalar at(Index r, Index c) const { return t_(r, c); }

    /// Reduced costs of `cost` (maximize) for the current basis.
    Vector<Scalar> reduced(const Vector<Scalar>& cost) const
    {
        Vector<Scalar> cb(rows());
        for (Index r = 0; r < rows(); ++r) cb(r) = cost(basis_[static_cast<size_t>(r)]);
        Vector<Scalar> red = cost - t_.leftCols(cols()).transpose() * cb;
        return red;
    }

    void pivot(Index r, Index c)
    {
        const Scalar piv = t_(r, c);
        t_.row(r) /= piv;
        for (Index i = 0; i < rows(); ++i) {
            if (i == r) continue;
            const Scalar f = t_(i, c);
            if (f != Scalar(0)) t_.row(i) -= f * t_.row(r);
        }
        basis_[static_cast<size_t>(r)] = c;
    }

    /// Bland-rule primal simplex on columns [0, allowed). Returns false when
    /// the objective is unbounded.
    bool optimize(const Vector<Scalar>& cost, Index allowed)
    {
        const Scalar tol = ScalarTraits<Scalar>::lp_tolerance();
        const long max_iter = 100000;
        for (long iter = 0; iter < max_iter; ++iter) {
            const Vector<Scalar> red = reduced(cost);
            Index enter = -1;
            for (Index j = 0; j < allowed; ++j)
                if (red(j) > tol) {
                    enter = j;
                    break;
                }
            if (enter < 0) return true;
            Index leave = -1;
            Scalar best_ratio(0);
            for (Index r = 0; r < rows(); ++r) {
                if (!(t_(r, enter) > tol)) continue;
                const Scalar ratio = rhs(r) / t_(r, enter);
                if (leave < 0 || ratio < best_ratio ||
                    (ratio == best_ratio && basis_[static_cast<size_t>(r)] < basis_[static_cast<size_t>(leave)])) {
                    leave = r;
                    best_ratio = ratio;
                }
            }
            if (leave < 0) return false;
            pivot(leave, enter);
        }
        throw InternalError("simplex iteration limit reached");
    }

    void drop_row(Index r)
    {
        Matrix<Scalar> next(rows() - 1, t_.cols());
        next.topRows(r) = t_.topRows(r);
        next.bottomRows(rows() - 1 - r) = t_.bottomRows(rows() - 1 - r);
        t_ = std::move(next);
        basis_.erase(basis_.begin() + r);
    }

private:
    Matrix<Scalar> t_;
    std::vector<Index> basis_;
};

} // namespace detail

/// Two-phase dense primal simplex with Bland's rule.
template <class Scalar>
LpSolution<Scalar> solve_lp(const LinearProgram<Scalar>& lp)
{
    const Index n = lp.num_variables();
    const Index m_eq = lp.eq_matrix.rows(), m_ub = lp.ub_matrix.rows();
    if ((m_eq > 0 && lp.eq_matrix.cols() != n) || lp.eq_rhs.size() != m_eq)
        throw DomainError("equality constraint dimensions do not match");
    if ((m_ub > 0 && lp.ub_matrix.cols() != n) || lp.ub_rhs.size() != m_ub)
        throw DomainError("inequality constraint dimensions do not match");

    const Index m = m_eq + m_ub;
    // Columns: originals, one slack per inequality, one artificial per row.
    const Index n_slack = m_ub, n_art = m;
    const Index cols = n + n_slack + n_art;
    Matrix<Scalar> rows = Matrix<Scalar>::Zero(m, cols + 1);
    std::vector<Index> basis(static_cast<size_t>(m));
    for (Index r = 0; r < m; ++r) {
        const bool is_eq = r < m_eq;
        Scalar sign(1);
        const Scalar b = is_eq ? lp.eq_rhs(r) : lp.ub_rhs(r - m_eq);
        if (b < Scalar(0)) sign = Scalar(-1);
        if (is_eq) {
            rows.row(r).head(n) = sign * lp.eq_matrix.row(r);
        } else {
            rows.row(r).head(n) = sign * lp.ub_matrix.row(r - m_eq);
            rows(r, n + (r - m_eq)) = sign;
        }
        rows(r, cols) = sign * b;
        rows(r, n + n_slack + r) = Scalar(1);
        basis[static_cast<size_t>(r)] = n + n_slack + r;
    }
    // Inequalities with non-negative rhs start from their slack.
    for (Index r = m_eq; r < m; ++r)
        if (rows(r, n + (r - m_eq)) == Scalar(1)) basis[static_cast<size_t>(r)] = n + (r - m_eq);

    detail::Tableau<Scalar> tab(std::move(rows), std::move(basis));

    Vector<Scalar> phase1 = Vector<Scalar>::Zero(cols);
    phase1.tail(n_art).setConstant(Scalar(-1));
    tab.optimize(phase1, cols);

    LpSolution<Scalar> sol;
    const Scalar tol = ScalarTraits<Scalar>::lp_tolerance();
    Scalar infeasibility(0);
    for (Index r = 0; r < tab.rows(); ++r)
        if (tab.basis()[static_cast<size_t>(r)] >= n + n_slack) infeasibility += tab.rhs(r);
    if (infeasibility > tol * Scalar(std::max<Index>(1, m)) * Scalar(10)) {
        sol.status = LpStatus::infeasible;
        return sol;
    }
    // Drive zero-level artificials out of the basis; drop redundant rows.
    for (Index r = tab.rows() - 1; r >= 0; --r) {
        if (tab.basis()[static_cast<size_t>(r)] < n + n_slack) continue;
        Index col = -1;
        for (Index j = 0; j < n + n_slack; ++j) {
            using std::abs;
            if (abs(tab.at(r, j)) > tol) {
                col = j;
                break;
            }
        }
        if (col >= 0) tab.pivot(r, col);
        else tab.drop_row(r);
    }

    Vector<Scalar> phase2 = Vector<Scalar>::Zero(cols);
    phase2.head(n) = lp.objective;
    if (!tab.optimize(phase2, n + n_slack)) {
        sol.status = LpStatus::unbounded;
        return sol;
    }
    sol.status = LpStatus::optimal;
    sol.x = Vector<Scalar>::Zero(n);
    for (Index r = 0; r < tab.rows(); ++r) {
        const Index b = tab.basis()[static_cast<size_t>(r)];
        if (b < n) sol.x(b) = tab.rhs(r);
    }
    if constexpr (!ScalarTraits<Scalar>::exact) sol.x = sol.x.cwiseMax(Scalar(0));
    sol.objective = lp.objective.dot(sol.x);
    return sol;
}

} // namespace pricedisc
