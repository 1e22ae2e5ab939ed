#include "polyoverlay/dense_solver.hpp"

#include <cmath>
#include <utility>

namespace polyoverlay {

double max_norm(const Eigen::MatrixXd& a)
{
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

std::optional<Eigen::VectorXd> solve_partial_pivot(Eigen::MatrixXd a, Eigen::VectorXd b, double relative_pivot)
{
    const Eigen::Index n = a.rows();
    const double threshold = relative_pivot * max_norm(a);
    for (Eigen::Index k = 0; k < n; ++k) {
        Eigen::Index pivot = k;
        for (Eigen::Index i = k + 1; i < n; ++i) {
            if (std::abs(a(i, k)) > std::abs(a(pivot, k)))
                pivot = i;
        }
        if (!(std::abs(a(pivot, k)) > threshold))
            return std::nullopt;
        if (pivot != k) {
            a.row(k).swap(a.row(pivot));
            std::swap(b(k), b(pivot));
        }
        for (Eigen::Index i = k + 1; i < n; ++i) {
            const double factor = a(i, k) / a(k, k);
            if (factor == 0.0)
                continue;
            a.row(i).tail(n - k) -= factor * a.row(k).tail(n - k);
            b(i) -= factor * b(k);
        }
    }
    Eigen::VectorXd x(n);
    for (Eigen::Index k = n - 1; k >= 0; --k) {
        double sum = b(k);
        for (Eigen::Index j = k + 1; j < n; ++j)
            sum -= a(k, j) * x(j);
        x(k) = sum / a(k, k);
    }
    return x;
}

int pivoted_rank(Eigen::MatrixXd a, double relative_pivot)
{
    const double threshold = relative_pivot * max_norm(a);
    const Eigen::Index steps = std::min(a.rows(), a.cols());
    int rank = 0;
    for (Eigen::Index k = 0; k < steps; ++k) {
        Eigen::Index pr = k, pc = k;
        double best = -1.0;
        for (Eigen::Index i = k; i < a.rows(); ++i) {
            for (Eigen::Index j = k; j < a.cols(); ++j) {
                if (std::abs(a(i, j)) > best) {
                    best = std::abs(a(i, j));
                    pr = i;
                    pc = j;
                }
            }
        }
        if (!(best > threshold))
            break;
        a.row(k).swap(a.row(pr));
        a.col(k).swap(a.col(pc));
        for (Eigen::Index i = k + 1; i < a.rows(); ++i) {
            const double factor = a(i, k) / a(k, k);
            a.row(i).tail(a.cols() - k) -= factor * a.row(k).tail(a.cols() - k);
        }
        ++rank;
    }
    return rank;
}

} // namespace polyoverlay
