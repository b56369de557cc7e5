// SPDX-License-Identifier: Apache-2.0
#include "cbreak/error.hpp"
#include "cbreak/oracle/reference_oracle.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace cbreak::oracle {

Rule golub_welsch(std::size_t order)
{
    if (order == 0)
        throw InvalidArgument("quadrature order must be >= 1");
    auto const n = static_cast<Eigen::Index>(order);
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index k = 1; k < n; ++k)
    {
        double const kk = static_cast<double>(k);
        double const beta = kk / std::sqrt(4 * kk * kk - 1);
        jacobi(k, k - 1) = beta;
        jacobi(k - 1, k) = beta;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
    Rule rule;
    for (Eigen::Index i = 0; i < n; ++i)
    {
        rule.nodes.push_back(solver.eigenvalues()(i));
        double const v = solver.eigenvectors()(0, i);
        rule.weights.push_back(2 * v * v);
    }
    return rule;
}

}  // namespace cbreak::oracle
