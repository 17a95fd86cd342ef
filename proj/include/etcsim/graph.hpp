#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace etcsim {

/// Complete communication graph on n agents. The Laplacian L = n*I - 1*1^T is
/// implied by n and never stored.
class CompleteGraph {
public:
    explicit CompleteGraph(std::size_t n);

    std::size_t size() const noexcept { return n_; }

private:
    std::size_t n_;
};

/// Row-major dense square matrix.
struct DenseMatrix {
    std::size_t n = 0;
    std::vector<double> data;

    double operator()(std::size_t row, std::size_t col) const { return data[row * n + col]; }
    double& operator()(std::size_t row, std::size_t col) { return data[row * n + col]; }
};

/// Quadratic consensus deviation x^T L x in O(n), without forming L.
/// Equals half the sum over ordered pairs of (x_i - x_j)^2.
double consensus_cost(const CompleteGraph& graph, std::span<const double> x);

/// Dense Laplacian, for tests and debugging only.
DenseMatrix laplacian_dense(const CompleteGraph& graph);

}  // namespace etcsim
