#include "etcsim/graph.hpp"

#include <stdexcept>
#include <string>

namespace etcsim {

CompleteGraph::CompleteGraph(std::size_t n) : n_(n) {
    if (n == 0) throw std::invalid_argument("CompleteGraph: need at least one agent");
}

double consensus_cost(const CompleteGraph& graph, std::span<const double> x) {
    const std::size_t n = graph.size();
    if (x.size() != n) {
        throw std::invalid_argument("consensus_cost: state has " + std::to_string(x.size()) +
                                    " entries, graph has " + std::to_string(n) + " agents");
    }
    // n*sum(x^2) - (sum x)^2, centered to avoid cancellation at large offsets.
    // Shifting by x[0] first makes a consensus state cost exactly zero.
    const double shift = x[0];
    double mean = 0.0;
    for (double v : x) mean += v - shift;
    mean /= static_cast<double>(n);
    double sq = 0.0;
    for (double v : x) {
        const double d = (v - shift) - mean;
        sq += d * d;
    }
    return static_cast<double>(n) * sq;
}

DenseMatrix laplacian_dense(const CompleteGraph& graph) {
    const std::size_t n = graph.size();
    DenseMatrix lap{n, std::vector<double>(n * n, -1.0)};
    for (std::size_t i = 0; i < n; ++i) lap(i, i) = static_cast<double>(n) - 1.0;
    return lap;
}

}  // namespace etcsim
