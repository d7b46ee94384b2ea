#pragma once

// Data-parallel sweeps used by the rankers and the MaxRank solver.
//
// Every parallel kernel has a serial counterpart with the textbook loop
// structure; the tests check the two against each other and the benchmark
// target times them. Parallel kernels are deterministic for any thread count:
// each output entry is written by one thread from a read-only snapshot, and
// floating point reductions run over a fixed block partition that does not
// depend on the number of workers.

#include <cstddef>
#include <span>
#include <vector>

#include "maxrank/bellman.hpp"
#include "maxrank/web_graph.hpp"

namespace maxrank::kernels {

/// Block length of the fixed reduction partition.
inline constexpr std::size_t kReductionBlock = 1 << 14;

double sum(std::span<const double> x);
double l1_distance(std::span<const double> a, std::span<const double> b);
double sup_distance(std::span<const double> a, std::span<const double> b);

/**
The damped random-surfer chain P = alpha S + (1 - alpha) e z, with rows of
pages without out-links replaced by z. Holds the reversed graph so that a
sweep can be computed in pull form (one writer per output entry).
*/
class DampedChain {
public:
    DampedChain(const WebGraph& graph, std::vector<double> teleport, double alpha);

    std::size_t num_pages() const noexcept { return graph_->num_pages(); }
    const WebGraph& graph() const noexcept { return *graph_; }
    const WebGraph& in_links() const noexcept { return in_links_; }
    std::span<const double> teleport() const noexcept { return teleport_; }
    std::span<const double> inv_out_degree() const noexcept { return inv_out_degree_; }
    std::span<const PageId> dangling() const noexcept { return dangling_; }
    double alpha() const noexcept { return alpha_; }

private:
    const WebGraph* graph_;
    WebGraph in_links_;
    std::vector<double> teleport_;
    std::vector<double> inv_out_degree_;
    std::vector<PageId> dangling_;
    double alpha_;
};

/// next = cur * P, pull form over in-links, OpenMP parallel.
void power_step(const DampedChain& chain, std::span<const double> cur, std::span<double> next);

/// next = cur * P, push form over out-links, single threaded.
void power_step_serial(const DampedChain& chain, std::span<const double> cur, std::span<double> next);

/// out = T(v) with lambda frozen, OpenMP parallel. When `kept` is non-null it
/// receives each page's minimising link count. Returns ||out - v||_inf.
double jacobi_sweep(const BellmanOperator& op, std::span<const double> v, double lambda, std::span<double> out,
                    std::vector<std::size_t>* kept);

/// Single-threaded reference for jacobi_sweep.
double jacobi_sweep_serial(const BellmanOperator& op, std::span<const double> v, double lambda,
                           std::span<double> out, std::vector<std::size_t>* kept);

/// In-place cyclic sweep: pages are updated in id order and later pages see
/// the new values of earlier ones. Lambda stays frozen for the whole sweep.
/// Returns the largest change made to any entry.
double gauss_seidel_sweep(const BellmanOperator& op, std::span<double> v, double lambda);

}  // namespace maxrank::kernels
