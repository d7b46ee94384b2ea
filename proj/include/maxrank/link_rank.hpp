#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "maxrank/web_graph.hpp"

namespace maxrank {

namespace kernels {
class DampedChain;
}

enum class ScoreKind { Distribution, Real };

struct ScoreVector {
    std::vector<double> values;
    ScoreKind kind = ScoreKind::Real;

    std::size_t size() const noexcept { return values.size(); }
    double operator[](std::size_t i) const noexcept { return values[i]; }
};

/// Uniform distribution over a nonempty set of pages.
class TeleportVector {
public:
    /// Throws std::invalid_argument on an empty support or an id >= n.
    TeleportVector(std::size_t n, std::vector<PageId> support);

    static TeleportVector uniform(std::size_t n);

    std::span<const PageId> support() const noexcept { return support_; }
    std::size_t num_pages() const noexcept { return n_; }
    std::vector<double> dense() const;

private:
    std::size_t n_;
    std::vector<PageId> support_;
};

/// Result of a power iteration. `converged` is false when max_iters sweeps
/// did not bring the l1 step below eps; `scores` then holds the last iterate.
struct PowerIterationResult {
    ScoreVector scores;
    double residual = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

struct PowerIterationOptions {
    double alpha = 0.85;
    double eps = 1e-10;
    std::size_t max_iters = 200;
};

/// Power iteration on a damped chain, starting from its teleport vector.
/// Stops when ||pi_{t+1} - pi_t||_1 <= eps and returns pi_{t+1}.
PowerIterationResult power_iterate(const kernels::DampedChain& chain, double eps, std::size_t max_iters);

PowerIterationResult pagerank(const WebGraph& g, const TeleportVector& z, const PowerIterationOptions& opt = {});

/// PageRank with teleportation restricted to the trusted seed.
PowerIterationResult trustrank(const WebGraph& g, std::vector<PageId> trusted,
                               const PowerIterationOptions& opt = {});

/// TrustRank of the spam seed on the reversed graph.
PowerIterationResult antitrustrank(const WebGraph& g, std::vector<PageId> spam,
                                   const PowerIterationOptions& opt = {});

}  // namespace maxrank
