#pragma once

// Clustering of candidate transforms: pairwise distances, medoid, local
// filtering around a reference pose, iterative trimming and MAD rejection.

#include "clap/metrics.hpp"
#include "clap/solvers.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace clap {

enum class ClusterMode { Global, Local };

struct ClusterConfig {
    MetricSpec metric;
    double trim_fraction = 0.2;
    int rounds = 5;
    double mad_k = 3.0;  // 0 disables the MAD pass
    ClusterMode mode = ClusterMode::Global;
    double tol_t = 0.5;   // local mode, scene units
    double tol_r = 0.35;  // local mode, radians

    void validate() const;
};

struct ClusterResult {
    std::size_t center_index = 0;         // index into the candidate list
    std::vector<std::size_t> survivors;   // ascending candidate indices
    std::vector<std::size_t> per_round_counts;  // initial count, then after each round
    std::size_t fallback_pairs = 0;
    std::size_t mad_removed = 0;  // survivors dropped by the MAD pass
};

/// Dense symmetric distance matrix with a count of metric fallbacks.
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    explicit DistanceMatrix(std::size_t n) : n_(n), d_(n * n, 0.0) {}

    std::size_t size() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
    void set(std::size_t i, std::size_t j, double v) {
        d_[i * n_ + j] = v;
        d_[j * n_ + i] = v;
    }
    std::size_t fallback_pairs = 0;

private:
    std::size_t n_ = 0;
    std::vector<double> d_;
};

template <class T>
DistanceMatrix pairwise_distances(std::span<const T> candidates, const Metric<T>& metric) {
    DistanceMatrix d(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i)
        for (std::size_t j = i + 1; j < candidates.size(); ++j) {
            const Distance v = metric(candidates[i], candidates[j]);
            d.set(i, j, v.value);
            if (v.fell_back) ++d.fallback_pairs;
        }
    return d;
}

/// argmin_i sum_j d(i, j) over the subset; ties go to the lowest index.
std::size_t medoid(const DistanceMatrix& d, std::span<const std::size_t> subset);
std::size_t medoid(const DistanceMatrix& d);

template <class T>
std::size_t medoid(std::span<const T> candidates, const Metric<T>& metric) {
    return medoid(pairwise_distances(candidates, metric));
}

/// Number of survivors after one trimming round: count - floor(f * count),
/// never below 2.
std::size_t trimmed_count(std::size_t count, double trim_fraction);

/// Repeatedly drops the candidates farthest from the current medoid.
ClusterResult trim_iterate(const DistanceMatrix& d, const ClusterConfig& cfg);

template <class T>
ClusterResult trim_iterate(std::span<const T> candidates, const Metric<T>& metric, const ClusterConfig& cfg) {
    return trim_iterate(pairwise_distances(candidates, metric), cfg);
}

/// trim_iterate followed, when cfg.mad_k > 0 and more than 2 survive, by a
/// MAD pass around the trimmed center; the center is then re-taken as the
/// medoid of what remains.
ClusterResult cluster_candidates(const DistanceMatrix& d, const ClusterConfig& cfg);

/// Keeps positions i with d_i <= median + k * MAD (MAD < 1e-12 keeps
/// d_i <= median + 1e-12). Returned positions are ascending.
std::vector<std::size_t> mad_filter(std::span<const double> distances_to_center, double k);

template <class T>
std::vector<std::size_t> mad_filter(std::span<const T> candidates, const T& center, const Metric<T>& metric,
                                    double k) {
    std::vector<double> dist;
    dist.reserve(candidates.size());
    for (const T& c : candidates) dist.push_back(metric(center, c).value);
    return mad_filter(dist, k);
}

/// Indices of candidates whose relative transform to the reference is within
/// (tol_t, tol_r), ranked by e_t + lambda * e_r (ties by index). Throws
/// EmptyAfterFilter when nothing survives.
std::vector<std::size_t> local_filter(std::span<const PoseCandidate> candidates, const Pose& reference, double tol_t,
                                      double tol_r, double lambda = 1.0);

}  // namespace clap
