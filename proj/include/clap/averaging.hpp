#pragma once

// Cluster-center averaging on SE(3) and on unit-determinant homographies.

#include "clap/geom.hpp"

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace clap {

enum class AverageScheme { Karcher, LogEuclidean, Split, Medoid, LieMean, LieMedian };

AverageScheme parse_average_scheme(std::string_view name);
std::string_view average_scheme_name(AverageScheme scheme);

struct AveragingConfig {
    AverageScheme scheme = AverageScheme::Karcher;
    int max_iter = 100;
    double tol = 1e-10;

    void validate() const;
};

template <class T>
struct AverageResult {
    T value;
    int iterations = 0;
    bool converged = true;
    std::size_t excluded = 0;  // members skipped because their log was undefined
    std::vector<double> objective_history;  // Weiszfeld only: sum of distances per iterate
};

/// Fixed point of mu <- mu * exp(mean_i log(mu^-1 T_i)), started at the
/// lie-log medoid. On non-convergence the best iterate is returned with
/// converged = false.
AverageResult<Pose> karcher_mean_se3(std::span<const Pose> poses, const AveragingConfig& cfg = {});

/// exp(mean_i log T_i), single pass.
Pose log_euclidean_mean_se3(std::span<const Pose> poses);

/// Arithmetic mean translation and chordal (SVD-projected) mean rotation.
/// Throws DegenerateRotationMean when the mean rotation matrix is rank <= 1.
Pose split_mean_se3(std::span<const Pose> poses);

/// Medoid under lie_log_distance with the given lambda.
Pose medoid_se3(std::span<const Pose> poses, double lambda = 1.0);

/// Dispatches on cfg.scheme (Karcher, LogEuclidean, Split or Medoid).
AverageResult<Pose> average_poses(std::span<const Pose> poses, const AveragingConfig& cfg, double lambda = 1.0);

/// Intrinsic mean on SL(3), Karcher-style iteration from the medoid.
AverageResult<Homography> lie_mean_homography(std::span<const Homography> hs, const AveragingConfig& cfg = {});

/// Riemannian Weiszfeld geometric median on SL(3), re-anchored at every
/// iterate. Steps that would raise the objective are halved, so the history
/// is non-increasing.
AverageResult<Homography> lie_median_homography(std::span<const Homography> hs, const AveragingConfig& cfg = {});

/// Medoid under the Lie distance (Frobenius fallback per pair).
Homography medoid_homography(std::span<const Homography> hs);

/// Sum over members of the Lie distance to h (Frobenius fallback per pair).
double lie_distance_sum(const Homography& h, std::span<const Homography> hs);

}  // namespace clap
