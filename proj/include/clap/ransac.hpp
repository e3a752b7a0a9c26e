#pragma once

// Fixed-budget DLT + RANSAC baseline and the reprojection measures shared by
// every homography pipeline.

#include "clap/geom.hpp"
#include "clap/solvers.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace clap {

struct SreStats {
    std::vector<double> per_match;  // pixels, +inf where the projection is undefined
    double mean = 0.0;
};

/// Per match 0.5 * (|q - pi(H p)| + |p - pi(H^-1 q)|), and their mean.
SreStats symmetric_reprojection_error(const Homography& h, std::span<const Match2D> matches);

/// Indices (ascending) of matches with SRE <= threshold.
std::vector<std::size_t> inliers_of(const Homography& h, std::span<const Match2D> matches, double threshold);

/// Mean SRE over the given subset; +inf for an empty subset.
double mean_sre(const Homography& h, std::span<const Match2D> matches, std::span<const std::size_t> subset);

struct RansacConfig {
    std::size_t iterations = 1000;
    double inlier_threshold = 2.0;  // pixels
    std::uint64_t seed = 0;

    void validate() const;
};

struct RansacResult {
    Homography homography;
    std::vector<std::size_t> inlier_indices;
    std::size_t iterations_used = 0;
    bool refined = false;  // the inlier refit was kept
};

/// Exactly cfg.iterations seeded 4-subsets (degenerate draws consume budget);
/// best = most inliers, then lower mean inlier SRE, then earlier hypothesis;
/// refit on the winner's inliers (kept only if it does not raise their mean
/// SRE) and recompute inliers once. Throws NoValidHypothesis when every draw
/// was degenerate.
RansacResult ransac_homography(std::span<const Match2D> matches, const RansacConfig& cfg);

double inlier_ratio(const RansacResult& result, std::size_t total);
double inlier_ratio(std::size_t inliers, std::size_t total);

struct RefineResult {
    Homography homography;
    bool refined = false;  // false when the original was kept
    std::size_t inliers = 0;
};

/// Refits H by DLT on its own inliers; the original is returned when there
/// are fewer than 4 inliers, the refit is degenerate, or the refit raises the
/// mean SRE over those inliers.
RefineResult refine_homography(const Homography& h, std::span<const Match2D> matches, double inlier_threshold);

/// RANSAC for SE(3) localization with label-only correspondences: each
/// hypothesis aligns a random observation triplet to random label-consistent
/// map landmarks; an observation is an inlier when its transformed position
/// lies within the threshold of a same-label landmark.
struct RansacPoseConfig {
    std::size_t iterations = 1000;
    double inlier_threshold = 0.1;  // scene units
    std::uint64_t seed = 0;
};

struct RansacPoseResult {
    Pose pose;
    std::vector<std::pair<std::size_t, std::size_t>> inliers;  // (observation, landmark)
    std::size_t iterations_used = 0;
};

RansacPoseResult ransac_pose(std::span<const Landmark> observations, const LandmarkMap& map,
                             const RansacPoseConfig& cfg);

}  // namespace clap
