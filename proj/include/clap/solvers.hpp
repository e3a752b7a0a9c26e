#pragma once

// Minimal solvers producing candidate transforms from feature subsets.

#include "clap/geom.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace clap {

struct Landmark {
    Vec3 position = Vec3::Zero();
    std::string label;
};

/// Landmarks in the global frame together with the declared label alphabet.
/// validate() enforces at least 3 landmarks, known labels, finite
/// coordinates, and no two landmarks closer than 1e-9.
struct LandmarkMap {
    std::vector<std::string> labels;
    std::vector<Landmark> landmarks;

    void validate() const;
};

struct Match2D {
    Vec2 p = Vec2::Zero();  // source (left) pixel
    Vec2 q = Vec2::Zero();  // target (right) pixel
};

struct PoseCandidate {
    Pose pose;
    std::array<std::size_t, 3> observation_indices{};
    std::array<std::size_t, 3> map_indices{};
    double residual = 0.0;  // RMS alignment error of the triplet
};

struct HomographyCandidate {
    Homography homography;
    std::array<std::size_t, 4> match_indices{};
};

/// Least-squares rigid transform T minimizing sum |T src_i - dst_i|^2
/// (Kabsch/Arun with reflection correction). Throws InvalidArgument on size
/// mismatch or fewer than 3 points, DegenerateConfiguration on collinear
/// input.
Pose svd_align(std::span<const Vec3> src, std::span<const Vec3> dst);

/// RMS of |T src_i - dst_i|.
double alignment_rms(const Pose& t, std::span<const Vec3> src, std::span<const Vec3> dst);

struct CandidateOptions {
    std::size_t max_candidates = 50000;
    std::uint64_t seed = 0;
    /// Candidates whose alignment RMS exceeds this are not emitted.
    double max_residual = std::numeric_limits<double>::infinity();
};

/// Number of ordered, label-consistent assignments of an observation triplet
/// with the given labels to distinct map landmarks.
std::size_t count_label_assignments(const LandmarkMap& map, const std::array<std::string, 3>& labels);

/// Aligns every observation triplet to every label-consistent ordered map
/// triplet. Output order does not depend on the order of observations.
/// Throws TooFewObservations for fewer than 3 observations.
std::vector<PoseCandidate> enumerate_pose_candidates(std::span<const Landmark> observations, const LandmarkMap& map,
                                                     const CandidateOptions& options = {});

/// Similarity taking the centroid of pts to the origin and their mean
/// distance from it to sqrt(2). Throws DegenerateConfiguration for
/// coincident points.
Mat3 hartley_transform(std::span<const Vec2> pts);

/// Normalized DLT homography mapping p -> q, H33 = 1. Throws
/// DegenerateConfiguration when the solution is not unique.
Homography dlt_homography(std::span<const Match2D> matches);

/// Draws n seeded 4-subsets and solves each; degenerate draws are redrawn up
/// to 20n attempts. Throws InsufficientValidCandidates when fewer than
/// min(n, max(10, n/10)) candidates survive.
std::vector<HomographyCandidate> sample_homography_candidates(std::span<const Match2D> matches, std::size_t n,
                                                              std::uint64_t seed);

}  // namespace clap
