#pragma once

// End-to-end 3D localization: observations and a labeled map in, one pose
// estimate out.

#include "clap/averaging.hpp"
#include "clap/clustering.hpp"
#include "clap/solvers.hpp"

#include <cstdint>
#include <optional>
#include <span>

namespace clap {

struct LocalizeConfig {
    ClusterConfig cluster;
    AveragingConfig average;
    std::size_t max_candidates = 50000;
    /// Triplet alignments with RMS above this (scene units) are not treated
    /// as candidates.
    double max_residual = 0.1;
    std::optional<Pose> initial_pose;
    std::uint64_t seed = 0;
};

struct PoseEstimate {
    Pose pose;
    std::size_t candidate_count = 0;
    std::size_t survivor_count = 0;
    std::vector<std::size_t> per_round_counts;
    AverageScheme scheme_used = AverageScheme::Karcher;
    ClusterMode mode_used = ClusterMode::Global;
    bool non_convergence = false;
    bool fallback_to_global = false;
};

/// Candidates -> local filter (local mode, falls back to global when empty)
/// -> trimming and MAD -> averaging over the survivors.
/// Throws TooFewObservations, AllCandidatesDegenerate.
PoseEstimate localize3d(std::span<const Landmark> observations, const LandmarkMap& map, const LocalizeConfig& cfg);

}  // namespace clap
