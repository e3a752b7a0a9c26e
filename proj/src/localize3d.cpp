#include "clap/localize3d.hpp"

#include "clap/error.hpp"

#include <numeric>

namespace clap {

PoseEstimate localize3d(std::span<const Landmark> observations, const LandmarkMap& map, const LocalizeConfig& cfg) {
    if (observations.size() < 3) throw TooFewObservations("localize3d: need at least 3 observations");
    map.validate();
    cfg.cluster.validate();
    cfg.average.validate();
    if (cfg.cluster.mode == ClusterMode::Local && !cfg.initial_pose)
        throw InvalidArgument("localize3d: local mode requires an initial pose");

    const std::vector<PoseCandidate> candidates =
        enumerate_pose_candidates(observations, map, {cfg.max_candidates, cfg.seed, cfg.max_residual});
    if (candidates.empty()) throw AllCandidatesDegenerate("localize3d: no consistent pose candidate");

    PoseEstimate est;
    est.candidate_count = candidates.size();
    est.scheme_used = cfg.average.scheme;

    std::vector<std::size_t> pool(candidates.size());
    std::iota(pool.begin(), pool.end(), 0);
    if (cfg.cluster.mode == ClusterMode::Local) {
        try {
            pool = local_filter(candidates, *cfg.initial_pose, cfg.cluster.tol_t, cfg.cluster.tol_r,
                                cfg.cluster.metric.lambda);
            std::sort(pool.begin(), pool.end());
            est.mode_used = ClusterMode::Local;
        } catch (const EmptyAfterFilter&) {
            est.fallback_to_global = true;
        }
    }

    std::vector<Pose> poses;
    poses.reserve(pool.size());
    for (std::size_t i : pool) poses.push_back(candidates[i].pose);

    const Metric<Pose> metric = make_pose_metric(cfg.cluster.metric);
    const ClusterResult cluster = cluster_candidates(pairwise_distances<Pose>(poses, metric), cfg.cluster);
    est.per_round_counts = cluster.per_round_counts;

    std::vector<Pose> members;
    members.reserve(cluster.survivors.size());
    for (std::size_t i : cluster.survivors) members.push_back(poses[i]);
    est.survivor_count = members.size();

    if (cfg.average.scheme == AverageScheme::Medoid) {
        est.pose = poses[cluster.center_index];
    } else {
        const AverageResult<Pose> avg = average_poses(members, cfg.average, cfg.cluster.metric.lambda);
        est.pose = avg.value;
        est.non_convergence = !avg.converged;
    }
    return est;
}

}  // namespace clap
