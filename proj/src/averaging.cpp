#include "clap/averaging.hpp"

#include "clap/clustering.hpp"
#include "clap/error.hpp"
#include "clap/metrics.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <string>

namespace clap {

AverageScheme parse_average_scheme(std::string_view name) {
    if (name == "karcher") return AverageScheme::Karcher;
    if (name == "logeuclidean") return AverageScheme::LogEuclidean;
    if (name == "split") return AverageScheme::Split;
    if (name == "medoid") return AverageScheme::Medoid;
    if (name == "liemean") return AverageScheme::LieMean;
    if (name == "liemedian") return AverageScheme::LieMedian;
    throw InvalidArgument("unknown averaging scheme '" + std::string(name) + "'");
}

std::string_view average_scheme_name(AverageScheme scheme) {
    switch (scheme) {
        case AverageScheme::Karcher: return "karcher";
        case AverageScheme::LogEuclidean: return "logeuclidean";
        case AverageScheme::Split: return "split";
        case AverageScheme::Medoid: return "medoid";
        case AverageScheme::LieMean: return "liemean";
        case AverageScheme::LieMedian: return "liemedian";
    }
    return "?";
}

void AveragingConfig::validate() const {
    if (max_iter < 1) throw InvalidArgument("max_iter must be >= 1");
    if (!(tol > 0.0)) throw InvalidArgument("tol must be > 0");
}

Pose medoid_se3(std::span<const Pose> poses, double lambda) {
    if (poses.empty()) throw InvalidArgument("medoid of an empty pose set");
    const Metric<Pose> metric = make_pose_metric({MetricKind::LieLog, lambda, {}});
    return poses[medoid(poses, metric)];
}

AverageResult<Pose> karcher_mean_se3(std::span<const Pose> poses, const AveragingConfig& cfg) {
    cfg.validate();
    if (poses.empty()) throw InvalidArgument("karcher_mean_se3: empty input");
    Pose mu = medoid_se3(poses);
    AverageResult<Pose> best{mu, 0, false, 0, {}};
    double best_norm = std::numeric_limits<double>::infinity();
    const double inv_n = 1.0 / static_cast<double>(poses.size());
    for (int it = 1; it <= cfg.max_iter; ++it) {
        const Pose mu_inv = pose_inverse(mu);
        Vec6 mean = Vec6::Zero();
        for (const Pose& t : poses) mean += se3_log(mu_inv * t).vector();
        mean *= inv_n;
        const double norm = mean.norm();
        if (norm < best_norm) {
            best_norm = norm;
            best.value = mu;
            best.iterations = it;
        }
        if (norm < cfg.tol) {
            best.converged = true;
            return best;
        }
        mu = mu * se3_exp(Twist::from_vector(mean));
    }
    return best;
}

Pose log_euclidean_mean_se3(std::span<const Pose> poses) {
    if (poses.empty()) throw InvalidArgument("log_euclidean_mean_se3: empty input");
    Vec6 mean = Vec6::Zero();
    for (const Pose& t : poses) mean += se3_log(t).vector();
    mean /= static_cast<double>(poses.size());
    return se3_exp(Twist::from_vector(mean));
}

Pose split_mean_se3(std::span<const Pose> poses) {
    if (poses.empty()) throw InvalidArgument("split_mean_se3: empty input");
    Eigen::Matrix3d rsum = Eigen::Matrix3d::Zero();
    Vec3 tsum = Vec3::Zero();
    for (const Pose& t : poses) {
        rsum += t.rotation.matrix();
        tsum += t.translation;
    }
    const double n = static_cast<double>(poses.size());
    const Eigen::JacobiSVD<Eigen::Matrix3d> svd(rsum / n, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (!(svd.singularValues()[1] >= 1e-9))
        throw DegenerateRotationMean("split_mean_se3: rotations cancel (antipodal inputs)");
    Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
    d(2, 2) = (svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0 ? -1.0 : 1.0;
    const Mat3 r = svd.matrixU() * d * svd.matrixV().transpose();
    return {Rotation::from_matrix_unchecked(r), tsum / n};
}

AverageResult<Pose> average_poses(std::span<const Pose> poses, const AveragingConfig& cfg, double lambda) {
    switch (cfg.scheme) {
        case AverageScheme::Karcher: return karcher_mean_se3(poses, cfg);
        case AverageScheme::LogEuclidean: return {log_euclidean_mean_se3(poses), 1, true, 0, {}};
        case AverageScheme::Split: return {split_mean_se3(poses), 1, true, 0, {}};
        case AverageScheme::Medoid: return {medoid_se3(poses, lambda), 1, true, 0, {}};
        default: break;
    }
    throw InvalidArgument("averaging scheme '" + std::string(average_scheme_name(cfg.scheme)) +
                          "' does not apply to poses");
}

namespace {

Homography to_sl3(const Mat3& m) { return normalize_homography(m, HomographyNorm::UnitDeterminant); }

struct TangentSample {
    std::vector<Mat3> logs;
    std::size_t excluded = 0;
};

TangentSample tangent_logs(const Mat3& mu_inv, std::span<const Homography> hs) {
    TangentSample s;
    s.logs.reserve(hs.size());
    for (const Homography& h : hs) {
        try {
            s.logs.push_back(gl3_log(mu_inv * h.matrix()));
        } catch (const LogDomainError&) {
            ++s.excluded;
        }
    }
    return s;
}

std::vector<Homography> normalized_members(std::span<const Homography> hs) {
    std::vector<Homography> out;
    out.reserve(hs.size());
    for (const Homography& h : hs) out.push_back(to_sl3(h.matrix()));
    return out;
}

}  // namespace

Homography medoid_homography(std::span<const Homography> hs) {
    if (hs.empty()) throw InvalidArgument("medoid of an empty homography set");
    const std::vector<Homography> members = normalized_members(hs);
    const Metric<Homography> metric = make_homography_metric(MetricKind::HomographyLie);
    return members[medoid(std::span<const Homography>(members), metric)];
}

double lie_distance_sum(const Homography& h, std::span<const Homography> hs) {
    const Metric<Homography> metric = make_homography_metric(MetricKind::HomographyLie);
    double sum = 0.0;
    for (const Homography& m : hs) sum += metric(h, m).value;
    return sum;
}

AverageResult<Homography> lie_mean_homography(std::span<const Homography> hs, const AveragingConfig& cfg) {
    cfg.validate();
    if (hs.empty()) throw InvalidArgument("lie_mean_homography: empty input");
    const std::vector<Homography> members = normalized_members(hs);
    Homography mu = medoid_homography(members);
    AverageResult<Homography> best{mu, 0, false, 0, {}};
    double best_norm = std::numeric_limits<double>::infinity();
    for (int it = 1; it <= cfg.max_iter; ++it) {
        const TangentSample s = tangent_logs(mu.matrix().inverse(), members);
        if (s.logs.empty()) throw LogDomainError("lie_mean_homography: no member has a defined logarithm");
        Mat3 mean = Mat3::Zero();
        for (const Mat3& l : s.logs) mean += l;
        mean /= static_cast<double>(s.logs.size());
        const double norm = mean.norm();
        if (norm < best_norm) {
            best_norm = norm;
            best.value = mu;
            best.iterations = it;
            best.excluded = s.excluded;
        }
        if (norm < cfg.tol) {
            best.converged = true;
            return best;
        }
        mu = to_sl3(mu.matrix() * gl3_exp(mean));
    }
    return best;
}

AverageResult<Homography> lie_median_homography(std::span<const Homography> hs, const AveragingConfig& cfg) {
    cfg.validate();
    if (hs.empty()) throw InvalidArgument("lie_median_homography: empty input");
    const std::vector<Homography> members = normalized_members(hs);
    AverageResult<Homography> r{medoid_homography(members), 0, false, 0, {}};
    double objective = lie_distance_sum(r.value, members);
    r.objective_history.push_back(objective);

    for (int it = 1; it <= cfg.max_iter; ++it) {
        r.iterations = it;
        const TangentSample s = tangent_logs(r.value.matrix().inverse(), members);
        r.excluded = s.excluded;
        if (s.logs.empty()) break;
        Mat3 num = Mat3::Zero();
        double den = 0.0;
        for (const Mat3& l : s.logs) {
            const double w = 1.0 / std::max(l.norm(), 1e-12);
            num += w * l;
            den += w;
        }
        Mat3 step = num / den;
        if (step.norm() < cfg.tol) {
            r.converged = true;
            break;
        }
        bool improved = false;
        for (int halving = 0; halving < 40; ++halving) {
            const Homography next = to_sl3(r.value.matrix() * gl3_exp(step));
            const double f = lie_distance_sum(next, members);
            if (f <= objective) {
                r.value = next;
                objective = f;
                improved = true;
                break;
            }
            step *= 0.5;
        }
        if (!improved) {
            // No descent along the Weiszfeld direction: the current iterate is
            // a fixed point to working precision.
            r.converged = true;
            break;
        }
        r.objective_history.push_back(objective);
    }
    return r;
}

}  // namespace clap
