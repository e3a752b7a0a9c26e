#pragma once

// Pairwise distances between candidate transforms. Pose metrics live on
// SE(3); homography metrics on SL(3) (unit-determinant normalization).

#include "clap/geom.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace clap {

struct TransformError {
    double translation = 0.0;  // scene units
    double rotation = 0.0;     // radians
};

/// Translation and rotation parts of T1^-1 T2, measured separately.
TransformError relative_transform_error(const Pose& t1, const Pose& t2);

/// sqrt(|rho|^2 + lambda^2 |phi|^2) of the error twist log(T1^-1 T2).
double lie_log_distance(const Pose& t1, const Pose& t2, double lambda = 1.0);

/// RMS over P of |T1 p - T2 p|. Throws EmptyPointSet on an empty P.
double point_set_distance(const Pose& t1, const Pose& t2, std::span<const Vec3> points);

/// |log(H1^-1 H2)|_F after unit-determinant normalization of both.
/// Propagates LogDomainError.
double homography_lie_distance(const Homography& h1, const Homography& h2);
double homography_lie_distance(const Mat3& h1, const Mat3& h2);

/// |N(H1) - s N(H2)|_F minimized over s in {+1, -1}, N = unit determinant.
double homography_frobenius_distance(const Homography& h1, const Homography& h2);
double homography_frobenius_distance(const Mat3& h1, const Mat3& h2);

enum class MetricKind { RelativeTransform, LieLog, PointSet, HomographyLie, HomographyFrobenius };

MetricKind parse_metric_kind(std::string_view name);
std::string_view metric_kind_name(MetricKind kind);

/// Metric selection as it appears in configuration files.
struct MetricSpec {
    MetricKind kind = MetricKind::LieLog;
    double lambda = 1.0;
    std::vector<Vec3> points;
};

/// One evaluated distance. fell_back is set when the Lie distance was not
/// defined for the pair and the Frobenius distance was substituted.
struct Distance {
    double value = 0.0;
    bool fell_back = false;
};

template <class T>
using Metric = std::function<Distance(const T&, const T&)>;

/// Scalar metric over poses. The relative-transform metric collapses to
/// e_t + lambda * e_r so it can drive clustering.
Metric<Pose> make_pose_metric(const MetricSpec& spec);

/// Homography metric; the Lie variant falls back to Frobenius per pair when
/// the logarithm does not exist.
Metric<Homography> make_homography_metric(MetricKind kind);

}  // namespace clap
