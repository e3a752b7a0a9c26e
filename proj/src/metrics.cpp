#include "clap/metrics.hpp"

#include "clap/error.hpp"

#include <cmath>

namespace clap {

TransformError relative_transform_error(const Pose& t1, const Pose& t2) {
    const Pose delta = pose_inverse(t1) * t2;
    return {delta.translation.norm(), so3_log(delta.rotation).norm()};
}

double lie_log_distance(const Pose& t1, const Pose& t2, double lambda) {
    const Twist xi = se3_log(pose_inverse(t1) * t2);
    return std::sqrt(xi.rho.squaredNorm() + lambda * lambda * xi.phi.squaredNorm());
}

double point_set_distance(const Pose& t1, const Pose& t2, std::span<const Vec3> points) {
    if (points.empty()) throw EmptyPointSet("point_set_distance: reference point set is empty");
    double sum = 0.0;
    for (const Vec3& p : points) sum += (t1 * p - t2 * p).squaredNorm();
    return std::sqrt(sum / static_cast<double>(points.size()));
}

double homography_lie_distance(const Mat3& h1, const Mat3& h2) {
    const Mat3 a = normalize_homography(h1, HomographyNorm::UnitDeterminant).matrix();
    const Mat3 b = normalize_homography(h2, HomographyNorm::UnitDeterminant).matrix();
    return gl3_log(a.inverse() * b).norm();
}

double homography_lie_distance(const Homography& h1, const Homography& h2) {
    return homography_lie_distance(h1.matrix(), h2.matrix());
}

double homography_frobenius_distance(const Mat3& h1, const Mat3& h2) {
    const Mat3 a = normalize_homography(h1, HomographyNorm::UnitDeterminant).matrix();
    const Mat3 b = normalize_homography(h2, HomographyNorm::UnitDeterminant).matrix();
    return std::min((a - b).norm(), (a + b).norm());
}

double homography_frobenius_distance(const Homography& h1, const Homography& h2) {
    return homography_frobenius_distance(h1.matrix(), h2.matrix());
}

MetricKind parse_metric_kind(std::string_view name) {
    if (name == "rte") return MetricKind::RelativeTransform;
    if (name == "lielog") return MetricKind::LieLog;
    if (name == "pointset") return MetricKind::PointSet;
    if (name == "hlie") return MetricKind::HomographyLie;
    if (name == "hfro") return MetricKind::HomographyFrobenius;
    throw InvalidArgument("unknown metric '" + std::string(name) + "'");
}

std::string_view metric_kind_name(MetricKind kind) {
    switch (kind) {
        case MetricKind::RelativeTransform: return "rte";
        case MetricKind::LieLog: return "lielog";
        case MetricKind::PointSet: return "pointset";
        case MetricKind::HomographyLie: return "hlie";
        case MetricKind::HomographyFrobenius: return "hfro";
    }
    return "?";
}

Metric<Pose> make_pose_metric(const MetricSpec& spec) {
    if (spec.lambda < 0.0) throw InvalidArgument("metric lambda must be >= 0");
    const double lambda = spec.lambda;
    switch (spec.kind) {
        case MetricKind::RelativeTransform:
            return [lambda](const Pose& a, const Pose& b) {
                const TransformError e = relative_transform_error(a, b);
                return Distance{e.translation + lambda * e.rotation};
            };
        case MetricKind::LieLog:
            return [lambda](const Pose& a, const Pose& b) { return Distance{lie_log_distance(a, b, lambda)}; };
        case MetricKind::PointSet: {
            if (spec.points.empty()) throw EmptyPointSet("pointset metric selected without reference points");
            return [points = spec.points](const Pose& a, const Pose& b) {
                return Distance{point_set_distance(a, b, points)};
            };
        }
        default: break;
    }
    throw InvalidArgument("metric '" + std::string(metric_kind_name(spec.kind)) + "' does not apply to poses");
}

Metric<Homography> make_homography_metric(MetricKind kind) {
    switch (kind) {
        case MetricKind::HomographyLie:
            return [](const Homography& a, const Homography& b) {
                try {
                    return Distance{homography_lie_distance(a, b)};
                } catch (const LogDomainError&) {
                    return Distance{homography_frobenius_distance(a, b), true};
                }
            };
        case MetricKind::HomographyFrobenius:
            return [](const Homography& a, const Homography& b) {
                return Distance{homography_frobenius_distance(a, b)};
            };
        default: break;
    }
    throw InvalidArgument("metric '" + std::string(metric_kind_name(kind)) + "' does not apply to homographies");
}

}  // namespace clap
