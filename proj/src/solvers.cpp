#include "clap/solvers.hpp"

#include "clap/error.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <tuple>

namespace clap {

void LandmarkMap::validate() const {
    if (landmarks.size() < 3) throw InvalidArgument("landmark map needs at least 3 landmarks");
    for (std::size_t i = 0; i < landmarks.size(); ++i) {
        const Landmark& l = landmarks[i];
        if (!l.position.allFinite()) throw InvalidArgument("landmark map: non-finite coordinates");
        if (std::find(labels.begin(), labels.end(), l.label) == labels.end())
            throw InvalidArgument("landmark map: label '" + l.label + "' not in alphabet");
        for (std::size_t j = 0; j < i; ++j)
            if ((landmarks[j].position - l.position).norm() < 1e-9)
                throw InvalidArgument("landmark map: duplicate landmark positions");
    }
}

Pose svd_align(std::span<const Vec3> src, std::span<const Vec3> dst) {
    if (src.size() != dst.size()) throw InvalidArgument("svd_align: point count mismatch");
    if (src.size() < 3) throw InvalidArgument("svd_align: need at least 3 points");
    const double n = static_cast<double>(src.size());
    Vec3 cs = Vec3::Zero();
    Vec3 cd = Vec3::Zero();
    for (std::size_t i = 0; i < src.size(); ++i) {
        cs += src[i];
        cd += dst[i];
    }
    cs /= n;
    cd /= n;
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (std::size_t i = 0; i < src.size(); ++i) cov += (src[i] - cs) * (dst[i] - cd).transpose();

    const Eigen::JacobiSVD<Eigen::Matrix3d> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vec3 sv = svd.singularValues();
    if (!(sv[1] > 1e-9 * sv[0]) || !(sv[0] > 0.0))
        throw DegenerateConfiguration("svd_align: collinear or coincident points");
    const Eigen::Matrix3d& u = svd.matrixU();
    const Eigen::Matrix3d& v = svd.matrixV();
    Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
    d(2, 2) = (v * u.transpose()).determinant() < 0.0 ? -1.0 : 1.0;
    const Mat3 r = v * d * u.transpose();
    return {Rotation::from_matrix_unchecked(r), cd - r * cs};
}

double alignment_rms(const Pose& t, std::span<const Vec3> src, std::span<const Vec3> dst) {
    double sum = 0.0;
    for (std::size_t i = 0; i < src.size(); ++i) sum += (t * src[i] - dst[i]).squaredNorm();
    return std::sqrt(sum / static_cast<double>(src.size()));
}

namespace {

using LabelIndex = std::map<std::string, std::vector<std::size_t>>;

LabelIndex index_by_label(const LandmarkMap& map) {
    LabelIndex idx;
    for (std::size_t i = 0; i < map.landmarks.size(); ++i) idx[map.landmarks[i].label].push_back(i);
    return idx;
}

std::size_t label_count(const LabelIndex& idx, const std::string& label) {
    const auto it = idx.find(label);
    return it == idx.end() ? 0 : it->second.size();
}

std::size_t count_assignments(const LabelIndex& idx, const std::array<std::string, 3>& labels) {
    const std::size_t a = label_count(idx, labels[0]);
    const std::size_t b = label_count(idx, labels[1]);
    const std::size_t c = label_count(idx, labels[2]);
    const bool ab = labels[0] == labels[1];
    const bool ac = labels[0] == labels[2];
    const bool bc = labels[1] == labels[2];
    auto minus = [](std::size_t x, std::size_t k) { return x > k ? x - k : 0; };
    if (ab && bc) return a * minus(a, 1) * minus(a, 2);
    if (ab) return a * minus(a, 1) * c;
    if (ac) return a * b * minus(a, 1);
    if (bc) return a * b * minus(b, 1);
    return a * b * c;
}

bool collinear(const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 u = b - a;
    const Vec3 w = c - a;
    return !(u.cross(w).norm() > 1e-9 * u.norm() * w.norm());
}

}  // namespace

std::size_t count_label_assignments(const LandmarkMap& map, const std::array<std::string, 3>& labels) {
    return count_assignments(index_by_label(map), labels);
}

std::vector<PoseCandidate> enumerate_pose_candidates(std::span<const Landmark> observations, const LandmarkMap& map,
                                                     const CandidateOptions& options) {
    if (observations.size() < 3) throw TooFewObservations("need at least 3 observations");
    const LabelIndex by_label = index_by_label(map);

    // Canonical order: (label, x, y, z).
    std::vector<std::size_t> order(observations.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        const Landmark& a = observations[i];
        const Landmark& b = observations[j];
        return std::tie(a.label, a.position.x(), a.position.y(), a.position.z(), i) <
               std::tie(b.label, b.position.x(), b.position.y(), b.position.z(), j);
    });

    struct Triplet {
        std::array<std::size_t, 3> obs;  // original indices, canonical order
        std::size_t count;
    };
    std::vector<Triplet> triplets;
    std::size_t total = 0;
    const std::size_t n = order.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) {
                const std::array<std::size_t, 3> t{order[i], order[j], order[k]};
                if (collinear(observations[t[0]].position, observations[t[1]].position, observations[t[2]].position))
                    continue;
                const std::size_t c = count_assignments(
                    by_label, {observations[t[0]].label, observations[t[1]].label, observations[t[2]].label});
                if (c == 0) continue;
                triplets.push_back({t, c});
                total += c;
            }

    if (total > options.max_candidates) {
        std::vector<std::size_t> pick(triplets.size());
        std::iota(pick.begin(), pick.end(), 0);
        std::mt19937_64 rng(options.seed);
        std::shuffle(pick.begin(), pick.end(), rng);
        std::vector<std::size_t> kept;
        std::size_t budget = 0;
        for (std::size_t p : pick) {
            if (budget + triplets[p].count > options.max_candidates) continue;
            budget += triplets[p].count;
            kept.push_back(p);
        }
        std::sort(kept.begin(), kept.end());
        std::vector<Triplet> sub;
        sub.reserve(kept.size());
        for (std::size_t p : kept) sub.push_back(triplets[p]);
        triplets = std::move(sub);
    }

    // Any pairwise-distance mismatch above sqrt(6) * max_residual forces the
    // triplet RMS above max_residual, so those assignments can be skipped
    // before solving.
    const double prune = std::sqrt(6.0) * options.max_residual;

    std::vector<PoseCandidate> out;
    for (const Triplet& t : triplets) {
        const std::array<Vec3, 3> src{observations[t.obs[0]].position, observations[t.obs[1]].position,
                                      observations[t.obs[2]].position};
        const double d01 = (src[0] - src[1]).norm();
        const double d02 = (src[0] - src[2]).norm();
        const double d12 = (src[1] - src[2]).norm();
        const auto& ga = by_label.at(observations[t.obs[0]].label);
        const auto& gb = by_label.at(observations[t.obs[1]].label);
        const auto& gc = by_label.at(observations[t.obs[2]].label);
        for (std::size_t a : ga)
            for (std::size_t b : gb) {
                if (b == a) continue;
                const Vec3& ma = map.landmarks[a].position;
                const Vec3& mb = map.landmarks[b].position;
                if (std::abs((ma - mb).norm() - d01) > prune) continue;
                for (std::size_t c : gc) {
                    if (c == a || c == b) continue;
                    const Vec3& mc = map.landmarks[c].position;
                    if (std::abs((ma - mc).norm() - d02) > prune || std::abs((mb - mc).norm() - d12) > prune) continue;
                    const std::array<Vec3, 3> dst{ma, mb, mc};
                    Pose pose;
                    try {
                        pose = svd_align(src, dst);
                    } catch (const DegenerateConfiguration&) {
                        continue;
                    }
                    const double rms = alignment_rms(pose, src, dst);
                    if (!(rms <= options.max_residual)) continue;
                    out.push_back({pose, t.obs, {a, b, c}, rms});
                }
            }
    }
    return out;
}

Mat3 hartley_transform(std::span<const Vec2> pts) {
    Vec2 c = Vec2::Zero();
    for (const Vec2& p : pts) c += p;
    c /= static_cast<double>(pts.size());
    double mean = 0.0;
    for (const Vec2& p : pts) mean += (p - c).norm();
    mean /= static_cast<double>(pts.size());
    if (!(mean > 0.0)) throw DegenerateConfiguration("dlt_homography: coincident points");
    const double s = std::sqrt(2.0) / mean;
    Mat3 t;
    t << s, 0.0, -s * c.x(),
         0.0, s, -s * c.y(),
         0.0, 0.0, 1.0;
    return t;
}

Homography dlt_homography(std::span<const Match2D> matches) {
    if (matches.size() < 4) throw InvalidArgument("dlt_homography: need at least 4 matches");
    std::vector<Vec2> ps;
    std::vector<Vec2> qs;
    ps.reserve(matches.size());
    qs.reserve(matches.size());
    for (const Match2D& m : matches) {
        if (!m.p.allFinite() || !m.q.allFinite()) throw InvalidArgument("dlt_homography: non-finite match");
        ps.push_back(m.p);
        qs.push_back(m.q);
    }
    const Mat3 tp = hartley_transform(ps);
    const Mat3 tq = hartley_transform(qs);

    const Eigen::Index rows = std::max<Eigen::Index>(2 * static_cast<Eigen::Index>(matches.size()), 9);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows, 9);
    for (std::size_t i = 0; i < matches.size(); ++i) {
        const Vec3 p = tp * Vec3(ps[i].x(), ps[i].y(), 1.0);
        const Vec3 q = tq * Vec3(qs[i].x(), qs[i].y(), 1.0);
        const Eigen::Index r = 2 * static_cast<Eigen::Index>(i);
        // q x (H p) = 0, two independent rows.
        a.row(r) << 0.0, 0.0, 0.0, -q.z() * p.x(), -q.z() * p.y(), -q.z() * p.z(), q.y() * p.x(), q.y() * p.y(),
            q.y() * p.z();
        a.row(r + 1) << q.z() * p.x(), q.z() * p.y(), q.z() * p.z(), 0.0, 0.0, 0.0, -q.x() * p.x(), -q.x() * p.y(),
            -q.x() * p.z();
    }
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
    const Eigen::VectorXd& sv = svd.singularValues();
    if (!(sv[7] > 1e-9 * sv[0])) throw DegenerateConfiguration("dlt_homography: solution is not unique");
    const Eigen::VectorXd h = svd.matrixV().col(8);
    Mat3 hn;
    hn << h[0], h[1], h[2], h[3], h[4], h[5], h[6], h[7], h[8];
    const Mat3 full = tq.inverse() * hn * tp;
    try {
        return normalize_homography(full, HomographyNorm::UnitLowerRight);
    } catch (const DegenerateHomography& e) {
        throw DegenerateConfiguration(std::string("dlt_homography: ") + e.what());
    }
}

std::vector<HomographyCandidate> sample_homography_candidates(std::span<const Match2D> matches, std::size_t n,
                                                              std::uint64_t seed) {
    if (matches.size() < 4) throw InvalidArgument("sample_homography_candidates: need at least 4 matches");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, matches.size() - 1);
    std::vector<HomographyCandidate> out;
    out.reserve(n);
    const std::size_t max_attempts = 20 * n;
    for (std::size_t attempt = 0; attempt < max_attempts && out.size() < n; ++attempt) {
        std::array<std::size_t, 4> idx{};
        for (std::size_t k = 0; k < 4; ++k) {
            std::size_t v = 0;
            do {
                v = pick(rng);
            } while (std::find(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), v) !=
                     idx.begin() + static_cast<std::ptrdiff_t>(k));
            idx[k] = v;
        }
        const std::array<Match2D, 4> subset{matches[idx[0]], matches[idx[1]], matches[idx[2]], matches[idx[3]]};
        try {
            out.push_back({dlt_homography(subset), idx});
        } catch (const DegenerateConfiguration&) {
        }
    }
    const std::size_t required = std::min(n, std::max<std::size_t>(10, n / 10));
    if (out.size() < required)
        throw InsufficientValidCandidates("only " + std::to_string(out.size()) + " valid homography candidates");
    return out;
}

}  // namespace clap
