#include "clap/ransac.hpp"

#include "clap/error.hpp"
#include "clap/simd/kernels.hpp"

#include <algorithm>
#include <limits>
#include <random>

namespace clap {

namespace {

struct MatchColumns {
    std::vector<double> px, py, qx, qy;

    explicit MatchColumns(std::span<const Match2D> m) {
        px.reserve(m.size());
        py.reserve(m.size());
        qx.reserve(m.size());
        qy.reserve(m.size());
        for (const Match2D& x : m) {
            px.push_back(x.p.x());
            py.push_back(x.p.y());
            qx.push_back(x.q.x());
            qy.push_back(x.q.y());
        }
    }
    simd::MatchesView view() const { return {px, py, qx, qy}; }
};

void coeffs(const Mat3& m, double (&out)[9]) {
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) out[3 * r + c] = m(r, c);
}

void sre_into(const Homography& h, const MatchColumns& cols, std::vector<double>& out) {
    double fwd[9];
    double bwd[9];
    coeffs(h.matrix(), fwd);
    coeffs(h.matrix().inverse(), bwd);
    out.resize(cols.px.size());
    simd::symmetric_reprojection(fwd, bwd, cols.view(), out);
}

}  // namespace

SreStats symmetric_reprojection_error(const Homography& h, std::span<const Match2D> matches) {
    SreStats s;
    sre_into(h, MatchColumns(matches), s.per_match);
    double sum = 0.0;
    for (double e : s.per_match) sum += e;
    s.mean = s.per_match.empty() ? 0.0 : sum / static_cast<double>(s.per_match.size());
    return s;
}

std::vector<std::size_t> inliers_of(const Homography& h, std::span<const Match2D> matches, double threshold) {
    const SreStats s = symmetric_reprojection_error(h, matches);
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < s.per_match.size(); ++i)
        if (s.per_match[i] <= threshold) out.push_back(i);
    return out;
}

double mean_sre(const Homography& h, std::span<const Match2D> matches, std::span<const std::size_t> subset) {
    if (subset.empty()) return std::numeric_limits<double>::infinity();
    std::vector<Match2D> sub;
    sub.reserve(subset.size());
    for (std::size_t i : subset) sub.push_back(matches[i]);
    return symmetric_reprojection_error(h, sub).mean;
}

void RansacConfig::validate() const {
    if (iterations < 1) throw InvalidArgument("ransac iterations must be >= 1");
    if (!(inlier_threshold > 0.0)) throw InvalidArgument("ransac inlier threshold must be > 0");
}

RansacResult ransac_homography(std::span<const Match2D> matches, const RansacConfig& cfg) {
    cfg.validate();
    if (matches.size() < 4) throw InvalidArgument("ransac_homography: need at least 4 matches");
    const MatchColumns cols(matches);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_int_distribution<std::size_t> pick(0, matches.size() - 1);

    bool found = false;
    Homography best;
    std::size_t best_count = 0;
    double best_mean = std::numeric_limits<double>::infinity();
    std::vector<double> err;

    for (std::size_t it = 0; it < cfg.iterations; ++it) {
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
        Homography h;
        try {
            h = dlt_homography(subset);
        } catch (const DegenerateConfiguration&) {
            continue;
        }
        sre_into(h, cols, err);
        std::size_t count = 0;
        double sum = 0.0;
        for (double e : err)
            if (e <= cfg.inlier_threshold) {
                ++count;
                sum += e;
            }
        const double mean = count ? sum / static_cast<double>(count) : std::numeric_limits<double>::infinity();
        // Strict comparisons keep the earliest hypothesis on exact ties.
        if (!found || count > best_count || (count == best_count && mean < best_mean)) {
            found = true;
            best = h;
            best_count = count;
            best_mean = mean;
        }
    }
    if (!found) throw NoValidHypothesis("ransac_homography: every sampled subset was degenerate");

    RansacResult result;
    result.iterations_used = cfg.iterations;
    const RefineResult refit = refine_homography(best, matches, cfg.inlier_threshold);
    result.homography = refit.homography;
    result.refined = refit.refined;
    result.inlier_indices = inliers_of(result.homography, matches, cfg.inlier_threshold);
    return result;
}

double inlier_ratio(std::size_t inliers, std::size_t total) {
    if (total < 1) throw InvalidArgument("inlier_ratio: total must be >= 1");
    return static_cast<double>(inliers) / static_cast<double>(total);
}

double inlier_ratio(const RansacResult& result, std::size_t total) {
    return inlier_ratio(result.inlier_indices.size(), total);
}

RefineResult refine_homography(const Homography& h, std::span<const Match2D> matches, double inlier_threshold) {
    const std::vector<std::size_t> in = inliers_of(h, matches, inlier_threshold);
    RefineResult keep{h, false, in.size()};
    if (in.size() < 4) return keep;
    std::vector<Match2D> sub;
    sub.reserve(in.size());
    for (std::size_t i : in) sub.push_back(matches[i]);
    Homography refit;
    try {
        refit = dlt_homography(sub);
    } catch (const DegenerateConfiguration&) {
        return keep;
    }
    const double before = symmetric_reprojection_error(h, sub).mean;
    const double after = symmetric_reprojection_error(refit, sub).mean;
    if (!(after < before)) return keep;
    return {refit, true, in.size()};
}

namespace {

struct PoseScore {
    std::vector<std::pair<std::size_t, std::size_t>> inliers;
    double mean_residual = std::numeric_limits<double>::infinity();
};

PoseScore score_pose(const Pose& t, std::span<const Landmark> obs, const LandmarkMap& map, double threshold) {
    PoseScore s;
    double sum = 0.0;
    for (std::size_t i = 0; i < obs.size(); ++i) {
        const Vec3 p = t * obs[i].position;
        double best = std::numeric_limits<double>::infinity();
        std::size_t arg = 0;
        for (std::size_t j = 0; j < map.landmarks.size(); ++j) {
            if (map.landmarks[j].label != obs[i].label) continue;
            const double d = (map.landmarks[j].position - p).norm();
            if (d < best) {
                best = d;
                arg = j;
            }
        }
        if (best <= threshold) {
            s.inliers.emplace_back(i, arg);
            sum += best;
        }
    }
    if (!s.inliers.empty()) s.mean_residual = sum / static_cast<double>(s.inliers.size());
    return s;
}

}  // namespace

RansacPoseResult ransac_pose(std::span<const Landmark> observations, const LandmarkMap& map,
                             const RansacPoseConfig& cfg) {
    if (observations.size() < 3) throw TooFewObservations("ransac_pose: need at least 3 observations");
    if (cfg.iterations < 1 || !(cfg.inlier_threshold > 0.0)) throw InvalidArgument("ransac_pose: bad config");
    std::mt19937_64 rng(cfg.seed);
    std::uniform_int_distribution<std::size_t> pick_obs(0, observations.size() - 1);

    bool found = false;
    Pose best;
    PoseScore best_score;
    for (std::size_t it = 0; it < cfg.iterations; ++it) {
        std::array<std::size_t, 3> oi{};
        for (std::size_t k = 0; k < 3; ++k) {
            std::size_t v = 0;
            do {
                v = pick_obs(rng);
            } while (std::find(oi.begin(), oi.begin() + static_cast<std::ptrdiff_t>(k), v) !=
                     oi.begin() + static_cast<std::ptrdiff_t>(k));
            oi[k] = v;
        }
        std::array<Vec3, 3> src{};
        std::array<Vec3, 3> dst{};
        std::array<std::size_t, 3> used{};
        bool ok = true;
        for (std::size_t k = 0; k < 3 && ok; ++k) {
            std::vector<std::size_t> options;
            for (std::size_t j = 0; j < map.landmarks.size(); ++j)
                if (map.landmarks[j].label == observations[oi[k]].label &&
                    std::find(used.begin(), used.begin() + static_cast<std::ptrdiff_t>(k), j) ==
                        used.begin() + static_cast<std::ptrdiff_t>(k))
                    options.push_back(j);
            if (options.empty()) {
                ok = false;
                break;
            }
            std::uniform_int_distribution<std::size_t> pick_map(0, options.size() - 1);
            used[k] = options[pick_map(rng)];
            src[k] = observations[oi[k]].position;
            dst[k] = map.landmarks[used[k]].position;
        }
        if (!ok) continue;
        Pose t;
        try {
            t = svd_align(src, dst);
        } catch (const DegenerateConfiguration&) {
            continue;
        }
        PoseScore s = score_pose(t, observations, map, cfg.inlier_threshold);
        if (!found || s.inliers.size() > best_score.inliers.size() ||
            (s.inliers.size() == best_score.inliers.size() && s.mean_residual < best_score.mean_residual)) {
            found = true;
            best = t;
            best_score = std::move(s);
        }
    }
    if (!found) throw NoValidHypothesis("ransac_pose: every sampled hypothesis was degenerate");

    if (best_score.inliers.size() >= 3) {
        std::vector<Vec3> src;
        std::vector<Vec3> dst;
        for (const auto& [o, m] : best_score.inliers) {
            src.push_back(observations[o].position);
            dst.push_back(map.landmarks[m].position);
        }
        try {
            const Pose refit = svd_align(src, dst);
            if (alignment_rms(refit, src, dst) <= alignment_rms(best, src, dst)) best = refit;
        } catch (const DegenerateConfiguration&) {
        }
    }
    RansacPoseResult r;
    r.pose = best;
    r.inliers = score_pose(best, observations, map, cfg.inlier_threshold).inliers;
    r.iterations_used = cfg.iterations;
    return r;
}

}  // namespace clap
