#include "clap/harness.hpp"

#include "clap/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace clap {

void SynthSceneParams::validate() const {
    if (n_landmarks < 3) throw InvalidArgument("synth: need at least 3 landmarks");
    if (label_alphabet.empty()) throw InvalidArgument("synth: empty label alphabet");
    if (!(outlier_fraction >= 0.0 && outlier_fraction < 1.0)) throw InvalidArgument("synth: outlier_fraction in [0,1)");
    if (!(noise_sigma >= 0.0)) throw InvalidArgument("synth: negative noise");
    if (!(scene_extent.minCoeff() > 0.0)) throw InvalidArgument("synth: extent must be positive");
    const auto outliers = static_cast<std::size_t>(std::llround(outlier_fraction * double(n_observed)));
    if (n_observed - outliers > n_landmarks) throw InvalidArgument("synth: more inlier observations than landmarks");
}

SynthScene synth_scene_3d(const SynthSceneParams& p) {
    p.validate();
    std::mt19937_64 rng(p.seed);
    std::uniform_real_distribution<double> unit(-0.5, 0.5);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto in_box = [&] { return Vec3(unit(rng) * p.scene_extent.x(), unit(rng) * p.scene_extent.y(), unit(rng) * p.scene_extent.z()); };

    SynthScene s;
    s.map.labels = p.label_alphabet;
    for (std::size_t i = 0; i < p.n_landmarks; ++i)
        s.map.landmarks.push_back({in_box(), p.label_alphabet[i % p.label_alphabet.size()]});

    Vec3 axis(gauss(rng), gauss(rng), gauss(rng));
    while (axis.norm() < 1e-9) axis = Vec3(gauss(rng), gauss(rng), gauss(rng));
    const double angle = std::uniform_real_distribution<double>(0.0, 3.0)(rng);
    s.gt_pose = Pose{so3_exp(axis.normalized() * angle), in_box()};
    const Pose world_to_robot = pose_inverse(s.gt_pose);

    s.outlier_count = static_cast<std::size_t>(std::llround(p.outlier_fraction * double(p.n_observed)));
    const std::size_t inliers = p.n_observed - s.outlier_count;
    std::vector<std::size_t> order(p.n_landmarks);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<std::pair<Landmark, bool>> obs;
    for (std::size_t k = 0; k < inliers; ++k) {
        const Landmark& l = s.map.landmarks[order[k]];
        const Vec3 noise(gauss(rng), gauss(rng), gauss(rng));
        obs.push_back({{world_to_robot * l.position + p.noise_sigma * noise, l.label}, false});
    }
    std::uniform_int_distribution<std::size_t> pick_label(0, p.label_alphabet.size() - 1);
    for (std::size_t k = 0; k < s.outlier_count; ++k) {
        const Vec3 x = in_box();
        obs.push_back({{world_to_robot * x, p.label_alphabet[pick_label(rng)]}, true});
    }
    std::shuffle(obs.begin(), obs.end(), rng);
    for (auto& [l, outlier] : obs) {
        s.observations.push_back(l);
        s.is_outlier.push_back(outlier);
    }
    return s;
}

void SynthMatchParams::validate() const {
    if (!(outlier_fraction >= 0.0 && outlier_fraction < 1.0)) throw InvalidArgument("synth: outlier_fraction in [0,1)");
    if (!(noise_sigma >= 0.0)) throw InvalidArgument("synth: negative noise");
    if (width < 2 || height < 2) throw InvalidArgument("synth: image must be at least 2x2");
    if (!(gt_homography_spread >= 0.0)) throw InvalidArgument("synth: negative spread");
}

Homography synth_homography(int width, int height, double spread, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Mat3 g;
    g(0, 0) = spread * u(rng);
    g(0, 1) = spread * u(rng);
    g(0, 2) = spread * u(rng);
    g(1, 0) = spread * u(rng);
    g(1, 1) = spread * u(rng);
    g(1, 2) = spread * u(rng);
    g(2, 0) = spread * u(rng);
    g(2, 1) = spread * u(rng);
    g(2, 2) = -g(0, 0) - g(1, 1);
    const double s = 2.0 / std::max(width, height);
    const double cx = (width - 1) / 2.0, cy = (height - 1) / 2.0;
    Mat3 n;
    n << s, 0, -s * cx, 0, s, -s * cy, 0, 0, 1;
    Mat3 n_inv;
    n_inv << 1 / s, 0, cx, 0, 1 / s, cy, 0, 0, 1;
    return normalize_homography(Mat3(n_inv * gl3_exp(g) * n), HomographyNorm::UnitLowerRight);
}

SynthMatches synth_matches_2d(const SynthMatchParams& p) {
    p.validate();
    SynthMatches out;
    out.gt = synth_homography(p.width, p.height, p.gt_homography_spread, p.seed);
    std::mt19937_64 rng(p.seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> ux(0.0, p.width - 1.0), uy(0.0, p.height - 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto inside = [&](const Vec2& v) { return v.x() >= 0 && v.x() <= p.width - 1 && v.y() >= 0 && v.y() <= p.height - 1; };

    out.outlier_count = static_cast<std::size_t>(std::llround(p.outlier_fraction * double(p.n_matches)));
    const std::size_t inliers = p.n_matches - out.outlier_count;
    std::vector<std::pair<Match2D, bool>> ms;
    for (std::size_t k = 0; k < inliers; ++k) {
        bool placed = false;
        for (int attempt = 0; attempt < 1000 && !placed; ++attempt) {
            const Vec2 a(ux(rng), uy(rng));
            const Vec3 h = out.gt.matrix() * Vec3(a.x(), a.y(), 1.0);
            if (!(h.z() > 1e-12)) continue;
            const Vec2 b = Vec2(h.x() / h.z(), h.y() / h.z()) + p.noise_sigma * Vec2(gauss(rng), gauss(rng));
            if (!inside(b)) continue;
            ms.push_back({{a, b}, false});
            placed = true;
        }
        if (!placed) throw InvalidArgument("synth: ground truth maps too little of the image in-bounds");
    }
    for (std::size_t k = 0; k < out.outlier_count; ++k) {
        const Vec2 a(ux(rng), uy(rng));
        const Vec2 b(ux(rng), uy(rng));
        ms.push_back({{a, b}, true});
    }
    std::shuffle(ms.begin(), ms.end(), rng);
    for (auto& [m, outlier] : ms) {
        out.matches.push_back(m);
        out.is_outlier.push_back(outlier);
    }
    return out;
}

double lie_distance_to_gt(const Homography& h, const Homography& gt) {
    const Mat3 a = normalize_homography(h, HomographyNorm::UnitLowerRight).matrix();
    const Mat3 g = normalize_homography(gt, HomographyNorm::UnitLowerRight).matrix();
    try {
        return gl3_log(Mat3(g.inverse() * a)).norm();
    } catch (const LogDomainError&) {
        return std::numeric_limits<double>::infinity();
    }
}

Raster render_texture(int width, int height, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> period(24.0, 80.0), phase(0.0, 6.283185307179586), dir(-1.0, 1.0);
    struct Wave {
        double kx, ky, ph;
    };
    std::array<std::array<Wave, 3>, 3> waves{};
    for (auto& ch : waves)
        for (Wave& w : ch) {
            const double t = 6.283185307179586 / period(rng);
            Vec2 d(dir(rng), dir(rng));
            if (d.norm() < 1e-3) d = Vec2(1, 0);
            d.normalize();
            w = {t * d.x(), t * d.y(), phase(rng)};
        }
    Raster r(width, height, 3);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            for (int c = 0; c < 3; ++c) {
                double v = 128.0;
                for (const Wave& w : waves[c]) v += 40.0 * std::sin(w.kx * x + w.ky * y + w.ph);
                r.at(x, y, c) = static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
            }
    return r;
}

}  // namespace clap
