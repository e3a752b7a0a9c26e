#include "clap/stitch.hpp"

#include "clap/error.hpp"
#include "clap/metrics.hpp"
#include "clap/ransac.hpp"
#include "clap/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace clap {

BlendMode parse_blend_mode(std::string_view name) {
    if (name == "noblend" || name == "none") return BlendMode::NoBlend;
    if (name == "overwrite") return BlendMode::Overwrite;
    if (name == "feather") return BlendMode::Feather;
    throw InvalidArgument("unknown blend mode '" + std::string(name) + "'");
}

std::string_view blend_mode_name(BlendMode mode) {
    switch (mode) {
        case BlendMode::NoBlend: return "noblend";
        case BlendMode::Overwrite: return "overwrite";
        case BlendMode::Feather: return "feather";
    }
    return "?";
}

ClusterConfig homography_cluster_config() {
    ClusterConfig c;
    c.metric.kind = MetricKind::HomographyFrobenius;
    return c;
}

void StitchConfig::validate() const {
    if (n_candidates < 4) throw InvalidArgument("stitch: n_candidates must be >= 4");
    if (center != AverageScheme::Medoid && center != AverageScheme::LieMean && center != AverageScheme::LieMedian)
        throw InvalidArgument("stitch: center must be medoid, liemean or liemedian");
    if (cluster.metric.kind != MetricKind::HomographyLie && cluster.metric.kind != MetricKind::HomographyFrobenius)
        throw InvalidArgument("stitch: metric must be hlie or hfro");
    if (refine_rounds < 1) throw InvalidArgument("stitch: refine_rounds must be >= 1");
    if (!(inlier_threshold > 0.0)) throw InvalidArgument("stitch: inlier threshold must be positive");
    cluster.validate();
    center_iterations.validate();
}

namespace {

std::size_t support_within(const Homography& h, std::span<const Match2D> matches, std::span<const std::size_t> pool,
                           double threshold) {
    std::vector<Match2D> sub;
    sub.reserve(pool.size());
    for (std::size_t i : pool) sub.push_back(matches[i]);
    const SreStats s = symmetric_reprojection_error(h, sub);
    return static_cast<std::size_t>(
        std::count_if(s.per_match.begin(), s.per_match.end(), [&](double e) { return e <= threshold; }));
}

}  // namespace

ClapHomography clap_homography(std::span<const Match2D> matches, const StitchConfig& cfg) {
    if (matches.size() < 4) throw InvalidArgument("clap_homography: need at least 4 matches");
    cfg.validate();

    const std::vector<HomographyCandidate> cands = sample_homography_candidates(matches, cfg.n_candidates, cfg.seed);
    Mat3 tp = Mat3::Identity(), tq = Mat3::Identity();
    if (cfg.normalized_frame) {
        std::vector<Vec2> ps, qs;
        for (const Match2D& m : matches) {
            ps.push_back(m.p);
            qs.push_back(m.q);
        }
        tp = hartley_transform(ps);
        tq = hartley_transform(qs);
    }
    const Mat3 tq_inv = tq.inverse();
    std::vector<Homography> hs;
    hs.reserve(cands.size());
    for (const HomographyCandidate& c : cands)
        hs.push_back(normalize_homography(Mat3(tq * c.homography.matrix() * tp.inverse()), HomographyNorm::UnitDeterminant));

    const DistanceMatrix d = pairwise_distances<Homography>(hs, make_homography_metric(cfg.cluster.metric.kind));
    const ClusterResult cr = cluster_candidates(d, cfg.cluster);

    ClapHomography out;
    ClapDiagnostics& diag = out.diagnostics;
    diag.candidate_count = hs.size();
    diag.per_round_counts = cr.per_round_counts;
    diag.survivor_count = cr.survivors.size();
    diag.fallback_pairs = d.fallback_pairs;
    diag.mad_removed = cr.mad_removed;
    {
        std::vector<double> spread;
        for (std::size_t s : cr.survivors) spread.push_back(d(cr.center_index, s));
        std::nth_element(spread.begin(), spread.begin() + static_cast<std::ptrdiff_t>(spread.size() / 2), spread.end());
        diag.survivor_spread = spread[spread.size() / 2];
    }

    std::vector<Homography> members;
    members.reserve(cr.survivors.size());
    for (std::size_t s : cr.survivors) members.push_back(hs[s]);
    AveragingConfig it = cfg.center_iterations;
    it.scheme = cfg.center;
    Homography h = hs[cr.center_index];
    if (cfg.center == AverageScheme::LieMean) {
        const AverageResult<Homography> r = lie_mean_homography(members, it);
        h = r.value;
        diag.center_converged = r.converged;
    } else if (cfg.center == AverageScheme::LieMedian) {
        const AverageResult<Homography> r = lie_median_homography(members, it);
        h = r.value;
        diag.center_converged = r.converged;
    }

    h = normalize_homography(Mat3(tq_inv * h.matrix() * tp), HomographyNorm::UnitLowerRight);
    if (cfg.refine) {
        for (int k = 0; k < cfg.refine_rounds; ++k) {
            const RefineResult r = refine_homography(h, matches, cfg.inlier_threshold);
            if (!r.refined) break;
            h = r.homography;
            diag.refined = true;
            diag.refine_rounds_used = k + 1;
        }
    }
    out.homography = normalize_homography(h, HomographyNorm::UnitLowerRight);

    // Second-structure check over the matches the estimate does not explain.
    const SreStats sre = symmetric_reprojection_error(out.homography, matches);
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < matches.size(); ++i)
        if (sre.per_match[i] <= cfg.inlier_threshold)
            ++diag.primary_support;
        else
            rest.push_back(i);
    if (rest.size() >= 4)
        for (const HomographyCandidate& cand : cands)
            diag.secondary_support =
                std::max(diag.secondary_support, support_within(cand.homography, matches, rest, cfg.inlier_threshold));
    diag.ambiguous = diag.secondary_support >= 8 &&
                     static_cast<double>(diag.secondary_support) >=
                         cfg.ambiguity_ratio * static_cast<double>(diag.primary_support);
    return out;
}

WarpResult warp_image(const Raster& src, const Homography& h, const Bounds& out) {
    src.validate();
    if (out.width < 0 || out.height < 0) throw InvalidArgument("warp_image: negative bounds");
    const Homography back = h.inverse();
    double coeffs[9];
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) coeffs[3 * r + c] = back.matrix()(r, c);

    WarpResult res{Raster(out.width, out.height, src.channels), Mask(out.width, out.height)};
    if (src.width == 0 || src.height == 0) return res;
    const double eps = 1e-6;
    const double xmax = src.width - 1, ymax = src.height - 1;
    const int ch = src.channels;
    std::vector<double> sx(static_cast<std::size_t>(out.width)), sy(static_cast<std::size_t>(out.width));
    for (int j = 0; j < out.height; ++j) {
        simd::map_row(coeffs, out.x0, out.y0 + j, sx, sy);
        for (int i = 0; i < out.width; ++i) {
            const double u = sx[i], v = sy[i];
            if (!(u >= -eps && u <= xmax + eps && v >= -eps && v <= ymax + eps)) continue;
            const double uc = std::clamp(u, 0.0, xmax), vc = std::clamp(v, 0.0, ymax);
            const int xi = std::min(static_cast<int>(uc), std::max(src.width - 2, 0));
            const int yi = std::min(static_cast<int>(vc), std::max(src.height - 2, 0));
            const double fx = uc - xi, fy = vc - yi;
            const int xn = std::min(xi + 1, src.width - 1), yn = std::min(yi + 1, src.height - 1);
            for (int c = 0; c < ch; ++c) {
                const double top = (1.0 - fx) * src.at(xi, yi, c) + fx * src.at(xn, yi, c);
                const double bot = (1.0 - fx) * src.at(xi, yn, c) + fx * src.at(xn, yn, c);
                const double val = (1.0 - fy) * top + fy * bot;
                res.image.at(i, j, c) = static_cast<std::uint8_t>(std::min(255.0, std::floor(val + 0.5)));
            }
            res.mask.at(i, j) = 1;
        }
    }
    return res;
}

namespace {

// Squared distance transform of a sampled function (lower envelope of
// parabolas), in place over f[0..n).
void edt_1d(std::vector<double>& f, std::vector<double>& d, std::vector<int>& v, std::vector<double>& z) {
    const int n = static_cast<int>(f.size());
    const double inf = std::numeric_limits<double>::infinity();
    int k = 0;
    v[0] = 0;
    z[0] = -inf;
    z[1] = inf;
    for (int q = 1; q < n; ++q) {
        auto meet = [&](int p) { return ((f[q] + double(q) * q) - (f[p] + double(p) * p)) / (2.0 * q - 2.0 * p); };
        double s = meet(v[k]);
        while (s <= z[k]) s = meet(v[--k]);
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = inf;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        const double dq = q - v[k];
        d[q] = dq * dq + f[v[k]];
    }
    f = d;
}

}  // namespace

std::vector<double> distance_transform(const Mask& m) {
    // One pixel of unset border on every side stands in for the outside.
    const int w = m.width + 2, h = m.height + 2;
    const double big = 1e20;
    std::vector<double> g(std::size_t(w) * h, 0.0);
    for (int y = 0; y < m.height; ++y)
        for (int x = 0; x < m.width; ++x) g[std::size_t(y + 1) * w + x + 1] = m.at(x, y) ? big : 0.0;

    const int n = std::max(w, h);
    std::vector<double> f, d(n);
    std::vector<int> v(n);
    std::vector<double> z(n + 1);
    f.reserve(n);
    for (int x = 0; x < w; ++x) {
        f.assign(h, 0.0);
        for (int y = 0; y < h; ++y) f[y] = g[std::size_t(y) * w + x];
        d.resize(h);
        edt_1d(f, d, v, z);
        for (int y = 0; y < h; ++y) g[std::size_t(y) * w + x] = f[y];
    }
    for (int y = 0; y < h; ++y) {
        f.assign(g.begin() + std::ptrdiff_t(y) * w, g.begin() + std::ptrdiff_t(y + 1) * w);
        d.resize(w);
        edt_1d(f, d, v, z);
        std::copy(f.begin(), f.end(), g.begin() + std::ptrdiff_t(y) * w);
    }
    std::vector<double> out(std::size_t(m.width) * m.height);
    for (int y = 0; y < m.height; ++y)
        for (int x = 0; x < m.width; ++x) out[std::size_t(y) * m.width + x] = std::sqrt(g[std::size_t(y + 1) * w + x + 1]);
    return out;
}

std::vector<std::uint32_t> blend_weights(const Mask& left, const Mask& right, BlendMode mode) {
    if (left.width != right.width || left.height != right.height)
        throw DimensionMismatch("blend_weights: mask dimensions differ");
    const std::size_t n = left.data.size();
    constexpr std::uint32_t one = 65536;
    std::vector<std::uint32_t> w(n, 0);
    std::vector<double> dl, dr;
    if (mode == BlendMode::Feather) {
        dl = distance_transform(left);
        dr = distance_transform(right);
    }
    for (std::size_t i = 0; i < n; ++i) {
        const bool l = left.data[i] != 0, r = right.data[i] != 0;
        if (!l) continue;
        if (!r || mode == BlendMode::NoBlend) {
            w[i] = one;
        } else if (mode == BlendMode::Feather) {
            w[i] = static_cast<std::uint32_t>(std::llround(65536.0 * dl[i] / (dl[i] + dr[i])));
        }  // Overwrite: warped wins, w = 0
    }
    return w;
}

Raster composite(const Raster& left, const Raster& warped, const Mask& left_mask, const Mask& warped_mask,
                 BlendMode mode) {
    left.validate();
    warped.validate();
    if (left.width != warped.width || left.height != warped.height || left.channels != warped.channels ||
        left_mask.width != left.width || left_mask.height != left.height || warped_mask.width != left.width ||
        warped_mask.height != left.height)
        throw DimensionMismatch("composite: inputs differ in size");
    const std::vector<std::uint32_t> w = blend_weights(left_mask, warped_mask, mode);
    const int ch = left.channels;
    std::vector<std::uint32_t> wc(left.data.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        for (int c = 0; c < ch; ++c) wc[i * ch + c] = w[i];
    Raster out(left.width, left.height, ch);
    simd::blend_q16(left.data, warped.data, wc, out.data);
    for (std::size_t i = 0; i < w.size(); ++i)
        if (!left_mask.data[i] && !warped_mask.data[i])
            for (int c = 0; c < ch; ++c) out.data[i * ch + c] = 0;
    return out;
}

Bounds stitch_canvas(int left_w, int left_h, int right_w, int right_h, const Homography& left_to_right,
                     bool* clamped) {
    if (left_w <= 0 || left_h <= 0) throw InvalidArgument("stitch_canvas: empty left image");
    const Mat3 back = left_to_right.inverse().matrix();
    double minx = 0, miny = 0, maxx = left_w - 1, maxy = left_h - 1;
    bool unbounded = false;
    const double cx[4] = {0, double(right_w - 1), 0, double(right_w - 1)};
    const double cy[4] = {0, 0, double(right_h - 1), double(right_h - 1)};
    for (int k = 0; k < 4 && right_w > 0 && right_h > 0; ++k) {
        const Vec3 p = back * Vec3(cx[k], cy[k], 1.0);
        if (!(p.z() > 1e-12)) {
            unbounded = true;
            continue;
        }
        const double x = p.x() / p.z(), y = p.y() / p.z();
        if (!std::isfinite(x) || !std::isfinite(y)) {
            unbounded = true;
            continue;
        }
        minx = std::min(minx, x);
        maxx = std::max(maxx, x);
        miny = std::min(miny, y);
        maxy = std::max(maxy, y);
    }
    // Clamp box: 8x the left area, centered on the left image.
    const double bw = std::floor(std::sqrt(8.0) * left_w), bh = std::floor(std::sqrt(8.0) * left_h);
    const double bx0 = std::floor((left_w - 1) / 2.0 - (bw - 1) / 2.0);
    const double by0 = std::floor((left_h - 1) / 2.0 - (bh - 1) / 2.0);
    double x0 = std::floor(minx + 1e-6), x1 = std::ceil(maxx - 1e-6);
    double y0 = std::floor(miny + 1e-6), y1 = std::ceil(maxy - 1e-6);
    const double area = (x1 - x0 + 1) * (y1 - y0 + 1);
    const bool clamp = unbounded || area > 8.0 * left_w * left_h;
    if (clamp) {
        x0 = std::max(x0, bx0);
        y0 = std::max(y0, by0);
        x1 = unbounded ? bx0 + bw - 1 : std::min(x1, bx0 + bw - 1);
        y1 = unbounded ? by0 + bh - 1 : std::min(y1, by0 + bh - 1);
        if (unbounded) {
            x0 = bx0;
            y0 = by0;
        }
    }
    if (clamped) *clamped = clamp;
    return {static_cast<int>(x0), static_cast<int>(y0), static_cast<int>(x1 - x0 + 1), static_cast<int>(y1 - y0 + 1)};
}

Raster stitch_with(const Raster& left, const Raster& right, const Homography& left_to_right, BlendMode mode,
                   Bounds* canvas, bool* clamped) {
    left.validate();
    right.validate();
    if (left.channels != right.channels) throw DimensionMismatch("stitch: channel counts differ");
    const Bounds b = stitch_canvas(left.width, left.height, right.width, right.height, left_to_right, clamped);
    if (canvas) *canvas = b;

    Raster base(b.width, b.height, left.channels);
    Mask base_mask(b.width, b.height);
    for (int y = 0; y < left.height; ++y) {
        const int cy = y - b.y0;
        if (cy < 0 || cy >= b.height) continue;
        for (int x = 0; x < left.width; ++x) {
            const int cx = x - b.x0;
            if (cx < 0 || cx >= b.width) continue;
            for (int c = 0; c < left.channels; ++c) base.at(cx, cy, c) = left.at(x, y, c);
            base_mask.at(cx, cy) = 1;
        }
    }
    const WarpResult warped = warp_image(right, left_to_right.inverse(), b);
    return composite(base, warped.image, base_mask, warped.mask, mode);
}

StitchResult stitch(const Raster& left, const Raster& right, std::span<const Match2D> matches,
                    const StitchConfig& cfg) {
    const ClapHomography est = clap_homography(matches, cfg);
    StitchResult res;
    StitchReport& rep = res.report;
    rep.homography = est.homography;
    rep.diagnostics = est.diagnostics;
    res.panorama = stitch_with(left, right, est.homography, cfg.blend, &rep.canvas, &rep.canvas_clamped);

    SreStats sre = symmetric_reprojection_error(est.homography, matches);
    const std::vector<std::size_t> in = inliers_of(est.homography, matches, cfg.inlier_threshold);
    rep.sre_mean = mean_sre(est.homography, matches, in);
    rep.sre_samples = std::move(sre.per_match);
    rep.inlier_ratio = inlier_ratio(in.size(), matches.size());
    return res;
}

}  // namespace clap
