// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
// failure. Tolerances and budgets are fixed here.

#include "clap/averaging.hpp"
#include "clap/clustering.hpp"
#include "clap/error.hpp"
#include "clap/harness.hpp"
#include "clap/io.hpp"
#include "clap/localize3d.hpp"
#include "clap/metrics.hpp"
#include "clap/ransac.hpp"
#include "clap/solvers.hpp"
#include "clap/stitch.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace clap;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Collects failed sub-checks for one criterion.
struct Checks {
    std::vector<std::string> failures;
    void expect(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

// Nearest-rank quantile.
double quantile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const auto k = static_cast<std::size_t>(std::ceil(q * double(v.size())));
    return v[std::max<std::size_t>(k, 1) - 1];
}

Mat3 random_sl3(std::mt19937_64& rng, double scale) {
    Mat3 g = oracle::random_mat(rng, scale);
    g -= (g.trace() / 3.0) * Mat3::Identity();
    return gl3_exp(g);
}

// ---------------------------------------------------------------------------

std::string lie_groups(Checks& c) {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(101);
    double se3_worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const Twist xi{oracle::random_vec(rng, 5.0), oracle::random_vec(rng, 3.0)};
        se3_worst = std::max(se3_worst, (se3_log(se3_exp(xi)).vector() - xi.vector()).norm());
    }
    double gl3_worst = 0.0;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        Mat3 a = oracle::random_mat(rng, 1.0);
        a *= 2.0 * u(rng) / a.norm();
        gl3_worst = std::max(gl3_worst, (gl3_log(gl3_exp(a)) - a).norm());
    }
    const double secs = seconds_since(t0);
    c.expect(se3_worst < 1e-8, "se3 roundtrip " + fmt("%.3g", se3_worst));
    c.expect(gl3_worst < 1e-8, "gl3 roundtrip " + fmt("%.3g", gl3_worst));
    c.expect(secs < 5.0, "runtime " + fmt("%.2fs", secs));
    return "se3 worst " + fmt("%.2e", se3_worst) + ", gl3 worst " + fmt("%.2e", gl3_worst) + ", " +
           fmt("%.2fs", secs);
}

std::string solvers(Checks& c) {
    std::mt19937_64 rng(202);
    double pose_worst = 0.0, det_worst = 0.0;
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int s = 0; s < 100; ++s) {
        const Pose gt = oracle::random_pose(rng, 3.0, 5.0);
        std::vector<Vec3> src, dst, mirrored;
        for (int i = 0; i < 3 + s % 10; ++i) {
            src.emplace_back(u(rng), u(rng), u(rng));
            dst.push_back(gt * src.back());
            mirrored.push_back(Vec3(-dst.back().x(), dst.back().y(), dst.back().z()));
        }
        const Pose t = svd_align(src, dst);
        pose_worst = std::max(pose_worst, (t.matrix() - gt.matrix()).norm());
        det_worst = std::max(det_worst, std::abs(t.rotation.matrix().determinant() - 1.0));
        // a reflected target must still come back as a proper rotation
        det_worst = std::max(det_worst, std::abs(svd_align(src, mirrored).rotation.matrix().determinant() - 1.0));
    }
    double dlt_worst = 0.0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        SynthMatchParams p;
        p.noise_sigma = 0.0;
        p.n_matches = 4 + s % 30;
        p.seed = s;
        const SynthMatches sm = synth_matches_2d(p);
        dlt_worst = std::max(dlt_worst, lie_distance_to_gt(dlt_homography(sm.matches), sm.gt));
    }
    c.expect(pose_worst < 1e-9, "svd_align " + fmt("%.3g", pose_worst));
    c.expect(dlt_worst < 1e-8, "dlt " + fmt("%.3g", dlt_worst));
    c.expect(det_worst < 1e-12, "det(R) deviation " + fmt("%.3g", det_worst));
    return "svd_align worst " + fmt("%.2e", pose_worst) + ", dlt worst " + fmt("%.2e", dlt_worst) +
           ", |det R - 1| worst " + fmt("%.1e", det_worst);
}

std::string oracles(Checks& c) {
    std::mt19937_64 rng(303);
    std::uniform_int_distribution<int> size(2, 200);
    int agree = 0;
    for (int t = 0; t < 50; ++t) {
        const int n = size(rng);
        std::vector<Vec3> pts;
        for (int i = 0; i < n; ++i) pts.push_back(oracle::random_vec(rng, 10.0));
        DistanceMatrix d(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j) d.set(i, j, (pts[i] - pts[j]).norm());
        std::size_t best = 0;
        double best_sum = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < pts.size(); ++i) {
            double sum = 0.0;
            for (std::size_t j = 0; j < pts.size(); ++j) sum += (pts[i] - pts[j]).norm();
            if (sum < best_sum) best_sum = sum, best = i;
        }
        agree += medoid(d) == best ? 1 : 0;
    }
    c.expect(agree == 50, "medoid agreed on " + std::to_string(agree) + "/50");

    std::vector<Vec3> pts;
    for (int i = 0; i < 400; ++i) pts.push_back(oracle::random_vec(rng, 1.0));
    DistanceMatrix d(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) d.set(i, j, (pts[i] - pts[j]).norm());
    ClusterConfig cc = homography_cluster_config();
    cc.mad_k = 0.0;
    const auto seq = trim_iterate(d, cc).per_round_counts;
    const std::vector<std::size_t> want{400, 320, 256, 205, 164, 132};
    c.expect(seq == want, "trim sequence differs");

    const StitchConfig sc;
    const RansacConfig rc;
    c.expect(sc.n_candidates == 400 && sc.cluster.rounds == 5 && sc.cluster.trim_fraction == 0.2 &&
                 rc.iterations == 1000,
             "default budgets differ from 400/5/20%/1000");
    std::string s;
    for (std::size_t k : seq) s += (s.empty() ? "" : "/") + std::to_string(k);
    return "medoid " + std::to_string(agree) + "/50, trim " + s + ", budgets " + std::to_string(sc.n_candidates) +
           "/" + std::to_string(sc.cluster.rounds) + "/" + fmt("%.0f%%", 100 * sc.cluster.trim_fraction) + "/" +
           std::to_string(rc.iterations);
}

std::string robustness_3d(Checks& c) {
    const auto t0 = Clock::now();
    int good = 0;
    for (std::uint64_t s = 0; s < 200; ++s) {
        SynthSceneParams p;
        p.outlier_fraction = 0.55;
        p.seed = s;
        const SynthScene scene = synth_scene_3d(p);
        LocalizeConfig cfg;
        cfg.cluster.mode = ClusterMode::Global;
        cfg.seed = s;
        try {
            const PoseEstimate e = localize3d(scene.observations, scene.map, cfg);
            const TransformError err = relative_transform_error(e.pose, scene.gt_pose);
            if (err.translation < 0.05 * p.scene_extent.norm() && err.rotation < 0.1) ++good;
        } catch (const Error&) {
        }
    }
    const double secs = seconds_since(t0);
    c.expect(good >= 190, "only " + std::to_string(good) + "/200 within tolerance");
    c.expect(secs < 120.0, "runtime " + fmt("%.1fs", secs));
    return std::to_string(good) + "/200 trials within tolerance at 55% outliers, " + fmt("%.1fs", secs);
}

std::string head_to_head(Checks& c) {
    const auto t0 = Clock::now();
    BenchSpec spec;
    spec.seeds.clear();
    for (std::uint64_t s = 0; s < 100; ++s) spec.seeds.push_back(s);
    for (double f : {0.6, 0.2, 0.1, 0.0}) {
        BenchScene sc;
        sc.id = fmt("out%.0f", 100 * f);
        sc.params.outlier_fraction = f;
        sc.params.seed = 1;
        spec.scenes.push_back(sc);
    }
    const std::vector<EvalRecord> recs = run_bench(spec);
    std::map<std::pair<std::string, std::string>, std::vector<double>> dist, sre;
    std::size_t failed = 0;
    for (const EvalRecord& r : recs) {
        if (!r.ok) {
            ++failed;
            continue;
        }
        dist[{r.scene_id, r.method}].push_back(*r.lie_distance_to_gt);
        sre[{r.scene_id, r.method}].push_back(r.sre_mean);
    }
    const double secs = seconds_since(t0);
    c.expect(failed == 0, std::to_string(failed) + " cells failed");
    std::string out;
    const auto& dc = dist[{"out60", "clap"}];
    const auto& dr = dist[{"out60", "ransac"}];
    if (dc.size() == 100 && dr.size() == 100) {
        const double pc = quantile(dc, 0.9), pr = quantile(dr, 0.9);
        c.expect(pc <= pr, "p90 at 60%: clap " + fmt("%.4f", pc) + " > ransac " + fmt("%.4f", pr));
        out += "60%: p90 clap " + fmt("%.3f", pc) + " vs ransac " + fmt("%.3f", pr);
    }
    for (const char* id : {"out20", "out10", "out0"}) {
        const auto& a = sre[{id, "clap"}];
        const auto& b = sre[{id, "ransac"}];
        if (a.empty() || b.empty()) continue;
        const double ma = quantile(a, 0.5), mb = quantile(b, 0.5);
        c.expect(std::abs(ma - mb) <= 0.5, std::string(id) + " median SRE differs by " + fmt("%.3f", ma - mb));
        out += std::string("; ") + (id + 3) + "%: median SRE " + fmt("%.3f", ma) + " vs " + fmt("%.3f", mb);
    }
    c.expect(secs < 300.0, "runtime " + fmt("%.1fs", secs));
    return out + "; " + fmt("%.1fs", secs);
}

std::string averaging(Checks& c) {
    std::mt19937_64 rng(606);
    double idem = 0.0;
    for (int t = 0; t < 50; ++t) {
        const Pose p = oracle::random_pose(rng, 2.5);
        const std::vector<Pose> same(5, p);
        for (AverageScheme s :
             {AverageScheme::Karcher, AverageScheme::LogEuclidean, AverageScheme::Split, AverageScheme::Medoid}) {
            AveragingConfig cfg;
            cfg.scheme = s;
            idem = std::max(idem, lie_log_distance(average_poses(same, cfg).value, p));
        }
        const Homography h = normalize_homography(random_sl3(rng, 0.3), HomographyNorm::UnitDeterminant);
        const std::vector<Homography> hs(5, h);
        idem = std::max(idem, homography_lie_distance(lie_mean_homography(hs).value, h));
        idem = std::max(idem, homography_lie_distance(lie_median_homography(hs).value, h));
        idem = std::max(idem, homography_lie_distance(medoid_homography(hs), h));
    }
    c.expect(idem < 1e-10, "idempotence " + fmt("%.3g", idem));

    double mid = 0.0;
    for (int t = 0; t < 50; ++t) {
        const Pose a = oracle::random_pose(rng);
        const Twist xi{oracle::random_vec(rng, 2.0), oracle::random_vec(rng, 2.0)};
        const Pose want = a * se3_exp(Twist{0.5 * xi.rho, 0.5 * xi.phi});
        mid = std::max(mid, lie_log_distance(karcher_mean_se3(std::vector<Pose>{a, a * se3_exp(xi)}).value, want));
    }
    c.expect(mid < 1e-8, "midpoint " + fmt("%.3g", mid));

    int monotone = 0, runs = 0;
    for (int t = 0; t < 50; ++t) {
        const Mat3 center = random_sl3(rng, 0.3);
        std::vector<Homography> hs;
        for (int i = 0; i < 15; ++i)
            hs.push_back(normalize_homography(Mat3(center * random_sl3(rng, 0.05)), HomographyNorm::UnitDeterminant));
        for (int i = 0; i < 10; ++i)
            hs.push_back(normalize_homography(random_sl3(rng, 0.5), HomographyNorm::UnitDeterminant));
        const auto r = lie_median_homography(hs);
        bool ok = !r.objective_history.empty();
        for (std::size_t i = 1; i < r.objective_history.size(); ++i)
            ok &= r.objective_history[i] <= r.objective_history[i - 1];
        monotone += ok ? 1 : 0;
        ++runs;
    }
    c.expect(monotone == runs, "Weiszfeld monotone in " + std::to_string(monotone) + "/" + std::to_string(runs));

    double agree = 0.0;
    for (int t = 0; t < 50; ++t) {
        const Pose center = oracle::random_pose(rng);
        std::vector<Pose> poses;
        for (int i = 0; i < 30; ++i)
            poses.push_back(center * se3_exp(Twist{oracle::random_vec(rng, 0.05), oracle::random_vec(rng, 0.05)}));
        const Pose k = karcher_mean_se3(poses).value;
        agree = std::max(agree, lie_log_distance(k, split_mean_se3(poses)));
        agree = std::max(agree, lie_log_distance(k, log_euclidean_mean_se3(poses)));
    }
    c.expect(agree < 1e-3, "scheme agreement " + fmt("%.3g", agree));
    return "idempotence " + fmt("%.1e", idem) + ", midpoint " + fmt("%.1e", mid) + ", Weiszfeld monotone " +
           std::to_string(monotone) + "/" + std::to_string(runs) + ", mean-scheme spread " + fmt("%.1e", agree);
}

std::string metric_axioms(Checks& c) {
    std::mt19937_64 rng(707);
    std::vector<Vec3> points;
    for (int i = 0; i < 6; ++i) points.push_back(oracle::random_vec(rng, 5.0));
    std::vector<std::pair<std::string, Metric<Pose>>> pose_metrics;
    for (MetricKind k : {MetricKind::RelativeTransform, MetricKind::LieLog, MetricKind::PointSet}) {
        MetricSpec s;
        s.kind = k;
        s.lambda = 1.5;
        s.points = points;
        pose_metrics.emplace_back(std::string(metric_kind_name(k)), make_pose_metric(s));
    }
    double neg = 0.0, asym = 0.0, left = 0.0, scale = 0.0, self = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const Pose a = oracle::random_pose(rng), b = oracle::random_pose(rng), g = oracle::random_pose(rng);
        for (const auto& [name, m] : pose_metrics) {
            const double ab = m(a, b).value, ba = m(b, a).value;
            neg = std::min(neg, ab);
            asym = std::max(asym, std::abs(ab - ba));
            self = std::max(self, m(a, a).value);
        }
        left = std::max(left, std::abs(lie_log_distance(g * a, g * b) - lie_log_distance(a, b)));
    }
    for (MetricKind k : {MetricKind::HomographyLie, MetricKind::HomographyFrobenius}) {
        const Metric<Homography> m = make_homography_metric(k);
        for (int i = 0; i < 1000; ++i) {
            const Mat3 a = random_sl3(rng, 0.3), b = random_sl3(rng, 0.3);
            const auto ha = normalize_homography(a, HomographyNorm::UnitDeterminant);
            const auto hb = normalize_homography(b, HomographyNorm::UnitDeterminant);
            std::uniform_real_distribution<double> u(0.1, 10.0);
            const double s = (i % 2 ? -1.0 : 1.0) * u(rng);
            const auto hs = normalize_homography(Mat3(s * a), HomographyNorm::UnitLowerRight);
            const double ab = m(ha, hb).value, ba = m(hb, ha).value;
            neg = std::min(neg, ab);
            asym = std::max(asym, std::abs(ab - ba));
            scale = std::max(scale, std::abs(m(hs, hb).value - ab));
        }
    }
    c.expect(neg >= 0.0, "negative distance");
    c.expect(self < 1e-10, "d(a, a) " + fmt("%.3g", self));
    c.expect(asym < 1e-10, "asymmetry " + fmt("%.3g", asym));
    c.expect(left < 1e-9, "left invariance " + fmt("%.3g", left));
    c.expect(scale < 1e-10, "scale invariance " + fmt("%.3g", scale));
    return "asymmetry " + fmt("%.1e", asym) + ", left-invariance " + fmt("%.1e", left) + ", scale " +
           fmt("%.1e", scale) + " over 1000 pairs per metric";
}

bool validate_report(const io::Json& j, std::size_t n_matches, std::string& why) {
    auto num_or_null = [](const io::Json& v) { return v.is_number() || v.is_null(); };
    if (!j.is_object()) return why = "not an object", false;
    for (const char* key : {"H", "sre_mean", "sre_samples", "inlier_ratio", "survivors_per_round", "fallback_pairs"})
        if (!j.contains(key)) return why = std::string("missing ") + key, false;
    const io::Json& h = j["H"];
    if (!h.is_array() || h.size() != 3) return why = "H shape", false;
    for (const io::Json& row : h) {
        if (!row.is_array() || row.size() != 3) return why = "H shape", false;
        for (const io::Json& v : row)
            if (!v.is_number()) return why = "H entry", false;
    }
    if (!num_or_null(j["sre_mean"])) return why = "sre_mean type", false;
    if (!j["sre_samples"].is_array() || j["sre_samples"].size() != n_matches) return why = "sre_samples", false;
    for (const io::Json& v : j["sre_samples"])
        if (!num_or_null(v)) return why = "sre_samples entry", false;
    if (!j["inlier_ratio"].is_number() || j["inlier_ratio"] < 0.0 || j["inlier_ratio"] > 1.0)
        return why = "inlier_ratio", false;
    const io::Json& rounds = j["survivors_per_round"];
    if (!rounds.is_array() || rounds.empty()) return why = "survivors_per_round", false;
    for (std::size_t i = 0; i < rounds.size(); ++i) {
        if (!rounds[i].is_number_unsigned()) return why = "survivors_per_round entry", false;
        if (i && rounds[i] > rounds[i - 1]) return why = "survivors_per_round increases", false;
    }
    if (!j["fallback_pairs"].is_number_unsigned()) return why = "fallback_pairs", false;
    return true;
}

std::string stitching(Checks& c) {
    // weights sum to one: blending any constant with itself returns it unchanged
    const int w = 90, h = 30;
    Mask lm(w, h), rm(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            lm.at(x, y) = x < 60 && (x + y) % 7 != 0;
            rm.at(x, y) = x >= 25;
        }
    bool sums = true;
    const auto wt = blend_weights(lm, rm, BlendMode::Feather);
    for (std::size_t i = 0; i < wt.size(); ++i) sums &= wt[i] <= 65536u;
    for (int v = 0; v < 256; ++v) {
        Raster a(w, h, 3);
        std::fill(a.data.begin(), a.data.end(), std::uint8_t(v));
        const Raster out = composite(a, a, lm, rm, BlendMode::Feather);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                if (lm.at(x, y) || rm.at(x, y)) sums &= out.at(x, y, 1) == v;
    }
    c.expect(sums, "feather weights do not sum to one");

    const Raster img = render_texture(120, 90, 11);
    bool exact = true;
    for (BlendMode m : {BlendMode::NoBlend, BlendMode::Overwrite, BlendMode::Feather})
        exact &= stitch_with(img, img, Homography(), m).data == img.data;
    c.expect(exact, "identity stitch differs");

    double worst = std::numeric_limits<double>::infinity();
    const int ww = 160, hh = 120;
    const Raster src = render_texture(ww, hh, 12);
    for (std::uint64_t s = 0; s < 10; ++s) {
        const Homography g = synth_homography(ww, hh, 0.1, s);
        const Raster back = warp_image(warp_image(src, g, {0, 0, ww, hh}).image, g.inverse(), {0, 0, ww, hh}).image;
        Mask interior(ww, hh);
        for (int y = 2; y < hh - 2; ++y)
            for (int x = 2; x < ww - 2; ++x) {
                const Vec2 q = g.apply(Vec2(x, y));
                interior.at(x, y) = q.x() >= 2 && q.y() >= 2 && q.x() <= ww - 3 && q.y() <= hh - 3;
            }
        worst = std::min(worst, psnr(back, src, interior));
    }
    c.expect(worst > 35.0, "roundtrip PSNR " + fmt("%.2f", worst));

    SynthMatchParams p;
    p.outlier_fraction = 0.3;
    p.width = 320;
    p.height = 240;
    p.seed = 13;
    const SynthMatches sm = synth_matches_2d(p);
    const Raster left = render_texture(p.width, p.height, 13);
    const Raster right = warp_image(left, sm.gt, {0, 0, p.width, p.height}).image;
    const StitchResult res = stitch(left, right, sm.matches, StitchConfig{});
    const io::Json parsed = io::Json::parse(io::stitch_report_to_json(res.report).dump());
    std::string why;
    const bool schema = validate_report(parsed, sm.matches.size(), why);
    c.expect(schema, "report schema: " + why);
    return std::string("weights sum to one ") + (sums ? "yes" : "no") + ", identity bit-exact " +
           (exact ? "yes" : "no") + ", min roundtrip PSNR " + fmt("%.1f dB", worst) + ", report schema " +
           (schema ? "ok" : why);
}

std::map<std::string, std::string> read_dir(const std::filesystem::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        std::ifstream in(e.path(), std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        out[e.path().filename().string()] = ss.str();
    }
    return out;
}

std::string determinism(Checks& c) {
    const auto root = std::filesystem::temp_directory_path() / "clap_acceptance_bench";
    std::filesystem::remove_all(root);
    const auto spec_path = root / "spec.toml";
    std::filesystem::create_directories(root);
    io::write_text(spec_path.string(), R"(methods = ["clap", "ransac"]
seed_count = 6

[[scenes]]
id = "clean"
outlier_fraction = 0.0

[[scenes]]
id = "mixed"
outlier_fraction = 0.4
n_matches = 150

[[scenes]]
id = "hard"
outlier_fraction = 0.6
)");
    std::vector<std::map<std::string, std::string>> runs;
    for (std::size_t threads : {1, 1, 3}) {
        BenchSpec spec = load_bench_spec(spec_path.string());
        spec.threads = threads;
        const auto dir = root / ("run" + std::to_string(runs.size()));
        write_bench_exports(export_bench(run_bench(spec)), dir.string());
        auto files = read_dir(dir);
        files.erase("timings.csv");
        runs.push_back(std::move(files));
    }
    c.expect(runs[0].size() >= 5, "expected at least 5 CSV exports, got " + std::to_string(runs[0].size()));
    c.expect(runs[0] == runs[1], "two consecutive runs differ");
    c.expect(runs[0] == runs[2], "1 vs 3 threads differ");
    std::filesystem::remove_all(root);
    return std::to_string(runs[0].size()) + " CSV exports byte-identical across 2 runs and 1/3 threads";
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<std::string(Checks&)>>> criteria{
        {"Lie-group correctness", lie_groups},
        {"Minimal solvers exact", solvers},
        {"Oracle equivalence", oracles},
        {"3D robustness at 55% outliers", robustness_3d},
        {"Head-to-head stitching protocol", head_to_head},
        {"Averaging properties", averaging},
        {"Metric axioms", metric_axioms},
        {"Stitching pipeline integrity", stitching},
        {"Determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Checks c;
        std::string detail;
        try {
            detail = criteria[i].second(c);
        } catch (const std::exception& e) {
            c.failures.push_back(std::string("exception: ") + e.what());
        }
        const bool ok = c.failures.empty();
        failed += ok ? 0 : 1;
        std::printf("%s %zu %s: %s\n", ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), detail.c_str());
        for (const std::string& f : c.failures) std::printf("     - %s\n", f.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
    return failed ? 1 : 0;
}
