#pragma once

// Synthetic scenes with planted ground truth, the ground-truth distance used
// for evaluation, and the benchmark driver with its CSV exports.

#include "clap/geom.hpp"
#include "clap/ransac.hpp"
#include "clap/solvers.hpp"
#include "clap/stitch.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace clap {

struct SynthSceneParams {
    std::size_t n_landmarks = 12;
    std::size_t n_observed = 20;
    double outlier_fraction = 0.55;
    double noise_sigma = 0.01;
    std::vector<std::string> label_alphabet{"G", "L", "X", "T"};
    Vec3 scene_extent{10.0, 10.0, 3.0};
    std::uint64_t seed = 0;

    void validate() const;
};

struct SynthScene {
    LandmarkMap map;
    std::vector<Landmark> observations;  // robot frame
    Pose gt_pose;                        // robot -> world
    std::vector<bool> is_outlier;
    std::size_t outlier_count = 0;
};

/// Landmarks uniform in the extent box (centered at the origin) with labels
/// cycling the alphabet; the pose has a uniform random axis, an angle uniform
/// in [0, 3) rad and a translation uniform in the box. Inliers are distinct
/// landmarks seen through the pose with Gaussian noise; outliers are uniform
/// box positions with uniform labels.
SynthScene synth_scene_3d(const SynthSceneParams& p);

struct SynthMatchParams {
    std::size_t n_matches = 200;
    double outlier_fraction = 0.0;
    double noise_sigma = 0.5;  // pixels
    int width = 640, height = 480;
    double gt_homography_spread = 0.2;
    std::uint64_t seed = 0;

    void validate() const;
};

struct SynthMatches {
    std::vector<Match2D> matches;
    Homography gt;  // left -> right
    std::vector<bool> is_outlier;
    std::size_t outlier_count = 0;
};

/// Ground truth is exp of a random traceless generator (entries uniform in
/// [-spread, spread], perspective row included) acting on coordinates
/// scaled to [-1, 1]. Inlier endpoints both land in-image.
SynthMatches synth_matches_2d(const SynthMatchParams& p);

/// Random ground-truth homography used by synth_matches_2d.
Homography synth_homography(int width, int height, double spread, std::uint64_t seed);

/// |log(gt^-1 H)|_F with both normalized to H33 = 1; +inf when the log is
/// undefined. Throws DegenerateHomography.
double lie_distance_to_gt(const Homography& h, const Homography& gt);

/// Deterministic smooth RGB texture (a few plane waves per channel), suited
/// to bilinear resampling round trips.
Raster render_texture(int width, int height, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Benchmark

struct BenchScene {
    std::string id;
    bool synthetic = true;
    SynthMatchParams params;      // synthetic scenes
    std::string matches_path;     // external match files
    std::optional<Homography> gt;  // external scenes with ground truth
    bool has_gt = true;
};

struct BenchSpec {
    std::vector<BenchScene> scenes;
    std::vector<std::string> methods{"clap", "ransac"};
    std::vector<std::uint64_t> seeds{0};
    StitchConfig clap;
    RansacConfig ransac;
    double sre_threshold = 2.0;  // inlier threshold used for reporting
    std::size_t threads = 1;
};

struct EvalRecord {
    std::string method;
    std::string scene_id;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;
    std::optional<double> lie_distance_to_gt;
    double sre_mean = 0.0;
    double inlier_ratio = 0.0;
    double runtime_ms = 0.0;
};

/// Reads a spec document (TOML or JSON). Relative match paths resolve
/// against the spec file's directory. Throws FormatError, InvalidArgument.
BenchSpec load_bench_spec(const std::string& path);

/// Seed that generates the matches of a synthetic scene for a given run seed.
std::uint64_t scene_seed(std::uint64_t base, std::uint64_t run_seed);

/// Runs one cell; errors become a failed record.
EvalRecord run_cell(const BenchScene& scene, const std::vector<Match2D>& matches,
                    const std::optional<Homography>& gt, const std::string& method, std::uint64_t seed,
                    const BenchSpec& spec);

/// Every (scene, method, seed) cell, in that nesting order, computed on
/// spec.threads workers.
std::vector<EvalRecord> run_bench(const BenchSpec& spec);

struct HistogramBin {
    double lo = 0.0, hi = 0.0;
    std::size_t count = 0;
};

/// Fixed-count linear bins over [lo, hi]; non-finite values and values
/// outside the range are not counted. hi <= lo widens the range to lo + 1.
std::vector<HistogramBin> linear_histogram(const std::vector<double>& values, std::size_t bins, double lo,
                                           double hi);
/// Log-spaced bins of value + eps over [lo + eps, hi + eps]; bin edges are
/// reported in value + eps units.
std::vector<HistogramBin> log_histogram(const std::vector<double>& values, std::size_t bins, double lo, double hi,
                                        double eps);

/// Empirical CDF as (value, fraction) rows, non-decreasing and ending at 1.
std::vector<std::pair<double, double>> empirical_cdf(std::vector<double> values);

struct BenchExports {
    std::string records, hist_linear, hist_log, per_scene, sre_cdf, timings;
};

/// Deterministic CSV texts for a record table (runtime only in timings).
BenchExports export_bench(const std::vector<EvalRecord>& records);
void write_bench_exports(const BenchExports& e, const std::string& out_dir);

/// Shortest round-trip text for a double; "inf", "-inf", "nan" otherwise.
std::string format_number(double v);

}  // namespace clap
