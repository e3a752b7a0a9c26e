#pragma once

// Two-image stitching: clustered homography estimate, inverse warping of the
// right image into the left frame, and compositing.

#include "clap/averaging.hpp"
#include "clap/clustering.hpp"
#include "clap/raster.hpp"
#include "clap/solvers.hpp"

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace clap {

enum class BlendMode { NoBlend, Overwrite, Feather };

BlendMode parse_blend_mode(std::string_view name);
std::string_view blend_mode_name(BlendMode mode);

/// Clustering defaults for homographies: Frobenius metric, 5 rounds of 20%.
ClusterConfig homography_cluster_config();

struct StitchConfig {
    std::size_t n_candidates = 400;
    ClusterConfig cluster = homography_cluster_config();
    AverageScheme center = AverageScheme::Medoid;  // Medoid, LieMean or LieMedian
    AveragingConfig center_iterations;              // scheme field ignored
    bool refine = true;
    /// Guarded refits repeated until one is rejected or this many were kept.
    int refine_rounds = 10;
    /// Cluster and average candidates expressed in similarity-normalized
    /// coordinates of each image instead of raw pixels.
    bool normalized_frame = true;
    double inlier_threshold = 2.0;  // pixels, refinement and reporting
    /// The estimate is flagged ambiguous when some other candidate explains at
    /// least this fraction of the estimate's own inlier count using only
    /// matches the estimate rejects (e.g. a second plane).
    double ambiguity_ratio = 0.5;
    BlendMode blend = BlendMode::Feather;
    std::uint64_t seed = 0;

    void validate() const;
};

struct ClapDiagnostics {
    std::size_t candidate_count = 0;
    std::vector<std::size_t> per_round_counts;
    std::size_t survivor_count = 0;
    std::size_t fallback_pairs = 0;
    std::size_t mad_removed = 0;
    double survivor_spread = 0.0;     // median distance of survivors to the medoid
    std::size_t primary_support = 0;  // inliers of the final estimate
    std::size_t secondary_support = 0;
    bool ambiguous = false;
    bool refined = false;
    int refine_rounds_used = 0;
    bool center_converged = true;
};

struct ClapHomography {
    Homography homography;  // maps left pixels to right pixels
    ClapDiagnostics diagnostics;
};

/// Candidates -> clustering under cfg.cluster.metric -> center over survivors ->
/// optional guarded refinement. Throws InvalidArgument (fewer than 4
/// matches), InsufficientValidCandidates.
ClapHomography clap_homography(std::span<const Match2D> matches, const StitchConfig& cfg);

/// Output window in the destination frame: pixel centers x0 .. x0 + width - 1.
struct Bounds {
    int x0 = 0, y0 = 0;
    int width = 0, height = 0;
};

struct WarpResult {
    Raster image;
    Mask mask;
};

/// Inverse-maps every output pixel through H^-1 (H maps src pixels to the
/// output frame) and samples src bilinearly; pixels mapping outside
/// [0, w-1] x [0, h-1] stay 0 with mask 0. Throws DegenerateHomography.
WarpResult warp_image(const Raster& src, const Homography& h, const Bounds& out);

/// Exact Euclidean distance from each set pixel to the nearest unset pixel,
/// pixels beyond the border counting as unset; 0 on unset pixels.
std::vector<double> distance_transform(const Mask& m);

/// Q16 weight of the left image per pixel: 65536 on left-only pixels, 0
/// where left is absent, round(65536 * dl / (dl + dr)) in overlap. The warped
/// image implicitly gets 65536 - w, so the pair always sums to one.
std::vector<std::uint32_t> blend_weights(const Mask& left, const Mask& right, BlendMode mode);

/// Throws DimensionMismatch unless all four inputs share dimensions (and the
/// images their channel count).
Raster composite(const Raster& left, const Raster& warped, const Mask& left_mask, const Mask& warped_mask,
                 BlendMode mode);

struct StitchReport {
    Homography homography;
    double sre_mean = 0.0;  // over the estimate's inliers
    std::vector<double> sre_samples;  // per match
    double inlier_ratio = 0.0;
    ClapDiagnostics diagnostics;
    Bounds canvas;
    bool canvas_clamped = false;
};

struct StitchResult {
    Raster panorama;
    StitchReport report;
};

/// Canvas: union of the left extent and the right image's corners mapped
/// into the left frame, clamped to 8x the left image area around it.
Bounds stitch_canvas(int left_w, int left_h, int right_w, int right_h, const Homography& left_to_right,
                     bool* clamped = nullptr);

StitchResult stitch(const Raster& left, const Raster& right, std::span<const Match2D> matches,
                    const StitchConfig& cfg);

/// Stitch with a known homography (no estimation).
Raster stitch_with(const Raster& left, const Raster& right, const Homography& left_to_right, BlendMode mode,
                   Bounds* canvas = nullptr, bool* clamped = nullptr);

}  // namespace clap
