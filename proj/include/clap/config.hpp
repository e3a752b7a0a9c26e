#pragma once

// Pipeline configuration read from a JSON/TOML document. Absent keys keep
// their defaults; unknown keys are ignored.
//
//   metric, lambda, points, trim_fraction, rounds, mad_k, mode, tol_t, tol_r
//   average, max_iter, tol, max_candidates, max_residual, initial_pose, seed
//   n_candidates, center, refine, refine_rounds, normalized_frame, blend,
//   ambiguity_ratio
//   [ransac] iterations, threshold_px

#include "clap/io.hpp"
#include "clap/localize3d.hpp"
#include "clap/ransac.hpp"
#include "clap/stitch.hpp"

namespace clap {

ClusterConfig cluster_config_from(const io::Json& doc, ClusterConfig base);
LocalizeConfig localize_config_from(const io::Json& doc);
StitchConfig stitch_config_from(const io::Json& doc);
RansacConfig ransac_config_from(const io::Json& doc);

}  // namespace clap
