#pragma once

// JSON and TOML document formats for maps, observations, matches, poses and
// homographies.

#include "clap/geom.hpp"
#include "clap/solvers.hpp"
#include "clap/stitch.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace clap::io {

using Json = nlohmann::json;

/// Parses a .json file, or a .toml file converted to the same tree. Throws
/// FormatError.
Json load_document(const std::string& path);
Json parse_toml(const std::string& text);
void write_json(const std::string& path, const Json& doc);
std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);

Json mat3_to_json(const Mat3& m);
Mat3 mat3_from_json(const Json& j);

/// {"R": [[...],[...],[...]], "t": [x, y, z]}
Json pose_to_json(const Pose& t);
Pose pose_from_json(const Json& j);

/// {"H": [[...]...], "norm": "h33" | "det1"}
Json homography_to_json(const Homography& h);
Homography homography_from_json(const Json& j);

/// {"labels": [...], "landmarks": [{"p": [x,y,z], "c": "G"}, ...]}
Json map_to_json(const LandmarkMap& map);
LandmarkMap map_from_json(const Json& j);

/// Observations share the landmark layout; "labels" is optional.
Json observations_to_json(const std::vector<Landmark>& obs);
std::vector<Landmark> observations_from_json(const Json& j);

/// {"matches": [{"p": [u,v], "q": [u,v]}, ...]}
Json matches_to_json(const std::vector<Match2D>& matches);
std::vector<Match2D> matches_from_json(const Json& j);

/// JSON has no infinity; non-finite values are written as null.
Json number_or_null(double v);

/// Stitch report: H, sre_mean, sre_samples, inlier_ratio, survivors_per_round,
/// fallback_pairs, then the remaining diagnostics and the canvas.
Json stitch_report_to_json(const StitchReport& r);

}  // namespace clap::io
