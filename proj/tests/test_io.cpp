#include "clap/config.hpp"
#include "clap/error.hpp"
#include "clap/harness.hpp"
#include "clap/io.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>

using namespace clap;

namespace {

std::string temp(const std::string& name) { return (std::filesystem::temp_directory_path() / name).string(); }

}  // namespace

TEST_CASE("pose and homography JSON roundtrip exactly") {
    const Pose t{so3_exp(Vec3(0.3, -1.2, 0.4)), Vec3(1.5, -2.25, 1e-9)};
    const Pose back = io::pose_from_json(io::Json::parse(io::pose_to_json(t).dump()));
    CHECK((back.matrix() - t.matrix()).norm() == 0.0);

    const Homography h = synth_homography(640, 480, 0.2, 3);
    const Homography hb = io::homography_from_json(io::Json::parse(io::homography_to_json(h).dump()));
    CHECK((hb.matrix() - h.matrix()).norm() < 1e-15 * h.matrix().norm());
    CHECK(hb.norm() == h.norm());
    const Homography d = normalize_homography(h, HomographyNorm::UnitDeterminant);
    CHECK(io::homography_from_json(io::homography_to_json(d)).norm() == HomographyNorm::UnitDeterminant);

    CHECK_THROWS_AS(io::pose_from_json(io::Json::parse(R"({"R": [[1,0,0],[0,1,0],[0,0,-1]], "t": [0,0,0]})")),
                    InvalidArgument);
    CHECK_THROWS_AS(io::homography_from_json(io::Json::parse(R"({"H": [[1,0],[0,1]]})")), FormatError);
}

TEST_CASE("map, observations and matches roundtrip") {
    SynthSceneParams sp;
    sp.seed = 4;
    const SynthScene s = synth_scene_3d(sp);
    const LandmarkMap m = io::map_from_json(io::Json::parse(io::map_to_json(s.map).dump()));
    CHECK(m.labels == s.map.labels);
    REQUIRE(m.landmarks.size() == s.map.landmarks.size());
    for (std::size_t i = 0; i < m.landmarks.size(); ++i) {
        CHECK(m.landmarks[i].position == s.map.landmarks[i].position);
        CHECK(m.landmarks[i].label == s.map.landmarks[i].label);
    }
    const auto obs = io::observations_from_json(io::observations_to_json(s.observations));
    REQUIRE(obs.size() == s.observations.size());
    CHECK(obs[3].position == s.observations[3].position);

    SynthMatchParams mp;
    mp.seed = 2;
    const SynthMatches sm = synth_matches_2d(mp);
    const auto path = temp("clap_test_matches.json");
    io::write_json(path, io::matches_to_json(sm.matches));
    const auto back = io::matches_from_json(io::load_document(path));
    REQUIRE(back.size() == sm.matches.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back[i].p == sm.matches[i].p);
        CHECK(back[i].q == sm.matches[i].q);
    }
    std::filesystem::remove(path);

    CHECK_THROWS_AS(io::map_from_json(io::Json::parse(R"({"labels": ["A"], "landmarks": [{"p": [0, 0], "c": "A"}]})")),
                    FormatError);
    CHECK_THROWS_AS(io::matches_from_json(io::Json::parse(R"({"matches": 3})")), FormatError);
    CHECK(io::number_or_null(std::numeric_limits<double>::infinity()).is_null());
    CHECK(io::number_or_null(1.5) == 1.5);
}

TEST_CASE("documents load from TOML and JSON alike") {
    const auto toml = temp("clap_test_cfg.toml"), json = temp("clap_test_cfg.json");
    io::write_text(toml, R"(metric = "rte"
lambda = 2.0
trim_fraction = 0.25
rounds = 3
mode = "local"
average = "split"
max_residual = 0.2
seed = 7
initial_pose = { R = [[1,0,0],[0,1,0],[0,0,1]], t = [1, 2, 3] }
)");
    io::write_text(json, R"({"metric": "rte", "lambda": 2.0, "trim_fraction": 0.25, "rounds": 3, "mode": "local",
"average": "split", "max_residual": 0.2, "seed": 7,
"initial_pose": {"R": [[1,0,0],[0,1,0],[0,0,1]], "t": [1, 2, 3]}})");
    CHECK(io::load_document(toml) == io::load_document(json));
    const LocalizeConfig c = localize_config_from(io::load_document(toml));
    CHECK(c.cluster.metric.kind == MetricKind::RelativeTransform);
    CHECK(c.cluster.metric.lambda == 2.0);
    CHECK(c.cluster.trim_fraction == 0.25);
    CHECK(c.cluster.rounds == 3);
    CHECK(c.cluster.mode == ClusterMode::Local);
    CHECK(c.average.scheme == AverageScheme::Split);
    CHECK(c.max_residual == 0.2);
    CHECK(c.seed == 7);
    REQUIRE(c.initial_pose);
    CHECK(c.initial_pose->translation == Vec3(1, 2, 3));
    std::filesystem::remove(toml);
    std::filesystem::remove(json);

    CHECK_THROWS_AS(io::parse_toml("a = [1, "), FormatError);
    CHECK_THROWS_AS(io::load_document(temp("clap_no_such_doc.json")), FormatError);
}

TEST_CASE("stitch and RANSAC configuration keys") {
    const io::Json doc = io::parse_toml(R"(n_candidates = 300
center = "liemean"
refine = false
refine_rounds = 2
normalized_frame = false
blend = "overwrite"
metric = "hlie"
ambiguity_ratio = 0.7

[ransac]
iterations = 500
threshold_px = 1.5
)");
    const StitchConfig s = stitch_config_from(doc);
    CHECK(s.n_candidates == 300);
    CHECK(s.center == AverageScheme::LieMean);
    CHECK_FALSE(s.refine);
    CHECK(s.refine_rounds == 2);
    CHECK_FALSE(s.normalized_frame);
    CHECK(s.blend == BlendMode::Overwrite);
    CHECK(s.cluster.metric.kind == MetricKind::HomographyLie);
    CHECK(s.ambiguity_ratio == 0.7);
    CHECK(s.inlier_threshold == 1.5);
    const RansacConfig r = ransac_config_from(doc);
    CHECK(r.iterations == 500);
    CHECK(r.inlier_threshold == 1.5);

    CHECK(stitch_config_from(io::Json::object()).n_candidates == StitchConfig{}.n_candidates);
    CHECK_THROWS_AS(stitch_config_from(io::parse_toml("center = \"karcher\"")), InvalidArgument);
    CHECK_THROWS_AS(stitch_config_from(io::parse_toml("n_candidates = \"many\"")), FormatError);
}
