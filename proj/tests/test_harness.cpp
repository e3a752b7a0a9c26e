#include "clap/error.hpp"
#include "clap/harness.hpp"
#include "clap/io.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>
#include <sstream>

using namespace clap;

namespace {

std::size_t count_lines(const std::string& s) { return std::size_t(std::count(s.begin(), s.end(), '\n')); }

BenchSpec grid_spec(std::size_t threads) {
    BenchSpec spec;
    spec.threads = threads;
    spec.seeds = {1, 2, 3, 4, 0, 5, 6, 7, 8, 9};  // order is kept as given
    for (int k = 0; k < 12; ++k) {
        BenchScene sc;
        sc.id = "S" + std::to_string(k);
        sc.params.n_matches = 60;
        sc.params.outlier_fraction = 0.1 * (k % 6);
        sc.params.seed = std::uint64_t(k);
        spec.scenes.push_back(sc);
    }
    spec.clap.n_candidates = 60;
    spec.ransac.iterations = 100;
    return spec;
}

}  // namespace

TEST_CASE("3D synthesis is deterministic and honours the requested counts") {
    SynthSceneParams p;
    p.seed = 5;
    const SynthScene a = synth_scene_3d(p), b = synth_scene_3d(p);
    CHECK(a.observations.size() == 20);
    CHECK(a.map.landmarks.size() == 12);
    CHECK(a.outlier_count == 11);  // round(0.55 * 20)
    CHECK(std::count(a.is_outlier.begin(), a.is_outlier.end(), true) == 11);
    for (std::size_t i = 0; i < a.observations.size(); ++i)
        CHECK((a.observations[i].position - b.observations[i].position).norm() == 0.0);
    CHECK_NOTHROW(a.map.validate());
    // inliers sit near their landmark once mapped back
    for (std::size_t i = 0; i < a.observations.size(); ++i) {
        if (a.is_outlier[i]) continue;
        double best = 1e9;
        for (const Landmark& l : a.map.landmarks)
            if (l.label == a.observations[i].label)
                best = std::min(best, (a.gt_pose * a.observations[i].position - l.position).norm());
        CHECK(best < 0.1);
    }
    p.n_observed = 30;
    p.outlier_fraction = 0.1;
    CHECK_THROWS_AS(synth_scene_3d(p), InvalidArgument);
}

TEST_CASE("2D synthesis") {
    SynthMatchParams p;
    p.outlier_fraction = 0.6;
    p.seed = 8;
    const SynthMatches a = synth_matches_2d(p), b = synth_matches_2d(p);
    CHECK(a.matches.size() == 200);
    CHECK(a.outlier_count == 120);
    for (std::size_t i = 0; i < a.matches.size(); ++i) {
        CHECK(a.matches[i].p == b.matches[i].p);
        CHECK(a.matches[i].q == b.matches[i].q);
        const Match2D& m = a.matches[i];
        CHECK((m.p.x() >= 0 && m.p.x() <= 639 && m.p.y() >= 0 && m.p.y() <= 479));
        CHECK((m.q.x() >= 0 && m.q.x() <= 639 && m.q.y() >= 0 && m.q.y() <= 479));
        if (!a.is_outlier[i]) CHECK((a.gt.apply(m.p) - m.q).norm() < 5 * 0.5 * std::sqrt(2.0) + 1e-9);
    }
    CHECK((synth_homography(640, 480, 0.0, 3).matrix() - Mat3::Identity()).norm() < 1e-12);
    p.seed = 9;
    CHECK(synth_matches_2d(p).matches[0].p != a.matches[0].p);
}

TEST_CASE("lie distance to ground truth") {
    const Homography id;
    CHECK(lie_distance_to_gt(id, id) == 0.0);
    Mat3 d = Mat3::Zero();
    d.diagonal() << 2.0, 1.0, 1.0;
    // H33 normalization keeps diag(2,1,1), whose log has norm ln 2
    CHECK(lie_distance_to_gt(normalize_homography(d, HomographyNorm::UnitLowerRight), id) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-12));
    const Homography g = synth_homography(640, 480, 0.2, 4);
    const Homography h = synth_homography(640, 480, 0.2, 5);
    const Homography scaled = normalize_homography(Mat3(-7.0 * h.matrix()), HomographyNorm::UnitDeterminant);
    CHECK(std::abs(lie_distance_to_gt(scaled, g) - lie_distance_to_gt(h, g)) < 1e-9);
    Mat3 flip = Mat3::Identity();
    flip(0, 0) = -1;
    flip(1, 1) = -1;
    CHECK(std::isinf(lie_distance_to_gt(normalize_homography(flip, HomographyNorm::UnitLowerRight), id)));
}

TEST_CASE("histograms and CDF") {
    const std::vector<double> v{0.0, 0.5, 1.0, 1.0, 2.0, std::numeric_limits<double>::infinity(), 5.0};
    const auto lin = linear_histogram(v, 4, 0.0, 2.0);
    REQUIRE(lin.size() == 4);
    CHECK(lin[0].count == 1);
    CHECK(lin[1].count == 1);
    CHECK(lin[2].count == 2);
    CHECK(lin[3].count == 1);  // the top edge is inclusive
    CHECK(lin[3].hi == 2.0);
    const auto lg = log_histogram(v, 3, 0.0, 2.0, 1e-8);
    std::size_t total = 0;
    for (const auto& b : lg) total += b.count;
    CHECK(total == 5);
    CHECK(lg.front().lo == doctest::Approx(1e-8));

    const auto cdf = empirical_cdf({3.0, 1.0, 2.0, 2.0});
    REQUIRE(cdf.size() == 3);
    CHECK(cdf[0] == std::pair<double, double>{1.0, 0.25});
    CHECK(cdf[1] == std::pair<double, double>{2.0, 0.75});
    CHECK(cdf[2] == std::pair<double, double>{3.0, 1.0});
}

TEST_CASE("format_number") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(format_number(std::nan("")) == "nan");
    CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("benchmark grid exports one record per cell, identically across thread counts") {
    const BenchSpec one = grid_spec(1), four = grid_spec(4);
    const auto r1 = run_bench(one);
    const auto r4 = run_bench(four);
    REQUIRE(r1.size() == 12 * 2 * 10);
    const BenchExports e1 = export_bench(r1), e4 = export_bench(r4), again = export_bench(run_bench(one));
    CHECK(count_lines(e1.records) == 241);
    CHECK(e1.records == e4.records);
    CHECK(e1.hist_linear == e4.hist_linear);
    CHECK(e1.hist_log == e4.hist_log);
    CHECK(e1.per_scene == e4.per_scene);
    CHECK(e1.sre_cdf == e4.sre_cdf);
    CHECK(e1.records == again.records);
    CHECK(count_lines(e1.hist_linear) == 1 + 2 * 50);
    CHECK(count_lines(e1.per_scene) == 1 + 12 * 2);
    // cells come out in scene, method, seed order
    CHECK(r1[0].scene_id == "S0");
    CHECK(r1[0].method == "clap");
    CHECK(r1[10].method == "ransac");
    CHECK(r1[4].seed == 0);
    std::set<std::tuple<std::string, std::string, std::uint64_t>> cells;
    for (const EvalRecord& r : r1) cells.insert({r.scene_id, r.method, r.seed});
    CHECK(cells.size() == 240);
    CHECK(e1.records.find("runtime") == std::string::npos);
    CHECK(e1.timings.rfind("scene,method,seed,runtime_ms\n", 0) == 0);
}

TEST_CASE("failing cells become rows with an error") {
    BenchSpec spec;
    BenchScene bad;
    bad.id = "line";
    bad.synthetic = false;
    const auto dir = std::filesystem::path(CLAP_TEST_DATA_DIR);
    const auto path = dir / "collinear_matches.json";
    std::vector<Match2D> line;
    for (int i = 0; i < 10; ++i) line.push_back({Vec2(i, i), Vec2(i, i)});
    io::write_json(path.string(), io::matches_to_json(line));
    bad.matches_path = path.string();
    bad.has_gt = false;
    BenchScene missing = bad;
    missing.id = "missing";
    missing.matches_path = (dir / "no_such_file.json").string();
    spec.scenes = {bad, missing};
    spec.ransac.iterations = 10;
    const auto recs = run_bench(spec);
    REQUIRE(recs.size() == 4);
    for (const EvalRecord& r : recs) {
        CHECK_FALSE(r.ok);
        CHECK_FALSE(r.error.empty());
    }
    const std::string csv = export_bench(recs).records;
    CHECK(count_lines(csv) == 5);
    CHECK(csv.find("line,clap,0,0,,,,") != std::string::npos);
}

TEST_CASE("TOML benchmark spec") {
    const auto dir = std::filesystem::path(CLAP_TEST_DATA_DIR);
    const auto path = dir / "bench_spec.toml";
    io::write_text(path.string(), R"(methods = ["clap", "ransac"]
seed_count = 3
seed_base = 10
threads = 2

[clap]
n_candidates = 50
center = "liemedian"

[ransac]
iterations = 200
threshold_px = 3.0

[[scenes]]
id = "easy"
n_matches = 50
outlier_fraction = 0.2
image_size = [320, 240]

[[scenes]]
n_matches = 80
)");
    const BenchSpec spec = load_bench_spec(path.string());
    CHECK(spec.seeds == std::vector<std::uint64_t>{10, 11, 12});
    CHECK(spec.threads == 2);
    CHECK(spec.clap.n_candidates == 50);
    CHECK(spec.clap.center == AverageScheme::LieMedian);
    CHECK(spec.ransac.iterations == 200);
    CHECK(spec.ransac.inlier_threshold == 3.0);
    REQUIRE(spec.scenes.size() == 2);
    CHECK(spec.scenes[0].id == "easy");
    CHECK(spec.scenes[0].params.width == 320);
    CHECK(spec.scenes[1].id == "S02");
    CHECK(spec.scenes[1].params.n_matches == 80);

    io::write_text(path.string(), "methods = [\"lmeds\"]\n[[scenes]]\n");
    CHECK_THROWS_AS(load_bench_spec(path.string()), InvalidArgument);
    io::write_text(path.string(), "methods = [\"clap\"]\n");
    CHECK_THROWS_AS(load_bench_spec(path.string()), FormatError);
}
