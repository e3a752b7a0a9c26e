// clap-estimate: command-line front end for localization, stitching,
// synthetic data and benchmarks.

#include "clap/config.hpp"
#include "clap/error.hpp"
#include "clap/harness.hpp"
#include "clap/io.hpp"
#include "clap/localize3d.hpp"
#include "clap/raster.hpp"
#include "clap/simd/kernels.hpp"
#include "clap/stitch.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>

using namespace clap;

namespace {

io::Json config_or_empty(const std::string& path) { return path.empty() ? io::Json::object() : io::load_document(path); }

void emit(const std::string& path, const io::Json& doc) {
    if (path.empty() || path == "-")
        std::cout << doc.dump(2) << '\n';
    else
        io::write_json(path, doc);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Robust geometric estimation by candidate clustering"};
    app.require_subcommand(1);
    std::string simd_level;
    app.add_option("--simd", simd_level, "Force kernel variant (scalar|avx2)");

    // localize3d
    auto* loc = app.add_subcommand("localize3d", "Estimate a pose from labeled observations and a map");
    std::string map_path, obs_path, loc_cfg, loc_out = "-";
    std::optional<std::uint64_t> loc_seed;
    loc->add_option("--map", map_path, "Map JSON")->required();
    loc->add_option("--obs", obs_path, "Observations JSON")->required();
    loc->add_option("--config", loc_cfg, "Config TOML/JSON");
    loc->add_option("--seed", loc_seed, "Sampling seed");
    loc->add_option("--out", loc_out, "Output pose JSON (default stdout)");

    // stitch
    auto* st = app.add_subcommand("stitch", "Stitch two images from point matches");
    std::string left_path, right_path, matches_path, st_cfg, pano_path, report_path;
    std::optional<std::uint64_t> st_seed;
    st->add_option("--left", left_path, "Left PPM")->required();
    st->add_option("--right", right_path, "Right PPM")->required();
    st->add_option("--matches", matches_path, "Matches JSON (left -> right)")->required();
    st->add_option("--config", st_cfg, "Config TOML/JSON");
    st->add_option("--seed", st_seed, "Sampling seed");
    st->add_option("--out", pano_path, "Panorama PPM")->required();
    st->add_option("--report", report_path, "Report JSON");

    // synth
    auto* syn = app.add_subcommand("synth", "Generate synthetic data with ground truth");
    syn->require_subcommand(1);
    auto* s3 = syn->add_subcommand("scene3d", "Landmark map and observations");
    SynthSceneParams sp;
    std::string s3_map, s3_obs, s3_gt;
    s3->add_option("--seed", sp.seed);
    s3->add_option("--landmarks", sp.n_landmarks);
    s3->add_option("--observed", sp.n_observed);
    s3->add_option("--outliers", sp.outlier_fraction, "Outlier fraction");
    s3->add_option("--noise", sp.noise_sigma);
    s3->add_option("--labels", sp.label_alphabet);
    s3->add_option("--map-out", s3_map)->required();
    s3->add_option("--obs-out", s3_obs)->required();
    s3->add_option("--gt-out", s3_gt);
    auto* s2 = syn->add_subcommand("matches2d", "Point matches under a random homography");
    SynthMatchParams mp;
    std::string s2_out, s2_gt, s2_left, s2_right;
    s2->add_option("--seed", mp.seed);
    s2->add_option("--n", mp.n_matches);
    s2->add_option("--outliers", mp.outlier_fraction, "Outlier fraction");
    s2->add_option("--noise", mp.noise_sigma);
    s2->add_option("--width", mp.width);
    s2->add_option("--height", mp.height);
    s2->add_option("--spread", mp.gt_homography_spread);
    s2->add_option("--out", s2_out)->required();
    s2->add_option("--gt-out", s2_gt);
    s2->add_option("--left-out", s2_left, "Render a left PPM");
    s2->add_option("--right-out", s2_right, "Render the matching right PPM");

    // bench
    auto* be = app.add_subcommand("bench", "Run a benchmark spec");
    std::string spec_path, out_dir;
    std::optional<std::size_t> threads;
    be->add_option("--spec", spec_path, "Spec TOML/JSON")->required();
    be->add_option("--out-dir", out_dir, "Export directory")->required();
    be->add_option("--threads", threads, "Worker threads (overrides the spec)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (simd_level == "scalar")
            simd::set_level(simd::Level::Scalar);
        else if (simd_level == "avx2")
            simd::set_level(simd::Level::Avx2);
        else if (!simd_level.empty())
            throw InvalidArgument("--simd must be scalar or avx2");

        if (*loc) {
            LocalizeConfig cfg = localize_config_from(config_or_empty(loc_cfg));
            if (loc_seed) cfg.seed = *loc_seed;
            const LandmarkMap map = io::map_from_json(io::load_document(map_path));
            const std::vector<Landmark> obs = io::observations_from_json(io::load_document(obs_path));
            const PoseEstimate est = localize3d(obs, map, cfg);
            io::Json out = io::pose_to_json(est.pose);
            out["candidates"] = est.candidate_count;
            out["survivors"] = est.survivor_count;
            out["survivors_per_round"] = est.per_round_counts;
            out["mode"] = est.mode_used == ClusterMode::Local ? "local" : "global";
            out["average"] = average_scheme_name(est.scheme_used);
            out["flags"] = {{"non_convergence", est.non_convergence}, {"fallback_to_global", est.fallback_to_global}};
            emit(loc_out, out);
        } else if (*st) {
            StitchConfig cfg = stitch_config_from(config_or_empty(st_cfg));
            if (st_seed) cfg.seed = *st_seed;
            const Raster left = read_pnm(left_path);
            const Raster right = read_pnm(right_path);
            const std::vector<Match2D> matches = io::matches_from_json(io::load_document(matches_path));
            const StitchResult res = stitch(left, right, matches, cfg);
            write_pnm(pano_path, res.panorama);
            if (!report_path.empty()) emit(report_path, io::stitch_report_to_json(res.report));
        } else if (*s3) {
            const SynthScene sc = synth_scene_3d(sp);
            io::write_json(s3_map, io::map_to_json(sc.map));
            io::write_json(s3_obs, io::observations_to_json(sc.observations));
            if (!s3_gt.empty()) io::write_json(s3_gt, io::pose_to_json(sc.gt_pose));
        } else if (*s2) {
            const SynthMatches sm = synth_matches_2d(mp);
            io::write_json(s2_out, io::matches_to_json(sm.matches));
            if (!s2_gt.empty()) io::write_json(s2_gt, io::homography_to_json(sm.gt));
            if (!s2_left.empty() || !s2_right.empty()) {
                const Raster left = render_texture(mp.width, mp.height, mp.seed);
                if (!s2_left.empty()) write_pnm(s2_left, left);
                if (!s2_right.empty()) write_pnm(s2_right, warp_image(left, sm.gt, {0, 0, mp.width, mp.height}).image);
            }
        } else if (*be) {
            BenchSpec spec = load_bench_spec(spec_path);
            if (threads) spec.threads = *threads;
            const std::vector<EvalRecord> records = run_bench(spec);
            write_bench_exports(export_bench(records), out_dir);
            std::size_t failed = 0;
            for (const EvalRecord& r : records) failed += r.ok ? 0 : 1;
            std::fprintf(stderr, "%zu cells, %zu failed\n", records.size(), failed);
        }
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
