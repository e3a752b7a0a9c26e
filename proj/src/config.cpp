#include "clap/config.hpp"

#include "clap/error.hpp"

namespace clap {

namespace {

template <class T>
void take(const io::Json& doc, const char* key, T& dst) {
    if (!doc.is_object() || !doc.contains(key)) return;
    try {
        dst = doc.at(key).get<T>();
    } catch (const io::Json::exception& e) {
        throw FormatError(std::string("config key '") + key + "': " + e.what());
    }
}

}  // namespace

ClusterConfig cluster_config_from(const io::Json& doc, ClusterConfig c) {
    std::string name;
    take(doc, "metric", name);
    if (!name.empty()) c.metric.kind = parse_metric_kind(name);
    take(doc, "lambda", c.metric.lambda);
    if (doc.is_object() && doc.contains("points")) {
        c.metric.points.clear();
        for (const io::Json& p : doc.at("points")) {
            if (!p.is_array() || p.size() != 3) throw FormatError("config key 'points': expected [x, y, z] entries");
            c.metric.points.emplace_back(p[0].get<double>(), p[1].get<double>(), p[2].get<double>());
        }
    }
    take(doc, "trim_fraction", c.trim_fraction);
    take(doc, "rounds", c.rounds);
    take(doc, "mad_k", c.mad_k);
    std::string mode;
    take(doc, "mode", mode);
    if (mode == "global")
        c.mode = ClusterMode::Global;
    else if (mode == "local")
        c.mode = ClusterMode::Local;
    else if (!mode.empty())
        throw InvalidArgument("config: mode must be global or local");
    take(doc, "tol_t", c.tol_t);
    take(doc, "tol_r", c.tol_r);
    return c;
}

LocalizeConfig localize_config_from(const io::Json& doc) {
    LocalizeConfig cfg;
    cfg.cluster = cluster_config_from(doc, cfg.cluster);
    std::string avg;
    take(doc, "average", avg);
    if (!avg.empty()) cfg.average.scheme = parse_average_scheme(avg);
    take(doc, "max_iter", cfg.average.max_iter);
    take(doc, "tol", cfg.average.tol);
    take(doc, "max_candidates", cfg.max_candidates);
    take(doc, "max_residual", cfg.max_residual);
    take(doc, "seed", cfg.seed);
    if (doc.is_object() && doc.contains("initial_pose")) cfg.initial_pose = io::pose_from_json(doc.at("initial_pose"));
    cfg.cluster.validate();
    cfg.average.validate();
    return cfg;
}

StitchConfig stitch_config_from(const io::Json& doc) {
    StitchConfig cfg;
    cfg.cluster = cluster_config_from(doc, cfg.cluster);
    take(doc, "n_candidates", cfg.n_candidates);
    std::string center;
    take(doc, "center", center);
    if (!center.empty()) cfg.center = parse_average_scheme(center);
    take(doc, "max_iter", cfg.center_iterations.max_iter);
    take(doc, "tol", cfg.center_iterations.tol);
    take(doc, "refine", cfg.refine);
    take(doc, "refine_rounds", cfg.refine_rounds);
    take(doc, "normalized_frame", cfg.normalized_frame);
    std::string blend;
    take(doc, "blend", blend);
    if (!blend.empty()) cfg.blend = parse_blend_mode(blend);
    take(doc, "ambiguity_ratio", cfg.ambiguity_ratio);
    take(doc, "seed", cfg.seed);
    if (doc.is_object() && doc.contains("ransac")) take(doc.at("ransac"), "threshold_px", cfg.inlier_threshold);
    cfg.validate();
    return cfg;
}

RansacConfig ransac_config_from(const io::Json& doc) {
    RansacConfig cfg;
    const io::Json* r = &doc;
    if (doc.is_object() && doc.contains("ransac")) r = &doc.at("ransac");
    take(*r, "iterations", cfg.iterations);
    take(*r, "threshold_px", cfg.inlier_threshold);
    take(doc, "seed", cfg.seed);
    return cfg;
}

}  // namespace clap
