#include "clap/io.hpp"

#include "clap/error.hpp"

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace clap::io {

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write '" + path + "'");
    out << text;
}

namespace {

Json toml_node_to_json(const toml::node& n) {
    if (const auto* t = n.as_table()) {
        Json j = Json::object();
        for (const auto& [k, v] : *t) j[std::string(k.str())] = toml_node_to_json(v);
        return j;
    }
    if (const auto* a = n.as_array()) {
        Json j = Json::array();
        for (const auto& v : *a) j.push_back(toml_node_to_json(v));
        return j;
    }
    if (const auto* s = n.as_string()) return s->get();
    if (const auto* i = n.as_integer()) return i->get();
    if (const auto* f = n.as_floating_point()) return f->get();
    if (const auto* b = n.as_boolean()) return b->get();
    throw FormatError("toml: dates and times are not supported");
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

Vec3 vec3_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 3) throw FormatError("expected a 3-element array");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Vec2 vec2_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2) throw FormatError("expected a 2-element array");
    return {j[0].get<double>(), j[1].get<double>()};
}

Json landmarks_json(const std::vector<Landmark>& ls) {
    Json arr = Json::array();
    for (const Landmark& l : ls)
        arr.push_back({{"p", {l.position.x(), l.position.y(), l.position.z()}}, {"c", l.label}});
    return arr;
}

std::vector<Landmark> landmarks_from(const Json& j) {
    if (!j.is_array()) throw FormatError("\"landmarks\" must be an array");
    std::vector<Landmark> out;
    out.reserve(j.size());
    for (const Json& e : j) out.push_back({vec3_from_json(e.at("p")), e.at("c").get<std::string>()});
    return out;
}

template <class F>
auto guarded(const char* what, F&& f) {
    try {
        return f();
    } catch (const Json::exception& e) {
        throw FormatError(std::string(what) + ": " + e.what());
    }
}

}  // namespace

Json parse_toml(const std::string& text) {
    try {
        const toml::table t = toml::parse(text);
        return toml_node_to_json(t);
    } catch (const toml::parse_error& e) {
        throw FormatError(std::string("toml: ") + std::string(e.description()));
    }
}

Json load_document(const std::string& path) {
    const std::string text = read_text(path);
    if (ends_with(path, ".toml")) return parse_toml(text);
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw FormatError("json '" + path + "': " + e.what());
    }
}

void write_json(const std::string& path, const Json& doc) { write_text(path, doc.dump(2) + "\n"); }

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json mat3_to_json(const Mat3& m) {
    Json j = Json::array();
    for (int r = 0; r < 3; ++r) j.push_back({m(r, 0), m(r, 1), m(r, 2)});
    return j;
}

Mat3 mat3_from_json(const Json& j) {
    return guarded("3x3 matrix", [&] {
        if (!j.is_array() || j.size() != 3) throw FormatError("expected a 3x3 nested array");
        Mat3 m;
        for (int r = 0; r < 3; ++r) {
            if (!j[r].is_array() || j[r].size() != 3) throw FormatError("expected a 3x3 nested array");
            for (int c = 0; c < 3; ++c) m(r, c) = j[r][c].get<double>();
        }
        return m;
    });
}

Json pose_to_json(const Pose& t) {
    return {{"R", mat3_to_json(t.rotation.matrix())},
            {"t", {t.translation.x(), t.translation.y(), t.translation.z()}}};
}

Pose pose_from_json(const Json& j) {
    return guarded("pose", [&] {
        return Pose{Rotation::from_matrix(mat3_from_json(j.at("R")), 1e-6), vec3_from_json(j.at("t"))};
    });
}

Json homography_to_json(const Homography& h) {
    return {{"H", mat3_to_json(h.matrix())}, {"norm", h.norm() == HomographyNorm::UnitLowerRight ? "h33" : "det1"}};
}

Homography homography_from_json(const Json& j) {
    return guarded("homography", [&] {
        const std::string norm = j.value("norm", "h33");
        if (norm != "h33" && norm != "det1") throw FormatError("homography: norm must be h33 or det1");
        return normalize_homography(mat3_from_json(j.at("H")),
                                    norm == "h33" ? HomographyNorm::UnitLowerRight : HomographyNorm::UnitDeterminant);
    });
}

Json map_to_json(const LandmarkMap& map) { return {{"labels", map.labels}, {"landmarks", landmarks_json(map.landmarks)}}; }

LandmarkMap map_from_json(const Json& j) {
    return guarded("map", [&] {
        LandmarkMap m;
        m.labels = j.at("labels").get<std::vector<std::string>>();
        m.landmarks = landmarks_from(j.at("landmarks"));
        return m;
    });
}

Json observations_to_json(const std::vector<Landmark>& obs) { return {{"landmarks", landmarks_json(obs)}}; }

std::vector<Landmark> observations_from_json(const Json& j) {
    return guarded("observations", [&] { return landmarks_from(j.at("landmarks")); });
}

Json matches_to_json(const std::vector<Match2D>& matches) {
    Json arr = Json::array();
    for (const Match2D& m : matches) arr.push_back({{"p", {m.p.x(), m.p.y()}}, {"q", {m.q.x(), m.q.y()}}});
    return {{"matches", arr}};
}

std::vector<Match2D> matches_from_json(const Json& j) {
    return guarded("matches", [&] {
        std::vector<Match2D> out;
        for (const Json& e : j.at("matches")) out.push_back({vec2_from_json(e.at("p")), vec2_from_json(e.at("q"))});
        return out;
    });
}

Json stitch_report_to_json(const StitchReport& r) {
    Json samples = Json::array();
    for (double v : r.sre_samples) samples.push_back(number_or_null(v));
    const ClapDiagnostics& d = r.diagnostics;
    const Bounds& c = r.canvas;
    return {
        {"H", mat3_to_json(r.homography.matrix())},
        {"sre_mean", number_or_null(r.sre_mean)},
        {"sre_samples", samples},
        {"inlier_ratio", r.inlier_ratio},
        {"survivors_per_round", d.per_round_counts},
        {"fallback_pairs", d.fallback_pairs},
        {"candidates", d.candidate_count},
        {"survivor_spread", number_or_null(d.survivor_spread)},
        {"secondary_support", d.secondary_support},
        {"ambiguous", d.ambiguous},
        {"refined", d.refined},
        {"canvas", {{"x0", c.x0}, {"y0", c.y0}, {"width", c.width}, {"height", c.height}}},
        {"canvas_clamped", r.canvas_clamped},
    };
}

}  // namespace clap::io
