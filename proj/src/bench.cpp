#include "clap/config.hpp"
#include "clap/error.hpp"
#include "clap/harness.hpp"
#include "clap/io.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>
#include <thread>

namespace clap {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::uint64_t scene_seed(std::uint64_t base, std::uint64_t run_seed) {
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(base ^ mix(run_seed));
}

BenchSpec load_bench_spec(const std::string& path) {
    const io::Json doc = io::load_document(path);
    const std::filesystem::path dir = std::filesystem::path(path).parent_path();
    BenchSpec spec;
    try {
        if (doc.contains("methods")) spec.methods = doc.at("methods").get<std::vector<std::string>>();
        if (doc.contains("seeds")) {
            spec.seeds = doc.at("seeds").get<std::vector<std::uint64_t>>();
        } else if (doc.contains("seed_count")) {
            const auto n = doc.at("seed_count").get<std::uint64_t>();
            const auto base = doc.value("seed_base", std::uint64_t{0});
            spec.seeds.clear();
            for (std::uint64_t i = 0; i < n; ++i) spec.seeds.push_back(base + i);
        }
        spec.threads = doc.value("threads", std::size_t{1});
        spec.sre_threshold = doc.value("sre_threshold", 2.0);
        if (doc.contains("clap")) spec.clap = stitch_config_from(doc.at("clap"));
        if (doc.contains("ransac")) spec.ransac = ransac_config_from(io::Json{{"ransac", doc.at("ransac")}});
        if (!doc.contains("scenes") || !doc.at("scenes").is_array()) throw FormatError("bench spec: missing [[scenes]]");
        std::size_t k = 0;
        for (const io::Json& s : doc.at("scenes")) {
            ++k;
            BenchScene sc;
            char id[16];
            std::snprintf(id, sizeof id, "S%02zu", k);
            sc.id = s.value("id", std::string(id));
            if (s.contains("matches")) {
                sc.synthetic = false;
                std::filesystem::path mp = s.at("matches").get<std::string>();
                if (mp.is_relative()) mp = dir / mp;
                sc.matches_path = mp.string();
                sc.has_gt = s.contains("gt");
                if (sc.has_gt) sc.gt = normalize_homography(io::mat3_from_json(s.at("gt")), HomographyNorm::UnitLowerRight);
                if (s.value("has_gt", sc.has_gt) && !sc.gt)
                    throw FormatError("bench spec: scene '" + sc.id + "' declares has_gt but gives no gt matrix");
            } else {
                SynthMatchParams& p = sc.params;
                p.n_matches = s.value("n_matches", p.n_matches);
                p.outlier_fraction = s.value("outlier_fraction", p.outlier_fraction);
                p.noise_sigma = s.value("noise_sigma", p.noise_sigma);
                if (s.contains("image_size")) {
                    const auto sz = s.at("image_size").get<std::vector<int>>();
                    if (sz.size() != 2) throw FormatError("bench spec: image_size must be [w, h]");
                    p.width = sz[0];
                    p.height = sz[1];
                }
                p.gt_homography_spread = s.value("gt_homography_spread", p.gt_homography_spread);
                p.seed = s.value("seed", std::uint64_t(k));
                p.validate();
                sc.has_gt = s.value("has_gt", true);
            }
            spec.scenes.push_back(std::move(sc));
        }
    } catch (const io::Json::exception& e) {
        throw FormatError(std::string("bench spec: ") + e.what());
    }
    if (spec.threads == 0) spec.threads = 1;
    for (const std::string& m : spec.methods)
        if (m != "clap" && m != "ransac") throw InvalidArgument("bench spec: unknown method '" + m + "'");
    return spec;
}

EvalRecord run_cell(const BenchScene& scene, const std::vector<Match2D>& matches,
                    const std::optional<Homography>& gt, const std::string& method, std::uint64_t seed,
                    const BenchSpec& spec) {
    EvalRecord rec;
    rec.method = method;
    rec.scene_id = scene.id;
    rec.seed = seed;
    const auto start = std::chrono::steady_clock::now();
    try {
        Homography h;
        if (method == "clap") {
            StitchConfig cfg = spec.clap;
            cfg.seed = seed;
            h = clap_homography(matches, cfg).homography;
        } else if (method == "ransac") {
            RansacConfig cfg = spec.ransac;
            cfg.seed = seed;
            h = ransac_homography(matches, cfg).homography;
        } else {
            throw InvalidArgument("unknown method '" + method + "'");
        }
        rec.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        const std::vector<std::size_t> in = inliers_of(h, matches, spec.sre_threshold);
        rec.sre_mean = mean_sre(h, matches, in);
        rec.inlier_ratio = inlier_ratio(in.size(), matches.size());
        if (gt) rec.lie_distance_to_gt = lie_distance_to_gt(h, *gt);
        rec.ok = true;
    } catch (const std::exception& e) {
        rec.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        rec.ok = false;
        rec.error = e.what();
    }
    return rec;
}

std::vector<EvalRecord> run_bench(const BenchSpec& spec) {
    struct Input {
        std::vector<Match2D> matches;
        std::optional<Homography> gt;
        std::string error;
    };
    struct Cell {
        std::size_t scene, seed_pos;
        std::string method;
    };
    std::vector<Cell> cells;
    for (std::size_t s = 0; s < spec.scenes.size(); ++s)
        for (const std::string& m : spec.methods)
            for (std::size_t k = 0; k < spec.seeds.size(); ++k) cells.push_back({s, k, m});

    // Inputs per (scene, seed); external scenes share one loaded file.
    std::vector<std::vector<Input>> inputs(spec.scenes.size());
    for (std::size_t s = 0; s < spec.scenes.size(); ++s) {
        const BenchScene& sc = spec.scenes[s];
        if (sc.synthetic) {
            inputs[s].resize(spec.seeds.size());
            continue;
        }
        Input in;
        try {
            in.matches = io::matches_from_json(io::load_document(sc.matches_path));
            in.gt = sc.gt;
        } catch (const std::exception& e) {
            in.error = e.what();
        }
        inputs[s].assign(1, in);
    }
    auto input_for = [&](std::size_t s, std::size_t k) -> const Input& {
        return spec.scenes[s].synthetic ? inputs[s][k] : inputs[s][0];
    };
    {
        // Synthetic inputs are generated up front, in order.
        for (std::size_t s = 0; s < spec.scenes.size(); ++s) {
            const BenchScene& sc = spec.scenes[s];
            if (!sc.synthetic) continue;
            for (std::size_t k = 0; k < spec.seeds.size(); ++k) {
                Input& in = inputs[s][k];
                try {
                    SynthMatchParams p = sc.params;
                    p.seed = scene_seed(sc.params.seed, spec.seeds[k]);
                    SynthMatches sm = synth_matches_2d(p);
                    in.matches = std::move(sm.matches);
                    if (sc.has_gt) in.gt = sm.gt;
                } catch (const std::exception& e) {
                    in.error = e.what();
                }
            }
        }
    }

    std::vector<EvalRecord> records(cells.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            const Cell& c = cells[i];
            const BenchScene& sc = spec.scenes[c.scene];
            const Input& in = input_for(c.scene, c.seed_pos);
            if (!in.error.empty()) {
                EvalRecord r;
                r.method = c.method;
                r.scene_id = sc.id;
                r.seed = spec.seeds[c.seed_pos];
                r.error = in.error;
                records[i] = std::move(r);
                continue;
            }
            records[i] = run_cell(sc, in.matches, in.gt, c.method, spec.seeds[c.seed_pos], spec);
        }
    };
    const std::size_t n = std::max<std::size_t>(1, std::min(spec.threads, cells.size()));
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool) t.join();
    return records;
}

std::vector<HistogramBin> linear_histogram(const std::vector<double>& values, std::size_t bins, double lo, double hi) {
    if (bins == 0) throw InvalidArgument("histogram: need at least one bin");
    if (!(hi > lo)) hi = lo + 1.0;
    std::vector<HistogramBin> out(bins);
    const double width = (hi - lo) / double(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        out[b].lo = lo + width * double(b);
        out[b].hi = b + 1 == bins ? hi : lo + width * double(b + 1);
    }
    for (double v : values) {
        if (!std::isfinite(v) || v < lo || v > hi) continue;
        auto b = static_cast<std::size_t>((v - lo) / width);
        ++out[std::min(b, bins - 1)].count;
    }
    return out;
}

std::vector<HistogramBin> log_histogram(const std::vector<double>& values, std::size_t bins, double lo, double hi,
                                        double eps) {
    if (bins == 0) throw InvalidArgument("histogram: need at least one bin");
    if (!(lo + eps > 0.0)) throw InvalidArgument("histogram: log bins need lo + eps > 0");
    const double a = std::log10(lo + eps);
    double b = std::log10(hi + eps);
    if (!(b > a)) b = a + 1.0;
    std::vector<HistogramBin> out(bins);
    const double width = (b - a) / double(bins);
    for (std::size_t k = 0; k < bins; ++k) {
        out[k].lo = std::pow(10.0, a + width * double(k));
        out[k].hi = std::pow(10.0, k + 1 == bins ? b : a + width * double(k + 1));
    }
    for (double v : values) {
        if (!std::isfinite(v)) continue;
        const double l = std::log10(v + eps);
        if (!(l >= a && l <= b)) continue;
        auto k = static_cast<std::size_t>((l - a) / width);
        ++out[std::min(k, bins - 1)].count;
    }
    return out;
}

std::vector<std::pair<double, double>> empirical_cdf(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    std::vector<std::pair<double, double>> out;
    const double n = double(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i + 1 < values.size() && values[i + 1] == values[i]) continue;
        out.emplace_back(values[i], double(i + 1) / n);
    }
    return out;
}

namespace {

std::string csv_text(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

double median_of(std::vector<double> v) {
    if (v.empty()) return std::nan("");
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double mean_of(const std::vector<double>& v) {
    if (v.empty()) return std::nan("");
    double s = 0.0;
    for (double x : v) s += x;
    return s / double(v.size());
}

}  // namespace

BenchExports export_bench(const std::vector<EvalRecord>& records) {
    BenchExports e;
    std::ostringstream rec, tim;
    rec << "scene,method,seed,ok,lie_distance_to_gt,sre_mean,inlier_ratio,error\n";
    tim << "scene,method,seed,runtime_ms\n";
    std::vector<std::string> methods;
    std::vector<std::string> scenes;
    for (const EvalRecord& r : records) {
        rec << csv_text(r.scene_id) << ',' << r.method << ',' << r.seed << ',' << (r.ok ? 1 : 0) << ','
            << (r.ok && r.lie_distance_to_gt ? format_number(*r.lie_distance_to_gt) : "") << ','
            << (r.ok ? format_number(r.sre_mean) : "") << ',' << (r.ok ? format_number(r.inlier_ratio) : "") << ','
            << csv_text(r.error) << '\n';
        tim << csv_text(r.scene_id) << ',' << r.method << ',' << r.seed << ',' << format_number(r.runtime_ms) << '\n';
        if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) methods.push_back(r.method);
        if (std::find(scenes.begin(), scenes.end(), r.scene_id) == scenes.end()) scenes.push_back(r.scene_id);
    }
    e.records = rec.str();
    e.timings = tim.str();

    auto distances = [&](const std::string& m) {
        std::vector<double> v;
        for (const EvalRecord& r : records)
            if (r.method == m && r.ok && r.lie_distance_to_gt && std::isfinite(*r.lie_distance_to_gt))
                v.push_back(*r.lie_distance_to_gt);
        return v;
    };
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const std::string& m : methods)
        for (double v : distances(m)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    if (!std::isfinite(lo)) lo = hi = 0.0;

    constexpr std::size_t kBins = 50;
    constexpr double kEps = 1e-8;
    std::ostringstream hl, hg;
    hl << "method,bin,lo,hi,count\n";
    hg << "method,bin,lo,hi,count\n";
    for (const std::string& m : methods) {
        const std::vector<double> d = distances(m);
        const auto lin = linear_histogram(d, kBins, lo, hi);
        const auto lg = log_histogram(d, kBins, lo, hi, kEps);
        for (std::size_t b = 0; b < kBins; ++b) {
            hl << m << ',' << b << ',' << format_number(lin[b].lo) << ',' << format_number(lin[b].hi) << ','
               << lin[b].count << '\n';
            hg << m << ',' << b << ',' << format_number(lg[b].lo) << ',' << format_number(lg[b].hi) << ','
               << lg[b].count << '\n';
        }
    }
    e.hist_linear = hl.str();
    e.hist_log = hg.str();

    std::ostringstream ps;
    ps << "scene,method,runs,ok,mean_lie_distance,median_lie_distance,mean_sre,mean_inlier_ratio\n";
    for (const std::string& s : scenes)
        for (const std::string& m : methods) {
            std::size_t runs = 0, ok = 0;
            std::vector<double> d, sre, ir;
            for (const EvalRecord& r : records) {
                if (r.scene_id != s || r.method != m) continue;
                ++runs;
                if (!r.ok) continue;
                ++ok;
                if (r.lie_distance_to_gt && std::isfinite(*r.lie_distance_to_gt)) d.push_back(*r.lie_distance_to_gt);
                if (std::isfinite(r.sre_mean)) sre.push_back(r.sre_mean);
                ir.push_back(r.inlier_ratio);
            }
            if (runs == 0) continue;
            auto cell = [](double v) { return std::isnan(v) ? std::string() : format_number(v); };
            ps << csv_text(s) << ',' << m << ',' << runs << ',' << ok << ',' << cell(mean_of(d)) << ','
               << cell(median_of(d)) << ',' << cell(mean_of(sre)) << ',' << cell(mean_of(ir)) << '\n';
        }
    e.per_scene = ps.str();

    std::ostringstream cdf;
    cdf << "method,sre,fraction\n";
    for (const std::string& m : methods) {
        std::vector<double> v;
        for (const EvalRecord& r : records)
            if (r.method == m && r.ok && std::isfinite(r.sre_mean)) v.push_back(r.sre_mean);
        for (const auto& [x, f] : empirical_cdf(v)) cdf << m << ',' << format_number(x) << ',' << format_number(f) << '\n';
    }
    e.sre_cdf = cdf.str();
    return e;
}

void write_bench_exports(const BenchExports& e, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path d(out_dir);
    io::write_text((d / "records.csv").string(), e.records);
    io::write_text((d / "hist_linear.csv").string(), e.hist_linear);
    io::write_text((d / "hist_log.csv").string(), e.hist_log);
    io::write_text((d / "per_scene.csv").string(), e.per_scene);
    io::write_text((d / "sre_cdf.csv").string(), e.sre_cdf);
    io::write_text((d / "timings.csv").string(), e.timings);
}

}  // namespace clap
