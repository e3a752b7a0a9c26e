#include "clap/clustering.hpp"

#include "clap/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

namespace clap {

void ClusterConfig::validate() const {
    if (!(trim_fraction >= 0.0 && trim_fraction < 1.0)) throw InvalidArgument("trim_fraction must be in [0, 1)");
    if (rounds < 1) throw InvalidArgument("rounds must be >= 1");
    if (!(mad_k >= 0.0)) throw InvalidArgument("mad_k must be >= 0");
    if (mode == ClusterMode::Local && !(tol_t > 0.0 && tol_r > 0.0))
        throw InvalidArgument("local tolerances must be > 0");
}

std::size_t medoid(const DistanceMatrix& d, std::span<const std::size_t> subset) {
    if (subset.empty()) throw InvalidArgument("medoid of an empty set");
    std::size_t best = subset[0];
    double best_sum = std::numeric_limits<double>::infinity();
    for (std::size_t i : subset) {
        double sum = 0.0;
        for (std::size_t j : subset) sum += d(i, j);
        if (sum < best_sum || (sum == best_sum && i < best)) {
            best_sum = sum;
            best = i;
        }
    }
    return best;
}

std::size_t medoid(const DistanceMatrix& d) {
    std::vector<std::size_t> all(d.size());
    std::iota(all.begin(), all.end(), 0);
    return medoid(d, all);
}

std::size_t trimmed_count(std::size_t count, double trim_fraction) {
    if (count <= 2) return count;
    // The epsilon absorbs representation error in f * count (0.2 * 205 must
    // discard exactly 41).
    const auto discard = static_cast<std::size_t>(std::floor(trim_fraction * static_cast<double>(count) + 1e-9));
    return std::max<std::size_t>(2, count - std::min(discard, count));
}

ClusterResult trim_iterate(const DistanceMatrix& d, const ClusterConfig& cfg) {
    cfg.validate();
    if (d.size() == 0) throw InvalidArgument("trim_iterate: no candidates");
    ClusterResult result;
    result.fallback_pairs = d.fallback_pairs;
    std::vector<std::size_t> survivors(d.size());
    std::iota(survivors.begin(), survivors.end(), 0);
    result.per_round_counts.push_back(survivors.size());

    for (int round = 0; round < cfg.rounds; ++round) {
        const std::size_t keep = trimmed_count(survivors.size(), cfg.trim_fraction);
        if (keep < survivors.size()) {
            const std::size_t center = medoid(d, survivors);
            std::vector<std::pair<double, std::size_t>> ranked;
            ranked.reserve(survivors.size());
            for (std::size_t i : survivors) ranked.emplace_back(d(center, i), i);
            std::sort(ranked.begin(), ranked.end());
            survivors.clear();
            for (std::size_t k = 0; k < keep; ++k) survivors.push_back(ranked[k].second);
            std::sort(survivors.begin(), survivors.end());
        }
        result.per_round_counts.push_back(survivors.size());
    }
    result.center_index = medoid(d, survivors);
    result.survivors = std::move(survivors);
    return result;
}

namespace {

double median_of(std::vector<double> v) {
    const std::size_t n = v.size();
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(v.begin(), mid, v.end());
    const double upper = *mid;
    if (n % 2 == 1) return upper;
    const double lower = *std::max_element(v.begin(), mid);
    return 0.5 * (lower + upper);
}

}  // namespace

std::vector<std::size_t> mad_filter(std::span<const double> distances_to_center, double k) {
    if (distances_to_center.empty()) return {};
    if (!(k > 0.0)) throw InvalidArgument("mad_filter: k must be > 0");
    const std::vector<double> dist(distances_to_center.begin(), distances_to_center.end());
    const double m = median_of(dist);
    std::vector<double> dev;
    dev.reserve(dist.size());
    for (double x : dist) dev.push_back(std::abs(x - m));
    const double mad = median_of(dev);
    const double limit = mad < 1e-12 ? m + 1e-12 : m + k * mad;
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < dist.size(); ++i)
        if (dist[i] <= limit) keep.push_back(i);
    return keep;
}

ClusterResult cluster_candidates(const DistanceMatrix& d, const ClusterConfig& cfg) {
    ClusterResult r = trim_iterate(d, cfg);
    if (cfg.mad_k > 0.0 && r.survivors.size() > 2) {
        std::vector<double> dist;
        dist.reserve(r.survivors.size());
        for (std::size_t i : r.survivors) dist.push_back(d(r.center_index, i));
        const std::vector<std::size_t> keep = mad_filter(dist, cfg.mad_k);
        if (keep.size() >= 1 && keep.size() < r.survivors.size()) {
            std::vector<std::size_t> kept;
            kept.reserve(keep.size());
            for (std::size_t k : keep) kept.push_back(r.survivors[k]);
            r.mad_removed = r.survivors.size() - kept.size();
            r.survivors = std::move(kept);
            r.center_index = medoid(d, r.survivors);
        }
    }
    return r;
}

std::vector<std::size_t> local_filter(std::span<const PoseCandidate> candidates, const Pose& reference, double tol_t,
                                      double tol_r, double lambda) {
    if (!(tol_t > 0.0 && tol_r > 0.0)) throw InvalidArgument("local_filter: tolerances must be > 0");
    std::vector<std::pair<double, std::size_t>> ranked;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const TransformError e = relative_transform_error(reference, candidates[i].pose);
        if (e.translation <= tol_t && e.rotation <= tol_r)
            ranked.emplace_back(e.translation + lambda * e.rotation, i);
    }
    if (ranked.empty()) throw EmptyAfterFilter("local_filter: no candidate within tolerance of the reference");
    std::sort(ranked.begin(), ranked.end());
    std::vector<std::size_t> out;
    out.reserve(ranked.size());
    for (const auto& r : ranked) out.push_back(r.second);
    return out;
}

}  // namespace clap
