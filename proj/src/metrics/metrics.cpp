#include <algorithm>
#include <cmath>
#include <numeric>

#include "apc/metrics.hpp"

namespace apc {
namespace {

void require_truth(const GroundTruthEntry& truth, const char* metric) {
  if (truth.tracks.empty()) {
    throw UndefinedMetricError(std::string(metric) + " is undefined for an empty ground truth");
  }
}

}  // namespace

double r_precision(std::span<const TrackId> predicted, const GroundTruthEntry& truth, const Catalog& catalog) {
  require_truth(truth, "R-precision");
  const auto window = predicted.first(std::min(predicted.size(), truth.tracks.size()));

  std::vector<TrackId> tracks;
  std::vector<ArtistId> artists;
  for (auto t : window) {
    if (t == kUnknownTrack || t >= catalog.num_tracks()) continue;
    tracks.push_back(t);
    artists.push_back(catalog.artist_of(t));
  }
  std::ranges::sort(tracks);
  tracks.erase(std::unique(tracks.begin(), tracks.end()), tracks.end());
  std::ranges::sort(artists);
  artists.erase(std::unique(artists.begin(), artists.end()), artists.end());

  const auto track_hits = std::ranges::count_if(tracks, [&](TrackId t) { return truth.contains(t); });
  const auto artist_hits =
      std::ranges::count_if(artists, [&](ArtistId a) { return std::ranges::binary_search(truth.artists, a); });
  return (static_cast<double>(track_hits) + kArtistCredit * static_cast<double>(artist_hits)) /
         static_cast<double>(truth.tracks.size());
}

double ndcg(std::span<const TrackId> predicted, const GroundTruthEntry& truth) {
  require_truth(truth, "NDCG");
  double dcg = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (truth.contains(predicted[i])) dcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
  }
  if (predicted.empty()) return 0.0;
  const std::size_t ideal = std::min(truth.tracks.size(), predicted.size());
  double idcg = 0.0;
  for (std::size_t i = 0; i < ideal; ++i) idcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
  return dcg / idcg;
}

int clicks(std::span<const TrackId> predicted, const GroundTruthEntry& truth) {
  require_truth(truth, "clicks");
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (truth.contains(predicted[i])) return static_cast<int>(i / kPageSize);
  }
  return kMissClicks;
}

PlaylistScore score_playlist(std::span<const TrackId> predicted, const GroundTruthEntry& truth,
                             const Catalog& catalog) {
  return {r_precision(predicted, truth, catalog), ndcg(predicted, truth), clicks(predicted, truth)};
}

std::vector<BordaEntry> borda_aggregate(const std::vector<std::pair<std::string, MetricMeans>>& reports) {
  std::vector<BordaEntry> out;
  out.reserve(reports.size());
  for (const auto& [name, means] : reports) out.push_back({name, means});

  // Fractional ranks: items sorted best first, tied runs share the mean of
  // their 1-based positions.
  auto assign = [&](auto value, bool higher_is_better, double BordaEntry::*rank) {
    std::vector<std::size_t> order(out.size());
    std::iota(order.begin(), order.end(), 0);
    std::ranges::stable_sort(order, [&](std::size_t a, std::size_t b) {
      return higher_is_better ? value(out[a]) > value(out[b]) : value(out[a]) < value(out[b]);
    });
    for (std::size_t i = 0; i < order.size();) {
      std::size_t j = i;
      while (j + 1 < order.size() && value(out[order[j + 1]]) == value(out[order[i]])) ++j;
      const double shared = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
      for (std::size_t k = i; k <= j; ++k) out[order[k]].*rank = shared;
      i = j + 1;
    }
  };
  assign([](const BordaEntry& e) { return e.means.r_precision; }, true, &BordaEntry::rank_r_precision);
  assign([](const BordaEntry& e) { return e.means.ndcg; }, true, &BordaEntry::rank_ndcg);
  assign([](const BordaEntry& e) { return e.means.clicks; }, false, &BordaEntry::rank_clicks);
  for (auto& e : out) e.rank_sum = e.rank_r_precision + e.rank_ndcg + e.rank_clicks;

  std::ranges::stable_sort(out, [](const BordaEntry& a, const BordaEntry& b) {
    if (a.rank_sum != b.rank_sum) return a.rank_sum < b.rank_sum;
    return a.name < b.name;
  });
  return out;
}

}  // namespace apc
