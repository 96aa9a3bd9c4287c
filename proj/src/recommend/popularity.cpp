#include <algorithm>

#include "apc/recommend.hpp"

namespace apc {

std::vector<TrackId> Recommendation::tracks() const {
  std::vector<TrackId> out;
  out.reserve(items.size());
  for (const auto& i : items) out.push_back(i.track);
  return out;
}

std::vector<ScoredTrack> ScoreAccumulator::collect(std::span<const double> weight) const {
  auto order = touched_;
  std::ranges::sort(order);
  std::vector<ScoredTrack> out;
  out.reserve(order.size());
  for (auto t : order) out.push_back({t, weight.empty() ? scores_[t] : scores_[t] * weight[t]});
  return out;
}

Recommendation select_top(std::vector<ScoredTrack> candidates, std::size_t n, std::span<const TrackId> excluded) {
  std::erase_if(candidates, [&](const ScoredTrack& c) { return std::ranges::binary_search(excluded, c.track); });
  auto better = [](const ScoredTrack& a, const ScoredTrack& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.track < b.track;
  };
  Recommendation rec;
  rec.short_list = candidates.size() < n;
  const auto keep = std::min(n, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep), candidates.end(),
                    better);
  candidates.resize(keep);
  rec.items = std::move(candidates);
  return rec;
}

Recommendation recommend_popularity(const ChallengePlaylist& seed, const Corpus& corpus, std::size_t n) {
  const auto seeds = seed.seed_set();
  Recommendation rec;
  if (n == 0) return rec;
  for (auto t : popularity_ranking(corpus)) {
    if (std::ranges::binary_search(seeds, t)) continue;
    rec.items.push_back({t, static_cast<double>(corpus.track_pop(t))});
    if (rec.items.size() == n) break;
  }
  rec.short_list = rec.items.size() < n;
  return rec;
}

}  // namespace apc
