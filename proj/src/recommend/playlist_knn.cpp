#include <algorithm>
#include <cmath>

#include "apc/error.hpp"
#include "apc/recommend.hpp"

namespace apc {

Recommendation recommend_playlist_knn(const ChallengePlaylist& seed, const Corpus& corpus, std::size_t k_neighbors,
                                      std::size_t n, std::span<const double> idf) {
  const auto seeds = seed.seed_set();
  if (seeds.empty()) {
    throw EmptySeedError("playlist kNN needs at least one seed track (pid " + std::to_string(seed.pid) + ")");
  }
  std::vector<double> own_idf;
  if (idf.empty()) {
    own_idf = idf_table(corpus);
    idf = own_idf;
  }

  std::vector<std::uint32_t> overlap(corpus.num_playlists(), 0);
  std::vector<PlaylistId> touched;
  for (auto s : seeds) {
    if (s >= corpus.num_tracks()) continue;
    for (auto p : corpus.playlists_with(s)) {
      if (overlap[p]++ == 0) touched.push_back(p);
    }
  }

  struct Similar {
    PlaylistId row;
    double cos;
  };
  std::vector<Similar> similar;
  similar.reserve(touched.size());
  const double seed_size = static_cast<double>(seeds.size());
  for (auto p : touched) {
    const double len = static_cast<double>(corpus.unique_tracks(p).size());
    similar.push_back({p, static_cast<double>(overlap[p]) / std::sqrt(seed_size * len)});
  }
  auto better = [](const Similar& a, const Similar& b) {
    if (a.cos != b.cos) return a.cos > b.cos;
    return a.row < b.row;
  };
  const auto keep = std::min(k_neighbors, similar.size());
  std::partial_sort(similar.begin(), similar.begin() + static_cast<std::ptrdiff_t>(keep), similar.end(), better);
  similar.resize(keep);

  ScoreAccumulator acc(corpus.num_tracks());
  for (const auto& q : similar) {
    for (auto t : corpus.unique_tracks(q.row)) acc.add(t, q.cos);
  }
  return select_top(acc.collect(idf), n, seeds);
}

}  // namespace apc
