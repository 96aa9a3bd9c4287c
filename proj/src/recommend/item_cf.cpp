#include <algorithm>
#include <cmath>

#include "apc/error.hpp"
#include "apc/parallel.hpp"
#include "apc/recommend.hpp"

namespace apc {

double item_cosine(const Corpus& corpus, TrackId a, TrackId b) {
  const auto pa = corpus.playlists_with(a);
  const auto pb = corpus.playlists_with(b);
  if (pa.empty() || pb.empty()) return 0.0;
  std::size_t common = 0;
  for (auto i = pa.begin(), j = pb.begin(); i != pa.end() && j != pb.end();) {
    if (*i < *j) ++i;
    else if (*j < *i) ++j;
    else {
      ++common;
      ++i;
      ++j;
    }
  }
  return static_cast<double>(common) /
         std::sqrt(static_cast<double>(pa.size()) * static_cast<double>(pb.size()));
}

ItemSimilarityIndex ItemSimilarityIndex::build(const Corpus& corpus, std::size_t max_neighbors, unsigned threads) {
  const auto n_tracks = corpus.num_tracks();
  corpus.columns();  // materialize before workers read it

  std::vector<std::vector<Neighbor>> lists(n_tracks);
  parallel_chunks(n_tracks, threads, [&](std::size_t, std::size_t begin, std::size_t end) {
    std::vector<std::uint32_t> co(n_tracks, 0);
    std::vector<TrackId> touched;
    for (std::size_t ti = begin; ti < end; ++ti) {
      const auto t = static_cast<TrackId>(ti);
      touched.clear();
      for (auto p : corpus.playlists_with(t)) {
        for (auto s : corpus.unique_tracks(p)) {
          if (s == t) continue;
          if (co[s]++ == 0) touched.push_back(s);
        }
      }
      auto& list = lists[t];
      list.reserve(touched.size());
      const double df_t = corpus.track_df(t);
      for (auto s : touched) {
        list.push_back({s, static_cast<double>(co[s]) / std::sqrt(df_t * static_cast<double>(corpus.track_df(s)))});
        co[s] = 0;
      }
      auto better = [](const Neighbor& a, const Neighbor& b) {
        if (a.similarity != b.similarity) return a.similarity > b.similarity;
        return a.track < b.track;
      };
      if (max_neighbors > 0 && list.size() > max_neighbors) {
        std::partial_sort(list.begin(), list.begin() + static_cast<std::ptrdiff_t>(max_neighbors), list.end(),
                          better);
        list.resize(max_neighbors);
      } else {
        std::ranges::sort(list, better);
      }
      list.shrink_to_fit();
    }
  });

  ItemSimilarityIndex index;
  index.max_neighbors_ = max_neighbors;
  index.offsets_.assign(1, 0);
  for (const auto& list : lists) {
    index.entries_.insert(index.entries_.end(), list.begin(), list.end());
    index.offsets_.push_back(index.entries_.size());
  }
  return index;
}

Recommendation recommend_item_cf(const ChallengePlaylist& seed, const ItemSimilarityIndex& index,
                                 const Corpus& corpus, std::size_t n, std::span<const double> idf) {
  const auto seeds = seed.seed_set();
  if (seeds.empty()) {
    throw EmptySeedError("item-based CF needs at least one seed track (pid " + std::to_string(seed.pid) + ")");
  }
  std::vector<double> own_idf;
  if (idf.empty()) {
    own_idf = idf_table(corpus);
    idf = own_idf;
  }
  ScoreAccumulator acc(corpus.num_tracks());
  for (auto s : seeds) {
    if (s >= index.num_tracks()) continue;
    for (const auto& nb : index.neighbors(s)) acc.add(nb.track, nb.similarity);
  }
  return select_top(acc.collect(idf), n, seeds);
}

}  // namespace apc
