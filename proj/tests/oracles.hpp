#pragma once

// Reference implementations written straight from the metric and similarity
// definitions, sharing no code with the library.

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

namespace apc::oracle {

// R-precision over raw ids: gt_artist maps each ground-truth track to its
// artist, artist_of maps any track to its artist.
template <typename ArtistOf>
double r_precision(const std::vector<unsigned>& predicted, const std::vector<unsigned>& gt,
                   ArtistOf artist_of) {
  std::set<unsigned> g_t(gt.begin(), gt.end());
  std::set<unsigned> g_a;
  for (unsigned t : g_t) g_a.insert(artist_of(t));
  std::set<unsigned> s_t, s_a;
  for (std::size_t i = 0; i < predicted.size() && i < g_t.size(); ++i) {
    s_t.insert(predicted[i]);
    s_a.insert(artist_of(predicted[i]));
  }
  double track_hits = 0, artist_hits = 0;
  for (unsigned t : s_t) track_hits += g_t.count(t);
  for (unsigned a : s_a) artist_hits += g_a.count(a);
  return (track_hits + 0.25 * artist_hits) / static_cast<double>(g_t.size());
}

inline double ndcg(const std::vector<unsigned>& predicted, const std::vector<unsigned>& gt) {
  std::set<unsigned> g(gt.begin(), gt.end());
  double dcg = 0;
  int rank = 1;
  for (unsigned t : predicted) {
    if (g.count(t)) dcg += 1.0 / std::log2(rank + 1.0);
    ++rank;
  }
  const std::size_t ideal_hits = std::min(g.size(), predicted.size());
  double idcg = 0;
  for (std::size_t k = 1; k <= ideal_hits; ++k) idcg += 1.0 / std::log2(static_cast<double>(k) + 1.0);
  return idcg == 0 ? 0.0 : dcg / idcg;
}

inline int clicks(const std::vector<unsigned>& predicted, const std::vector<unsigned>& gt) {
  std::set<unsigned> g(gt.begin(), gt.end());
  auto it = std::find_if(predicted.begin(), predicted.end(), [&](unsigned t) { return g.count(t) > 0; });
  if (it == predicted.end()) return 51;
  const long rank = (it - predicted.begin()) + 1;
  return static_cast<int>((rank - 1) / 10);
}

// Playlists as track lists (duplicates allowed); cosine over binary
// playlist-occurrence vectors.
inline double item_cosine(const std::vector<std::vector<unsigned>>& playlists, unsigned a, unsigned b) {
  double dot = 0, na = 0, nb = 0;
  for (const auto& p : playlists) {
    const bool ha = std::find(p.begin(), p.end(), a) != p.end();
    const bool hb = std::find(p.begin(), p.end(), b) != p.end();
    dot += ha && hb;
    na += ha;
    nb += hb;
  }
  return na == 0 || nb == 0 ? 0.0 : dot / std::sqrt(na * nb);
}

inline double idf(const std::vector<std::vector<unsigned>>& playlists, unsigned t) {
  double df = 0;
  for (const auto& p : playlists) df += std::find(p.begin(), p.end(), t) != p.end();
  return std::log(1.0 + static_cast<double>(playlists.size()) / df);
}

// Exhaustive item-CF: score(t) = idf(t) * sum_s cos(t, s) for every
// non-seed track reachable through a positive cosine; best n by score
// descending, id ascending.
inline std::vector<std::pair<unsigned, double>> item_cf(const std::vector<std::vector<unsigned>>& playlists,
                                                        unsigned n_tracks, const std::vector<unsigned>& seeds,
                                                        std::size_t n) {
  std::set<unsigned> seed_set(seeds.begin(), seeds.end());
  std::vector<std::pair<unsigned, double>> scored;
  for (unsigned t = 0; t < n_tracks; ++t) {
    if (seed_set.count(t)) continue;
    double sum = 0;
    bool reached = false;
    for (unsigned s : seed_set) {
      const double c = item_cosine(playlists, t, s);
      if (c > 0) {
        reached = true;
        sum += c;
      }
    }
    if (reached) scored.emplace_back(t, idf(playlists, t) * sum);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& x, const auto& y) {
    if (x.second != y.second) return x.second > y.second;
    return x.first < y.first;
  });
  if (scored.size() > n) scored.resize(n);
  return scored;
}

}  // namespace apc::oracle
