#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "apc/ensemble.hpp"

namespace apc {
namespace {

enum Slot : std::size_t {
  kHybrid = kNumRecommenders,
  kLogPopularity,
  kIdf,
  kSeedArtistOverlap,
  kSeedAlbumOverlap,
  kSeedCooccurrence,
  kSeedLength,
  kScenarioBase,
};
static_assert(kScenarioBase + kNumScenarios == kNumFeatures);

std::vector<std::string> make_names() {
  std::vector<std::string> names;
  for (auto r : kAllRecommenders) names.emplace_back(recommender_name(r));
  for (const char* n : {"hybrid", "log_popularity", "idf", "seed_artist_overlap", "seed_album_overlap",
                        "seed_cooccurrence", "seed_length"}) {
    names.emplace_back(n);
  }
  for (auto s : kAllScenarios) names.push_back("scenario_" + scenario_tag(s));
  return names;
}

}  // namespace

std::span<const std::string> feature_names() {
  static const std::vector<std::string> names = make_names();
  return names;
}

std::vector<FeatureVector> candidate_features(const ChallengePlaylist& seed, const CandidatePool& pool,
                                              const FirstStageModels& models, const Corpus& corpus) {
  const auto& catalog = corpus.catalog();
  const auto seeds = seed.seed_set();

  std::unordered_map<ArtistId, double> artist_count;
  std::unordered_map<AlbumId, double> album_count;
  for (auto s : seeds) {
    if (s >= catalog.num_tracks()) continue;
    artist_count[catalog.artist_of(s)] += 1.0;
    album_count[catalog.album_of(s)] += 1.0;
  }

  // Co-occurrence counts with the seeds, recovered from the stored cosines.
  std::unordered_map<TrackId, double> cooccurrence;
  for (auto s : seeds) {
    if (s >= models.item_index.num_tracks()) continue;
    const double df_s = corpus.track_df(s);
    for (const auto& nb : models.item_index.neighbors(s)) {
      const double df_t = corpus.track_df(nb.track);
      cooccurrence[nb.track] += std::round(nb.similarity * std::sqrt(df_s * df_t));
    }
  }

  const std::size_t fill_count = pool.size() - pool.fill_begin;
  std::vector<FeatureVector> out(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const auto t = pool.tracks[i];
    auto& f = out[i];
    f.fill(0.0);
    for (std::size_t r = 0; r < kNumRecommenders; ++r) f[r] = pool.components[i][r];
    f[kHybrid] = i < pool.fill_begin
                     ? pool.blended[i]
                     : -static_cast<double>(i - pool.fill_begin + 1) / static_cast<double>(fill_count + 1);
    f[kLogPopularity] = std::log1p(static_cast<double>(corpus.track_pop(t)));
    f[kIdf] = t < models.idf.size() ? models.idf[t] : 0.0;
    if (auto it = artist_count.find(catalog.artist_of(t)); it != artist_count.end()) f[kSeedArtistOverlap] = it->second;
    if (auto it = album_count.find(catalog.album_of(t)); it != album_count.end()) f[kSeedAlbumOverlap] = it->second;
    if (auto it = cooccurrence.find(t); it != cooccurrence.end()) f[kSeedCooccurrence] = it->second;
    f[kSeedLength] = static_cast<double>(seed.seeds.size());
    f[kScenarioBase + scenario_index(seed.scenario)] = 1.0;
  }
  return out;
}

}  // namespace apc
