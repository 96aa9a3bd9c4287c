#include <algorithm>
#include <cmath>

#include "apc/ensemble.hpp"
#include "apc/error.hpp"

namespace apc {

std::string_view recommender_name(Recommender r) {
  switch (r) {
    case Recommender::kItemCf: return "item_cf";
    case Recommender::kPlaylistKnn: return "playlist_knn";
    case Recommender::kMf: return "mf";
    case Recommender::kTitle: return "title";
  }
  return "?";
}

std::optional<Recommender> parse_recommender(std::string_view name) {
  for (auto r : kAllRecommenders) {
    if (recommender_name(r) == name) return r;
  }
  return std::nullopt;
}

HybridConfig HybridConfig::defaults() {
  HybridConfig c;
  auto set = [&](ScenarioType s, BlendWeights w) { c.weights[scenario_index(s)] = w; };
  //                                     item_cf  knn   mf   title
  set(ScenarioType::kTitleOnly,          {0.0,  0.0,  0.0, 1.0});
  set(ScenarioType::kTitleFirst5,        {0.30, 0.35, 0.15, 0.20});
  set(ScenarioType::kFirst5,             {0.35, 0.45, 0.20, 0.0});
  set(ScenarioType::kTitleFirst10,       {0.35, 0.35, 0.20, 0.10});
  set(ScenarioType::kFirst10,            {0.40, 0.40, 0.20, 0.0});
  set(ScenarioType::kTitleFirst25,       {0.40, 0.30, 0.25, 0.05});
  set(ScenarioType::kTitleRandom25,      {0.40, 0.30, 0.25, 0.05});
  set(ScenarioType::kTitleFirst100,      {0.45, 0.25, 0.30, 0.0});
  set(ScenarioType::kTitleRandom100,     {0.45, 0.25, 0.30, 0.0});
  set(ScenarioType::kTitleFirst1,        {0.25, 0.35, 0.10, 0.30});
  return c;
}

bool HybridConfig::routed(ScenarioType s, Recommender r) const {
  if (s == ScenarioType::kTitleOnly) return r == Recommender::kTitle;
  if (r == Recommender::kTitle && !traits(s).has_title) return false;
  return weights[scenario_index(s)][static_cast<std::size_t>(r)] > 0.0;
}

double HybridConfig::weight(ScenarioType s, Recommender r) const {
  if (!routed(s, r)) return 0.0;
  if (s == ScenarioType::kTitleOnly) return 1.0;
  return weights[scenario_index(s)][static_cast<std::size_t>(r)];
}

void HybridConfig::validate() const {
  if (normalization != "minmax" && normalization != "none") {
    throw ConfigError("hybrid: unknown normalization \"" + normalization + "\" (expected minmax or none)");
  }
  if (pool_size == 0) throw ConfigError("hybrid: pool_size must be positive");
  if (knn_neighbors == 0) throw ConfigError("hybrid: knn_neighbors must be positive");
  for (auto s : kAllScenarios) {
    double total = 0.0;
    for (auto r : kAllRecommenders) {
      const double w = weights[scenario_index(s)][static_cast<std::size_t>(r)];
      if (!std::isfinite(w) || w < 0.0) {
        throw ConfigError("hybrid: weight " + std::string(recommender_name(r)) + " for " + scenario_tag(s) +
                          " must be finite and >= 0");
      }
      total += weight(s, r);
    }
    if (!(total > 0.0)) throw ConfigError("hybrid: scenario " + scenario_tag(s) + " routes to no recommender");
  }
}

FirstStageModels FirstStageModels::train(const Corpus& corpus, const FirstStageParams& params) {
  FirstStageModels m;
  m.item_index = ItemSimilarityIndex::build(corpus, params.item_neighbors, params.threads);
  auto mf = params.mf;
  mf.threads = params.threads;
  m.mf = train_wrmf(corpus, mf);
  auto title = params.title;
  title.mf.threads = params.threads;
  m.titles = TitleIndex::build(corpus, title);
  m.refresh(corpus);
  return m;
}

void FirstStageModels::refresh(const Corpus& corpus) {
  idf = idf_table(corpus);
  popularity = popularity_ranking(corpus);
}

std::vector<double> minmax_normalize(std::span<const ScoredTrack> items) {
  std::vector<double> out(items.size(), 1.0);
  if (items.empty()) return out;
  auto [lo, hi] = std::ranges::minmax(items, {}, &ScoredTrack::score);
  const double range = hi.score - lo.score;
  if (!(range > 0.0)) return out;
  for (std::size_t i = 0; i < items.size(); ++i) out[i] = (items[i].score - lo.score) / range;
  return out;
}

CandidatePool build_pool(const ChallengePlaylist& seed, const FirstStageModels& models, const HybridConfig& config,
                         const Corpus& corpus, std::size_t size) {
  const auto n_tracks = corpus.num_tracks();
  const auto depth = std::max(size, config.pool_size);
  const auto seeds = seed.seed_set();

  std::vector<BlendWeights> comp(n_tracks, BlendWeights{});
  std::vector<double> blended(n_tracks, 0.0);
  std::vector<bool> seen(n_tracks, false);
  std::vector<TrackId> touched;

  for (auto r : kAllRecommenders) {
    const double w = config.weight(seed.scenario, r);
    if (w <= 0.0) continue;
    if (r != Recommender::kTitle && seeds.empty()) continue;
    Recommendation rec;
    switch (r) {
      case Recommender::kItemCf: rec = recommend_item_cf(seed, models.item_index, corpus, depth, models.idf); break;
      case Recommender::kPlaylistKnn:
        rec = recommend_playlist_knn(seed, corpus, config.knn_neighbors, depth, models.idf);
        break;
      case Recommender::kMf: rec = recommend_mf(seed, models.mf, corpus, depth, models.idf); break;
      case Recommender::kTitle: rec = recommend_title(seed, models.titles, corpus, depth, models.idf); break;
    }
    std::vector<double> norm;
    if (config.normalization == "minmax") {
      norm = minmax_normalize(rec.items);
    } else {
      norm.reserve(rec.items.size());
      for (const auto& it : rec.items) norm.push_back(it.score);
    }
    for (std::size_t i = 0; i < rec.items.size(); ++i) {
      const auto t = rec.items[i].track;
      if (!seen[t]) {
        seen[t] = true;
        touched.push_back(t);
      }
      comp[t][static_cast<std::size_t>(r)] = norm[i];
      blended[t] += w * norm[i];
    }
  }

  std::ranges::sort(touched, [&](TrackId a, TrackId b) {
    if (blended[a] != blended[b]) return blended[a] > blended[b];
    return a < b;
  });
  if (touched.size() > size) touched.resize(size);

  CandidatePool pool;
  pool.tracks.reserve(size);
  for (auto t : touched) {
    pool.tracks.push_back(t);
    pool.components.push_back(comp[t]);
    pool.blended.push_back(blended[t]);
  }
  pool.fill_begin = pool.tracks.size();

  std::vector<bool> in_pool(n_tracks, false);
  for (auto t : pool.tracks) in_pool[t] = true;
  for (auto t : models.popularity) {
    if (pool.tracks.size() >= size) break;
    if (t >= n_tracks || in_pool[t] || std::ranges::binary_search(seeds, t)) continue;
    in_pool[t] = true;
    pool.tracks.push_back(t);
    pool.components.push_back(BlendWeights{});
    pool.blended.push_back(-static_cast<double>(pool.tracks.size() - pool.fill_begin));
  }
  return pool;
}

Recommendation recommend_hybrid(const ChallengePlaylist& seed, const FirstStageModels& models,
                                const HybridConfig& config, const Corpus& corpus, std::size_t n) {
  const auto pool = build_pool(seed, models, config, corpus, n);
  if (pool.size() < n) {
    throw CatalogTooSmallError("hybrid: only " + std::to_string(pool.size()) + " candidate tracks for pid " +
                               std::to_string(seed.pid) + ", " + std::to_string(n) + " required");
  }
  Recommendation rec;
  rec.items.reserve(n);
  for (std::size_t i = 0; i < n; ++i) rec.items.push_back({pool.tracks[i], pool.blended[i]});
  rec.padded = pool.fill_begin < n;
  return rec;
}

}  // namespace apc
