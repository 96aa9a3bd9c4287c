#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "apc/challenge.hpp"
#include "apc/corpus.hpp"
#include "apc/kvconfig.hpp"
#include "apc/recommend.hpp"

namespace apc {

enum class Recommender : std::uint8_t { kItemCf = 0, kPlaylistKnn = 1, kMf = 2, kTitle = 3 };
inline constexpr std::size_t kNumRecommenders = 4;
inline constexpr std::array<Recommender, kNumRecommenders> kAllRecommenders = {
    Recommender::kItemCf, Recommender::kPlaylistKnn, Recommender::kMf, Recommender::kTitle};

std::string_view recommender_name(Recommender r);
std::optional<Recommender> parse_recommender(std::string_view name);

using BlendWeights = std::array<double, kNumRecommenders>;

struct HybridConfig {
  std::array<BlendWeights, kNumScenarios> weights{};
  std::string normalization = "minmax";
  std::size_t pool_size = 2000;
  std::size_t knn_neighbors = kDefaultKnnNeighbors;

  static HybridConfig defaults();

  // Title-only playlists always go to the title recommender alone; playlists
  // without a title never use it; everything else runs where w > 0.
  bool routed(ScenarioType s, Recommender r) const;
  // Blend weight actually applied (1 for the title recommender on T1).
  double weight(ScenarioType s, Recommender r) const;
  // Throws ConfigError unless every scenario routes to something.
  void validate() const;

  bool operator==(const HybridConfig&) const = default;
};

struct FirstStageParams {
  std::size_t item_neighbors = 200;
  WrmfParams mf;
  TitleParams title;
  unsigned threads = 1;

  bool operator==(const FirstStageParams&) const = default;
};

// Everything the first stage needs, trained on one corpus.
struct FirstStageModels {
  ItemSimilarityIndex item_index;
  FactorModel mf;
  TitleIndex titles;
  std::vector<double> idf;
  std::vector<TrackId> popularity;

  static FirstStageModels train(const Corpus& corpus, const FirstStageParams& params);
  // Reattaches derived tables after loading the trained parts from disk.
  void refresh(const Corpus& corpus);
};

// Blended first-stage candidates, best first.
struct CandidatePool {
  std::vector<TrackId> tracks;
  // Min-max normalized score per recommender; 0 where a recommender did not
  // return the track.
  std::vector<BlendWeights> components;
  std::vector<double> blended;
  // Tracks from this index on are popularity fill (negative blended score).
  std::size_t fill_begin = 0;

  std::size_t size() const noexcept { return tracks.size(); }
};

// Per-playlist min-max to [0, 1]; a constant list maps to 1.
std::vector<double> minmax_normalize(std::span<const ScoredTrack> items);

CandidatePool build_pool(const ChallengePlaylist& seed, const FirstStageModels& models, const HybridConfig& config,
                         const Corpus& corpus, std::size_t size);

// Exactly n tracks (throws CatalogTooSmallError when the catalog cannot
// supply them).
Recommendation recommend_hybrid(const ChallengePlaylist& seed, const FirstStageModels& models,
                                const HybridConfig& config, const Corpus& corpus,
                                std::size_t n = kSubmissionLength);

// ---------------------------------------------------------------------------
// Candidate features and the pairwise ranker.

inline constexpr std::size_t kNumFeatures = 11 + kNumScenarios;
using FeatureVector = std::array<double, kNumFeatures>;

// Stable names in feature order.
std::span<const std::string> feature_names();

// Features of every pool candidate, in pool order.
std::vector<FeatureVector> candidate_features(const ChallengePlaylist& seed, const CandidatePool& pool,
                                              const FirstStageModels& models, const Corpus& corpus);

struct RankerModel {
  FeatureVector weights{};

  double score(const FeatureVector& f) const;
  bool operator==(const RankerModel&) const = default;
};

struct TrainingPair {
  FeatureVector positive{};
  FeatureVector negative{};
};

struct TrainingSet {
  std::vector<TrainingPair> pairs;
  std::size_t playlists = 0;        // internal challenge playlists used
  std::size_t labeled_positive = 0;  // pool candidates in the ground truth
  std::size_t labeled_negative = 0;
};

struct PairSamplingParams {
  int per_type = 100;
  std::size_t pairs_per_playlist = 20;
  std::uint64_t rng_seed = 5;
};

// Internal challenge split of `corpus`, first stage retrained on the rest,
// pool candidates labeled against the held-out ground truth, and pairs
// (positive, negative) sampled within each playlist.
TrainingSet make_training_pairs(const Corpus& corpus, const FirstStageParams& first_stage,
                                const HybridConfig& config, const PairSamplingParams& sampling);

struct RankerParams {
  int epochs = 200;
  double learning_rate = 0.5;
  std::uint64_t rng_seed = 3;
};

using RankerObserver = std::function<void(int epoch, double loss)>;

// Mean pairwise logistic loss.
double pairwise_loss(std::span<const TrainingPair> pairs, const RankerModel& model);

// Full-batch gradient descent on the pairwise logistic loss with a halving
// step safeguard, so the loss never rises between epochs. Throws
// TrainingFailure when the loss becomes non-finite.
RankerModel train_ranker(std::span<const TrainingPair> pairs, const RankerParams& params,
                         const RankerObserver& observer = {});

// Reorders the pool by ranker score (ascending TrackId on ties) and keeps n.
// A pool shorter than n is ranked as is, then padded with popularity and
// flagged.
Recommendation rerank(const ChallengePlaylist& seed, const CandidatePool& pool, const RankerModel& ranker,
                      const FirstStageModels& models, const Corpus& corpus, std::size_t n = kSubmissionLength);

// ---------------------------------------------------------------------------
// Config files.

inline constexpr std::int64_t kConfigVersion = 1;

HybridConfig hybrid_config_from(const KvConfig& kv);
void hybrid_config_to(const HybridConfig& config, KvConfig& kv);
FirstStageParams first_stage_from(const KvConfig& kv);
void first_stage_to(const FirstStageParams& params, KvConfig& kv);
RankerParams ranker_params_from(const KvConfig& kv);
void ranker_params_to(const RankerParams& params, KvConfig& kv);
PairSamplingParams pair_sampling_from(const KvConfig& kv);
void pair_sampling_to(const PairSamplingParams& params, KvConfig& kv);
// Throws ConfigError when `version` is present and unsupported.
void check_config_version(const KvConfig& kv);

RankerModel ranker_from(const KvConfig& kv);
void ranker_to(const RankerModel& model, KvConfig& kv);
void save_ranker(const RankerModel& model, const std::filesystem::path& path);
RankerModel load_ranker(const std::filesystem::path& path);

}  // namespace apc
