#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_set>

#include "apc/ensemble.hpp"
#include "apc/error.hpp"
#include "apc/parallel.hpp"

namespace apc {
namespace {

// log(1 + exp(-m)) without overflow.
double logistic_loss(double margin) {
  return margin > 0.0 ? std::log1p(std::exp(-margin)) : -margin + std::log1p(std::exp(margin));
}

// 1 / (1 + exp(m)), the magnitude of d loss / d margin.
double loss_slope(double margin) {
  if (margin > 0.0) {
    const double e = std::exp(-margin);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(margin));
}

double dot(const FeatureVector& w, const FeatureVector& f) {
  double s = 0.0;
  for (std::size_t j = 0; j < kNumFeatures; ++j) s += w[j] * f[j];
  return s;
}

double mean_loss(const std::vector<FeatureVector>& diffs, const FeatureVector& w) {
  double total = 0.0;
  for (const auto& d : diffs) total += logistic_loss(dot(w, d));
  return total / static_cast<double>(diffs.size());
}

}  // namespace

double RankerModel::score(const FeatureVector& f) const { return dot(weights, f); }

double pairwise_loss(std::span<const TrainingPair> pairs, const RankerModel& model) {
  if (pairs.empty()) return 0.0;
  double total = 0.0;
  for (const auto& p : pairs) total += logistic_loss(model.score(p.positive) - model.score(p.negative));
  return total / static_cast<double>(pairs.size());
}

RankerModel train_ranker(std::span<const TrainingPair> pairs, const RankerParams& params,
                         const RankerObserver& observer) {
  if (pairs.empty()) throw TrainingFailure("ranker: no training pairs");
  if (params.epochs < 0) throw ConfigError("ranker: epochs must be >= 0");
  if (!(params.learning_rate > 0.0) || !std::isfinite(params.learning_rate)) {
    throw ConfigError("ranker: learning_rate must be a positive finite number");
  }

  // Pair differences in a seeded, fixed summation order.
  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(params.rng_seed);
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[static_cast<std::size_t>(rng() % i)]);
  }
  std::vector<FeatureVector> diffs(pairs.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& p = pairs[order[i]];
    for (std::size_t j = 0; j < kNumFeatures; ++j) diffs[i][j] = p.positive[j] - p.negative[j];
  }

  // Descend in RMS-standardized coordinates; the loss surface is the same,
  // only better conditioned.
  FeatureVector scale;
  for (std::size_t j = 0; j < kNumFeatures; ++j) {
    double ss = 0.0;
    for (const auto& d : diffs) ss += d[j] * d[j];
    const double rms = std::sqrt(ss / static_cast<double>(diffs.size()));
    scale[j] = rms > 0.0 && std::isfinite(rms) ? rms : 1.0;
  }
  for (auto& d : diffs) {
    for (std::size_t j = 0; j < kNumFeatures; ++j) d[j] /= scale[j];
  }

  FeatureVector w{};
  double loss = mean_loss(diffs, w);
  if (observer) observer(0, loss);
  for (int epoch = 1; epoch <= params.epochs; ++epoch) {
    FeatureVector grad{};
    for (const auto& d : diffs) {
      const double g = loss_slope(dot(w, d));
      for (std::size_t j = 0; j < kNumFeatures; ++j) grad[j] -= g * d[j];
    }
    for (auto& g : grad) g /= static_cast<double>(diffs.size());

    double step = params.learning_rate;
    FeatureVector trial = w;
    double trial_loss = loss;
    bool moved = false;
    for (int halving = 0; halving < 60; ++halving, step *= 0.5) {
      for (std::size_t j = 0; j < kNumFeatures; ++j) trial[j] = w[j] - step * grad[j];
      trial_loss = mean_loss(diffs, trial);
      if (!std::isfinite(trial_loss)) {
        throw TrainingFailure("ranker: loss became non-finite in epoch " + std::to_string(epoch) +
                              "; lower learning_rate");
      }
      if (trial_loss <= loss) {
        moved = true;
        break;
      }
    }
    if (moved) {
      w = trial;
      loss = trial_loss;
    }
    if (observer) observer(epoch, loss);
  }

  RankerModel model;
  for (std::size_t j = 0; j < kNumFeatures; ++j) model.weights[j] = w[j] / scale[j];
  for (double v : model.weights) {
    if (!std::isfinite(v)) throw TrainingFailure("ranker: non-finite weight; lower learning_rate");
  }
  return model;
}

Recommendation rerank(const ChallengePlaylist& seed, const CandidatePool& pool, const RankerModel& ranker,
                      const FirstStageModels& models, const Corpus& corpus, std::size_t n) {
  const auto features = candidate_features(seed, pool, models, corpus);
  std::vector<ScoredTrack> scored(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) scored[i] = {pool.tracks[i], ranker.score(features[i])};
  std::ranges::sort(scored, [](const ScoredTrack& a, const ScoredTrack& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.track < b.track;
  });

  Recommendation rec;
  if (scored.size() >= n) {
    scored.resize(n);
    rec.items = std::move(scored);
    return rec;
  }

  rec.items = std::move(scored);
  rec.padded = true;
  const auto seeds = seed.seed_set();
  std::unordered_set<TrackId> taken(pool.tracks.begin(), pool.tracks.end());
  double floor = rec.items.empty() ? 0.0 : rec.items.back().score;
  for (auto t : models.popularity) {
    if (rec.items.size() >= n) break;
    if (taken.contains(t) || std::ranges::binary_search(seeds, t)) continue;
    taken.insert(t);
    floor -= 1.0;
    rec.items.push_back({t, floor});
  }
  rec.short_list = rec.items.size() < n;
  return rec;
}

TrainingSet make_training_pairs(const Corpus& corpus, const FirstStageParams& first_stage,
                                const HybridConfig& config, const PairSamplingParams& sampling) {
  auto [challenge, truth] = build_challenge_set(corpus, sampling.per_type, sampling.rng_seed);
  std::unordered_set<std::int64_t> held_out;
  for (const auto& cp : challenge.playlists) held_out.insert(cp.pid);
  const Corpus train = corpus.without(held_out);
  const auto models = FirstStageModels::train(train, first_stage);

  struct Slot {
    std::vector<TrainingPair> pairs;
    std::size_t positives = 0;
    std::size_t negatives = 0;
  };
  std::vector<Slot> slots(challenge.playlists.size());
  parallel_for(challenge.playlists.size(), first_stage.threads, [&](std::size_t i) {
    const auto& cp = challenge.playlists[i];
    const auto pool = build_pool(cp, models, config, train, config.pool_size);
    const auto features = candidate_features(cp, pool, models, train);
    const auto& gt = truth.at(cp.pid);
    std::vector<std::size_t> pos, neg;
    for (std::size_t k = 0; k < pool.size(); ++k) (gt.contains(pool.tracks[k]) ? pos : neg).push_back(k);
    auto& slot = slots[i];
    slot.positives = pos.size();
    slot.negatives = neg.size();
    if (pos.empty() || neg.empty()) return;
    // Seeded per playlist so the sample does not depend on the worker split.
    std::mt19937_64 rng(sampling.rng_seed ^ (0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(i) + 1)));
    for (std::size_t k = 0; k < sampling.pairs_per_playlist; ++k) {
      const auto p = pos[static_cast<std::size_t>(rng() % pos.size())];
      const auto q = neg[static_cast<std::size_t>(rng() % neg.size())];
      slot.pairs.push_back({features[p], features[q]});
    }
  });

  TrainingSet set;
  set.playlists = challenge.playlists.size();
  for (auto& slot : slots) {
    set.labeled_positive += slot.positives;
    set.labeled_negative += slot.negatives;
    set.pairs.insert(set.pairs.end(), slot.pairs.begin(), slot.pairs.end());
  }
  if (set.pairs.empty()) throw TrainingFailure("ranker: the internal split produced no labeled pairs");
  return set;
}

}  // namespace apc
