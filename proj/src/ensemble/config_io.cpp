#include <fstream>

#include "apc/ensemble.hpp"
#include "apc/error.hpp"

namespace apc {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

// "item_cf:0.3, playlist_knn:0.35"; recommenders left out get 0.
BlendWeights parse_weights(const KvConfig& kv, const std::string& key, const std::string& text) {
  BlendWeights w{};
  std::string_view rest = text;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const auto item = trim(rest.substr(0, comma));
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) {
      throw ConfigError(kv.source() + ": \"" + key + "\": expected name:weight, got \"" + std::string(item) + "\"");
    }
    const auto name = trim(item.substr(0, colon));
    auto r = parse_recommender(name);
    if (!r) throw ConfigError(kv.source() + ": \"" + key + "\": unknown recommender \"" + std::string(name) + "\"");
    KvConfig one;
    one.set("w", std::string(trim(item.substr(colon + 1))));
    try {
      w[static_cast<std::size_t>(*r)] = one.real("w", 0.0);
    } catch (const ConfigError&) {
      throw ConfigError(kv.source() + ": \"" + key + "\": bad weight for " + std::string(name));
    }
  }
  return w;
}

std::string format_weights(const BlendWeights& w) {
  std::string out;
  for (auto r : kAllRecommenders) {
    if (!out.empty()) out += ", ";
    out += std::string(recommender_name(r)) + ":" + format_real(w[static_cast<std::size_t>(r)]);
  }
  return out;
}

std::size_t positive_size(const KvConfig& kv, const std::string& key, std::size_t fallback) {
  const auto v = kv.integer(key, static_cast<std::int64_t>(fallback));
  if (v < 0) throw ConfigError(kv.source() + ": \"" + key + "\" must be >= 0");
  return static_cast<std::size_t>(v);
}

WrmfParams wrmf_from(const KvConfig& kv, const std::string& prefix, WrmfParams p) {
  p.factors = static_cast<int>(kv.integer(prefix + "factors", p.factors));
  p.regularization = kv.real(prefix + "regularization", p.regularization);
  p.alpha = kv.real(prefix + "alpha", p.alpha);
  p.iterations = static_cast<int>(kv.integer(prefix + "iterations", p.iterations));
  p.seed = static_cast<std::uint64_t>(kv.integer(prefix + "seed", static_cast<std::int64_t>(p.seed)));
  return p;
}

void wrmf_to(const WrmfParams& p, const std::string& prefix, KvConfig& kv) {
  kv.set(prefix + "factors", static_cast<std::int64_t>(p.factors));
  kv.set(prefix + "regularization", p.regularization);
  kv.set(prefix + "alpha", p.alpha);
  kv.set(prefix + "iterations", static_cast<std::int64_t>(p.iterations));
  kv.set(prefix + "seed", static_cast<std::int64_t>(p.seed));
}

}  // namespace

void check_config_version(const KvConfig& kv) {
  const auto v = kv.integer("version", kConfigVersion);
  if (v != kConfigVersion) {
    throw ConfigError(kv.source() + ": unsupported config version " + std::to_string(v));
  }
}

HybridConfig hybrid_config_from(const KvConfig& kv) {
  auto c = HybridConfig::defaults();
  c.normalization = kv.text("hybrid.normalization", c.normalization);
  c.pool_size = positive_size(kv, "hybrid.pool_size", c.pool_size);
  c.knn_neighbors = positive_size(kv, "hybrid.knn_neighbors", c.knn_neighbors);
  for (auto s : kAllScenarios) {
    const auto key = "hybrid." + scenario_tag(s) + ".weights";
    if (auto v = kv.get(key)) c.weights[scenario_index(s)] = parse_weights(kv, key, *v);
  }
  c.validate();
  return c;
}

void hybrid_config_to(const HybridConfig& c, KvConfig& kv) {
  kv.set("version", kConfigVersion);
  kv.set("hybrid.normalization", c.normalization);
  kv.set("hybrid.pool_size", static_cast<std::int64_t>(c.pool_size));
  kv.set("hybrid.knn_neighbors", static_cast<std::int64_t>(c.knn_neighbors));
  for (auto s : kAllScenarios) {
    kv.set("hybrid." + scenario_tag(s) + ".weights", format_weights(c.weights[scenario_index(s)]));
  }
}

FirstStageParams first_stage_from(const KvConfig& kv) {
  FirstStageParams p;
  p.item_neighbors = positive_size(kv, "item_cf.neighbors", p.item_neighbors);
  p.mf = wrmf_from(kv, "wrmf.", p.mf);
  p.title.jaccard_threshold = kv.real("title.jaccard_threshold", p.title.jaccard_threshold);
  p.title.title_mf = kv.boolean("title.mf", p.title.title_mf);
  p.title.mf = wrmf_from(kv, "title.mf.", p.title.mf);
  return p;
}

void first_stage_to(const FirstStageParams& p, KvConfig& kv) {
  kv.set("version", kConfigVersion);
  kv.set("item_cf.neighbors", static_cast<std::int64_t>(p.item_neighbors));
  wrmf_to(p.mf, "wrmf.", kv);
  kv.set("title.jaccard_threshold", p.title.jaccard_threshold);
  kv.set("title.mf", std::string(p.title.title_mf ? "true" : "false"));
  wrmf_to(p.title.mf, "title.mf.", kv);
}

RankerParams ranker_params_from(const KvConfig& kv) {
  RankerParams p;
  p.epochs = static_cast<int>(kv.integer("ranker.epochs", p.epochs));
  p.learning_rate = kv.real("ranker.learning_rate", p.learning_rate);
  p.rng_seed = static_cast<std::uint64_t>(kv.integer("ranker.seed", static_cast<std::int64_t>(p.rng_seed)));
  return p;
}

void ranker_params_to(const RankerParams& p, KvConfig& kv) {
  kv.set("ranker.epochs", static_cast<std::int64_t>(p.epochs));
  kv.set("ranker.learning_rate", p.learning_rate);
  kv.set("ranker.seed", static_cast<std::int64_t>(p.rng_seed));
}

PairSamplingParams pair_sampling_from(const KvConfig& kv) {
  PairSamplingParams p;
  p.per_type = static_cast<int>(kv.integer("pairs.per_type", p.per_type));
  p.pairs_per_playlist = positive_size(kv, "pairs.per_playlist", p.pairs_per_playlist);
  p.rng_seed = static_cast<std::uint64_t>(kv.integer("pairs.seed", static_cast<std::int64_t>(p.rng_seed)));
  return p;
}

void pair_sampling_to(const PairSamplingParams& p, KvConfig& kv) {
  kv.set("pairs.per_type", static_cast<std::int64_t>(p.per_type));
  kv.set("pairs.per_playlist", static_cast<std::int64_t>(p.pairs_per_playlist));
  kv.set("pairs.seed", static_cast<std::int64_t>(p.rng_seed));
}

RankerModel ranker_from(const KvConfig& kv) {
  check_config_version(kv);
  RankerModel m;
  const auto names = feature_names();
  for (std::size_t j = 0; j < kNumFeatures; ++j) {
    const auto key = "ranker.w." + names[j];
    if (!kv.has(key)) throw ConfigError(kv.source() + ": missing ranker weight \"" + key + "\"");
    m.weights[j] = kv.real(key, 0.0);
  }
  return m;
}

void ranker_to(const RankerModel& m, KvConfig& kv) {
  kv.set("version", kConfigVersion);
  const auto names = feature_names();
  for (std::size_t j = 0; j < kNumFeatures; ++j) kv.set("ranker.w." + names[j], m.weights[j]);
}

void save_ranker(const RankerModel& model, const std::filesystem::path& path) {
  KvConfig kv;
  ranker_to(model, kv);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << "# pairwise ranker weights, one per candidate feature\n" << kv.dump();
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

RankerModel load_ranker(const std::filesystem::path& path) {
  const auto kv = KvConfig::load(path);
  auto m = ranker_from(kv);
  kv.reject_unused();
  return m;
}

}  // namespace apc
