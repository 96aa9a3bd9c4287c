#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "apc/challenge.hpp"
#include "apc/corpus.hpp"
#include "apc/error.hpp"

namespace apc {

// Artist credit in R-precision.
inline constexpr double kArtistCredit = 0.25;
// Clicks reported when no relevant track appears in the list.
inline constexpr int kMissClicks = 51;
inline constexpr std::size_t kPageSize = 10;

// (|S_T ∩ G_T| + 0.25 |S_A ∩ G_A|) / |G_T| over the first |G_T| predictions.
// Artist credit is added on top of track hits, so values may exceed 1.
double r_precision(std::span<const TrackId> predicted, const GroundTruthEntry& truth, const Catalog& catalog);
// Binary-relevance DCG over the whole list, normalized by the ideal DCG of
// min(|G_T|, N) relevant items.
double ndcg(std::span<const TrackId> predicted, const GroundTruthEntry& truth);
// floor((first relevant 1-based rank - 1) / 10), or 51 on a miss.
int clicks(std::span<const TrackId> predicted, const GroundTruthEntry& truth);

struct PlaylistScore {
  double r_precision = 0.0;
  double ndcg = 0.0;
  int clicks = kMissClicks;
};

PlaylistScore score_playlist(std::span<const TrackId> predicted, const GroundTruthEntry& truth,
                             const Catalog& catalog);

struct MetricMeans {
  double r_precision = 0.0;
  double ndcg = 0.0;
  double clicks = 0.0;
  std::size_t count = 0;
};

struct ScoredPlaylist {
  ScenarioType scenario = ScenarioType::kTitleOnly;
  PlaylistScore score;
};

struct ScoreReport {
  std::string name;
  std::map<std::int64_t, ScoredPlaylist> playlists;  // ascending pid
  std::array<MetricMeans, kNumScenarios> scenarios{};
  MetricMeans overall;
  // Playlists whose R-precision exceeds 1 because of the artist credit.
  std::size_t r_precision_above_one = 0;

  nlohmann::json to_json() const;
  static ScoreReport from_json(const nlohmann::json& doc);
  // Per-scenario table with an "all" row.
  std::string to_text() const;
};

class ValidationFailedError : public Error {
 public:
  explicit ValidationFailedError(ValidationReport report)
      : Error("validation_failed", "submission failed validation: " + std::to_string(report.failures()) +
                                       " failing playlists"),
        report_(std::move(report)) {}
  const ValidationReport& report() const noexcept { return report_; }

 private:
  ValidationReport report_;
};

// Validates first and refuses (ValidationFailedError) on any failure; then
// scores every challenge playlist. Means are accumulated in ascending pid.
ScoreReport score_report(const Submission& submission, const ChallengeSet& challenge, const GroundTruth& truth,
                         const Corpus& corpus, std::string name);

// Recomputes per-scenario and overall means from report.playlists.
void summarize(ScoreReport& report);

struct BordaEntry {
  std::string name;
  MetricMeans means;
  double rank_r_precision = 0.0;
  double rank_ndcg = 0.0;
  double rank_clicks = 0.0;
  double rank_sum = 0.0;
};

// Per metric, rank submissions (higher R-precision/NDCG and lower clicks are
// better; ties share the mean of their positions), then sort by the rank sum
// ascending with the name as tie-break.
std::vector<BordaEntry> borda_aggregate(const std::vector<std::pair<std::string, MetricMeans>>& reports);
std::string leaderboard_text(const std::vector<BordaEntry>& entries);
nlohmann::json leaderboard_json(const std::vector<BordaEntry>& entries);

}  // namespace apc
