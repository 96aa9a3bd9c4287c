#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "apc/challenge.hpp"
#include "apc/corpus.hpp"

namespace apc {

struct ScoredTrack {
  TrackId track = 0;
  double score = 0.0;
  bool operator==(const ScoredTrack&) const = default;
};

// Ranked output of a recommender: descending score, ascending TrackId on
// ties; never contains a seed track or a duplicate.
struct Recommendation {
  std::vector<ScoredTrack> items;
  // Set when fewer tracks than requested were available.
  bool short_list = false;
  // Set when tracks from outside the producing model had to be appended.
  bool padded = false;

  std::vector<TrackId> tracks() const;
  std::size_t size() const noexcept { return items.size(); }
  bool empty() const noexcept { return items.empty(); }
};

// Orders (track, score) candidates by the recommendation order and keeps the
// first n. `excluded` must be sorted.
Recommendation select_top(std::vector<ScoredTrack> candidates, std::size_t n, std::span<const TrackId> excluded);

// Dense per-track score accumulator that remembers which entries it touched.
class ScoreAccumulator {
 public:
  explicit ScoreAccumulator(std::size_t n) : scores_(n, 0.0), touched_flag_(n, false) {}

  void add(TrackId t, double v) {
    if (!touched_flag_[t]) {
      touched_flag_[t] = true;
      touched_.push_back(t);
    }
    scores_[t] += v;
  }
  // Candidates in ascending track order, each score multiplied by weight[t]
  // (skipped when weight is empty).
  std::vector<ScoredTrack> collect(std::span<const double> weight = {}) const;

 private:
  std::vector<double> scores_;
  std::vector<bool> touched_flag_;
  std::vector<TrackId> touched_;
};

// ---------------------------------------------------------------------------
// Popularity.

Recommendation recommend_popularity(const ChallengePlaylist& seed, const Corpus& corpus, std::size_t n);

// ---------------------------------------------------------------------------
// Item-based collaborative filtering over binary playlist-occurrence vectors.

struct Neighbor {
  TrackId track = 0;
  double similarity = 0.0;
  bool operator==(const Neighbor&) const = default;
};

// |P(a) ∩ P(b)| / sqrt(|P(a)| |P(b)|); 0 when either track never occurs.
double item_cosine(const Corpus& corpus, TrackId a, TrackId b);

class ItemSimilarityIndex {
 public:
  ItemSimilarityIndex() = default;

  // Keeps, per track, the `max_neighbors` most similar other tracks with
  // positive cosine (descending similarity, ascending id on ties). 0 keeps
  // every neighbor.
  static ItemSimilarityIndex build(const Corpus& corpus, std::size_t max_neighbors, unsigned threads = 1);

  std::span<const Neighbor> neighbors(TrackId t) const {
    return {entries_.data() + offsets_[t], entries_.data() + offsets_[t + 1]};
  }
  std::size_t num_tracks() const noexcept { return offsets_.size() - 1; }
  std::size_t max_neighbors() const noexcept { return max_neighbors_; }

  void save(std::ostream& out) const;
  static ItemSimilarityIndex load(std::istream& in, const std::string& source);

  bool operator==(const ItemSimilarityIndex&) const = default;

 private:
  std::size_t max_neighbors_ = 0;
  std::vector<std::uint64_t> offsets_{0};
  std::vector<Neighbor> entries_;
};

// score(t) = idf(t) * sum over seeds s of cos(t, s), using the neighbor list
// of each seed. An empty `idf` means idf_table(corpus). Throws EmptySeedError
// for a seedless playlist.
Recommendation recommend_item_cf(const ChallengePlaylist& seed, const ItemSimilarityIndex& index,
                                 const Corpus& corpus, std::size_t n, std::span<const double> idf = {});

// ---------------------------------------------------------------------------
// Playlist-based nearest neighbors.

inline constexpr std::size_t kDefaultKnnNeighbors = 100;

// Binary cosine between the seed set and every corpus playlist; the top
// k_neighbors playlists vote for their tracks with their similarity, scaled
// by idf(t).
Recommendation recommend_playlist_knn(const ChallengePlaylist& seed, const Corpus& corpus, std::size_t k_neighbors,
                                      std::size_t n, std::span<const double> idf = {});

// ---------------------------------------------------------------------------
// Weighted regularized matrix factorization trained by alternating least
// squares on binary implicit feedback with confidence c = 1 + alpha * b.

struct WrmfParams {
  int factors = 64;
  double regularization = 0.1;
  double alpha = 40.0;
  int iterations = 15;
  std::uint64_t seed = 7;
  unsigned threads = 1;

  // Thread count changes nothing in the result, so it is not compared.
  bool operator==(const WrmfParams& o) const {
    return factors == o.factors && regularization == o.regularization && alpha == o.alpha &&
           iterations == o.iterations && seed == o.seed;
  }
};

struct FactorModel {
  int factors = 0;
  std::size_t rows = 0;  // playlists (or titles)
  std::size_t cols = 0;  // tracks
  std::vector<double> row_factors;   // rows x factors, row-major
  std::vector<double> item_factors;  // cols x factors, row-major
  WrmfParams params;

  std::span<const double> row(std::size_t r) const {
    return {row_factors.data() + r * static_cast<std::size_t>(factors), static_cast<std::size_t>(factors)};
  }
  std::span<const double> item(std::size_t t) const {
    return {item_factors.data() + t * static_cast<std::size_t>(factors), static_cast<std::size_t>(factors)};
  }

  void save(std::ostream& out) const;
  static FactorModel load(std::istream& in, const std::string& source);

  bool operator==(const FactorModel&) const = default;
};

// Called after every half-sweep (2 per iteration) with the 1-based
// half-sweep number and the objective value.
using WrmfObserver = std::function<void(int half_sweep, double objective)>;

FactorModel train_wrmf(const CsrMatrix& interactions, const WrmfParams& params, const WrmfObserver& observer = {});
FactorModel train_wrmf(const Corpus& corpus, const WrmfParams& params, const WrmfObserver& observer = {});

// Sum over all cells of c (b - x.y)^2, plus lambda (|X|^2 + |Y|^2).
double wrmf_objective(const CsrMatrix& interactions, const FactorModel& model);

// v = mean over seeds of idf(s) * Y[s]; score(t) = v . Y[t]. Seeds that never
// occur in the corpus carry no factors and are skipped.
Recommendation recommend_mf(const ChallengePlaylist& seed, const FactorModel& model, const Corpus& corpus,
                            std::size_t n, std::span<const double> idf = {});

// ---------------------------------------------------------------------------
// Title-based cold start.

struct TitleParams {
  double jaccard_threshold = 0.5;
  bool title_mf = true;
  WrmfParams mf{32, 0.1, 40.0, 10, 11, 1};

  bool operator==(const TitleParams&) const = default;
};

// Playlists sharing a raw-title reading: same normalized title and same
// stemmed term set.
struct TitleGroup {
  std::string normalized;
  std::vector<std::string> terms;
  std::vector<PlaylistId> playlists;
  // (track, number of member playlists containing it), ascending track.
  std::vector<std::pair<TrackId, std::uint32_t>> tracks;

  bool operator==(const TitleGroup&) const = default;
};

struct TitleMatch {
  std::size_t group = 0;
  double weight = 0.0;
};

class TitleIndex {
 public:
  TitleIndex() = default;

  // Groups playlists with a nonempty normalized title and, when enabled,
  // factorizes the normalized-title x track matrix.
  static TitleIndex build(const Corpus& corpus, const TitleParams& params);

  std::span<const TitleGroup> groups() const noexcept { return groups_; }
  std::span<const std::string> keys() const noexcept { return keys_; }
  // Key (index into keys()) of every group.
  std::size_t key_of(std::size_t group) const { return group_key_.at(group); }
  std::optional<std::size_t> find_key(std::string_view normalized) const;
  const FactorModel* title_factors() const { return has_mf_ ? &mf_ : nullptr; }
  const TitleParams& params() const noexcept { return params_; }

  // Exact normalized equality matches at weight 1; otherwise stemmed-term
  // Jaccard at or above the threshold matches at the Jaccard value.
  std::vector<TitleMatch> match(std::string_view raw_title) const;

  void save(std::ostream& out) const;
  static TitleIndex load(std::istream& in, const std::string& source);

  bool operator==(const TitleIndex& other) const;

 private:
  TitleParams params_;
  std::vector<TitleGroup> groups_;
  std::vector<std::string> keys_;  // sorted unique normalized titles
  std::vector<std::size_t> group_key_;
  std::unordered_map<std::string, std::vector<std::size_t>> term_groups_;
  bool has_mf_ = false;
  FactorModel mf_;

  void rebuild_lookup();
};

double jaccard(std::span<const std::string> a, std::span<const std::string> b);

// Title matches first (score = sum of match weight * idf(t) over matched
// playlists containing t), then title-MF candidates, then popularity. The
// three tiers keep their internal order and occupy disjoint score bands
// (3..2, 2..1, 1..0), so the list stays in descending score.
Recommendation recommend_title(const ChallengePlaylist& seed, const TitleIndex& index, const Corpus& corpus,
                               std::size_t n, std::span<const double> idf = {});

// ---------------------------------------------------------------------------
// Artifact files.

void save_item_index(const ItemSimilarityIndex& index, const std::filesystem::path& path);
ItemSimilarityIndex load_item_index(const std::filesystem::path& path);
void save_factor_model(const FactorModel& model, const std::filesystem::path& path);
FactorModel load_factor_model(const std::filesystem::path& path);
void save_title_index(const TitleIndex& index, const std::filesystem::path& path);
TitleIndex load_title_index(const std::filesystem::path& path);

}  // namespace apc
