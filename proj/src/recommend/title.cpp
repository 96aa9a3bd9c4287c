#include <algorithm>
#include <map>

#include <Eigen/Core>

#include "apc/error.hpp"
#include "apc/recommend.hpp"

namespace apc {

double jaccard(std::span<const std::string> a, std::span<const std::string> b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t common = 0;
  for (auto i = a.begin(), j = b.begin(); i != a.end() && j != b.end();) {
    if (*i < *j) ++i;
    else if (*j < *i) ++j;
    else {
      ++common;
      ++i;
      ++j;
    }
  }
  return static_cast<double>(common) / static_cast<double>(a.size() + b.size() - common);
}

void TitleIndex::rebuild_lookup() {
  term_groups_.clear();
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    for (const auto& term : groups_[g].terms) term_groups_[term].push_back(g);
  }
}

std::optional<std::size_t> TitleIndex::find_key(std::string_view normalized) const {
  auto it = std::ranges::lower_bound(keys_, normalized, {}, [](const std::string& s) { return std::string_view(s); });
  if (it == keys_.end() || *it != normalized) return std::nullopt;
  return static_cast<std::size_t>(it - keys_.begin());
}

TitleIndex TitleIndex::build(const Corpus& corpus, const TitleParams& params) {
  if (!(params.jaccard_threshold > 0.0 && params.jaccard_threshold <= 1.0)) {
    throw ConfigError("title index: jaccard threshold must lie in (0, 1]");
  }
  TitleIndex index;
  index.params_ = params;

  std::map<std::pair<std::string, std::vector<std::string>>, std::vector<PlaylistId>> grouped;
  for (std::size_t row = 0; row < corpus.num_playlists(); ++row) {
    const auto& name = corpus.playlist(static_cast<PlaylistId>(row)).name;
    auto normalized = normalize_title(name);
    if (normalized.empty()) continue;
    grouped[{std::move(normalized), title_terms(name)}].push_back(static_cast<PlaylistId>(row));
  }

  std::vector<std::uint32_t> counts(corpus.num_tracks(), 0);
  std::vector<TrackId> touched;
  for (auto& [key, rows] : grouped) {
    TitleGroup group;
    group.normalized = key.first;
    group.terms = key.second;
    group.playlists = std::move(rows);
    touched.clear();
    for (auto p : group.playlists) {
      for (auto t : corpus.unique_tracks(p)) {
        if (counts[t]++ == 0) touched.push_back(t);
      }
    }
    std::ranges::sort(touched);
    group.tracks.reserve(touched.size());
    for (auto t : touched) {
      group.tracks.emplace_back(t, counts[t]);
      counts[t] = 0;
    }
    if (index.keys_.empty() || index.keys_.back() != group.normalized) index.keys_.push_back(group.normalized);
    index.group_key_.push_back(index.keys_.size() - 1);
    index.groups_.push_back(std::move(group));
  }
  index.rebuild_lookup();

  if (params.title_mf && !index.keys_.empty()) {
    // One row per normalized title: the union of its groups' tracks.
    CsrMatrix m;
    m.rows = index.keys_.size();
    m.cols = corpus.num_tracks();
    std::vector<std::uint32_t> row;
    for (std::size_t g = 0; g < index.groups_.size();) {
      row.clear();
      std::size_t h = g;
      for (; h < index.groups_.size() && index.group_key_[h] == index.group_key_[g]; ++h) {
        for (const auto& [t, c] : index.groups_[h].tracks) row.push_back(t);
      }
      std::ranges::sort(row);
      row.erase(std::unique(row.begin(), row.end()), row.end());
      m.col_idx.insert(m.col_idx.end(), row.begin(), row.end());
      m.row_ptr.push_back(m.col_idx.size());
      g = h;
    }
    index.mf_ = train_wrmf(m, params.mf);
    index.has_mf_ = true;
  }
  return index;
}

std::vector<TitleMatch> TitleIndex::match(std::string_view raw_title) const {
  std::vector<TitleMatch> out;
  const auto normalized = normalize_title(raw_title);
  const auto terms = title_terms(raw_title);
  if (normalized.empty() && terms.empty()) return out;

  std::vector<std::size_t> candidates;
  if (!normalized.empty()) {
    if (auto key = find_key(normalized)) {
      for (std::size_t g = 0; g < groups_.size(); ++g) {
        if (group_key_[g] == *key) candidates.push_back(g);
      }
    }
  }
  for (const auto& term : terms) {
    if (auto it = term_groups_.find(term); it != term_groups_.end()) {
      candidates.insert(candidates.end(), it->second.begin(), it->second.end());
    }
  }
  std::ranges::sort(candidates);
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  for (auto g : candidates) {
    const auto& group = groups_[g];
    if (!normalized.empty() && group.normalized == normalized) {
      out.push_back({g, 1.0});
      continue;
    }
    const double j = jaccard(terms, group.terms);
    if (j >= params_.jaccard_threshold) out.push_back({g, j});
  }
  return out;
}

bool TitleIndex::operator==(const TitleIndex& other) const {
  return params_ == other.params_ && groups_ == other.groups_ && keys_ == other.keys_ &&
         group_key_ == other.group_key_ && has_mf_ == other.has_mf_ && (!has_mf_ || mf_ == other.mf_);
}

Recommendation recommend_title(const ChallengePlaylist& seed, const TitleIndex& index, const Corpus& corpus,
                               std::size_t n, std::span<const double> idf) {
  std::vector<double> own_idf;
  if (idf.empty()) {
    own_idf = idf_table(corpus);
    idf = own_idf;
  }
  const auto seeds = seed.seed_set();
  auto is_seed = [&](TrackId t) { return std::ranges::binary_search(seeds, t); };
  std::vector<bool> taken(corpus.num_tracks(), false);
  std::vector<ScoredTrack> candidates;

  // Tier 1: tracks of matched title groups, in (2, 3].
  const auto matches = seed.title ? index.match(*seed.title) : std::vector<TitleMatch>{};
  {
    ScoreAccumulator acc(corpus.num_tracks());
    for (const auto& m : matches) {
      for (const auto& [t, count] : index.groups()[m.group].tracks) {
        if (t < corpus.num_tracks()) acc.add(t, m.weight * static_cast<double>(count));
      }
    }
    auto tier = acc.collect(idf);
    double top = 0.0;
    for (const auto& c : tier) top = std::max(top, c.score);
    for (const auto& c : tier) {
      if (c.score <= 0.0 || is_seed(c.track)) continue;
      candidates.push_back({c.track, 2.0 + c.score / top});
      taken[c.track] = true;
    }
  }

  // Tier 2: title-MF scores for the matched titles, in [1, 2].
  if (const auto* mf = index.title_factors(); mf && !matches.empty() && candidates.size() < n) {
    const int d = mf->factors;
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> X(
        mf->row_factors.data(), static_cast<Eigen::Index>(mf->rows), d);
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> Y(
        mf->item_factors.data(), static_cast<Eigen::Index>(mf->cols), d);

    // An exact title uses its own row; otherwise the match-weighted mean of
    // the matched titles' rows, each title counted once at its best weight.
    std::map<std::size_t, double> key_weight;
    for (const auto& m : matches) {
      auto& w = key_weight[index.key_of(m.group)];
      w = std::max(w, m.weight);
    }
    Eigen::RowVectorXd v = Eigen::RowVectorXd::Zero(d);
    double total = 0.0;
    for (const auto& [key, w] : key_weight) {
      v += w * X.row(static_cast<Eigen::Index>(key));
      total += w;
    }
    v /= total;
    if (const auto exact = seed.title ? index.find_key(normalize_title(*seed.title)) : std::nullopt) {
      v = X.row(static_cast<Eigen::Index>(*exact));
    }

    std::vector<ScoredTrack> tier;
    const auto limit = std::min<std::size_t>(mf->cols, corpus.num_tracks());
    for (std::size_t t = 0; t < limit; ++t) {
      const auto id = static_cast<TrackId>(t);
      if (taken[id] || corpus.track_df(id) == 0 || is_seed(id)) continue;
      tier.push_back({id, v.dot(Y.row(static_cast<Eigen::Index>(t)))});
    }
    if (!tier.empty()) {
      auto [lo, hi] = std::ranges::minmax(tier, {}, &ScoredTrack::score);
      const double low = lo.score, range = hi.score - lo.score;
      for (auto& c : tier) {
        c.score = range > 0.0 ? 1.0 + (c.score - low) / range : 2.0;
        taken[c.track] = true;
        candidates.push_back(c);
      }
    }
  }

  // Tier 3: popularity, in (0, 1).
  if (candidates.size() < n) {
    const auto ranking = popularity_ranking(corpus);
    const double span = static_cast<double>(ranking.size() + 1);
    for (std::size_t i = 0; i < ranking.size() && candidates.size() < n; ++i) {
      const auto t = ranking[i];
      if (taken[t] || is_seed(t)) continue;
      candidates.push_back({t, 1.0 - static_cast<double>(i + 1) / span});
    }
  }
  return select_top(std::move(candidates), n, seeds);
}

}  // namespace apc
