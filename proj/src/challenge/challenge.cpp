#include <algorithm>
#include <numeric>
#include <random>

#include "apc/challenge.hpp"
#include "apc/error.hpp"

namespace apc {

std::string scenario_tag(ScenarioType s) { return "T" + std::to_string(static_cast<int>(s)); }

std::optional<ScenarioType> parse_scenario(std::string_view tag) {
  for (auto s : kAllScenarios) {
    if (scenario_tag(s) == tag) return s;
  }
  return std::nullopt;
}

std::vector<TrackId> ChallengePlaylist::seed_set() const {
  std::vector<TrackId> set;
  set.reserve(seeds.size());
  for (const auto& s : seeds) set.push_back(s.track);
  std::ranges::sort(set);
  set.erase(std::unique(set.begin(), set.end()), set.end());
  return set;
}

const ChallengePlaylist* ChallengeSet::find(std::int64_t pid) const {
  auto it = std::ranges::find(playlists, pid, &ChallengePlaylist::pid);
  return it == playlists.end() ? nullptr : &*it;
}

bool GroundTruthEntry::contains(TrackId t) const { return std::ranges::binary_search(tracks, t); }

const GroundTruthEntry& GroundTruth::at(std::int64_t pid) const {
  auto it = entries.find(pid);
  if (it == entries.end()) throw UndefinedMetricError("no ground truth for pid " + std::to_string(pid));
  return it->second;
}

GroundTruthEntry make_ground_truth_entry(std::vector<TrackId> tracks, std::vector<std::int64_t> positions,
                                         const Catalog& catalog) {
  GroundTruthEntry e;
  std::ranges::sort(tracks);
  tracks.erase(std::unique(tracks.begin(), tracks.end()), tracks.end());
  for (auto t : tracks) e.artists.push_back(catalog.artist_of(t));
  std::ranges::sort(e.artists);
  e.artists.erase(std::unique(e.artists.begin(), e.artists.end()), e.artists.end());
  e.tracks = std::move(tracks);
  std::ranges::sort(positions);
  e.positions = std::move(positions);
  return e;
}

std::pair<ChallengeSet, GroundTruth> build_challenge_set(const Corpus& corpus, int per_type,
                                                         std::uint64_t rng_seed) {
  if (per_type < 1) throw ConfigError("per_type must be positive");
  std::mt19937_64 rng(rng_seed);
  auto below = [&rng](std::size_t n) {
    return static_cast<std::size_t>((static_cast<double>(rng() >> 11) * 0x1.0p-53) * static_cast<double>(n));
  };

  auto order = std::vector<ScenarioType>(kAllScenarios.begin(), kAllScenarios.end());
  std::ranges::stable_sort(order, [](ScenarioType a, ScenarioType b) {
    return traits(a).seed_count > traits(b).seed_count;
  });

  std::vector<bool> used(corpus.num_playlists(), false);
  ChallengeSet challenge;
  GroundTruth truth;

  for (auto scenario : order) {
    const auto tr = traits(scenario);
    // Strictly more unique tracks than seeds guarantees a non-empty G_T
    // whichever k positions are revealed.
    std::vector<PlaylistId> eligible;
    for (PlaylistId r = 0; r < corpus.num_playlists(); ++r) {
      if (!used[r] && corpus.unique_tracks(r).size() > static_cast<std::size_t>(tr.seed_count)) {
        eligible.push_back(r);
      }
    }
    if (eligible.size() < static_cast<std::size_t>(per_type)) {
      throw InfeasibleSplitError("scenario " + scenario_tag(scenario) + " needs " +
                                 std::to_string(per_type) + " playlists with more than " +
                                 std::to_string(tr.seed_count) + " unique tracks, only " +
                                 std::to_string(eligible.size()) + " available");
    }
    // Partial Fisher-Yates: the first per_type slots are a uniform sample.
    for (std::size_t i = 0; i < static_cast<std::size_t>(per_type); ++i) {
      std::swap(eligible[i], eligible[i + below(eligible.size() - i)]);
    }
    for (std::size_t i = 0; i < static_cast<std::size_t>(per_type); ++i) {
      const auto row = eligible[i];
      used[row] = true;
      const auto& p = corpus.playlist(row);
      const auto n = p.tracks.size();
      const auto k = static_cast<std::size_t>(tr.seed_count);

      std::vector<std::size_t> seed_pos(k);
      if (tr.random_seeds) {
        std::vector<std::size_t> all(n);
        std::iota(all.begin(), all.end(), 0);
        for (std::size_t j = 0; j < k; ++j) std::swap(all[j], all[j + below(n - j)]);
        std::copy_n(all.begin(), k, seed_pos.begin());
        std::ranges::sort(seed_pos);
      } else {
        std::iota(seed_pos.begin(), seed_pos.end(), 0);
      }

      ChallengePlaylist cp;
      cp.pid = p.pid;
      cp.scenario = scenario;
      if (tr.has_title) cp.title = p.name;
      std::vector<bool> is_seed(n, false);
      for (auto pos : seed_pos) {
        is_seed[pos] = true;
        cp.seeds.push_back({static_cast<std::int64_t>(pos), p.tracks[pos]});
      }
      const auto seeds = cp.seed_set();

      std::vector<TrackId> withheld;
      std::vector<std::int64_t> positions;
      for (std::size_t pos = 0; pos < n; ++pos) {
        if (is_seed[pos]) continue;
        positions.push_back(static_cast<std::int64_t>(pos));
        if (!std::ranges::binary_search(seeds, p.tracks[pos])) withheld.push_back(p.tracks[pos]);
      }
      truth.entries.emplace(p.pid, make_ground_truth_entry(std::move(withheld), std::move(positions),
                                                           corpus.catalog()));
      challenge.playlists.push_back(std::move(cp));
    }
  }

  std::ranges::stable_sort(challenge.playlists, [](const auto& a, const auto& b) {
    if (a.scenario != b.scenario) return a.scenario < b.scenario;
    return a.pid < b.pid;
  });
  return {std::move(challenge), std::move(truth)};
}

}  // namespace apc
