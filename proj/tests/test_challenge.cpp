#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "apc/challenge.hpp"
#include "apc/error.hpp"
#include "support.hpp"

using namespace apc;

namespace {

std::vector<TrackId> iota_tracks(TrackId from, std::size_t n) {
  std::vector<TrackId> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = from + static_cast<TrackId>(i);
  return v;
}

// One playlist per requested length, each made of distinct tracks.
Corpus corpus_of_lengths(const std::vector<std::size_t>& lengths, std::size_t n_tracks) {
  std::vector<std::vector<TrackId>> lists;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    std::vector<TrackId> l;
    for (std::size_t k = 0; k < lengths[i]; ++k) l.push_back(static_cast<TrackId>((i * 7 + k) % n_tracks));
    lists.push_back(std::move(l));
  }
  std::vector<std::string> names(lists.size(), "Mix");
  return test::make_corpus(lists, n_tracks, {}, names);
}

}  // namespace

TEST_CASE("scenario tags and traits") {
  CHECK(scenario_tag(ScenarioType::kTitleFirst1) == "T10");
  CHECK(parse_scenario("T7") == ScenarioType::kTitleRandom25);
  CHECK_FALSE(parse_scenario("T11").has_value());
  const int expected[] = {0, 5, 5, 10, 10, 25, 25, 100, 100, 1};
  for (std::size_t i = 0; i < kNumScenarios; ++i) CHECK(traits(kAllScenarios[i]).seed_count == expected[i]);
  CHECK_FALSE(traits(ScenarioType::kFirst5).has_title);
  CHECK_FALSE(traits(ScenarioType::kFirst10).has_title);
  CHECK(traits(ScenarioType::kTitleRandom100).random_seeds);
}

TEST_CASE("first-k split of a long playlist") {
  // Ten 150-track playlists: exactly one feeds each scenario.
  const auto corpus = corpus_of_lengths(std::vector<std::size_t>(10, 150), 400);
  const auto [challenge, truth] = build_challenge_set(corpus, 1, 7);
  REQUIRE(challenge.playlists.size() == 10);

  for (const auto& cp : challenge.playlists) {
    const auto row = *corpus.find_pid(cp.pid);
    const auto& p = corpus.playlist(row);
    const auto tr = traits(cp.scenario);
    CAPTURE(scenario_tag(cp.scenario));
    REQUIRE(cp.seeds.size() == static_cast<std::size_t>(tr.seed_count));
    CHECK(cp.title.has_value() == tr.has_title);
    for (std::size_t i = 0; i < cp.seeds.size(); ++i) {
      if (!tr.random_seeds) CHECK(cp.seeds[i].pos == static_cast<std::int64_t>(i));
      CHECK(cp.seeds[i].track == p.tracks[static_cast<std::size_t>(cp.seeds[i].pos)]);
    }
    const auto& gt = truth.at(cp.pid);
    CHECK(gt.positions.size() == 150 - cp.seeds.size());
    // Seeds and ground truth split the playlist's track set.
    std::set<TrackId> all(p.tracks.begin(), p.tracks.end()), joined(gt.tracks.begin(), gt.tracks.end());
    for (auto s : cp.seed_set()) {
      CHECK_FALSE(gt.contains(s));
      joined.insert(s);
    }
    CHECK(joined == all);
    if (cp.scenario == ScenarioType::kTitleOnly) CHECK(gt.tracks.size() == all.size());
    if (cp.scenario == ScenarioType::kTitleFirst100) {
      CHECK(gt.positions.front() == 100);
      CHECK(gt.positions.back() == 149);
    }
  }
}

TEST_CASE("random seeds keep ascending positions and vary with the seed") {
  const auto corpus = corpus_of_lengths(std::vector<std::size_t>(10, 150), 400);
  const auto a = build_challenge_set(corpus, 1, 1).first;
  const auto b = build_challenge_set(corpus, 1, 2).first;
  CHECK(a == build_challenge_set(corpus, 1, 1).first);
  bool differs = false;
  for (const auto* set : {&a, &b}) {
    for (const auto& cp : set->playlists) {
      CHECK(std::ranges::is_sorted(cp.seeds, {}, &SeedTrack::pos));
    }
  }
  for (std::size_t i = 0; i < a.playlists.size(); ++i) differs |= !(a.playlists[i].seeds == b.playlists[i].seeds);
  CHECK(differs);
}

TEST_CASE("split partitions playlists across scenarios") {
  std::vector<std::size_t> lengths;
  for (int i = 0; i < 300; ++i) lengths.push_back(static_cast<std::size_t>(2 + (i * 37) % 180));
  const auto corpus = corpus_of_lengths(lengths, 500);
  const auto [challenge, truth] = build_challenge_set(corpus, 8, 11);
  CHECK(challenge.playlists.size() == 80);
  std::set<std::int64_t> pids;
  for (const auto& cp : challenge.playlists) {
    CHECK(pids.insert(cp.pid).second);
    CHECK(corpus.unique_tracks(*corpus.find_pid(cp.pid)).size() >
          static_cast<std::size_t>(traits(cp.scenario).seed_count));
  }
  CHECK(truth.entries.size() == 80);
}

TEST_CASE("infeasible split") {
  const auto corpus = corpus_of_lengths(std::vector<std::size_t>(30, 50), 200);
  CHECK_THROWS_AS(build_challenge_set(corpus, 1, 1), InfeasibleSplitError);
  CHECK_THROWS_AS(build_challenge_set(corpus, 0, 1), ConfigError);
}

TEST_CASE("submission validation codes") {
  const auto corpus = test::make_corpus({iota_tracks(0, 10)}, 1000);
  ChallengeSet challenge;
  challenge.playlists.push_back(test::seeded({0, 1}, ScenarioType::kTitleFirst5, "x", 1));
  challenge.playlists.push_back(test::seeded({2}, ScenarioType::kTitleFirst1, "y", 2));

  Submission good;
  good.predictions[1] = iota_tracks(10, 500);
  good.predictions[2] = iota_tracks(10, 500);
  CHECK(validate_submission(good, challenge, corpus).passed);

  auto reasons_for = [&](const Submission& s, std::int64_t pid) {
    const auto report = validate_submission(s, challenge, corpus);
    CHECK_FALSE(report.passed);
    for (const auto& e : report.entries)
      if (e.pid == pid) return e.reasons;
    return std::vector<ValidationCode>{};
  };

  auto sub = good;
  sub.predictions[1].pop_back();
  CHECK(reasons_for(sub, 1) == std::vector{ValidationCode::kWrongLength});

  sub = good;
  sub.predictions[1][7] = 0;
  CHECK(reasons_for(sub, 1) == std::vector{ValidationCode::kSeedLeak});

  sub = good;
  sub.predictions.erase(2);
  CHECK(reasons_for(sub, 2) == std::vector{ValidationCode::kMissingPid});

  sub = good;
  sub.predictions[2][3] = sub.predictions[2][4];
  CHECK(reasons_for(sub, 2) == std::vector{ValidationCode::kDuplicateTrack});

  sub = good;
  sub.predictions[2][0] = kUnknownTrack;
  CHECK(reasons_for(sub, 2) == std::vector{ValidationCode::kUnknownTrack});

  sub = good;
  sub.predictions[99] = iota_tracks(10, 500);
  const auto report = validate_submission(sub, challenge, corpus);
  CHECK_FALSE(report.passed);
  CHECK(report.unexpected_pids == std::vector<std::int64_t>{99});
}

TEST_CASE("challenge, ground truth and submission files round trip") {
  const auto corpus = corpus_of_lengths(std::vector<std::size_t>(10, 150), 600);
  const auto [challenge, truth] = build_challenge_set(corpus, 1, 3);
  CHECK(challenge_from_json(challenge_to_json(challenge, corpus.catalog()), corpus.catalog()) == challenge);
  CHECK(ground_truth_from_json(ground_truth_to_json(truth, corpus.catalog()), corpus.catalog()) == truth);

  Submission sub;
  sub.team = "demo";
  sub.predictions[4] = iota_tracks(0, 500);
  sub.predictions[9] = iota_tracks(1, 500);
  sub.predictions[9][17] = kUnknownTrack;
  std::stringstream buf;
  write_submission(sub, corpus.catalog(), buf);
  const auto back = read_submission(buf, corpus.catalog());
  CHECK(back.team == "demo");
  CHECK(back.predictions == sub.predictions);
}
