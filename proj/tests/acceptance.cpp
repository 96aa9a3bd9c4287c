// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "apc/challenge.hpp"
#include "apc/cli.hpp"
#include "apc/ensemble.hpp"
#include "apc/metrics.hpp"
#include "apc/recommend.hpp"
#include "apc/synthgen.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace apc;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& body) {
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << title;
  if (!o.detail.empty()) std::cout << " [" << o.detail << "]";
  std::cout << std::endl;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

GroundTruthEntry truth_of(const std::vector<TrackId>& tracks, const Catalog& catalog) {
  std::vector<std::int64_t> pos(tracks.size());
  for (std::size_t i = 0; i < pos.size(); ++i) pos[i] = static_cast<std::int64_t>(i);
  return make_ground_truth_entry(tracks, std::move(pos), catalog);
}

int cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  if (code != 0) std::cerr << "command failed (" << code << "): " << args.front() << ": " << err.str();
  return code;
}

// ---------------------------------------------------------------------------

Outcome metric_oracle() {
  constexpr int kCases = 10000;
  constexpr double kTol = 1e-12;
  std::mt19937_64 rng(2024);
  std::vector<int> artists(2000);
  for (std::size_t i = 0; i < artists.size(); ++i) artists[i] = static_cast<int>(rng() % 300);
  const auto catalog = test::make_catalog(artists.size(), artists);
  auto artist_of = [&](unsigned t) { return catalog.artist_of(t); };

  const auto start = Clock::now();
  int mismatches = 0;
  double worst = 0.0;
  std::vector<TrackId> all(catalog.num_tracks());
  for (TrackId t = 0; t < all.size(); ++t) all[t] = t;
  for (int c = 0; c < kCases; ++c) {
    // Ground truth and predictions overlap heavily only some of the time.
    const std::size_t universe = 20 + rng() % 1980;
    std::shuffle(all.begin(), all.begin() + static_cast<long>(universe), rng);
    const std::size_t g = 1 + rng() % std::min<std::size_t>(universe, 250);
    std::vector<TrackId> gt(all.begin(), all.begin() + static_cast<long>(g));
    std::shuffle(all.begin(), all.begin() + static_cast<long>(universe), rng);
    const std::size_t n = std::min<std::size_t>(universe, 1 + rng() % 500);
    std::vector<TrackId> predicted(all.begin(), all.begin() + static_cast<long>(n));

    const auto entry = truth_of(gt, catalog);
    const std::vector<unsigned> p(predicted.begin(), predicted.end()), q(gt.begin(), gt.end());
    const double dr = std::abs(r_precision(predicted, entry, catalog) - oracle::r_precision(p, q, artist_of));
    const double dn = std::abs(ndcg(predicted, entry) - oracle::ndcg(p, q));
    worst = std::max({worst, dr, dn});
    if (dr > kTol || dn > kTol || clicks(predicted, entry) != oracle::clicks(p, q)) ++mismatches;
  }
  const double elapsed = seconds_since(start);
  return {mismatches == 0 && elapsed < 10.0, std::to_string(kCases) + " cases, " + std::to_string(mismatches) +
                                                 " mismatches, max abs diff " + fmt("%.3g", worst) + ", " +
                                                 fmt("%.2f", elapsed) + " s"};
}

Outcome fixed_points() {
  std::vector<std::string> bad;
  const auto catalog = test::make_catalog(600);
  std::vector<TrackId> list(500);
  for (TrackId t = 0; t < 500; ++t) list[t] = t;
  if (clicks(list, truth_of({599}, catalog)) != 51) bad.push_back("miss clicks");

  const auto gt = truth_of({3, 4}, catalog);
  if (ndcg(std::vector<TrackId>{3, 4, 5}, gt) != 1.0) bad.push_back("ideal ndcg");

  const auto rcat = test::make_catalog(8, {0, 0, 1, 2, 1, 3, 4, 9});
  const double rp = r_precision(std::vector<TrackId>{0, 4, 5, 6}, truth_of({0, 1, 2, 3}, rcat), rcat);
  if (rp != 0.375) bad.push_back("r-precision " + fmt("%.17g", rp));

  const double exact = (1 / std::log2(3.0) + 1 / std::log2(4.0)) / (1 + 1 / std::log2(3.0));
  const double nd = ndcg(std::vector<TrackId>{5, 3, 4}, gt);
  if (std::abs(nd - exact) > 1e-15 || std::abs(nd - 0.6934) > 5e-5) bad.push_back("ndcg " + fmt("%.17g", nd));

  std::string detail = "clicks 51, ndcg 1, r-precision " + fmt("%.4f", rp) + ", ndcg " + fmt("%.4f", nd);
  for (const auto& b : bad) detail += "; wrong " + b;
  return {bad.empty(), detail};
}

Outcome challenge_shape(const fs::path& corpus_path, const fs::path& dir) {
  if (cli({"split", "--corpus", corpus_path.string(), "--per-type", "1000", "--seed", "1", "--out", dir.string()}) != 0)
    return {false, "split failed"};
  const auto corpus = load_snapshot(corpus_path);
  const auto challenge = load_challenge(dir / "challenge.json", corpus.catalog());
  const auto truth = load_ground_truth(dir / "ground_truth.json", corpus.catalog());

  std::vector<std::string> bad;
  if (challenge.playlists.size() != 10000) bad.push_back(std::to_string(challenge.playlists.size()) + " playlists");
  std::array<int, kNumScenarios> per{};
  std::set<std::int64_t> pids;
  std::size_t broken = 0;
  for (const auto& cp : challenge.playlists) {
    ++per[scenario_index(cp.scenario)];
    pids.insert(cp.pid);
    const auto tr = traits(cp.scenario);
    const auto row = corpus.find_pid(cp.pid);
    if (!row || cp.seeds.size() != static_cast<std::size_t>(tr.seed_count) || cp.title.has_value() != tr.has_title ||
        !truth.entries.contains(cp.pid)) {
      ++broken;
      continue;
    }
    const auto& p = corpus.playlist(*row);
    const auto& gt = truth.at(cp.pid);
    // Seeds are the listed positions (the first k unless random), the ground
    // truth holds the remaining positions, and the two track sets split the
    // playlist's unique tracks.
    std::set<std::int64_t> positions;
    bool ok = true;
    for (std::size_t i = 0; i < cp.seeds.size(); ++i) {
      const auto pos = cp.seeds[i].pos;
      ok &= pos >= 0 && static_cast<std::size_t>(pos) < p.tracks.size() &&
            p.tracks[static_cast<std::size_t>(pos)] == cp.seeds[i].track;
      ok &= tr.random_seeds || pos == static_cast<std::int64_t>(i);
      positions.insert(pos);
    }
    for (auto pos : gt.positions) ok &= positions.insert(pos).second;
    ok &= positions.size() == p.tracks.size();
    const auto seeds = cp.seed_set();
    std::set<TrackId> joined(gt.tracks.begin(), gt.tracks.end());
    for (auto s : seeds) ok &= joined.insert(s).second;
    const auto unique = corpus.unique_tracks(*row);
    ok &= std::equal(joined.begin(), joined.end(), unique.begin(), unique.end());
    ok &= !gt.tracks.empty();
    broken += !ok;
  }
  for (std::size_t i = 0; i < kNumScenarios; ++i)
    if (per[i] != 1000) bad.push_back(scenario_tag(kAllScenarios[i]) + " has " + std::to_string(per[i]));
  if (pids.size() != challenge.playlists.size()) bad.push_back("repeated pids");
  if (broken) bad.push_back(std::to_string(broken) + " playlists fail the partition check");
  std::string detail = "10 scenarios x 1000, seed counts 0,5,5,10,10,25,25,100,100,1";
  for (const auto& b : bad) detail += "; " + b;
  return {bad.empty(), detail};
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Outcome wrmf_convergence() {
  std::mt19937_64 rng(77);
  int violations = 0;
  double worst_rise = 0.0;
  for (int inst = 0; inst < 50; ++inst) {
    CsrMatrix m;
    m.rows = 1 + rng() % 8;
    m.cols = 1 + rng() % 8;
    const double density = 0.2 + 0.6 * static_cast<double>(rng() % 1000) / 1000.0;
    for (std::size_t r = 0; r < m.rows; ++r) {
      for (std::size_t c = 0; c < m.cols; ++c)
        if (static_cast<double>(rng() % 1000) / 1000.0 < density) m.col_idx.push_back(static_cast<std::uint32_t>(c));
      m.row_ptr.push_back(m.col_idx.size());
    }
    WrmfParams p;
    p.factors = 1 + static_cast<int>(rng() % 3);
    p.regularization = std::pow(10.0, -3.0 + static_cast<double>(rng() % 400) / 100.0);
    p.alpha = static_cast<double>(rng() % 50);
    p.iterations = 10;
    p.seed = rng();
    std::vector<double> trace;
    train_wrmf(m, p, [&](int, double obj) { trace.push_back(obj); });
    for (std::size_t i = 1; i < trace.size(); ++i) {
      const double rise = (trace[i] - trace[i - 1]) / std::max(std::abs(trace[i - 1]), 1e-300);
      worst_rise = std::max(worst_rise, rise);
      violations += rise > 1e-9;
    }
  }

  CsrMatrix full;
  full.rows = full.cols = 3;
  const int b[3][3] = {{1, 1, 0}, {0, 1, 1}, {1, 0, 1}};
  for (auto& row : b) {
    for (std::uint32_t c = 0; c < 3; ++c)
      if (row[c]) full.col_idx.push_back(c);
    full.row_ptr.push_back(full.col_idx.size());
  }
  const auto model = train_wrmf(full, {3, 1e-6, 40.0, 50, 5, 1});
  double err = 0.0;
  for (std::size_t r = 0; r < 3; ++r)
    for (auto c : full.row(r)) err = std::max(err, std::abs(dot(model.row(r), model.item(c)) - 1.0));
  return {violations == 0 && err < 1e-3, "50 instances, " + std::to_string(violations) +
                                             " rising half-sweeps (max relative rise " + fmt("%.2g", worst_rise) +
                                             "), 3x3 reconstruction error " + fmt("%.2g", err)};
}

Outcome brute_force_cf() {
  std::mt19937_64 rng(31);
  constexpr std::size_t kTracks = 200;
  std::vector<std::vector<TrackId>> lists(400);
  for (auto& l : lists) {
    // Clustered draws so neighborhoods overlap.
    const auto base = rng() % kTracks;
    const auto len = 3 + rng() % 20;
    for (std::size_t k = 0; k < len; ++k) l.push_back(static_cast<TrackId>((base + rng() % 40) % kTracks));
  }
  const auto corpus = test::make_corpus(lists, kTracks);
  const auto index = ItemSimilarityIndex::build(corpus, 0);
  std::vector<std::vector<unsigned>> raw;
  for (const auto& l : lists) raw.emplace_back(l.begin(), l.end());

  int mismatched = 0;
  constexpr int kQueries = 25;
  for (int q = 0; q < kQueries; ++q) {
    std::vector<TrackId> seeds;
    const auto k = 1 + rng() % 10;
    for (std::size_t i = 0; i < k; ++i) seeds.push_back(static_cast<TrackId>(rng() % kTracks));
    const auto rec = recommend_item_cf(test::seeded(seeds), index, corpus, 50);
    const auto expected = oracle::item_cf(raw, kTracks, std::vector<unsigned>(seeds.begin(), seeds.end()), 50);
    bool same = rec.size() == expected.size();
    for (std::size_t i = 0; same && i < expected.size(); ++i) {
      same = rec.items[i].track == expected[i].first && std::abs(rec.items[i].score - expected[i].second) <= 1e-12;
    }
    mismatched += !same;
  }
  return {mismatched == 0, std::to_string(kQueries) + " seed sets, top-50 lists, " + std::to_string(mismatched) +
                               " mismatches"};
}

Outcome invariances() {
  constexpr int kTrials = 1000;
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  // World for the recommender-side invariances.
  GenConfig cfg;
  cfg.seed = 5;
  cfg.n_genres = 4;
  cfg.artists_per_genre = 20;
  cfg.n_playlists = 500;
  cfg.playlist_len_range = {5, 120};
  const auto corpus = generate(cfg);
  FirstStageParams fp;
  fp.item_neighbors = 100;
  fp.mf = {8, 0.1, 20.0, 5, 7, 1};
  fp.title.mf = {4, 0.1, 20.0, 3, 11, 1};
  const auto models = FirstStageModels::train(corpus, fp);
  const auto config = HybridConfig::defaults();

  auto random_seed = [&](ScenarioType s) {
    const auto row = static_cast<PlaylistId>(rng() % corpus.num_playlists());
    const auto& p = corpus.playlist(row);
    const auto k = std::min<std::size_t>(p.tracks.size(), 1 + rng() % 12);
    std::vector<TrackId> seeds(p.tracks.begin(), p.tracks.begin() + static_cast<long>(k));
    return test::seeded(seeds, s, p.name, p.pid);
  };

  int idf_broken = 0;
  for (int t = 0; t < kTrials; ++t) {
    const double c = std::exp(-4.0 + 8.0 * u(rng));
    std::vector<double> scaled = models.idf;
    for (auto& v : scaled) v *= c;
    const auto seed = random_seed(ScenarioType::kTitleFirst10);
    bool same = recommend_item_cf(seed, models.item_index, corpus, 100, models.idf).tracks() ==
                recommend_item_cf(seed, models.item_index, corpus, 100, scaled).tracks();
    same &= recommend_playlist_knn(seed, corpus, 50, 100, models.idf).tracks() ==
            recommend_playlist_knn(seed, corpus, 50, 100, scaled).tracks();
    same &= recommend_mf(seed, models.mf, corpus, 100, models.idf).tracks() ==
            recommend_mf(seed, models.mf, corpus, 100, scaled).tracks();
    idf_broken += !same;
  }

  int ranker_broken = 0;
  std::vector<std::pair<ChallengePlaylist, CandidatePool>> pools;
  for (int i = 0; i < 20; ++i) {
    auto seed = random_seed(kAllScenarios[1 + static_cast<std::size_t>(i) % (kNumScenarios - 1)]);
    auto pool = build_pool(seed, models, config, corpus, 300);
    pools.emplace_back(std::move(seed), std::move(pool));
  }
  for (int t = 0; t < kTrials; ++t) {
    const auto& [seed, pool] = pools[static_cast<std::size_t>(t) % pools.size()];
    RankerModel r, scaled;
    const double c = std::exp(-4.0 + 8.0 * u(rng));
    for (std::size_t j = 0; j < kNumFeatures; ++j) {
      r.weights[j] = u(rng) < 0.3 ? 0.0 : 2.0 * u(rng) - 1.0;
      scaled.weights[j] = c * r.weights[j];
    }
    ranker_broken += rerank(seed, pool, r, models, corpus, 200).tracks() !=
                     rerank(seed, pool, scaled, models, corpus, 200).tracks();
  }

  const std::vector<std::function<double(double)>> transforms = {
      [](double x) { return 3.0 * x + 1.0; },
      [](double x) { return x * x * x; },
      [](double x) { return std::exp(x); },
      [](double x) { return std::log1p(x); },
      [](double x) { return std::sqrt(x) + 2.0 * x; },
  };
  int borda_broken = 0;
  for (int t = 0; t < kTrials; ++t) {
    const auto n = 2 + rng() % 8;
    std::vector<std::pair<std::string, MetricMeans>> reports, mapped;
    for (std::size_t i = 0; i < n; ++i) {
      // Coarse grids produce ties now and then.
      auto draw = [&](double hi) { return t % 3 == 0 ? std::round(u(rng) * 4.0) / 4.0 * hi : u(rng) * hi; };
      MetricMeans m{draw(1.0), draw(1.0), draw(20.0), 100};
      reports.emplace_back("team" + std::to_string(i), m);
    }
    const auto& fr = transforms[rng() % transforms.size()];
    const auto& fn = transforms[rng() % transforms.size()];
    const auto& fc = transforms[rng() % transforms.size()];
    for (const auto& [name, m] : reports)
      mapped.emplace_back(name, MetricMeans{fr(m.r_precision), fn(m.ndcg), fc(m.clicks), m.count});
    const auto a = borda_aggregate(reports), b = borda_aggregate(mapped);
    bool same = a.size() == b.size();
    for (std::size_t i = 0; same && i < a.size(); ++i) same = a[i].name == b[i].name && a[i].rank_sum == b[i].rank_sum;
    borda_broken += !same;
  }
  return {idf_broken == 0 && ranker_broken == 0 && borda_broken == 0,
          std::to_string(kTrials) + " trials each: idf " + std::to_string(idf_broken) + ", ranker " +
              std::to_string(ranker_broken) + ", borda " + std::to_string(borda_broken) + " violations"};
}

// ---------------------------------------------------------------------------
// End-to-end pipeline.

struct PipelineRun {
  bool ok = false;
  double seconds = 0.0;
  fs::path dir;
};

PipelineRun run_pipeline(const fs::path& dir, unsigned threads) {
  fs::create_directories(dir);
  const auto t = std::to_string(threads);
  const auto d = [&](const char* sub) { return (dir / sub).string(); };
  const std::string train = d("split/train.bin"), challenge = d("split/challenge.json");
  const auto start = Clock::now();
  PipelineRun run{false, 0.0, dir};
  const std::vector<std::vector<std::string>> steps = {
      {"gen", "--seed", "42", "--playlists", "10000", "--out", d("gen")},
      {"ingest", d("gen"), "--threads", t, "--out", d("ingest")},
      {"split", "--corpus", d("ingest/corpus.bin"), "--per-type", "200", "--seed", "1", "--out", d("split")},
      {"train", "--corpus", train, "--ranker", "--threads", t, "--out", d("models")},
      {"recommend", "--models", d("models"), "--corpus", train, "--challenge", challenge, "--method", "hybrid",
       "--threads", t, "--out", d("hybrid")},
      {"recommend", "--models", d("models"), "--corpus", train, "--challenge", challenge, "--method", "rerank",
       "--threads", t, "--out", d("rerank")},
      {"recommend", "--corpus", train, "--challenge", challenge, "--method", "popularity", "--threads", t, "--out",
       d("popularity")},
  };
  for (const auto& s : steps)
    if (cli(s) != 0) return run;
  for (const char* method : {"hybrid", "rerank", "popularity"}) {
    if (cli({"evaluate", "--corpus", train, "--challenge", challenge, "--ground-truth", d("split/ground_truth.json"),
             "--submission", (dir / method / "submission.csv").string(), "--name", method, "--out",
             (dir / ("eval_" + std::string(method))).string()}) != 0)
      return run;
  }
  run.seconds = seconds_since(start);
  run.ok = true;
  return run;
}

ScoreReport load_report(const fs::path& dir, const std::string& method) {
  return ScoreReport::from_json(read_json_file(dir / ("eval_" + method) / "report.json"));
}

Outcome end_to_end(const PipelineRun& run) {
  if (!run.ok) return {false, "pipeline failed"};
  const auto hybrid = load_report(run.dir, "hybrid");
  const auto pop = load_report(run.dir, "popularity");
  std::vector<std::string> bad;
  double min_r = 1e9, min_n = 1e9;
  for (std::size_t i = 1; i < kNumScenarios; ++i) {
    const auto& h = hybrid.scenarios[i];
    const auto& p = pop.scenarios[i];
    const auto tag = scenario_tag(kAllScenarios[i]);
    min_r = std::min(min_r, h.r_precision / p.r_precision);
    min_n = std::min(min_n, h.ndcg / p.ndcg);
    if (!(h.r_precision >= 1.2 * p.r_precision)) bad.push_back(tag + " r-precision");
    if (!(h.ndcg >= 1.2 * p.ndcg)) bad.push_back(tag + " ndcg");
    if (!(h.clicks < p.clicks)) bad.push_back(tag + " clicks " + fmt("%.3f", h.clicks) + " vs " + fmt("%.3f", p.clicks));
  }
  if (!(run.seconds < 300.0)) bad.push_back("too slow");
  const auto rr = load_report(run.dir, "rerank");
  std::string detail = "T2-T10 min ratio r-precision " + fmt("%.2f", min_r) + ", ndcg " + fmt("%.2f", min_n) +
                       "; overall hybrid " + fmt("%.4f", hybrid.overall.r_precision) + "/" +
                       fmt("%.4f", hybrid.overall.ndcg) + "/" + fmt("%.3f", hybrid.overall.clicks) + ", rerank " +
                       fmt("%.4f", rr.overall.r_precision) + "/" + fmt("%.4f", rr.overall.ndcg) + "/" +
                       fmt("%.3f", rr.overall.clicks) + ", popularity " + fmt("%.4f", pop.overall.r_precision) + "/" +
                       fmt("%.4f", pop.overall.ndcg) + "/" + fmt("%.3f", pop.overall.clicks) + "; pipeline " +
                       fmt("%.1f", run.seconds) + " s";
  for (const auto& b : bad) detail += "; failed " + b;
  return {bad.empty(), detail};
}

Outcome trends(const PipelineRun& run) {
  if (!run.ok) return {false, "pipeline failed"};
  const auto h = load_report(run.dir, "hybrid");
  const auto& s = h.scenarios;
  const auto& t1 = s[scenario_index(ScenarioType::kTitleOnly)];
  const auto& t6 = s[scenario_index(ScenarioType::kTitleFirst25)];
  const auto& t7 = s[scenario_index(ScenarioType::kTitleRandom25)];
  const auto& t8 = s[scenario_index(ScenarioType::kTitleFirst100)];
  const auto& t9 = s[scenario_index(ScenarioType::kTitleRandom100)];
  const auto& t10 = s[scenario_index(ScenarioType::kTitleFirst1)];
  const bool random_wins = t7.ndcg >= t6.ndcg && t9.ndcg >= t8.ndcg;
  const bool one_track = t10.r_precision > t1.r_precision && t10.ndcg > t1.ndcg && t10.clicks < t1.clicks;
  return {random_wins && one_track,
          "ndcg T7 " + fmt("%.4f", t7.ndcg) + " vs T6 " + fmt("%.4f", t6.ndcg) + ", T9 " + fmt("%.4f", t9.ndcg) +
              " vs T8 " + fmt("%.4f", t8.ndcg) + "; T10 " + fmt("%.4f", t10.r_precision) + "/" +
              fmt("%.4f", t10.ndcg) + "/" + fmt("%.3f", t10.clicks) + " vs T1 " + fmt("%.4f", t1.r_precision) + "/" +
              fmt("%.4f", t1.ndcg) + "/" + fmt("%.3f", t1.clicks)};
}

Outcome determinism(const PipelineRun& a, const PipelineRun& b) {
  if (!a.ok || !b.ok) return {false, "pipeline failed"};
  std::vector<std::string> differ;
  const std::vector<std::string> files = {"ingest/corpus.bin",          "split/challenge.json",
                                          "models/wrmf.bin",            "models/item_index.bin",
                                          "models/title.bin",           "models/ranker.cfg",
                                          "hybrid/submission.csv",      "rerank/submission.csv",
                                          "popularity/submission.csv",  "eval_hybrid/report.json",
                                          "eval_rerank/report.json",    "eval_popularity/report.json",
                                          "eval_hybrid/report.txt"};
  for (const auto& f : files) {
    const auto x = test::read_file(a.dir / f);
    if (x.empty() || x != test::read_file(b.dir / f)) differ.push_back(f);
  }
  std::string detail = std::to_string(files.size()) + " artifacts compared between 1 and 4 threads";
  for (const auto& f : differ) detail += "; differs: " + f;
  return {differ.empty(), detail};
}

}  // namespace

int main() {
  const auto root = test::temp_dir("acceptance");
  std::cout << "work dir " << root.string() << std::endl;

  report(1, "metric oracle equivalence", metric_oracle);
  report(2, "metric fixed points", fixed_points);

  // Pipeline runs first: criterion 3 reuses the ingested 10k corpus.
  const auto single = run_pipeline(root / "run_t1", 1);
  report(3, "challenge-set shape", [&] { return challenge_shape(root / "run_t1/ingest/corpus.bin", root / "split1000"); });
  report(4, "wrmf convergence", wrmf_convergence);
  report(5, "brute-force item-cf equivalence", brute_force_cf);
  report(6, "ordering invariances", invariances);
  report(7, "end-to-end quality against popularity", [&] { return end_to_end(single); });
  report(8, "qualitative scenario trends", [&] { return trends(single); });
  const auto multi = run_pipeline(root / "run_t4", 4);
  report(9, "determinism across thread counts", [&] { return determinism(single, multi); });

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  if (failures == 0) fs::remove_all(root);
  return failures == 0 ? 0 : 1;
}
