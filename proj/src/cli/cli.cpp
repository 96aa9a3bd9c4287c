#include "apc/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <unordered_set>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "apc/challenge.hpp"
#include "apc/checksum.hpp"
#include "apc/corpus.hpp"
#include "apc/ensemble.hpp"
#include "apc/error.hpp"
#include "apc/kvconfig.hpp"
#include "apc/metrics.hpp"
#include "apc/parallel.hpp"
#include "apc/recommend.hpp"
#include "apc/synthgen.hpp"

namespace apc::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kManifestName = "manifest.json";
constexpr const char* kCorpusName = "corpus.bin";
constexpr const char* kTrainCorpusName = "train.bin";
constexpr const char* kChallengeName = "challenge.json";
constexpr const char* kGroundTruthName = "ground_truth.json";
constexpr const char* kItemIndexName = "item_index.bin";
constexpr const char* kFactorName = "wrmf.bin";
constexpr const char* kTitleName = "title.bin";
constexpr const char* kConfigName = "config.cfg";
constexpr const char* kRankerName = "ranker.cfg";
constexpr const char* kSubmissionName = "submission.csv";

// ---------------------------------------------------------------------------
// Options shared by every subcommand.

struct Common {
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  std::string config;
  std::string out;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "RNG seed");
  sub->add_option("--threads", c.threads, "worker threads (changes wall time only)")->check(CLI::Range(1u, 256u));
  sub->add_option("--config", c.config, "key = value config file");
  sub->add_option("--out", c.out, "output directory")->required();
}

// ---------------------------------------------------------------------------
// Config handling.

GenConfig gen_from(const KvConfig& kv) {
  GenConfig g;
  g.seed = static_cast<std::uint64_t>(kv.integer("gen.seed", static_cast<std::int64_t>(g.seed)));
  g.n_playlists = static_cast<int>(kv.integer("gen.playlists", g.n_playlists));
  g.n_genres = static_cast<int>(kv.integer("gen.genres", g.n_genres));
  g.artists_per_genre = static_cast<int>(kv.integer("gen.artists_per_genre", g.artists_per_genre));
  g.albums_per_artist = static_cast<int>(kv.integer("gen.albums_per_artist", g.albums_per_artist));
  g.tracks_per_album = static_cast<int>(kv.integer("gen.tracks_per_album", g.tracks_per_album));
  g.playlist_len_range.first = static_cast<int>(kv.integer("gen.min_length", g.playlist_len_range.first));
  g.playlist_len_range.second = static_cast<int>(kv.integer("gen.max_length", g.playlist_len_range.second));
  g.genre_mix_concentration = kv.real("gen.concentration", g.genre_mix_concentration);
  g.zipf_exponent = kv.real("gen.zipf_exponent", g.zipf_exponent);
  g.favored_artists = static_cast<int>(kv.integer("gen.favored_artists", g.favored_artists));
  g.artist_affinity = kv.real("gen.artist_affinity", g.artist_affinity);
  g.informative_title_rate = kv.real("gen.informative_title_rate", g.informative_title_rate);
  g.displaced_rate = kv.real("gen.displaced_rate", g.displaced_rate);
  g.first_pid = kv.integer("gen.first_pid", g.first_pid);
  return g;
}

void gen_to(const GenConfig& g, KvConfig& kv) {
  kv.set("gen.seed", static_cast<std::int64_t>(g.seed));
  kv.set("gen.playlists", static_cast<std::int64_t>(g.n_playlists));
  kv.set("gen.genres", static_cast<std::int64_t>(g.n_genres));
  kv.set("gen.artists_per_genre", static_cast<std::int64_t>(g.artists_per_genre));
  kv.set("gen.albums_per_artist", static_cast<std::int64_t>(g.albums_per_artist));
  kv.set("gen.tracks_per_album", static_cast<std::int64_t>(g.tracks_per_album));
  kv.set("gen.min_length", static_cast<std::int64_t>(g.playlist_len_range.first));
  kv.set("gen.max_length", static_cast<std::int64_t>(g.playlist_len_range.second));
  kv.set("gen.concentration", g.genre_mix_concentration);
  kv.set("gen.zipf_exponent", g.zipf_exponent);
  kv.set("gen.favored_artists", static_cast<std::int64_t>(g.favored_artists));
  kv.set("gen.artist_affinity", g.artist_affinity);
  kv.set("gen.informative_title_rate", g.informative_title_rate);
  kv.set("gen.displaced_rate", g.displaced_rate);
  kv.set("gen.first_pid", g.first_pid);
}

// Every key any subcommand understands, so typos fail loudly.
const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = [] {
    KvConfig kv;
    gen_to(GenConfig{}, kv);
    hybrid_config_to(HybridConfig::defaults(), kv);
    first_stage_to(FirstStageParams{}, kv);
    ranker_params_to(RankerParams{}, kv);
    pair_sampling_to(PairSamplingParams{}, kv);
    kv.set("split.per_type", std::int64_t{0});
    const auto list = kv.keys();
    return std::set<std::string>(list.begin(), list.end());
  }();
  return keys;
}

KvConfig load_config(const std::string& path) {
  if (path.empty()) return {};
  auto kv = KvConfig::load(path);
  check_config_version(kv);
  for (const auto& key : kv.keys()) {
    if (!known_keys().contains(key)) throw ConfigError(kv.source() + ": unknown key \"" + key + "\"");
  }
  return kv;
}

json kv_json(const KvConfig& kv) {
  json j = json::object();
  for (const auto& key : kv.keys()) j[key] = *kv.get(key);
  return j;
}

// ---------------------------------------------------------------------------
// Manifest.

class Manifest {
 public:
  Manifest(std::string command, const Common& common) : command_(std::move(command)), threads_(common.threads) {
    out_ = common.out;
    std::error_code ec;
    fs::create_directories(out_, ec);
    if (ec) throw IoError("cannot create output directory " + out_.string() + ": " + ec.message());
  }

  const fs::path& dir() const { return out_; }
  fs::path path(const std::string& name) const { return out_ / name; }

  void param(const std::string& key, json value) { config_[key] = std::move(value); }
  void config(const KvConfig& kv) {
    const auto j = kv_json(kv);
    for (const auto& [k, v] : j.items()) config_[k] = v;
  }
  void input(const fs::path& p) { inputs_[p.filename().string()] = sha256_file(p); }
  void output(const std::string& name) { outputs_[name] = sha256_file(out_ / name); }

  void write() const {
    json doc = {{"tool", "apc"},
                {"format", 1},
                {"command", command_},
                {"config", config_},
                {"inputs", inputs_},
                {"outputs", outputs_},
                {"runtime", {{"threads", threads_}}}};
    write_json_file(doc, out_ / kManifestName);
  }

 private:
  std::string command_;
  unsigned threads_;
  fs::path out_;
  json config_ = json::object();
  json inputs_ = json::object();
  json outputs_ = json::object();
};

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

// ---------------------------------------------------------------------------
// Subcommands.

struct GenArgs {
  std::optional<int> playlists;
  std::optional<double> concentration;
  std::size_t slice_size = 1000;
};

int cmd_gen(const Common& c, const GenArgs& a, std::ostream& out) {
  const auto kv = load_config(c.config);
  auto g = gen_from(kv);
  if (c.seed) g.seed = *c.seed;
  if (a.playlists) g.n_playlists = *a.playlists;
  if (a.concentration) g.genre_mix_concentration = *a.concentration;
  if (a.slice_size == 0) throw UsageError("--slice-size must be positive");

  Manifest m("gen", c);
  KvConfig eff;
  gen_to(g, eff);
  m.config(eff);
  m.param("slice_size", a.slice_size);

  const auto corpus = generate(g);
  const auto paths = write_slices(corpus, m.dir(), a.slice_size);
  for (const auto& p : paths) m.output(p.filename().string());
  m.write();
  out << "wrote " << paths.size() << " slices, " << corpus.num_playlists() << " playlists, "
      << corpus.num_tracks() << " tracks to " << m.dir().string() << '\n';
  return kExitOk;
}

std::vector<fs::path> expand_inputs(const std::vector<std::string>& inputs) {
  std::vector<fs::path> files;
  for (const auto& in : inputs) {
    const fs::path p(in);
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::directory_iterator(p)) {
        const auto name = e.path().filename().string();
        if (e.is_regular_file() && e.path().extension() == ".json" && name.rfind("mpd.slice.", 0) == 0) {
          found.push_back(e.path());
        }
      }
      // Numeric slice order, not lexicographic.
      std::ranges::sort(found, [](const fs::path& a, const fs::path& b) {
        auto first = [](const fs::path& x) {
          const auto s = x.filename().string().substr(10);
          return std::stoll(s.substr(0, s.find('-')));
        };
        return first(a) < first(b);
      });
      if (found.empty()) throw IoError("no mpd.slice.*.json files in " + p.string());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.push_back(p);
    }
  }
  if (files.empty()) throw UsageError("ingest needs at least one input file or directory");
  return files;
}

int cmd_ingest(const Common& c, const std::vector<std::string>& inputs, std::ostream& out) {
  const auto files = expand_inputs(inputs);
  Manifest m("ingest", c);
  m.param("inputs", files.size());
  for (const auto& f : files) m.input(f);
  const auto corpus = ingest(files);
  save_snapshot(corpus, m.path(kCorpusName));
  m.output(kCorpusName);
  const auto stats = corpus_stats(corpus);
  write_json_file(stats, m.path("stats.json"));
  m.output("stats.json");
  m.write();
  out << stats.dump(1) << '\n';
  return kExitOk;
}

int cmd_split(const Common& c, const std::string& corpus_path, std::optional<int> per_type_flag,
              std::ostream& out) {
  const auto kv = load_config(c.config);
  const int per_type = per_type_flag.value_or(static_cast<int>(kv.integer("split.per_type", 1000)));
  const auto seed = c.seed.value_or(1);
  Manifest m("split", c);
  m.param("per_type", per_type);
  m.param("seed", seed);
  m.input(corpus_path);

  const auto corpus = load_snapshot(corpus_path);
  const auto [challenge, truth] = build_challenge_set(corpus, per_type, seed);
  save_challenge(challenge, corpus.catalog(), m.path(kChallengeName));
  save_ground_truth(truth, corpus.catalog(), m.path(kGroundTruthName));
  std::unordered_set<std::int64_t> held_out;
  for (const auto& cp : challenge.playlists) held_out.insert(cp.pid);
  save_snapshot(corpus.without(held_out), m.path(kTrainCorpusName));
  for (const char* f : {kChallengeName, kGroundTruthName, kTrainCorpusName}) m.output(f);
  m.write();
  out << "challenge set: " << challenge.playlists.size() << " playlists (" << per_type << " per scenario)\n";
  return kExitOk;
}

struct TrainArgs {
  std::string corpus;
  bool ranker = false;
  std::optional<int> factors;
  std::optional<int> iterations;
  std::optional<std::size_t> item_neighbors;
};

int cmd_train(const Common& c, const TrainArgs& a, std::ostream& out) {
  const auto kv = load_config(c.config);
  auto first = first_stage_from(kv);
  auto hybrid = hybrid_config_from(kv);
  auto ranker_params = ranker_params_from(kv);
  auto sampling = pair_sampling_from(kv);
  if (c.seed) {
    first.mf.seed = *c.seed;
    first.title.mf.seed = *c.seed + 1;
    sampling.rng_seed = *c.seed + 2;
    ranker_params.rng_seed = *c.seed + 3;
  }
  if (a.factors) first.mf.factors = *a.factors;
  if (a.iterations) first.mf.iterations = *a.iterations;
  if (a.item_neighbors) first.item_neighbors = *a.item_neighbors;
  first.threads = c.threads;

  Manifest m("train", c);
  KvConfig eff;
  first_stage_to(first, eff);
  hybrid_config_to(hybrid, eff);
  if (a.ranker) {
    ranker_params_to(ranker_params, eff);
    pair_sampling_to(sampling, eff);
  }
  m.config(eff);
  m.input(a.corpus);

  const auto corpus = load_snapshot(a.corpus);
  const auto models = FirstStageModels::train(corpus, first);
  save_item_index(models.item_index, m.path(kItemIndexName));
  save_factor_model(models.mf, m.path(kFactorName));
  save_title_index(models.titles, m.path(kTitleName));
  write_text_file(m.path(kConfigName), "# effective training configuration\n" + eff.dump());
  for (const char* f : {kItemIndexName, kFactorName, kTitleName, kConfigName}) m.output(f);

  if (a.ranker) {
    const auto set = make_training_pairs(corpus, first, hybrid, sampling);
    json curve = json::array();
    const auto ranker = train_ranker(set.pairs, ranker_params, [&](int, double loss) { curve.push_back(loss); });
    save_ranker(ranker, m.path(kRankerName));
    write_json_file({{"pairs", set.pairs.size()},
                     {"playlists", set.playlists},
                     {"labeled_positive", set.labeled_positive},
                     {"labeled_negative", set.labeled_negative},
                     {"loss", curve}},
                    m.path("ranker_training.json"));
    m.output(kRankerName);
    m.output("ranker_training.json");
    out << "ranker: " << set.pairs.size() << " pairs, final loss " << curve.back().get<double>() << '\n';
  }
  m.write();
  out << "trained first stage on " << corpus.num_playlists() << " playlists\n";
  return kExitOk;
}

struct RecommendArgs {
  std::string models;
  std::string corpus;
  std::string challenge;
  std::string method = "hybrid";
  std::string team = "apc";
};

Recommendation pad_with_popularity(Recommendation rec, const ChallengePlaylist& cp, const FirstStageModels& models,
                                   std::size_t n) {
  if (rec.size() >= n) {
    rec.items.resize(n);
    return rec;
  }
  const auto seeds = cp.seed_set();
  std::unordered_set<TrackId> taken;
  for (const auto& it : rec.items) taken.insert(it.track);
  double floor = rec.items.empty() ? 0.0 : std::min(0.0, rec.items.back().score);
  for (auto t : models.popularity) {
    if (rec.size() >= n) break;
    if (taken.contains(t) || std::ranges::binary_search(seeds, t)) continue;
    floor -= 1.0;
    rec.items.push_back({t, floor});
    rec.padded = true;
  }
  if (rec.size() < n) {
    throw CatalogTooSmallError("catalog cannot supply " + std::to_string(n) + " tracks for pid " +
                               std::to_string(cp.pid));
  }
  return rec;
}

int cmd_recommend(const Common& c, const RecommendArgs& a, std::ostream& out) {
  static const std::set<std::string> methods = {"popularity", "item_cf", "playlist_knn", "mf",
                                                "title",      "hybrid",  "rerank"};
  if (!methods.contains(a.method)) throw UsageError("unknown --method \"" + a.method + "\"");

  Manifest m("recommend", c);
  m.param("method", a.method);
  m.param("team", a.team);
  m.input(a.corpus);
  m.input(a.challenge);

  const auto corpus = load_snapshot(a.corpus);
  const auto challenge = load_challenge(a.challenge, corpus.catalog());

  FirstStageModels models;
  HybridConfig hybrid = HybridConfig::defaults();
  std::optional<RankerModel> ranker;
  if (a.method == "popularity") {
    models.refresh(corpus);
  } else {
    if (a.models.empty()) throw UsageError("--models is required for method " + a.method);
    const fs::path dir(a.models);
    for (const char* f : {kItemIndexName, kFactorName, kTitleName}) m.input(dir / f);
    models.item_index = load_item_index(dir / kItemIndexName);
    models.mf = load_factor_model(dir / kFactorName);
    models.titles = load_title_index(dir / kTitleName);
    if (models.item_index.num_tracks() != corpus.num_tracks() || models.mf.cols != corpus.num_tracks()) {
      throw SchemaError("models in " + dir.string() + " were trained on a different catalog");
    }
    models.refresh(corpus);
    const auto cfg_path = c.config.empty() ? (dir / kConfigName).string() : c.config;
    const auto kv = load_config(cfg_path);
    m.input(cfg_path);
    hybrid = hybrid_config_from(kv);
    KvConfig eff;
    hybrid_config_to(hybrid, eff);
    m.config(eff);
    if (a.method == "rerank") {
      m.input(dir / kRankerName);
      ranker = load_ranker(dir / kRankerName);
    }
  }

  const auto n = kSubmissionLength;
  std::vector<Recommendation> results(challenge.playlists.size());
  parallel_for(challenge.playlists.size(), c.threads, [&](std::size_t i) {
    const auto& cp = challenge.playlists[i];
    const bool seedless = cp.seed_set().empty();
    Recommendation rec;
    if (a.method == "popularity") {
      rec = recommend_popularity(cp, corpus, n);
    } else if (a.method == "hybrid") {
      rec = recommend_hybrid(cp, models, hybrid, corpus, n);
    } else if (a.method == "rerank") {
      rec = rerank(cp, build_pool(cp, models, hybrid, corpus, hybrid.pool_size), *ranker, models, corpus, n);
    } else if (a.method == "title") {
      rec = recommend_title(cp, models.titles, corpus, n, models.idf);
    } else if (seedless) {
      rec = recommend_popularity(cp, corpus, n);
    } else if (a.method == "item_cf") {
      rec = recommend_item_cf(cp, models.item_index, corpus, n, models.idf);
    } else if (a.method == "playlist_knn") {
      rec = recommend_playlist_knn(cp, corpus, hybrid.knn_neighbors, n, models.idf);
    } else {
      rec = recommend_mf(cp, models.mf, corpus, n, models.idf);
    }
    results[i] = pad_with_popularity(std::move(rec), cp, models, n);
  });

  Submission sub;
  sub.team = a.team;
  for (std::size_t i = 0; i < results.size(); ++i) {
    sub.predictions[challenge.playlists[i].pid] = results[i].tracks();
  }
  save_submission(sub, corpus.catalog(), m.path(kSubmissionName));
  m.output(kSubmissionName);
  m.write();
  out << "wrote " << sub.predictions.size() << " recommendations (" << a.method << ")\n";
  return kExitOk;
}

struct EvalArgs {
  std::string corpus;
  std::string challenge;
  std::string truth;
  std::string submission;
  std::string name;
};

int cmd_validate(const Common& c, const EvalArgs& a, std::ostream& out, std::ostream& err) {
  Manifest m("validate", c);
  m.input(a.corpus);
  m.input(a.challenge);
  m.input(a.submission);
  const auto corpus = load_snapshot(a.corpus);
  const auto challenge = load_challenge(a.challenge, corpus.catalog());
  const auto sub = load_submission(a.submission, corpus.catalog());
  const auto report = validate_submission(sub, challenge, corpus);
  write_json_file(report.to_json(), m.path("validation.json"));
  m.output("validation.json");
  m.write();
  out << report.to_text();
  if (!report.passed) {
    err << json{{"error", {{"code", "validation_failed"}, {"message", std::to_string(report.failures()) +
                                                                          " playlists failed validation"}}}}
               .dump()
        << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

int cmd_evaluate(const Common& c, const EvalArgs& a, std::ostream& out) {
  Manifest m("evaluate", c);
  m.input(a.corpus);
  m.input(a.challenge);
  m.input(a.truth);
  m.input(a.submission);
  const auto name = a.name.empty() ? fs::path(a.submission).parent_path().filename().string() : a.name;
  m.param("name", name);
  const auto corpus = load_snapshot(a.corpus);
  const auto challenge = load_challenge(a.challenge, corpus.catalog());
  const auto truth = load_ground_truth(a.truth, corpus.catalog());
  const auto sub = load_submission(a.submission, corpus.catalog());
  const auto report = score_report(sub, challenge, truth, corpus, name);
  write_json_file(report.to_json(), m.path("report.json"));
  write_text_file(m.path("report.txt"), report.to_text());
  m.output("report.json");
  m.output("report.txt");
  m.write();
  out << report.to_text();
  return kExitOk;
}

int cmd_leaderboard(const Common& c, const std::vector<std::string>& reports, std::ostream& out) {
  if (reports.empty()) throw UsageError("leaderboard needs at least one score report");
  Manifest m("leaderboard", c);
  std::vector<std::pair<std::string, MetricMeans>> rows;
  for (const auto& r : reports) {
    m.input(r);
    const auto report = ScoreReport::from_json(read_json_file(r));
    rows.emplace_back(report.name, report.overall);
  }
  const auto board = borda_aggregate(rows);
  write_json_file(leaderboard_json(board), m.path("leaderboard.json"));
  write_text_file(m.path("leaderboard.txt"), leaderboard_text(board));
  m.output("leaderboard.json");
  m.output("leaderboard.txt");
  m.write();
  out << leaderboard_text(board);
  return kExitOk;
}

void report_error(std::ostream& err, const std::string& code, const std::string& message) {
  err << json{{"error", {{"code", code}, {"message", message}}}}.dump() << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"apc: playlist continuation pipeline", "apc"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  Common common;
  GenArgs gen;
  std::vector<std::string> ingest_inputs;
  std::string split_corpus;
  std::optional<int> per_type;
  TrainArgs train;
  RecommendArgs rec;
  EvalArgs eval;
  std::vector<std::string> report_paths;

  auto* s_gen = app.add_subcommand("gen", "generate a synthetic corpus as JSON slices");
  add_common(s_gen, common);
  s_gen->add_option("--playlists", gen.playlists, "number of playlists");
  s_gen->add_option("--concentration", gen.concentration, "genre mixture concentration");
  s_gen->add_option("--slice-size", gen.slice_size, "playlists per slice file");

  auto* s_ingest = app.add_subcommand("ingest", "read slice files into a corpus snapshot");
  add_common(s_ingest, common);
  s_ingest->add_option("inputs", ingest_inputs, "slice files or directories")->required();

  auto* s_split = app.add_subcommand("split", "build a challenge set and its training corpus");
  add_common(s_split, common);
  s_split->add_option("--corpus", split_corpus, "corpus snapshot")->required();
  s_split->add_option("--per-type", per_type, "playlists per scenario");

  auto* s_train = app.add_subcommand("train", "train first-stage models (and optionally the ranker)");
  add_common(s_train, common);
  s_train->add_option("--corpus", train.corpus, "training corpus snapshot")->required();
  s_train->add_flag("--ranker", train.ranker, "also train the pairwise re-ranker");
  s_train->add_option("--factors", train.factors, "WRMF latent dimension");
  s_train->add_option("--iterations", train.iterations, "WRMF ALS iterations");
  s_train->add_option("--item-neighbors", train.item_neighbors, "neighbors kept per track (0 keeps all)");

  auto* s_rec = app.add_subcommand("recommend", "write a submission for a challenge set");
  add_common(s_rec, common);
  s_rec->add_option("--models", rec.models, "directory written by train");
  s_rec->add_option("--corpus", rec.corpus, "training corpus snapshot")->required();
  s_rec->add_option("--challenge", rec.challenge, "challenge set")->required();
  s_rec->add_option("--method", rec.method,
                    "popularity | item_cf | playlist_knn | mf | title | hybrid | rerank");
  s_rec->add_option("--team", rec.team, "team name in the submission header");

  auto* s_val = app.add_subcommand("validate", "check a submission against a challenge set");
  add_common(s_val, common);
  s_val->add_option("--corpus", eval.corpus, "corpus snapshot")->required();
  s_val->add_option("--challenge", eval.challenge, "challenge set")->required();
  s_val->add_option("--submission", eval.submission, "submission CSV")->required();

  auto* s_eval = app.add_subcommand("evaluate", "score a submission");
  add_common(s_eval, common);
  s_eval->add_option("--corpus", eval.corpus, "corpus snapshot")->required();
  s_eval->add_option("--challenge", eval.challenge, "challenge set")->required();
  s_eval->add_option("--ground-truth", eval.truth, "ground truth")->required();
  s_eval->add_option("--submission", eval.submission, "submission CSV")->required();
  s_eval->add_option("--name", eval.name, "report name");

  auto* s_board = app.add_subcommand("leaderboard", "aggregate score reports by Borda count");
  add_common(s_board, common);
  s_board->add_option("reports", report_paths, "report.json files")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    report_error(err, "usage_error", e.what());
    return kExitUsage;
  }

  try {
    if (s_gen->parsed()) return cmd_gen(common, gen, out);
    if (s_ingest->parsed()) return cmd_ingest(common, ingest_inputs, out);
    if (s_split->parsed()) return cmd_split(common, split_corpus, per_type, out);
    if (s_train->parsed()) return cmd_train(common, train, out);
    if (s_rec->parsed()) return cmd_recommend(common, rec, out);
    if (s_val->parsed()) return cmd_validate(common, eval, out, err);
    if (s_eval->parsed()) return cmd_evaluate(common, eval, out);
    if (s_board->parsed()) return cmd_leaderboard(common, report_paths, out);
  } catch (const ValidationFailedError& e) {
    out << e.report().to_text();
    report_error(err, e.code(), e.what());
    return kExitFailure;
  } catch (const UsageError& e) {
    report_error(err, e.code(), e.what());
    return kExitUsage;
  } catch (const Error& e) {
    report_error(err, e.code(), e.what());
    return kExitFailure;
  } catch (const std::exception& e) {
    report_error(err, "internal_error", e.what());
    return kExitFailure;
  }
  report_error(err, "usage_error", "no subcommand given");
  return kExitUsage;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace apc::cli
