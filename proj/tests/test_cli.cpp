#include <doctest.h>

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "apc/cli.hpp"
#include "support.hpp"

using namespace apc;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string s(const fs::path& p) { return p.string(); }

// Small world shared by the pipeline cases.
struct Pipeline {
  fs::path root = test::temp_dir("cli");
  fs::path cfg = root / "small.cfg";

  Pipeline() {
    std::ofstream(cfg) << "version = 1\n"
                          "gen.genres = 4\n"
                          "gen.artists_per_genre = 20\n"
                          "gen.max_length = 150\n"
                          "pairs.per_type = 5\n"
                          "pairs.per_playlist = 5\n"
                          "ranker.epochs = 20\n"
                          "hybrid.pool_size = 600\n";
    REQUIRE(run({"gen", "--seed", "4", "--playlists", "600", "--config", s(cfg), "--out", s(root / "gen")}).code == 0);
    REQUIRE(run({"ingest", s(root / "gen"), "--out", s(root / "ing")}).code == 0);
    REQUIRE(run({"split", "--corpus", s(root / "ing/corpus.bin"), "--per-type", "5", "--out", s(root / "split")})
                .code == 0);
    REQUIRE(run({"train", "--corpus", s(root / "split/train.bin"), "--config", s(cfg), "--factors", "8",
                 "--iterations", "3", "--ranker", "--out", s(root / "models")})
                .code == 0);
  }
  ~Pipeline() { fs::remove_all(root); }

  Result recommend(const std::string& method, const std::string& out) const {
    return run({"recommend", "--models", s(root / "models"), "--corpus", s(root / "split/train.bin"),
                "--challenge", s(root / "split/challenge.json"), "--config", s(cfg), "--method", method, "--out",
                s(root / out)});
  }
  Result evaluate(const std::string& sub_dir, const std::string& out) const {
    return run({"evaluate", "--corpus", s(root / "split/train.bin"), "--challenge", s(root / "split/challenge.json"),
                "--ground-truth", s(root / "split/ground_truth.json"), "--submission",
                s(root / sub_dir / "submission.csv"), "--out", s(root / out)});
  }
};

}  // namespace

TEST_CASE("usage errors exit 2 with a json error line") {
  const auto r = run({"gen", "--bogus", "--out", "x"});
  CHECK(r.code == 2);
  const auto doc = nlohmann::json::parse(r.err);
  CHECK(doc["error"]["code"] == "usage_error");
  CHECK(run({"gen"}).code == 2);
  CHECK(run({"gen", "--threads", "0", "--out", "x"}).code == 2);
  CHECK(run({}).code == 2);
}

TEST_CASE("library errors exit 1 with their code") {
  const auto dir = test::temp_dir("cli_err");
  const auto r = run({"ingest", s(dir / "missing.json"), "--out", s(dir / "o")});
  CHECK(r.code == 1);
  CHECK(nlohmann::json::parse(r.err)["error"]["code"] == "io_error");

  std::ofstream(dir / "bad.cfg") << "gen.nonsense = 1\n";
  const auto bad = run({"gen", "--config", s(dir / "bad.cfg"), "--out", s(dir / "g")});
  CHECK(bad.code == 1);
  CHECK(nlohmann::json::parse(bad.err)["error"]["code"] == "config_error");
  fs::remove_all(dir);
}

TEST_CASE("gen is byte-identical across runs") {
  const auto dir = test::temp_dir("cli_gen");
  for (const char* out : {"a", "b"}) {
    REQUIRE(run({"gen", "--seed", "5", "--playlists", "150", "--slice-size", "100", "--out", s(dir / out)}).code == 0);
  }
  for (const char* name : {"mpd.slice.0-99.json", "mpd.slice.100-149.json"}) {
    const auto a = test::read_file(dir / "a" / name);
    CHECK_FALSE(a.empty());
    CHECK(a == test::read_file(dir / "b" / name));
  }
  const auto manifest = nlohmann::json::parse(test::read_file(dir / "a/manifest.json"));
  CHECK(manifest["command"] == "gen");
  CHECK(manifest["outputs"].size() == 2);
  fs::remove_all(dir);
}

TEST_CASE("full pipeline through the command line") {
  const Pipeline p;
  for (const char* f : {"item_index.bin", "wrmf.bin", "title.bin", "config.cfg", "ranker.cfg", "ranker_training.json",
                        "manifest.json"}) {
    CHECK(fs::exists(p.root / "models" / f));
  }
  for (const char* method : {"popularity", "item_cf", "playlist_knn", "mf", "title", "hybrid", "rerank"}) {
    CAPTURE(method);
    const auto out = std::string("rec_") + method;
    REQUIRE(p.recommend(method, out).code == 0);
    const auto v = run({"validate", "--corpus", s(p.root / "split/train.bin"), "--challenge",
                        s(p.root / "split/challenge.json"), "--submission", s(p.root / out / "submission.csv"),
                        "--out", s(p.root / ("val_" + std::string(method)))});
    CHECK(v.code == 0);
    REQUIRE(p.evaluate(out, std::string("ev_") + method).code == 0);
  }

  const auto manifest = nlohmann::json::parse(test::read_file(p.root / "ev_hybrid/manifest.json"));
  CHECK(manifest["inputs"].size() == 4);
  for (const auto& [name, digest] : manifest["inputs"].items()) CHECK(digest.get<std::string>().size() == 64);

  const auto board = run({"leaderboard", s(p.root / "ev_hybrid/report.json"), s(p.root / "ev_popularity/report.json"),
                          "--out", s(p.root / "board")});
  REQUIRE(board.code == 0);
  const auto doc = nlohmann::json::parse(test::read_file(p.root / "board/leaderboard.json"));
  REQUIRE(doc["leaderboard"].size() == 2);
  CHECK(doc["leaderboard"][0]["name"] == "rec_hybrid");
  CHECK(fs::exists(p.root / "board/leaderboard.txt"));

  SUBCASE("an invalid submission is refused") {
    const auto bad_dir = p.root / "bad";
    fs::create_directories(bad_dir);
    std::ifstream in(p.root / "rec_hybrid/submission.csv");
    std::ofstream out(bad_dir / "submission.csv");
    std::string line;
    bool dropped = false;
    while (std::getline(in, line)) {
      // Drop the first prediction row.
      if (!dropped && !line.empty() && line[0] != '#' && line.rfind("team", 0) != 0) {
        dropped = true;
        continue;
      }
      out << line << '\n';
    }
    out.close();
    const auto r = p.evaluate("bad", "ev_bad");
    CHECK(r.code == 1);
    CHECK(nlohmann::json::parse(r.err)["error"]["code"] == "validation_failed");
    CHECK(r.out.find("MISSING_PID") != std::string::npos);
    CHECK_FALSE(fs::exists(p.root / "ev_bad/report.json"));
  }
}
