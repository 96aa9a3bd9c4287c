#include <doctest.h>

#include <algorithm>

#include "apc/error.hpp"
#include "apc/synthgen.hpp"
#include "support.hpp"

using namespace apc;

namespace {

GenConfig small_config() {
  GenConfig cfg;
  cfg.n_genres = 4;
  cfg.artists_per_genre = 10;
  cfg.n_playlists = 300;
  cfg.playlist_len_range = {5, 60};
  return cfg;
}

bool same_world(const Corpus& a, const Corpus& b) {
  return a.catalog() == b.catalog() &&
         std::equal(a.playlists().begin(), a.playlists().end(), b.playlists().begin(), b.playlists().end());
}

}  // namespace

TEST_CASE("zero playlists give an empty corpus with a full catalog") {
  auto cfg = small_config();
  cfg.n_playlists = 0;
  const auto corpus = generate(cfg);
  CHECK(corpus.num_playlists() == 0);
  CHECK(corpus.num_tracks() == cfg.total_tracks());
  CHECK(corpus.total_entries() == 0);
}

TEST_CASE("generation is deterministic per seed") {
  const auto cfg = small_config();
  CHECK(same_world(generate(cfg), generate(cfg)));
  auto other = cfg;
  other.seed = 43;
  CHECK_FALSE(same_world(generate(cfg), generate(other)));
}

TEST_CASE("playlists respect lengths and never repeat a track") {
  const auto cfg = small_config();
  const auto corpus = generate(cfg);
  for (PlaylistId r = 0; r < corpus.num_playlists(); ++r) {
    const auto& p = corpus.playlist(r);
    CHECK(p.tracks.size() >= 5);
    CHECK(p.tracks.size() <= 60);
    CHECK(corpus.unique_tracks(r).size() == p.tracks.size());
    CHECK(p.normalized_name == normalize_title(p.name));
  }
}

TEST_CASE("large concentration yields single-genre playlists") {
  auto cfg = small_config();
  cfg.n_playlists = 1000;
  cfg.genre_mix_concentration = 1e6;
  const auto world = generate_world(cfg);
  std::size_t dominant = 0, total = 0;
  for (PlaylistId r = 0; r < world.corpus.num_playlists(); ++r) {
    for (auto t : world.corpus.playlist(r).tracks) {
      dominant += world.track_genre[t] == world.playlist_dominant_genre[r];
      ++total;
    }
  }
  CHECK(static_cast<double>(dominant) / static_cast<double>(total) >= 0.9);

  cfg.genre_mix_concentration = 0.1;
  const auto mixed = generate_world(cfg);
  std::size_t mixed_dominant = 0, mixed_total = 0;
  for (PlaylistId r = 0; r < mixed.corpus.num_playlists(); ++r) {
    for (auto t : mixed.corpus.playlist(r).tracks) {
      mixed_dominant += mixed.track_genre[t] == mixed.playlist_dominant_genre[r];
      ++mixed_total;
    }
  }
  CHECK(static_cast<double>(mixed_dominant) / static_cast<double>(mixed_total) < 0.9);
}

TEST_CASE("invalid generator configurations") {
  auto bad = small_config();
  bad.n_genres = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = small_config();
  bad.playlist_len_range = {10, 5};
  CHECK_THROWS_AS(generate(bad), ConfigError);
  bad = small_config();
  bad.playlist_len_range = {5, 100000};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = small_config();
  bad.genre_mix_concentration = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = small_config();
  bad.displaced_rate = 1.5;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("slices are byte-identical across runs and ingest back") {
  auto cfg = small_config();
  cfg.n_playlists = 120;
  cfg.first_pid = 1000;
  const auto a = test::temp_dir("slices_a");
  const auto b = test::temp_dir("slices_b");
  const auto pa = write_slices(generate(cfg), a, 50);
  const auto pb = write_slices(generate(cfg), b, 50);
  REQUIRE(pa.size() == 3);
  REQUIRE(pb.size() == 3);
  CHECK(pa[0].filename() == "mpd.slice.0-49.json");
  CHECK(pa[2].filename() == "mpd.slice.100-119.json");
  for (std::size_t i = 0; i < pa.size(); ++i) CHECK(test::read_file(pa[i]) == test::read_file(pb[i]));

  const auto back = ingest(pa);
  const auto original = generate(cfg);
  CHECK(back.num_playlists() == 120);
  // Ingest interns ids in order of appearance, so compare through URIs.
  auto uris = [](const Corpus& c, const Playlist& p) {
    std::vector<std::string> out;
    for (auto t : p.tracks) out.push_back(c.catalog().tracks().uri(t));
    return out;
  };
  CHECK(back.num_tracks() <= original.num_tracks());
  for (std::size_t i = 0; i < back.num_playlists(); ++i) {
    const auto& x = back.playlist(static_cast<PlaylistId>(i));
    const auto& y = original.playlist(static_cast<PlaylistId>(i));
    CHECK(x.pid == y.pid);
    CHECK(x.name == y.name);
    CHECK(x.num_followers == y.num_followers);
    CHECK(x.modified_at == y.modified_at);
    CHECK(uris(back, x) == uris(original, y));
  }
  std::filesystem::remove_all(a);
  std::filesystem::remove_all(b);
}
