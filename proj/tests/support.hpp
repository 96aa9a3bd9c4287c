#pragma once

#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <string>
#include <vector>

#include <unistd.h>

#include "apc/challenge.hpp"
#include "apc/corpus.hpp"

namespace apc::test {

// Track i is "spotify:track:t<i>"; its artist is artists[i] (own artist when
// `artists` is empty) and its album is one album per artist.
inline Catalog make_catalog(std::size_t n_tracks, const std::vector<int>& artists = {}) {
  Catalog catalog;
  for (std::size_t i = 0; i < n_tracks; ++i) {
    const int a = artists.empty() ? static_cast<int>(i) : artists[i];
    const auto track = "spotify:track:t" + std::to_string(i);
    const auto artist = "spotify:artist:a" + std::to_string(a);
    const auto album = "spotify:album:b" + std::to_string(a);
    const auto name = "track " + std::to_string(i);
    catalog.add_track({track, artist, album, name, "artist", "album"});
  }
  return catalog;
}

inline Corpus make_corpus(const std::vector<std::vector<TrackId>>& lists, std::size_t n_tracks,
                          const std::vector<int>& artists = {}, const std::vector<std::string>& names = {}) {
  std::vector<Playlist> playlists;
  for (std::size_t i = 0; i < lists.size(); ++i) {
    Playlist p;
    p.pid = static_cast<std::int64_t>(i);
    p.name = i < names.size() ? names[i] : "";
    p.normalized_name = normalize_title(p.name);
    p.tracks = lists[i];
    playlists.push_back(std::move(p));
  }
  return Corpus(make_catalog(n_tracks, artists), std::move(playlists));
}

inline ChallengePlaylist seeded(const std::vector<TrackId>& seeds,
                                ScenarioType scenario = ScenarioType::kTitleFirst5,
                                std::optional<std::string> title = std::nullopt, std::int64_t pid = 1000) {
  ChallengePlaylist cp;
  cp.pid = pid;
  cp.scenario = scenario;
  cp.title = std::move(title);
  for (std::size_t i = 0; i < seeds.size(); ++i) cp.seeds.push_back({static_cast<std::int64_t>(i), seeds[i]});
  return cp;
}

// Fresh, empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("apc_test_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace apc::test
