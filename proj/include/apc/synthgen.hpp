#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "apc/corpus.hpp"

namespace apc {

// Parameters of the synthetic playlist world. The catalog is a grid of
// genres x artists x albums x tracks; each playlist mixes genres with a
// Dirichlet draw whose sharpness grows with `genre_mix_concentration`.
struct GenConfig {
  std::uint64_t seed = 42;
  int n_genres = 10;
  int artists_per_genre = 50;
  int albums_per_artist = 2;
  int tracks_per_album = 5;
  int n_playlists = 10000;
  // Playlist lengths are drawn log-uniformly from this inclusive range.
  std::pair<int, int> playlist_len_range{5, 250};
  // Dirichlet parameter is 1 / concentration: large values give near
  // single-genre playlists, small values near-uniform genre mixtures.
  double genre_mix_concentration = 50.0;
  // Within-genre popularity skew, weight 1 / rank^zipf_exponent.
  double zipf_exponent = 0.9;
  // Each playlist favors a few artists per genre it draws from.
  int favored_artists = 3;
  double artist_affinity = 8.0;
  // Probability that a title is composed from the dominant genre's words
  // rather than a generic phrase.
  double informative_title_rate = 0.75;
  // Fraction of each playlist's tracks moved to a uniformly random position
  // after the genre and artist blocks are laid out.
  double displaced_rate = 0.25;
  // Per-genre word lists; genres without an entry use built-in words.
  std::vector<std::vector<std::string>> title_vocab;
  std::int64_t first_pid = 0;

  std::size_t total_tracks() const;
  // Throws ConfigError on an unusable configuration.
  void validate() const;
};

// Generated corpus plus the latent labels behind it.
struct SyntheticWorld {
  Corpus corpus;
  std::vector<int> track_genre;
  std::vector<int> playlist_dominant_genre;
};

SyntheticWorld generate_world(const GenConfig& config);
Corpus generate(const GenConfig& config);

// Writes the corpus as MPD-style slices "mpd.slice.<a>-<b>.json" of
// `slice_size` playlists each; returns the paths in order.
std::vector<std::filesystem::path> write_slices(const Corpus& corpus,
                                                const std::filesystem::path& dir,
                                                std::size_t slice_size = 1000);

}  // namespace apc
