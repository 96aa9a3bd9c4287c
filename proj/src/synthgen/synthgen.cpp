#include "apc/synthgen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <unordered_set>

#include "apc/error.hpp"

namespace apc {
namespace {

const std::vector<std::vector<std::string>>& builtin_vocab() {
  static const std::vector<std::vector<std::string>> vocab = {
      {"rock", "guitar", "classic", "riffs", "garage"},
      {"metal", "heavy", "thrash", "headbang", "doom"},
      {"jazz", "smooth", "swing", "bebop", "saxophone"},
      {"rap", "hiphop", "beats", "bars", "trap"},
      {"country", "cowboy", "roadtrip", "honkytonk", "trucks"},
      {"edm", "house", "techno", "rave", "bass"},
      {"classical", "piano", "orchestra", "symphony", "baroque"},
      {"indie", "folk", "acoustic", "mellow", "coffeehouse"},
      {"latin", "reggaeton", "salsa", "fiesta", "bachata"},
      {"pop", "hits", "dance", "radio", "charts"},
      {"blues", "delta", "soulful", "harmonica", "slide"},
      {"reggae", "dub", "island", "roots", "ska"},
  };
  return vocab;
}

const std::array<std::string_view, 10> kGenericTitles = {
    "my playlist", "Favorites", "music", "New Playlist", "songs",
    "good stuff", "Random", "2017", "listen", "car"};
const std::array<std::string_view, 4> kSuffixes = {"mix", "vibes", "playlist", "songs"};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // 53-bit uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  // Uniform in (0, 1], safe for logarithms.
  double uniform_open() { return 1.0 - uniform(); }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }
  bool chance(double p) { return uniform() < p; }
  std::uint64_t bits() { return engine_(); }

  // log of a Gamma(shape, 1) draw; stable for shapes far below 1.
  double log_gamma_draw(double shape) {
    if (shape >= 1.0) {
      std::gamma_distribution<double> g(shape, 1.0);
      return std::log(std::max(g(engine_), std::numeric_limits<double>::min()));
    }
    std::gamma_distribution<double> g(shape + 1.0, 1.0);
    const double x = std::max(g(engine_), std::numeric_limits<double>::min());
    return std::log(x) + std::log(uniform_open()) / shape;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

std::string base62_id(std::uint64_t bits_a, std::uint64_t bits_b) {
  static constexpr std::string_view kAlphabet =
      "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz";
  std::string s;
  s.reserve(22);
  for (int i = 0; i < 11; ++i) {
    s.push_back(kAlphabet[bits_a % 62]);
    bits_a /= 62;
  }
  for (int i = 0; i < 11; ++i) {
    s.push_back(kAlphabet[bits_b % 62]);
    bits_b /= 62;
  }
  return s;
}

std::string unique_uri(Rng& rng, std::string_view kind, std::unordered_set<std::string>& used) {
  while (true) {
    std::string uri = "spotify:" + std::string(kind) + ":" + base62_id(rng.bits(), rng.bits());
    if (used.insert(uri).second) return uri;
  }
}

std::string style_word(Rng& rng, std::string word) {
  switch (rng.below(4)) {
    case 0:
      return word;
    case 1:
      word[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(word[0])));
      return word;
    case 2:
      for (auto& c : word) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      return word;
    default:
      return word;
  }
}

std::string make_title(Rng& rng, const GenConfig& cfg, int genre) {
  if (!rng.chance(cfg.informative_title_rate)) {
    return std::string(kGenericTitles[rng.below(kGenericTitles.size())]);
  }
  const auto& words = static_cast<std::size_t>(genre) < cfg.title_vocab.size() && !cfg.title_vocab[static_cast<std::size_t>(genre)].empty()
                          ? cfg.title_vocab[static_cast<std::size_t>(genre)]
                          : builtin_vocab()[static_cast<std::size_t>(genre) % builtin_vocab().size()];
  std::string title = style_word(rng, words[rng.below(words.size())]);
  if (words.size() > 1 && rng.chance(0.35)) {
    std::string second;
    do {
      second = words[rng.below(words.size())];
    } while (normalize_title(second) == normalize_title(title));
    title += (rng.chance(0.5) ? " " : " & ") + style_word(rng, second);
  }
  if (rng.chance(0.3)) title += " " + std::string(kSuffixes[rng.below(kSuffixes.size())]);
  // Genres past the built-in list get a numeric tag so their titles differ.
  if (static_cast<std::size_t>(genre) >= builtin_vocab().size() &&
      (static_cast<std::size_t>(genre) >= cfg.title_vocab.size() ||
       cfg.title_vocab[static_cast<std::size_t>(genre)].empty())) {
    title += " " + std::to_string(genre);
  }
  switch (rng.below(8)) {
    case 0: title += "!!"; break;
    case 1: title += " \xF0\x9F\x94\xA5"; break;  // fire emoji
    case 2: title = "~ " + title + " ~"; break;
    default: break;
  }
  return title;
}

int log_uniform_length(Rng& rng, int lo, int hi) {
  const double a = std::log(static_cast<double>(lo));
  const double b = std::log(static_cast<double>(hi) + 1.0);
  const int len = static_cast<int>(std::floor(std::exp(a + (b - a) * rng.uniform())));
  return std::clamp(len, lo, hi);
}

}  // namespace

std::size_t GenConfig::total_tracks() const {
  return static_cast<std::size_t>(n_genres) * static_cast<std::size_t>(artists_per_genre) *
         static_cast<std::size_t>(albums_per_artist) * static_cast<std::size_t>(tracks_per_album);
}

void GenConfig::validate() const {
  if (n_genres < 1 || artists_per_genre < 1 || albums_per_artist < 1 || tracks_per_album < 1) {
    throw ConfigError("catalog dimensions must be positive");
  }
  if (n_playlists < 0) throw ConfigError("n_playlists must be non-negative");
  const auto [lo, hi] = playlist_len_range;
  if (lo < 1 || hi < lo) throw ConfigError("playlist_len_range must satisfy 1 <= min <= max");
  if (static_cast<std::size_t>(hi) > total_tracks()) {
    throw ConfigError("maximum playlist length " + std::to_string(hi) + " exceeds catalog size " +
                      std::to_string(total_tracks()));
  }
  if (!(genre_mix_concentration > 0.0) || !std::isfinite(genre_mix_concentration)) {
    throw ConfigError("genre_mix_concentration must be a positive finite number");
  }
  if (!(zipf_exponent >= 0.0)) throw ConfigError("zipf_exponent must be non-negative");
  if (favored_artists < 0 || !(artist_affinity >= 1.0)) {
    throw ConfigError("favored_artists must be >= 0 and artist_affinity >= 1");
  }
  if (!(informative_title_rate >= 0.0 && informative_title_rate <= 1.0)) {
    throw ConfigError("informative_title_rate must lie in [0, 1]");
  }
  if (!(displaced_rate >= 0.0 && displaced_rate <= 1.0)) throw ConfigError("displaced_rate must lie in [0, 1]");
}

SyntheticWorld generate_world(const GenConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);

  const auto n_genres = static_cast<std::size_t>(cfg.n_genres);
  const auto tracks_per_artist =
      static_cast<std::size_t>(cfg.albums_per_artist) * static_cast<std::size_t>(cfg.tracks_per_album);
  const auto tracks_per_genre = static_cast<std::size_t>(cfg.artists_per_genre) * tracks_per_artist;

  // Catalog in genre-major order, so genre = id / tracks_per_genre and
  // artist-within-genre = (id % tracks_per_genre) / tracks_per_artist.
  Catalog catalog;
  std::unordered_set<std::string> used;
  std::vector<int> track_genre;
  track_genre.reserve(cfg.total_tracks());
  for (std::size_t g = 0; g < n_genres; ++g) {
    for (int a = 0; a < cfg.artists_per_genre; ++a) {
      const auto artist_uri = unique_uri(rng, "artist", used);
      const auto artist_name = "Artist " + std::to_string(g) + "-" + std::to_string(a);
      for (int b = 0; b < cfg.albums_per_artist; ++b) {
        const auto album_uri = unique_uri(rng, "album", used);
        const auto album_name = artist_name + " Vol. " + std::to_string(b + 1);
        for (int t = 0; t < cfg.tracks_per_album; ++t) {
          const auto track_uri = unique_uri(rng, "track", used);
          const auto track_name = "Song " + std::to_string(catalog.num_tracks());
          catalog.add_track({track_uri, artist_uri, album_uri, track_name, artist_name, album_name});
          track_genre.push_back(static_cast<int>(g));
        }
      }
    }
  }

  // Zipf popularity over a random permutation inside every genre.
  std::vector<double> base_weight(cfg.total_tracks());
  for (std::size_t g = 0; g < n_genres; ++g) {
    std::vector<std::size_t> order(tracks_per_genre);
    std::iota(order.begin(), order.end(), g * tracks_per_genre);
    rng.shuffle(order);
    for (std::size_t r = 0; r < order.size(); ++r) {
      base_weight[order[r]] = 1.0 / std::pow(static_cast<double>(r + 1), cfg.zipf_exponent);
    }
  }

  const double alpha = 1.0 / cfg.genre_mix_concentration;
  std::vector<Playlist> playlists;
  std::vector<int> dominant;
  playlists.reserve(static_cast<std::size_t>(cfg.n_playlists));
  dominant.reserve(static_cast<std::size_t>(cfg.n_playlists));

  std::vector<double> log_theta(n_genres);
  std::vector<double> theta(n_genres);
  std::vector<std::size_t> counts(n_genres);
  std::vector<std::pair<double, std::size_t>> keys;

  for (int i = 0; i < cfg.n_playlists; ++i) {
    const int length = log_uniform_length(rng, cfg.playlist_len_range.first, cfg.playlist_len_range.second);

    for (auto& x : log_theta) x = rng.log_gamma_draw(alpha);
    const double peak = *std::ranges::max_element(log_theta);
    double z = 0.0;
    for (std::size_t g = 0; g < n_genres; ++g) z += theta[g] = std::exp(log_theta[g] - peak);
    for (auto& x : theta) x /= z;
    const auto dom = static_cast<std::size_t>(std::distance(theta.begin(), std::ranges::max_element(theta)));

    // Slot-by-slot genre draws; a genre that runs out of tracks drops out of
    // the mixture.
    std::ranges::fill(counts, 0);
    double mass = 1.0;
    for (int s = 0; s < length; ++s) {
      double u = rng.uniform() * mass;
      std::size_t g = 0;
      std::size_t last_open = n_genres;
      for (; g < n_genres; ++g) {
        if (counts[g] >= tracks_per_genre) continue;
        last_open = g;
        if (u < theta[g]) break;
        u -= theta[g];
      }
      if (g == n_genres) g = last_open;
      if (g == n_genres) {
        // Every genre with positive mass is exhausted; spill uniformly.
        do {
          g = rng.below(n_genres);
        } while (counts[g] >= tracks_per_genre);
      }
      if (++counts[g] == tracks_per_genre) {
        mass -= theta[g];
        theta[g] = 0.0;
        if (mass <= 0.0) mass = 0.0;
      }
      if (mass <= 0.0) {
        // Reopen remaining genres uniformly.
        mass = 0.0;
        for (std::size_t h = 0; h < n_genres; ++h) {
          theta[h] = counts[h] < tracks_per_genre ? 1.0 : 0.0;
          mass += theta[h];
        }
      }
    }

    // Genres ordered by count (dominant first); inside a genre, tracks are
    // grouped by artist in a random artist order.
    std::vector<std::size_t> genre_order(n_genres);
    std::iota(genre_order.begin(), genre_order.end(), 0);
    std::ranges::stable_sort(genre_order, [&](std::size_t a, std::size_t b) { return counts[a] > counts[b]; });

    Playlist p;
    p.pid = cfg.first_pid + i;
    p.tracks.reserve(static_cast<std::size_t>(length));
    for (auto g : genre_order) {
      if (counts[g] == 0) break;
      std::vector<std::size_t> artist_ids(static_cast<std::size_t>(cfg.artists_per_genre));
      std::iota(artist_ids.begin(), artist_ids.end(), 0);
      rng.shuffle(artist_ids);
      std::vector<bool> favored(artist_ids.size(), false);
      for (int f = 0; f < std::min(cfg.favored_artists, cfg.artists_per_genre); ++f) {
        favored[artist_ids[static_cast<std::size_t>(f)]] = true;
      }
      rng.shuffle(artist_ids);  // independent order for the artist blocks
      std::vector<std::size_t> artist_rank(artist_ids.size());
      for (std::size_t r = 0; r < artist_ids.size(); ++r) artist_rank[artist_ids[r]] = r;

      // Weighted sampling without replacement via exponential keys.
      keys.clear();
      for (std::size_t k = 0; k < tracks_per_genre; ++k) {
        const std::size_t t = g * tracks_per_genre + k;
        const std::size_t artist = k / tracks_per_artist;
        const double w = base_weight[t] * (favored[artist] ? cfg.artist_affinity : 1.0);
        keys.emplace_back(-std::log(rng.uniform_open()) / w, t);
      }
      std::ranges::partial_sort(keys, keys.begin() + static_cast<std::ptrdiff_t>(counts[g]));

      std::vector<std::pair<std::pair<std::size_t, double>, std::size_t>> picked;
      for (std::size_t k = 0; k < counts[g]; ++k) {
        const std::size_t t = keys[k].second;
        const std::size_t artist = (t - g * tracks_per_genre) / tracks_per_artist;
        picked.push_back({{artist_rank[artist], rng.uniform()}, t});
      }
      std::ranges::sort(picked);
      for (const auto& [key, t] : picked) p.tracks.push_back(static_cast<TrackId>(t));
    }
    if (cfg.displaced_rate > 0.0) {
      std::vector<TrackId> kept, moved;
      for (auto t : p.tracks) (rng.chance(cfg.displaced_rate) ? moved : kept).push_back(t);
      for (auto t : moved) kept.insert(kept.begin() + static_cast<std::ptrdiff_t>(rng.below(kept.size() + 1)), t);
      p.tracks = std::move(kept);
    }
    p.name = make_title(rng, cfg, static_cast<int>(dom));
    p.normalized_name = normalize_title(p.name);
    p.num_followers = 1 + static_cast<std::int64_t>(rng.below(20) * rng.below(5));
    p.modified_at = 1262304000 + static_cast<std::int64_t>(rng.below(249000000));
    playlists.push_back(std::move(p));
    dominant.push_back(static_cast<int>(dom));
  }

  return SyntheticWorld{Corpus(std::move(catalog), std::move(playlists)), std::move(track_genre),
                        std::move(dominant)};
}

Corpus generate(const GenConfig& config) { return generate_world(config).corpus; }

std::vector<std::filesystem::path> write_slices(const Corpus& corpus, const std::filesystem::path& dir,
                                                std::size_t slice_size) {
  if (slice_size == 0) throw ConfigError("slice_size must be positive");
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> paths;
  const std::size_t n = corpus.num_playlists();
  // An empty corpus still yields one (empty) slice so the round trip holds.
  for (std::size_t begin = 0; begin < n || (n == 0 && paths.empty()); begin += slice_size) {
    const std::size_t end = std::min(n, begin + slice_size);
    auto path = dir / ("mpd.slice." + std::to_string(begin) + "-" +
                       std::to_string(end == 0 ? 0 : end - 1) + ".json");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << to_slice_json(corpus, begin, end).dump() << '\n';
    if (!out) throw IoError("failed writing " + path.string());
    paths.push_back(std::move(path));
    if (n == 0) break;
  }
  return paths;
}

}  // namespace apc
