#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

namespace apc {

// Dense indices assigned at interning time, contiguous from 0.
using TrackId = std::uint32_t;
using ArtistId = std::uint32_t;
using AlbumId = std::uint32_t;
// Row index of a playlist inside a Corpus. The original MPD "pid" is kept on
// the Playlist itself.
using PlaylistId = std::uint32_t;

inline constexpr TrackId kUnknownTrack = std::numeric_limits<TrackId>::max();

// Bidirectional URI <-> index table.
class Interner {
 public:
  std::uint32_t intern(std::string_view uri);
  std::optional<std::uint32_t> find(std::string_view uri) const;
  const std::string& uri(std::uint32_t id) const { return uris_.at(id); }
  std::size_t size() const noexcept { return uris_.size(); }
  std::span<const std::string> uris() const noexcept { return uris_; }

 private:
  std::vector<std::string> uris_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

struct TrackInfo {
  std::string_view track_uri;
  std::string_view artist_uri;
  std::string_view album_uri;
  std::string_view track_name;
  std::string_view artist_name;
  std::string_view album_name;
};

// Catalog of tracks, artists and albums. Each track belongs to exactly one
// artist and one album.
class Catalog {
 public:
  // Interns the track and its artist/album. A track URI seen again with a
  // different artist or album is a schema error.
  TrackId add_track(const TrackInfo& info);

  std::size_t num_tracks() const noexcept { return tracks_.size(); }
  std::size_t num_artists() const noexcept { return artists_.size(); }
  std::size_t num_albums() const noexcept { return albums_.size(); }

  const Interner& tracks() const noexcept { return tracks_; }
  const Interner& artists() const noexcept { return artists_; }
  const Interner& albums() const noexcept { return albums_; }

  ArtistId artist_of(TrackId t) const { return track_artist_.at(t); }
  AlbumId album_of(TrackId t) const { return track_album_.at(t); }
  std::span<const ArtistId> track_artists() const noexcept { return track_artist_; }
  std::span<const AlbumId> track_albums() const noexcept { return track_album_; }

  const std::string& track_name(TrackId t) const { return track_names_.at(t); }
  const std::string& artist_name(ArtistId a) const { return artist_names_.at(a); }
  const std::string& album_name(AlbumId a) const { return album_names_.at(a); }

  std::optional<TrackId> find_track(std::string_view uri) const { return tracks_.find(uri); }

  bool operator==(const Catalog& other) const;

 private:
  Interner tracks_;
  Interner artists_;
  Interner albums_;
  std::vector<ArtistId> track_artist_;
  std::vector<AlbumId> track_album_;
  std::vector<std::string> track_names_;
  std::vector<std::string> artist_names_;
  std::vector<std::string> album_names_;
};

struct Playlist {
  std::int64_t pid = 0;
  std::string name;
  std::string normalized_name;
  // Ordered track list; the vector index is the 0-based position.
  std::vector<TrackId> tracks;
  std::int64_t num_followers = 0;
  std::int64_t modified_at = 0;

  bool operator==(const Playlist&) const = default;
};

// Compressed sparse row binary matrix. Column indices are sorted and unique
// within each row.
struct CsrMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint64_t> row_ptr{0};
  std::vector<std::uint32_t> col_idx;

  std::span<const std::uint32_t> row(std::size_t r) const {
    return {col_idx.data() + row_ptr[r], col_idx.data() + row_ptr[r + 1]};
  }
  std::size_t nnz() const noexcept { return col_idx.size(); }
  CsrMatrix transposed() const;

  bool operator==(const CsrMatrix&) const = default;
};

// The training world: catalog, playlists, the playlist x track binary matrix
// and per-track statistics. Immutable after construction; the column-major
// mirror is built on first column access and is safe to request concurrently.
class Corpus {
 public:
  Corpus();
  Corpus(Catalog catalog, std::vector<Playlist> playlists);

  Corpus(Corpus&&) noexcept;
  Corpus& operator=(Corpus&&) noexcept;
  Corpus(const Corpus&) = delete;
  Corpus& operator=(const Corpus&) = delete;
  ~Corpus();

  const Catalog& catalog() const noexcept { return catalog_; }
  std::span<const Playlist> playlists() const noexcept { return playlists_; }
  const Playlist& playlist(PlaylistId row) const { return playlists_.at(row); }
  std::size_t num_playlists() const noexcept { return playlists_.size(); }
  std::size_t num_tracks() const noexcept { return catalog_.num_tracks(); }

  const CsrMatrix& matrix() const noexcept { return matrix_; }
  // Track-major mirror of matrix(): row t lists the playlists containing t.
  const CsrMatrix& columns() const;

  // Deduplicated, sorted track set of a playlist.
  std::span<const TrackId> unique_tracks(PlaylistId row) const { return matrix_.row(row); }
  std::span<const std::uint32_t> playlists_with(TrackId t) const { return columns().row(t); }

  std::uint32_t track_df(TrackId t) const { return df_.at(t); }
  std::uint64_t track_pop(TrackId t) const { return pop_.at(t); }
  std::span<const std::uint32_t> df() const noexcept { return df_; }
  std::span<const std::uint64_t> pop() const noexcept { return pop_; }
  std::uint64_t total_entries() const noexcept { return total_entries_; }

  std::optional<PlaylistId> find_pid(std::int64_t pid) const;

  // Copy of this corpus without the given pids. The catalog is kept whole so
  // that ids stay stable between the full and the reduced corpus.
  Corpus without(const std::unordered_set<std::int64_t>& pids) const;
  Corpus clone() const;

 private:
  struct ColumnCache;

  Catalog catalog_;
  std::vector<Playlist> playlists_;
  CsrMatrix matrix_;
  std::vector<std::uint32_t> df_;
  std::vector<std::uint64_t> pop_;
  std::uint64_t total_entries_ = 0;
  std::unordered_map<std::int64_t, PlaylistId> pid_index_;
  std::unique_ptr<ColumnCache> column_cache_;
};

// ---------------------------------------------------------------------------
// Ingestion and export of MPD-style JSON slices.

Corpus ingest(std::span<const std::filesystem::path> paths);
// Parses one or more in-memory slices; `sources` name them in error messages.
Corpus ingest_text(std::span<const std::string> texts, std::span<const std::string> sources);

// Serializes playlists [begin, end) in the same slice layout ingest() reads.
nlohmann::json to_slice_json(const Corpus& corpus, std::size_t begin, std::size_t end);

// ---------------------------------------------------------------------------
// Binary snapshot (versioned header, little-endian tables, CSR arrays).

inline constexpr std::uint32_t kSnapshotVersion = 1;

void write_snapshot(const Corpus& corpus, std::ostream& out);
Corpus read_snapshot(std::istream& in, const std::string& source = "<snapshot>");
void save_snapshot(const Corpus& corpus, const std::filesystem::path& path);
Corpus load_snapshot(const std::filesystem::path& path);

// Playlist, entry, track, artist, album and title counts and the mean playlist length.
nlohmann::json corpus_stats(const Corpus& corpus);

// ---------------------------------------------------------------------------
// Titles.

// Lowercases, strips whitespace, a fixed set of punctuation symbols and emoji
// codepoints. Total and idempotent.
std::string normalize_title(std::string_view raw);
// Lowercased word tokens; apostrophes are dropped inside words, whitespace and
// other stripped symbols separate words.
std::vector<std::string> tokenize_title(std::string_view raw);
// Porter (1980) suffix stripping. Non-alphabetic tokens are returned as is.
std::string porter_stem(std::string_view word);
// Sorted unique stemmed tokens of a raw title.
std::vector<std::string> title_terms(std::string_view raw);

// ---------------------------------------------------------------------------
// Global statistics.

// ln(1 + |playlists| / df). Throws UnknownTrackError when df is 0.
double idf(TrackId track, const Corpus& corpus);
// idf for every track, 0 where the track never occurs.
std::vector<double> idf_table(const Corpus& corpus);
// Tracks by descending total occurrence count, ties by ascending id.
std::vector<TrackId> popularity_ranking(const Corpus& corpus);

}  // namespace apc
