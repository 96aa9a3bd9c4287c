#include <fstream>

#include "apc/binio.hpp"
#include "apc/corpus.hpp"
#include "apc/error.hpp"

namespace apc {
namespace {

constexpr std::string_view kMagic = "APCCORPS";

}  // namespace

void write_snapshot(const Corpus& corpus, std::ostream& out) {
  BinaryWriter w(out);
  const auto& cat = corpus.catalog();
  w.magic(kMagic);
  w.u32(kSnapshotVersion);
  w.u64(cat.num_tracks());
  w.u64(cat.num_artists());
  w.u64(cat.num_albums());
  w.u64(corpus.num_playlists());

  for (const auto& uri : cat.artists().uris()) w.str(uri);
  for (ArtistId a = 0; a < cat.num_artists(); ++a) w.str(cat.artist_name(a));
  for (const auto& uri : cat.albums().uris()) w.str(uri);
  for (AlbumId a = 0; a < cat.num_albums(); ++a) w.str(cat.album_name(a));
  for (TrackId t = 0; t < cat.num_tracks(); ++t) {
    w.str(cat.tracks().uri(t));
    w.str(cat.track_name(t));
  }
  w.u32s(cat.track_artists());
  w.u32s(cat.track_albums());

  for (const auto& p : corpus.playlists()) {
    w.i64(p.pid);
    w.str(p.name);
    w.i64(p.num_followers);
    w.i64(p.modified_at);
    w.u32s(p.tracks);
  }

  const auto& m = corpus.matrix();
  w.u64s(m.row_ptr);
  w.u32s(m.col_idx);
  w.u32s(corpus.df());
  w.u64s(corpus.pop());
  if (!out) throw IoError("failed writing corpus snapshot");
}

Corpus read_snapshot(std::istream& in, const std::string& source) {
  BinaryReader r(in, source);
  r.expect_magic(kMagic);
  if (auto v = r.u32(); v != kSnapshotVersion) {
    r.fail("unsupported snapshot version " + std::to_string(v));
  }
  const auto n_tracks = r.u64();
  const auto n_artists = r.u64();
  const auto n_albums = r.u64();
  const auto n_playlists = r.u64();

  std::vector<std::string> artist_uris(n_artists), artist_names(n_artists);
  for (auto& s : artist_uris) s = r.str();
  for (auto& s : artist_names) s = r.str();
  std::vector<std::string> album_uris(n_albums), album_names(n_albums);
  for (auto& s : album_uris) s = r.str();
  for (auto& s : album_names) s = r.str();
  std::vector<std::string> track_uris(n_tracks), track_names(n_tracks);
  for (std::uint64_t t = 0; t < n_tracks; ++t) {
    track_uris[t] = r.str();
    track_names[t] = r.str();
  }
  const auto track_artist = r.u32s();
  const auto track_album = r.u32s();
  if (track_artist.size() != n_tracks || track_album.size() != n_tracks) {
    r.fail("track tables disagree with header counts");
  }

  // Re-interning in id order reproduces the original artist/album numbering,
  // since each new artist or album first appears together with a new track.
  Catalog catalog;
  for (std::uint64_t t = 0; t < n_tracks; ++t) {
    const auto a = track_artist[t];
    const auto b = track_album[t];
    if (a >= n_artists || b >= n_albums) r.fail("track table index out of range");
    catalog.add_track({track_uris[t], artist_uris[a], album_uris[b], track_names[t],
                       artist_names[a], album_names[b]});
  }
  if (catalog.num_artists() != n_artists || catalog.num_albums() != n_albums) {
    r.fail("catalog tables are inconsistent");
  }
  for (ArtistId a = 0; a < n_artists; ++a) {
    if (catalog.artists().uri(a) != artist_uris[a]) r.fail("artist table is not in interning order");
  }
  for (AlbumId a = 0; a < n_albums; ++a) {
    if (catalog.albums().uri(a) != album_uris[a]) r.fail("album table is not in interning order");
  }

  std::vector<Playlist> playlists(n_playlists);
  for (auto& p : playlists) {
    p.pid = r.i64();
    p.name = r.str();
    p.normalized_name = normalize_title(p.name);
    p.num_followers = r.i64();
    p.modified_at = r.i64();
    p.tracks = r.u32s();
  }

  CsrMatrix stored;
  stored.rows = n_playlists;
  stored.cols = n_tracks;
  stored.row_ptr = r.u64s();
  stored.col_idx = r.u32s();
  const auto df = r.u32s();
  const auto pop = r.u64s();

  Corpus corpus(std::move(catalog), std::move(playlists));
  if (!(corpus.matrix() == stored) || !std::ranges::equal(corpus.df(), df) ||
      !std::ranges::equal(corpus.pop(), pop)) {
    r.fail("stored matrix or statistics do not match the playlists");
  }
  return corpus;
}

void save_snapshot(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  write_snapshot(corpus, out);
}

Corpus load_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_snapshot(in, path.string());
}

nlohmann::json corpus_stats(const Corpus& corpus) {
  std::unordered_set<std::string> titles;
  std::unordered_set<std::string> normalized;
  for (const auto& p : corpus.playlists()) {
    titles.insert(p.name);
    normalized.insert(p.normalized_name);
  }
  std::uint64_t unique_tracks = 0;
  for (auto df : corpus.df()) unique_tracks += df > 0 ? 1 : 0;
  const double avg = corpus.num_playlists() == 0
                         ? 0.0
                         : static_cast<double>(corpus.total_entries()) /
                               static_cast<double>(corpus.num_playlists());
  return {
      {"num_playlists", corpus.num_playlists()},
      {"num_tracks", corpus.total_entries()},
      {"num_unique_tracks", unique_tracks},
      {"num_catalog_tracks", corpus.num_tracks()},
      {"num_unique_albums", corpus.catalog().num_albums()},
      {"num_unique_artists", corpus.catalog().num_artists()},
      {"num_unique_titles", titles.size()},
      {"num_unique_normalized_titles", normalized.size()},
      {"avg_playlist_length", avg},
  };
}

}  // namespace apc
