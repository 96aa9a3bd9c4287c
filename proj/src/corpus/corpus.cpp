#include "apc/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "apc/error.hpp"

namespace apc {

std::uint32_t Interner::intern(std::string_view uri) {
  auto it = index_.find(std::string(uri));
  if (it != index_.end()) return it->second;
  const auto id = static_cast<std::uint32_t>(uris_.size());
  uris_.emplace_back(uri);
  index_.emplace(uris_.back(), id);
  return id;
}

std::optional<std::uint32_t> Interner::find(std::string_view uri) const {
  auto it = index_.find(std::string(uri));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

TrackId Catalog::add_track(const TrackInfo& info) {
  const auto artist = artists_.intern(info.artist_uri);
  if (artist == artist_names_.size()) artist_names_.emplace_back(info.artist_name);
  const auto album = albums_.intern(info.album_uri);
  if (album == album_names_.size()) album_names_.emplace_back(info.album_name);

  const auto track = tracks_.intern(info.track_uri);
  if (track == track_artist_.size()) {
    track_artist_.push_back(artist);
    track_album_.push_back(album);
    track_names_.emplace_back(info.track_name);
  } else if (track_artist_[track] != artist || track_album_[track] != album) {
    throw SchemaError("track " + std::string(info.track_uri) +
                      " appears with conflicting artist_uri/album_uri");
  }
  return track;
}

bool Catalog::operator==(const Catalog& other) const {
  auto same = [](const Interner& a, const Interner& b) {
    return std::ranges::equal(a.uris(), b.uris());
  };
  return same(tracks_, other.tracks_) && same(artists_, other.artists_) &&
         same(albums_, other.albums_) && track_artist_ == other.track_artist_ &&
         track_album_ == other.track_album_ && track_names_ == other.track_names_ &&
         artist_names_ == other.artist_names_ && album_names_ == other.album_names_;
}

CsrMatrix CsrMatrix::transposed() const {
  CsrMatrix t;
  t.rows = cols;
  t.cols = rows;
  t.row_ptr.assign(cols + 1, 0);
  for (auto c : col_idx) ++t.row_ptr[c + 1];
  std::partial_sum(t.row_ptr.begin(), t.row_ptr.end(), t.row_ptr.begin());
  t.col_idx.resize(col_idx.size());
  std::vector<std::uint64_t> cursor(t.row_ptr.begin(), t.row_ptr.end() - 1);
  // Rows are visited in ascending order, so each output row comes out sorted.
  for (std::size_t r = 0; r < rows; ++r) {
    for (auto c : row(r)) t.col_idx[cursor[c]++] = static_cast<std::uint32_t>(r);
  }
  return t;
}

struct Corpus::ColumnCache {
  std::once_flag once;
  CsrMatrix columns;
};

Corpus::Corpus() : column_cache_(std::make_unique<ColumnCache>()) {}

Corpus::Corpus(Catalog catalog, std::vector<Playlist> playlists)
    : catalog_(std::move(catalog)),
      playlists_(std::move(playlists)),
      column_cache_(std::make_unique<ColumnCache>()) {
  const auto n_tracks = catalog_.num_tracks();
  matrix_.rows = playlists_.size();
  matrix_.cols = n_tracks;
  matrix_.row_ptr.assign(1, 0);
  matrix_.row_ptr.reserve(playlists_.size() + 1);
  df_.assign(n_tracks, 0);
  pop_.assign(n_tracks, 0);

  std::vector<TrackId> row;
  for (std::size_t r = 0; r < playlists_.size(); ++r) {
    const auto& p = playlists_[r];
    if (!pid_index_.emplace(p.pid, static_cast<PlaylistId>(r)).second) {
      throw DuplicateIdError("duplicate pid " + std::to_string(p.pid));
    }
    row.assign(p.tracks.begin(), p.tracks.end());
    for (auto t : row) {
      if (t >= n_tracks) {
        throw UnknownTrackError("playlist " + std::to_string(p.pid) + " references track id " +
                                std::to_string(t) + " outside the catalog");
      }
      ++pop_[t];
    }
    total_entries_ += row.size();
    std::ranges::sort(row);
    row.erase(std::unique(row.begin(), row.end()), row.end());
    for (auto t : row) ++df_[t];
    matrix_.col_idx.insert(matrix_.col_idx.end(), row.begin(), row.end());
    matrix_.row_ptr.push_back(matrix_.col_idx.size());
  }
}

Corpus::Corpus(Corpus&&) noexcept = default;
Corpus& Corpus::operator=(Corpus&&) noexcept = default;
Corpus::~Corpus() = default;

const CsrMatrix& Corpus::columns() const {
  std::call_once(column_cache_->once, [this] { column_cache_->columns = matrix_.transposed(); });
  return column_cache_->columns;
}

std::optional<PlaylistId> Corpus::find_pid(std::int64_t pid) const {
  auto it = pid_index_.find(pid);
  if (it == pid_index_.end()) return std::nullopt;
  return it->second;
}

Corpus Corpus::without(const std::unordered_set<std::int64_t>& pids) const {
  std::vector<Playlist> kept;
  kept.reserve(playlists_.size());
  for (const auto& p : playlists_) {
    if (!pids.contains(p.pid)) kept.push_back(p);
  }
  return Corpus(catalog_, std::move(kept));
}

Corpus Corpus::clone() const { return Corpus(catalog_, playlists_); }

double idf(TrackId track, const Corpus& corpus) {
  if (track >= corpus.num_tracks() || corpus.track_df(track) == 0) {
    throw UnknownTrackError("idf undefined for track " + std::to_string(track) +
                            ": it occurs in no playlist");
  }
  return std::log1p(static_cast<double>(corpus.num_playlists()) /
                    static_cast<double>(corpus.track_df(track)));
}

std::vector<double> idf_table(const Corpus& corpus) {
  std::vector<double> table(corpus.num_tracks(), 0.0);
  const auto n = static_cast<double>(corpus.num_playlists());
  for (TrackId t = 0; t < table.size(); ++t) {
    if (auto df = corpus.track_df(t); df > 0) table[t] = std::log1p(n / static_cast<double>(df));
  }
  return table;
}

std::vector<TrackId> popularity_ranking(const Corpus& corpus) {
  std::vector<TrackId> order(corpus.num_tracks());
  std::iota(order.begin(), order.end(), TrackId{0});
  std::ranges::stable_sort(order, [&](TrackId a, TrackId b) {
    return corpus.track_pop(a) > corpus.track_pop(b);
  });
  return order;
}

}  // namespace apc
