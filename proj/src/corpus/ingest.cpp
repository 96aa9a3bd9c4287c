#include <fstream>
#include <sstream>

#include "apc/corpus.hpp"
#include "apc/error.hpp"

namespace apc {
namespace {

using nlohmann::json;

const json& require(const json& obj, const char* field, const std::string& where) {
  auto it = obj.find(field);
  if (it == obj.end() || it->is_null()) {
    throw SchemaError(where + ": missing required field \"" + field + "\"");
  }
  return *it;
}

std::string require_string(const json& obj, const char* field, const std::string& where) {
  const auto& v = require(obj, field, where);
  if (!v.is_string()) throw SchemaError(where + ": field \"" + field + "\" must be a string");
  return v.get<std::string>();
}

std::string optional_string(const json& obj, const char* field) {
  auto it = obj.find(field);
  if (it == obj.end() || !it->is_string()) return {};
  return it->get<std::string>();
}

std::int64_t optional_int(const json& obj, const char* field) {
  auto it = obj.find(field);
  if (it == obj.end() || !it->is_number_integer()) return 0;
  return it->get<std::int64_t>();
}

const json& playlist_array(const json& doc, const std::string& source) {
  if (doc.is_array()) return doc;
  if (doc.is_object()) {
    auto it = doc.find("playlists");
    if (it != doc.end() && it->is_array()) return *it;
  }
  throw SchemaError(source + ": expected a list of playlists or an object with \"playlists\"");
}

void ingest_document(const json& doc, const std::string& source, Catalog& catalog,
                     std::vector<Playlist>& out) {
  const auto& items = playlist_array(doc, source);
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& item = items[i];
    std::string where = source + ": playlist #" + std::to_string(i);
    if (!item.is_object()) throw SchemaError(where + " is not an object");

    const auto& pid = require(item, "pid", where);
    if (!pid.is_number_integer()) throw SchemaError(where + ": field \"pid\" must be an integer");

    Playlist p;
    p.pid = pid.get<std::int64_t>();
    where = source + ": pid " + std::to_string(p.pid);
    p.name = optional_string(item, "name");
    p.normalized_name = normalize_title(p.name);
    p.num_followers = optional_int(item, "num_followers");
    p.modified_at = optional_int(item, "modified_at");

    const auto& tracks = require(item, "tracks", where);
    if (!tracks.is_array()) throw SchemaError(where + ": field \"tracks\" must be a list");

    std::vector<std::pair<std::int64_t, TrackId>> positioned;
    positioned.reserve(tracks.size());
    bool has_pos = false;
    for (std::size_t k = 0; k < tracks.size(); ++k) {
      const auto& t = tracks[k];
      if (!t.is_object()) throw SchemaError(where + ": track #" + std::to_string(k) + " is not an object");
      const auto track_uri = require_string(t, "track_uri", where);
      const auto artist_uri = require_string(t, "artist_uri", where);
      const auto album_uri = require_string(t, "album_uri", where);
      const auto track_name = optional_string(t, "track_name");
      const auto artist_name = optional_string(t, "artist_name");
      const auto album_name = optional_string(t, "album_name");
      auto id = catalog.add_track(
          {track_uri, artist_uri, album_uri, track_name, artist_name, album_name});
      std::int64_t pos = static_cast<std::int64_t>(k);
      if (auto it = t.find("pos"); it != t.end() && it->is_number_integer()) {
        pos = it->get<std::int64_t>();
        has_pos = true;
      }
      positioned.emplace_back(pos, id);
    }
    if (has_pos) {
      std::ranges::stable_sort(positioned, {}, &std::pair<std::int64_t, TrackId>::first);
      for (std::size_t k = 0; k < positioned.size(); ++k) {
        if (positioned[k].first != static_cast<std::int64_t>(k)) {
          throw SchemaError(where + ": field \"pos\" must enumerate 0..k-1 without gaps");
        }
      }
    }
    p.tracks.reserve(positioned.size());
    for (const auto& [pos, id] : positioned) p.tracks.push_back(id);
    out.push_back(std::move(p));
  }
}

json parse_json(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(source + ": malformed JSON at byte " + std::to_string(e.byte) + ": " +
                     e.what());
  }
}

}  // namespace

Corpus ingest_text(std::span<const std::string> texts, std::span<const std::string> sources) {
  Catalog catalog;
  std::vector<Playlist> playlists;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    const std::string source = i < sources.size() ? sources[i] : "<input " + std::to_string(i) + ">";
    ingest_document(parse_json(texts[i], source), source, catalog, playlists);
  }
  return Corpus(std::move(catalog), std::move(playlists));
}

Corpus ingest(std::span<const std::filesystem::path> paths) {
  Catalog catalog;
  std::vector<Playlist> playlists;
  for (const auto& path : paths) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    const auto source = path.string();
    ingest_document(parse_json(std::move(buf).str(), source), source, catalog, playlists);
  }
  return Corpus(std::move(catalog), std::move(playlists));
}

json to_slice_json(const Corpus& corpus, std::size_t begin, std::size_t end) {
  const auto& cat = corpus.catalog();
  end = std::min(end, corpus.num_playlists());
  json playlists = json::array();
  for (std::size_t r = begin; r < end; ++r) {
    const auto& p = corpus.playlist(static_cast<PlaylistId>(r));
    json tracks = json::array();
    for (std::size_t pos = 0; pos < p.tracks.size(); ++pos) {
      const auto t = p.tracks[pos];
      tracks.push_back({
          {"pos", pos},
          {"artist_name", cat.artist_name(cat.artist_of(t))},
          {"track_uri", cat.tracks().uri(t)},
          {"artist_uri", cat.artists().uri(cat.artist_of(t))},
          {"track_name", cat.track_name(t)},
          {"album_uri", cat.albums().uri(cat.album_of(t))},
          {"album_name", cat.album_name(cat.album_of(t))},
      });
    }
    playlists.push_back({
        {"name", p.name},
        {"pid", p.pid},
        {"modified_at", p.modified_at},
        {"num_tracks", p.tracks.size()},
        {"num_followers", p.num_followers},
        {"tracks", std::move(tracks)},
    });
  }
  return json{{"info", {{"slice", std::to_string(begin) + "-" + std::to_string(end == 0 ? 0 : end - 1)}}},
              {"playlists", std::move(playlists)}};
}

}  // namespace apc
