#include <fstream>
#include <sstream>
#include <unordered_set>

#include "apc/challenge.hpp"
#include "apc/error.hpp"

namespace apc {
namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

TrackId lookup_track(const Catalog& catalog, const std::string& uri, const std::string& where) {
  auto id = catalog.find_track(uri);
  if (!id) throw UnknownTrackError(where + ": track " + uri + " is not in the catalog");
  return *id;
}

const json& field(const json& obj, const char* name, const std::string& where) {
  auto it = obj.find(name);
  if (it == obj.end()) throw SchemaError(where + ": missing required field \"" + name + "\"");
  return *it;
}

std::int64_t int_field(const json& obj, const char* name, const std::string& where) {
  const auto& v = field(obj, name, where);
  if (!v.is_number_integer()) throw SchemaError(where + ": field \"" + name + "\" must be an integer");
  return v.get<std::int64_t>();
}

std::string string_field(const json& obj, const char* name, const std::string& where) {
  const auto& v = field(obj, name, where);
  if (!v.is_string()) throw SchemaError(where + ": field \"" + name + "\" must be a string");
  return v.get<std::string>();
}

void check_version(const json& doc, const std::string& what) {
  if (!doc.is_object()) throw SchemaError(what + ": expected a JSON object");
  if (auto it = doc.find("version"); it != doc.end() && *it != kFormatVersion) {
    throw SchemaError(what + ": unsupported version " + it->dump());
  }
}

}  // namespace

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(std::move(buf).str());
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

void write_json_file(const json& doc, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << doc.dump(1) << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

json challenge_to_json(const ChallengeSet& challenge, const Catalog& catalog) {
  json playlists = json::array();
  for (const auto& cp : challenge.playlists) {
    json tracks = json::array();
    for (const auto& s : cp.seeds) {
      tracks.push_back({{"pos", s.pos}, {"track_uri", catalog.tracks().uri(s.track)}});
    }
    json item = {{"pid", cp.pid},
                 {"scenario", scenario_tag(cp.scenario)},
                 {"num_samples", cp.seeds.size()},
                 {"tracks", std::move(tracks)}};
    if (cp.title) item["name"] = *cp.title;
    playlists.push_back(std::move(item));
  }
  return {{"version", kFormatVersion}, {"playlists", std::move(playlists)}};
}

ChallengeSet challenge_from_json(const json& doc, const Catalog& catalog) {
  check_version(doc, "challenge set");
  ChallengeSet challenge;
  std::unordered_set<std::int64_t> seen;
  const auto& items = field(doc, "playlists", "challenge set");
  if (!items.is_array()) throw SchemaError("challenge set: \"playlists\" must be a list");
  for (const auto& item : items) {
    ChallengePlaylist cp;
    cp.pid = int_field(item, "pid", "challenge playlist");
    const std::string where = "challenge pid " + std::to_string(cp.pid);
    if (!seen.insert(cp.pid).second) throw DuplicateIdError(where + " appears twice");
    const auto tag = string_field(item, "scenario", where);
    auto scenario = parse_scenario(tag);
    if (!scenario) throw SchemaError(where + ": unknown scenario tag \"" + tag + "\"");
    cp.scenario = *scenario;
    if (auto it = item.find("name"); it != item.end() && it->is_string()) cp.title = it->get<std::string>();

    const auto& tracks = field(item, "tracks", where);
    if (!tracks.is_array()) throw SchemaError(where + ": \"tracks\" must be a list");
    for (const auto& t : tracks) {
      cp.seeds.push_back({int_field(t, "pos", where), lookup_track(catalog, string_field(t, "track_uri", where), where)});
    }
    std::ranges::stable_sort(cp.seeds, {}, &SeedTrack::pos);

    const auto tr = traits(cp.scenario);
    if (cp.title.has_value() != tr.has_title) {
      throw SchemaError(where + ": scenario " + tag + (tr.has_title ? " requires" : " forbids") + " a \"name\"");
    }
    if (cp.seeds.size() != static_cast<std::size_t>(tr.seed_count)) {
      throw SchemaError(where + ": scenario " + tag + " expects " + std::to_string(tr.seed_count) +
                        " seed tracks, found " + std::to_string(cp.seeds.size()));
    }
    challenge.playlists.push_back(std::move(cp));
  }
  return challenge;
}

void save_challenge(const ChallengeSet& challenge, const Catalog& catalog, const std::filesystem::path& path) {
  write_json_file(challenge_to_json(challenge, catalog), path);
}

ChallengeSet load_challenge(const std::filesystem::path& path, const Catalog& catalog) {
  return challenge_from_json(read_json_file(path), catalog);
}

json ground_truth_to_json(const GroundTruth& truth, const Catalog& catalog) {
  json playlists = json::array();
  for (const auto& [pid, entry] : truth.entries) {
    json tracks = json::array();
    for (auto t : entry.tracks) {
      tracks.push_back({{"track_uri", catalog.tracks().uri(t)},
                        {"artist_uri", catalog.artists().uri(catalog.artist_of(t))}});
    }
    playlists.push_back({{"pid", pid}, {"positions", entry.positions}, {"tracks", std::move(tracks)}});
  }
  return {{"version", kFormatVersion}, {"ground_truth", std::move(playlists)}};
}

GroundTruth ground_truth_from_json(const json& doc, const Catalog& catalog) {
  check_version(doc, "ground truth");
  GroundTruth truth;
  const auto& items = field(doc, "ground_truth", "ground truth");
  if (!items.is_array()) throw SchemaError("ground truth: \"ground_truth\" must be a list");
  for (const auto& item : items) {
    const auto pid = int_field(item, "pid", "ground truth entry");
    const std::string where = "ground truth pid " + std::to_string(pid);
    std::vector<TrackId> tracks;
    for (const auto& t : field(item, "tracks", where)) {
      tracks.push_back(lookup_track(catalog, string_field(t, "track_uri", where), where));
    }
    std::vector<std::int64_t> positions;
    if (auto it = item.find("positions"); it != item.end() && it->is_array()) {
      positions = it->get<std::vector<std::int64_t>>();
    }
    if (!truth.entries.emplace(pid, make_ground_truth_entry(std::move(tracks), std::move(positions), catalog)).second) {
      throw DuplicateIdError(where + " appears twice");
    }
  }
  return truth;
}

void save_ground_truth(const GroundTruth& truth, const Catalog& catalog, const std::filesystem::path& path) {
  write_json_file(ground_truth_to_json(truth, catalog), path);
}

GroundTruth load_ground_truth(const std::filesystem::path& path, const Catalog& catalog) {
  return ground_truth_from_json(read_json_file(path), catalog);
}

void write_submission(const Submission& submission, const Catalog& catalog, std::ostream& out) {
  out << "#SUBMISSION," << submission.team << ',' << submission.track << '\n';
  for (const auto& [pid, tracks] : submission.predictions) {
    out << pid;
    for (auto t : tracks) {
      out << ',';
      if (t != kUnknownTrack) out << catalog.tracks().uri(t);
    }
    out << '\n';
  }
}

Submission read_submission(std::istream& in, const Catalog& catalog, const std::string& source) {
  Submission sub;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      auto comma = line.find(',', start);
      cells.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    const std::string where = source + ":" + std::to_string(line_no);
    if (line.front() == '#') {
      if (header || cells[0] != "#SUBMISSION" || cells.size() != 3) {
        throw ParseError(where + ": expected a single header \"#SUBMISSION,<team>,<track>\"");
      }
      sub.team = cells[1];
      sub.track = cells[2];
      header = true;
      continue;
    }
    if (!header) throw ParseError(where + ": missing \"#SUBMISSION\" header line");
    std::int64_t pid = 0;
    try {
      std::size_t used = 0;
      pid = std::stoll(cells[0], &used);
      if (used != cells[0].size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw ParseError(where + ": invalid pid \"" + cells[0] + "\"");
    }
    std::vector<TrackId> tracks;
    tracks.reserve(cells.size() - 1);
    for (std::size_t i = 1; i < cells.size(); ++i) {
      auto id = catalog.find_track(cells[i]);
      tracks.push_back(id ? *id : kUnknownTrack);
    }
    if (!sub.predictions.emplace(pid, std::move(tracks)).second) {
      throw ParseError(where + ": pid " + std::to_string(pid) + " listed twice");
    }
  }
  if (!header) throw ParseError(source + ": empty submission, missing \"#SUBMISSION\" header");
  return sub;
}

void save_submission(const Submission& submission, const Catalog& catalog, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  write_submission(submission, catalog, out);
  if (!out) throw IoError("failed writing " + path.string());
}

Submission load_submission(const std::filesystem::path& path, const Catalog& catalog) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_submission(in, catalog, path.string());
}

}  // namespace apc
