#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "apc/corpus.hpp"

namespace apc {

// The ten withholding configurations of the challenge set.
enum class ScenarioType : std::uint8_t {
  kTitleOnly = 1,        // T1
  kTitleFirst5 = 2,      // T2
  kFirst5 = 3,           // T3
  kTitleFirst10 = 4,     // T4
  kFirst10 = 5,          // T5
  kTitleFirst25 = 6,     // T6
  kTitleRandom25 = 7,    // T7
  kTitleFirst100 = 8,    // T8
  kTitleRandom100 = 9,   // T9
  kTitleFirst1 = 10,     // T10
};

inline constexpr std::size_t kNumScenarios = 10;
inline constexpr std::array<ScenarioType, kNumScenarios> kAllScenarios = {
    ScenarioType::kTitleOnly,     ScenarioType::kTitleFirst5,    ScenarioType::kFirst5,
    ScenarioType::kTitleFirst10,  ScenarioType::kFirst10,        ScenarioType::kTitleFirst25,
    ScenarioType::kTitleRandom25, ScenarioType::kTitleFirst100,  ScenarioType::kTitleRandom100,
    ScenarioType::kTitleFirst1};

struct ScenarioTraits {
  int seed_count;
  bool has_title;
  bool random_seeds;
};

constexpr ScenarioTraits traits(ScenarioType s) {
  switch (s) {
    case ScenarioType::kTitleOnly: return {0, true, false};
    case ScenarioType::kTitleFirst5: return {5, true, false};
    case ScenarioType::kFirst5: return {5, false, false};
    case ScenarioType::kTitleFirst10: return {10, true, false};
    case ScenarioType::kFirst10: return {10, false, false};
    case ScenarioType::kTitleFirst25: return {25, true, false};
    case ScenarioType::kTitleRandom25: return {25, true, true};
    case ScenarioType::kTitleFirst100: return {100, true, false};
    case ScenarioType::kTitleRandom100: return {100, true, true};
    case ScenarioType::kTitleFirst1: return {1, true, false};
  }
  return {0, false, false};
}

// 0-based position of the scenario in kAllScenarios.
constexpr std::size_t scenario_index(ScenarioType s) { return static_cast<std::size_t>(s) - 1; }
// "T1" .. "T10".
std::string scenario_tag(ScenarioType s);
std::optional<ScenarioType> parse_scenario(std::string_view tag);

struct SeedTrack {
  std::int64_t pos = 0;
  TrackId track = 0;
  bool operator==(const SeedTrack&) const = default;
};

struct ChallengePlaylist {
  std::int64_t pid = 0;
  ScenarioType scenario = ScenarioType::kTitleOnly;
  std::optional<std::string> title;
  std::vector<SeedTrack> seeds;  // ascending original position

  // Deduplicated, sorted seed track ids (the set M_P).
  std::vector<TrackId> seed_set() const;
  bool operator==(const ChallengePlaylist&) const = default;
};

struct ChallengeSet {
  std::vector<ChallengePlaylist> playlists;

  const ChallengePlaylist* find(std::int64_t pid) const;
  bool operator==(const ChallengeSet&) const = default;
};

struct GroundTruthEntry {
  std::vector<TrackId> tracks;          // G_T, sorted unique
  std::vector<ArtistId> artists;        // G_A, sorted unique
  std::vector<std::int64_t> positions;  // withheld original positions, ascending

  bool contains(TrackId t) const;
  bool operator==(const GroundTruthEntry&) const = default;
};

struct GroundTruth {
  std::map<std::int64_t, GroundTruthEntry> entries;

  const GroundTruthEntry& at(std::int64_t pid) const;
  bool operator==(const GroundTruth&) const = default;
};

GroundTruthEntry make_ground_truth_entry(std::vector<TrackId> tracks, std::vector<std::int64_t> positions,
                                         const Catalog& catalog);

// Samples per_type playlists for every scenario, without reuse across
// scenarios. Scenarios are filled from the most demanding seed count down,
// which is optimal because eligibility sets are nested.
std::pair<ChallengeSet, GroundTruth> build_challenge_set(const Corpus& corpus, int per_type,
                                                         std::uint64_t rng_seed);

// ---------------------------------------------------------------------------
// Submissions.

inline constexpr std::size_t kSubmissionLength = 500;

struct Submission {
  std::string team = "apc";
  std::string track = "main";
  // Ordered predictions per pid. URIs absent from the catalog are stored as
  // kUnknownTrack.
  std::map<std::int64_t, std::vector<TrackId>> predictions;

  bool operator==(const Submission&) const = default;
};

enum class ValidationCode : std::uint8_t {
  kMissingPid,
  kWrongLength,
  kDuplicateTrack,
  kSeedLeak,
  kUnknownTrack,
};

std::string_view validation_code_name(ValidationCode code);

struct PidValidation {
  std::int64_t pid = 0;
  std::vector<ValidationCode> reasons;
  bool passed() const { return reasons.empty(); }
};

struct ValidationReport {
  std::vector<PidValidation> entries;         // one per challenge pid, ascending
  std::vector<std::int64_t> unexpected_pids;  // submitted pids outside the challenge set
  bool passed = false;

  std::size_t failures() const;
  nlohmann::json to_json() const;
  std::string to_text() const;
};

ValidationReport validate_submission(const Submission& submission, const ChallengeSet& challenge,
                                     const Corpus& corpus);

// ---------------------------------------------------------------------------
// File formats. Ground truth is always written to its own file.

nlohmann::json challenge_to_json(const ChallengeSet& challenge, const Catalog& catalog);
ChallengeSet challenge_from_json(const nlohmann::json& doc, const Catalog& catalog);
void save_challenge(const ChallengeSet& challenge, const Catalog& catalog, const std::filesystem::path& path);
ChallengeSet load_challenge(const std::filesystem::path& path, const Catalog& catalog);

nlohmann::json ground_truth_to_json(const GroundTruth& truth, const Catalog& catalog);
GroundTruth ground_truth_from_json(const nlohmann::json& doc, const Catalog& catalog);
void save_ground_truth(const GroundTruth& truth, const Catalog& catalog, const std::filesystem::path& path);
GroundTruth load_ground_truth(const std::filesystem::path& path, const Catalog& catalog);

void write_submission(const Submission& submission, const Catalog& catalog, std::ostream& out);
Submission read_submission(std::istream& in, const Catalog& catalog, const std::string& source = "<submission>");
void save_submission(const Submission& submission, const Catalog& catalog, const std::filesystem::path& path);
Submission load_submission(const std::filesystem::path& path, const Catalog& catalog);

// Shared helpers for JSON files on disk.
nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const nlohmann::json& doc, const std::filesystem::path& path);

}  // namespace apc
