#include <algorithm>
#include <sstream>
#include <unordered_set>

#include "apc/challenge.hpp"

namespace apc {

std::string_view validation_code_name(ValidationCode code) {
  switch (code) {
    case ValidationCode::kMissingPid: return "MISSING_PID";
    case ValidationCode::kWrongLength: return "WRONG_LENGTH";
    case ValidationCode::kDuplicateTrack: return "DUPLICATE_TRACK";
    case ValidationCode::kSeedLeak: return "SEED_LEAK";
    case ValidationCode::kUnknownTrack: return "UNKNOWN_TRACK";
  }
  return "UNKNOWN";
}

std::size_t ValidationReport::failures() const {
  return static_cast<std::size_t>(std::ranges::count_if(entries, [](const auto& e) { return !e.passed(); })) +
         unexpected_pids.size();
}

ValidationReport validate_submission(const Submission& submission, const ChallengeSet& challenge,
                                     const Corpus& corpus) {
  ValidationReport report;
  std::vector<const ChallengePlaylist*> ordered;
  for (const auto& cp : challenge.playlists) ordered.push_back(&cp);
  std::ranges::sort(ordered, {}, &ChallengePlaylist::pid);

  for (const auto* cp : ordered) {
    PidValidation v{cp->pid, {}};
    auto it = submission.predictions.find(cp->pid);
    if (it == submission.predictions.end()) {
      v.reasons.push_back(ValidationCode::kMissingPid);
      report.entries.push_back(std::move(v));
      continue;
    }
    const auto& tracks = it->second;
    if (tracks.size() != kSubmissionLength) v.reasons.push_back(ValidationCode::kWrongLength);

    bool unknown = false;
    for (auto t : tracks) unknown |= (t == kUnknownTrack || t >= corpus.num_tracks());

    auto known = tracks;
    std::erase_if(known, [&](TrackId t) { return t == kUnknownTrack || t >= corpus.num_tracks(); });
    std::ranges::sort(known);
    if (std::adjacent_find(known.begin(), known.end()) != known.end()) {
      v.reasons.push_back(ValidationCode::kDuplicateTrack);
    }
    const auto seeds = cp->seed_set();
    const bool leak = std::ranges::any_of(seeds, [&](TrackId s) { return std::ranges::binary_search(known, s); });
    if (leak) v.reasons.push_back(ValidationCode::kSeedLeak);
    if (unknown) v.reasons.push_back(ValidationCode::kUnknownTrack);
    report.entries.push_back(std::move(v));
  }
  std::unordered_set<std::int64_t> expected;
  for (const auto* cp : ordered) expected.insert(cp->pid);
  for (const auto& [pid, tracks] : submission.predictions) {
    if (!expected.contains(pid)) report.unexpected_pids.push_back(pid);
  }
  report.passed = report.failures() == 0;
  return report;
}

nlohmann::json ValidationReport::to_json() const {
  nlohmann::json failed = nlohmann::json::array();
  for (const auto& e : entries) {
    if (e.passed()) continue;
    nlohmann::json reasons = nlohmann::json::array();
    for (auto r : e.reasons) reasons.push_back(validation_code_name(r));
    failed.push_back({{"pid", e.pid}, {"reasons", std::move(reasons)}});
  }
  return {{"passed", passed},
          {"checked", entries.size()},
          {"failures", failures()},
          {"failed", std::move(failed)},
          {"unexpected_pids", unexpected_pids}};
}

std::string ValidationReport::to_text() const {
  std::ostringstream out;
  out << (passed ? "PASS" : "FAIL") << ": " << entries.size() << " challenge playlists checked, "
      << failures() << " failing\n";
  for (const auto& e : entries) {
    if (e.passed()) continue;
    out << "  pid " << e.pid << ':';
    for (auto r : e.reasons) out << ' ' << validation_code_name(r);
    out << '\n';
  }
  for (auto pid : unexpected_pids) out << "  pid " << pid << ": not in the challenge set\n";
  return out.str();
}

}  // namespace apc
