#include <cstdio>
#include <sstream>

#include "apc/metrics.hpp"

namespace apc {
namespace {

using nlohmann::json;

json means_json(const MetricMeans& m) {
  return {{"count", m.count}, {"r_precision", m.r_precision}, {"ndcg", m.ndcg}, {"clicks", m.clicks}};
}

MetricMeans means_from_json(const json& j) {
  MetricMeans m;
  try {
    m.count = j.at("count").get<std::size_t>();
    m.r_precision = j.at("r_precision").get<double>();
    m.ndcg = j.at("ndcg").get<double>();
    m.clicks = j.at("clicks").get<double>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("score report: bad metric block: ") + e.what());
  }
  return m;
}

std::string format_row(const std::string& label, const MetricMeans& m) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%-10s %7zu %9.4f %9.4f %9.3f\n", label.c_str(), m.count, m.r_precision, m.ndcg,
                m.clicks);
  return buf;
}

}  // namespace

void summarize(ScoreReport& report) {
  std::array<double, kNumScenarios> r{}, n{}, c{};
  report.scenarios = {};
  double tr = 0, tn = 0, tc = 0;
  report.r_precision_above_one = 0;
  for (const auto& [pid, sp] : report.playlists) {
    const auto i = scenario_index(sp.scenario);
    r[i] += sp.score.r_precision;
    n[i] += sp.score.ndcg;
    c[i] += sp.score.clicks;
    ++report.scenarios[i].count;
    tr += sp.score.r_precision;
    tn += sp.score.ndcg;
    tc += sp.score.clicks;
    if (sp.score.r_precision > 1.0) ++report.r_precision_above_one;
  }
  for (std::size_t i = 0; i < kNumScenarios; ++i) {
    auto& m = report.scenarios[i];
    if (m.count == 0) continue;
    const auto k = static_cast<double>(m.count);
    m.r_precision = r[i] / k;
    m.ndcg = n[i] / k;
    m.clicks = c[i] / k;
  }
  report.overall = {};
  report.overall.count = report.playlists.size();
  if (report.overall.count > 0) {
    const auto k = static_cast<double>(report.overall.count);
    report.overall.r_precision = tr / k;
    report.overall.ndcg = tn / k;
    report.overall.clicks = tc / k;
  }
}

ScoreReport score_report(const Submission& submission, const ChallengeSet& challenge, const GroundTruth& truth,
                         const Corpus& corpus, std::string name) {
  auto validation = validate_submission(submission, challenge, corpus);
  if (!validation.passed) throw ValidationFailedError(std::move(validation));

  ScoreReport report;
  report.name = std::move(name);
  for (const auto& cp : challenge.playlists) {
    const auto& predicted = submission.predictions.at(cp.pid);
    report.playlists[cp.pid] = {cp.scenario, score_playlist(predicted, truth.at(cp.pid), corpus.catalog())};
  }
  summarize(report);
  return report;
}

json ScoreReport::to_json() const {
  json scenario_rows = json::array();
  for (auto s : kAllScenarios) {
    const auto& m = scenarios[scenario_index(s)];
    if (m.count == 0) continue;
    auto row = means_json(m);
    row["scenario"] = scenario_tag(s);
    scenario_rows.push_back(std::move(row));
  }
  json rows = json::array();
  for (const auto& [pid, sp] : playlists) {
    rows.push_back({{"pid", pid},
                    {"scenario", scenario_tag(sp.scenario)},
                    {"r_precision", sp.score.r_precision},
                    {"ndcg", sp.score.ndcg},
                    {"clicks", sp.score.clicks}});
  }
  return {{"version", 1},
          {"name", name},
          {"overall", means_json(overall)},
          {"scenarios", std::move(scenario_rows)},
          {"r_precision_above_one", r_precision_above_one},
          {"playlists", std::move(rows)}};
}

ScoreReport ScoreReport::from_json(const json& doc) {
  ScoreReport report;
  if (!doc.is_object() || !doc.contains("name") || !doc.contains("overall")) {
    throw ParseError("score report: expected an object with \"name\" and \"overall\"");
  }
  try {
    report.name = doc.at("name").get<std::string>();
    if (auto it = doc.find("playlists"); it != doc.end()) {
      for (const auto& row : *it) {
        const auto tag = row.at("scenario").get<std::string>();
        auto scenario = parse_scenario(tag);
        if (!scenario) throw ParseError("score report: unknown scenario \"" + tag + "\"");
        report.playlists[row.at("pid").get<std::int64_t>()] = {
            *scenario,
            {row.at("r_precision").get<double>(), row.at("ndcg").get<double>(), row.at("clicks").get<int>()}};
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("score report: ") + e.what());
  }
  if (report.playlists.empty()) {
    // Summary-only report: take the stored means as they are.
    report.overall = means_from_json(doc.at("overall"));
    if (auto it = doc.find("scenarios"); it != doc.end()) {
      for (const auto& row : *it) {
        auto scenario = parse_scenario(row.value("scenario", ""));
        if (!scenario) throw ParseError("score report: bad scenario row");
        report.scenarios[scenario_index(*scenario)] = means_from_json(row);
      }
    }
    report.r_precision_above_one = doc.value("r_precision_above_one", std::size_t{0});
  } else {
    summarize(report);
  }
  return report;
}

std::string ScoreReport::to_text() const {
  std::ostringstream out;
  out << "# " << name << '\n';
  out << "scenario     count    R-prec      NDCG    clicks\n";
  for (auto s : kAllScenarios) {
    const auto& m = scenarios[scenario_index(s)];
    if (m.count > 0) out << format_row(scenario_tag(s), m);
  }
  out << format_row("all", overall);
  if (r_precision_above_one > 0) {
    out << "note: " << r_precision_above_one << " playlists have R-precision > 1 (artist credit)\n";
  }
  return out.str();
}

std::string leaderboard_text(const std::vector<BordaEntry>& entries) {
  std::ostringstream out;
  out << "rank  name                      R-prec      NDCG    clicks   borda\n";
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    char buf[192];
    std::snprintf(buf, sizeof buf, "%4zu  %-22s %9.4f %9.4f %9.3f %7.1f\n", i + 1, e.name.c_str(),
                  e.means.r_precision, e.means.ndcg, e.means.clicks, e.rank_sum);
    out << buf;
  }
  return out.str();
}

json leaderboard_json(const std::vector<BordaEntry>& entries) {
  json rows = json::array();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    rows.push_back({{"rank", i + 1},
                    {"name", e.name},
                    {"r_precision", e.means.r_precision},
                    {"ndcg", e.means.ndcg},
                    {"clicks", e.means.clicks},
                    {"rank_r_precision", e.rank_r_precision},
                    {"rank_ndcg", e.rank_ndcg},
                    {"rank_clicks", e.rank_clicks},
                    {"borda", e.rank_sum}});
  }
  return {{"leaderboard", std::move(rows)}};
}

}  // namespace apc
