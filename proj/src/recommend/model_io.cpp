#include <cmath>
#include <fstream>

#include "apc/binio.hpp"
#include "apc/error.hpp"
#include "apc/recommend.hpp"

namespace apc {
namespace {

constexpr std::string_view kItemMagic = "APCITEMX";
constexpr std::string_view kFactorMagic = "APCWRMF1";
constexpr std::string_view kTitleMagic = "APCTITLE";
constexpr std::uint32_t kModelVersion = 1;

void write_params(BinaryWriter& w, const WrmfParams& p) {
  w.u32(static_cast<std::uint32_t>(p.factors));
  w.f64(p.regularization);
  w.f64(p.alpha);
  w.u32(static_cast<std::uint32_t>(p.iterations));
  w.u64(p.seed);
}

WrmfParams read_params(BinaryReader& r) {
  WrmfParams p;
  p.factors = static_cast<int>(r.u32());
  p.regularization = r.f64();
  p.alpha = r.f64();
  p.iterations = static_cast<int>(r.u32());
  p.seed = r.u64();
  return p;
}

void check_version(BinaryReader& r, const char* what) {
  const auto v = r.u32();
  if (v != kModelVersion) r.fail(std::string(what) + ": unsupported version " + std::to_string(v));
}

void write_factor_body(BinaryWriter& w, const FactorModel& m) {
  write_params(w, m.params);
  w.u64(m.rows);
  w.u64(m.cols);
  w.f64s(m.row_factors);
  w.f64s(m.item_factors);
}

FactorModel read_factor_body(BinaryReader& r) {
  FactorModel m;
  m.params = read_params(r);
  m.factors = m.params.factors;
  m.rows = r.u64();
  m.cols = r.u64();
  m.row_factors = r.f64s();
  m.item_factors = r.f64s();
  const auto d = static_cast<std::size_t>(m.factors);
  if (m.factors < 1 || m.row_factors.size() != m.rows * d || m.item_factors.size() != m.cols * d) {
    r.fail("factor model: matrix shapes do not match the header");
  }
  for (double v : m.row_factors) {
    if (!std::isfinite(v)) r.fail("factor model: non-finite entry");
  }
  for (double v : m.item_factors) {
    if (!std::isfinite(v)) r.fail("factor model: non-finite entry");
  }
  return m;
}

template <typename Fn>
void write_file(const std::filesystem::path& path, Fn&& fn) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  fn(out);
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

std::ifstream open_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

}  // namespace

void ItemSimilarityIndex::save(std::ostream& out) const {
  BinaryWriter w(out);
  w.magic(kItemMagic);
  w.u32(kModelVersion);
  w.u64(max_neighbors_);
  w.u64s(offsets_);
  w.u64(entries_.size());
  for (const auto& e : entries_) {
    w.u32(e.track);
    w.f64(e.similarity);
  }
}

ItemSimilarityIndex ItemSimilarityIndex::load(std::istream& in, const std::string& source) {
  BinaryReader r(in, source);
  r.expect_magic(kItemMagic);
  check_version(r, "item index");
  ItemSimilarityIndex index;
  index.max_neighbors_ = r.u64();
  index.offsets_ = r.u64s();
  if (index.offsets_.empty() || index.offsets_.front() != 0) r.fail("item index: bad offsets");
  const auto n = r.u64();
  if (n != index.offsets_.back()) r.fail("item index: entry count does not match offsets");
  for (std::size_t i = 1; i < index.offsets_.size(); ++i) {
    if (index.offsets_[i] < index.offsets_[i - 1]) r.fail("item index: offsets not monotone");
  }
  const auto n_tracks = index.offsets_.size() - 1;
  index.entries_.resize(n);
  for (auto& e : index.entries_) {
    e.track = r.u32();
    e.similarity = r.f64();
    if (e.track >= n_tracks) r.fail("item index: neighbor id out of range");
  }
  return index;
}

void FactorModel::save(std::ostream& out) const {
  BinaryWriter w(out);
  w.magic(kFactorMagic);
  w.u32(kModelVersion);
  write_factor_body(w, *this);
}

FactorModel FactorModel::load(std::istream& in, const std::string& source) {
  BinaryReader r(in, source);
  r.expect_magic(kFactorMagic);
  check_version(r, "factor model");
  return read_factor_body(r);
}

void TitleIndex::save(std::ostream& out) const {
  BinaryWriter w(out);
  w.magic(kTitleMagic);
  w.u32(kModelVersion);
  w.f64(params_.jaccard_threshold);
  w.u8(params_.title_mf ? 1 : 0);
  write_params(w, params_.mf);
  w.u64(keys_.size());
  for (const auto& k : keys_) w.str(k);
  w.u64(groups_.size());
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    const auto& group = groups_[g];
    w.u64(group_key_[g]);
    w.u64(group.terms.size());
    for (const auto& t : group.terms) w.str(t);
    w.u32s(group.playlists);
    w.u64(group.tracks.size());
    for (const auto& [t, c] : group.tracks) {
      w.u32(t);
      w.u32(c);
    }
  }
  w.u8(has_mf_ ? 1 : 0);
  if (has_mf_) write_factor_body(w, mf_);
}

TitleIndex TitleIndex::load(std::istream& in, const std::string& source) {
  BinaryReader r(in, source);
  r.expect_magic(kTitleMagic);
  check_version(r, "title index");
  TitleIndex index;
  index.params_.jaccard_threshold = r.f64();
  index.params_.title_mf = r.u8() != 0;
  index.params_.mf = read_params(r);
  const auto n_keys = r.u64();
  if (n_keys > (std::uint64_t{1} << 32)) r.fail("title index: implausible key count");
  index.keys_.resize(n_keys);
  for (auto& k : index.keys_) k = r.str();
  const auto n_groups = r.u64();
  if (n_groups > (std::uint64_t{1} << 32)) r.fail("title index: implausible group count");
  index.groups_.resize(n_groups);
  index.group_key_.resize(n_groups);
  for (std::size_t g = 0; g < n_groups; ++g) {
    auto& group = index.groups_[g];
    index.group_key_[g] = r.u64();
    if (index.group_key_[g] >= n_keys) r.fail("title index: group key out of range");
    group.normalized = index.keys_[index.group_key_[g]];
    const auto n_terms = r.u64();
    if (n_terms > (std::uint64_t{1} << 20)) r.fail("title index: implausible term count");
    group.terms.resize(n_terms);
    for (auto& t : group.terms) t = r.str();
    group.playlists = r.u32s();
    const auto n_tracks = r.u64();
    if (n_tracks > (std::uint64_t{1} << 32)) r.fail("title index: implausible track count");
    group.tracks.resize(n_tracks);
    for (auto& [t, c] : group.tracks) {
      t = r.u32();
      c = r.u32();
    }
  }
  index.has_mf_ = r.u8() != 0;
  if (index.has_mf_) {
    index.mf_ = read_factor_body(r);
    if (index.mf_.rows != n_keys) r.fail("title index: title factors do not match the key count");
  }
  index.rebuild_lookup();
  return index;
}

void save_item_index(const ItemSimilarityIndex& index, const std::filesystem::path& path) {
  write_file(path, [&](std::ostream& out) { index.save(out); });
}
ItemSimilarityIndex load_item_index(const std::filesystem::path& path) {
  auto in = open_file(path);
  return ItemSimilarityIndex::load(in, path.string());
}
void save_factor_model(const FactorModel& model, const std::filesystem::path& path) {
  write_file(path, [&](std::ostream& out) { model.save(out); });
}
FactorModel load_factor_model(const std::filesystem::path& path) {
  auto in = open_file(path);
  return FactorModel::load(in, path.string());
}
void save_title_index(const TitleIndex& index, const std::filesystem::path& path) {
  write_file(path, [&](std::ostream& out) { index.save(out); });
}
TitleIndex load_title_index(const std::filesystem::path& path) {
  auto in = open_file(path);
  return TitleIndex::load(in, path.string());
}

}  // namespace apc
