#include <cmath>
#include <random>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "apc/error.hpp"
#include "apc/parallel.hpp"
#include "apc/recommend.hpp"

namespace apc {
namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstFactors = Eigen::Map<const RowMatrix>;
using Factors = Eigen::Map<RowMatrix>;

void check_params(const WrmfParams& p) {
  if (p.factors < 1) throw ConfigError("wrmf: factors must be >= 1");
  if (!(p.regularization > 0.0) || !std::isfinite(p.regularization)) {
    throw ConfigError("wrmf: regularization must be a positive finite number");
  }
  if (!(p.alpha >= 0.0) || !std::isfinite(p.alpha)) throw ConfigError("wrmf: alpha must be finite and >= 0");
  if (p.iterations < 0) throw ConfigError("wrmf: iterations must be >= 0");
}

// Solves every row of `target` against the fixed factors `fixed`, one
// independent least-squares problem per row.
void solve_side(const CsrMatrix& m, const std::vector<double>& fixed, std::vector<double>& target, int d,
                const WrmfParams& p, int iteration) {
  const ConstFactors Y(fixed.data(), static_cast<Eigen::Index>(m.cols), d);
  Eigen::MatrixXd gram = Y.transpose() * Y;
  gram.diagonal().array() += p.regularization;

  parallel_chunks(m.rows, p.threads, [&](std::size_t, std::size_t begin, std::size_t end) {
    Eigen::MatrixXd a(d, d);
    Eigen::VectorXd b(d);
    Eigen::LLT<Eigen::MatrixXd> llt(d);
    Factors X(target.data(), static_cast<Eigen::Index>(m.rows), d);
    for (std::size_t r = begin; r < end; ++r) {
      const auto items = m.row(r);
      a = gram;
      b.setZero();
      for (auto i : items) {
        const auto y = Y.row(i).transpose();
        a.selfadjointView<Eigen::Lower>().rankUpdate(y, p.alpha);
        b += y;
      }
      b *= 1.0 + p.alpha;
      llt.compute(a.selfadjointView<Eigen::Lower>());
      if (llt.info() != Eigen::Success) {
        throw NumericalFailure("wrmf: Cholesky solve failed in iteration " + std::to_string(iteration));
      }
      X.row(static_cast<Eigen::Index>(r)) = llt.solve(b).transpose();
    }
  });
  for (double v : target) {
    if (!std::isfinite(v)) {
      throw NumericalFailure("wrmf: non-finite factor in iteration " + std::to_string(iteration));
    }
  }
}

}  // namespace

double wrmf_objective(const CsrMatrix& interactions, const FactorModel& model) {
  const int d = model.factors;
  const ConstFactors X(model.row_factors.data(), static_cast<Eigen::Index>(model.rows), d);
  const ConstFactors Y(model.item_factors.data(), static_cast<Eigen::Index>(model.cols), d);
  const double alpha = model.params.alpha;

  // Every cell as if it were zero with confidence 1, then corrected on the
  // observed cells.
  const Eigen::MatrixXd xtx = X.transpose() * X;
  const Eigen::MatrixXd yty = Y.transpose() * Y;
  double total = (xtx.array() * yty.array()).sum();
  for (std::size_t r = 0; r < interactions.rows; ++r) {
    for (auto i : interactions.row(r)) {
      const double s = X.row(static_cast<Eigen::Index>(r)).dot(Y.row(i));
      total += (1.0 + alpha) * (1.0 - s) * (1.0 - s) - s * s;
    }
  }
  total += model.params.regularization * (X.squaredNorm() + Y.squaredNorm());
  return total;
}

FactorModel train_wrmf(const CsrMatrix& interactions, const WrmfParams& params, const WrmfObserver& observer) {
  check_params(params);
  FactorModel model;
  model.factors = params.factors;
  model.rows = interactions.rows;
  model.cols = interactions.cols;
  model.params = params;

  const auto d = static_cast<std::size_t>(params.factors);
  std::mt19937_64 rng(params.seed);
  auto init = [&](std::vector<double>& v, std::size_t n) {
    v.resize(n * d);
    for (auto& x : v) x = (static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0) * 0.01;
  };
  init(model.row_factors, model.rows);
  init(model.item_factors, model.cols);

  const CsrMatrix by_item = interactions.transposed();
  for (int it = 1; it <= params.iterations; ++it) {
    solve_side(interactions, model.item_factors, model.row_factors, params.factors, params, it);
    if (observer) observer(2 * it - 1, wrmf_objective(interactions, model));
    solve_side(by_item, model.row_factors, model.item_factors, params.factors, params, it);
    if (observer) observer(2 * it, wrmf_objective(interactions, model));
  }
  return model;
}

FactorModel train_wrmf(const Corpus& corpus, const WrmfParams& params, const WrmfObserver& observer) {
  return train_wrmf(corpus.matrix(), params, observer);
}

Recommendation recommend_mf(const ChallengePlaylist& seed, const FactorModel& model, const Corpus& corpus,
                            std::size_t n, std::span<const double> idf) {
  const auto seeds = seed.seed_set();
  if (seeds.empty()) {
    throw EmptySeedError("matrix factorization needs at least one seed track (pid " + std::to_string(seed.pid) + ")");
  }
  std::vector<double> own_idf;
  if (idf.empty()) {
    own_idf = idf_table(corpus);
    idf = own_idf;
  }
  const int d = model.factors;
  const ConstFactors Y(model.item_factors.data(), static_cast<Eigen::Index>(model.cols), d);

  Eigen::RowVectorXd v = Eigen::RowVectorXd::Zero(d);
  std::size_t used = 0;
  for (auto s : seeds) {
    if (s >= model.cols || s >= corpus.num_tracks() || corpus.track_df(s) == 0) continue;
    v += idf[s] * Y.row(s);
    ++used;
  }
  if (used > 0) v /= static_cast<double>(used);

  std::vector<ScoredTrack> candidates;
  const auto limit = std::min<std::size_t>(model.cols, corpus.num_tracks());
  candidates.reserve(limit);
  for (std::size_t t = 0; t < limit; ++t) {
    if (corpus.track_df(static_cast<TrackId>(t)) == 0) continue;
    candidates.push_back({static_cast<TrackId>(t), v.dot(Y.row(static_cast<Eigen::Index>(t)))});
  }
  return select_top(std::move(candidates), n, seeds);
}

}  // namespace apc
