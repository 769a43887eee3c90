#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "mci/graph.hpp"
#include "mci/heads.hpp"
#include "mci/inex.hpp"

namespace mci {

// Linear structural equation model X = BX + eps, cov(eps) = Omega, so the
// implied covariance is (I-B)^{-1} Omega (I-B)^{-T}. b(j,i) holds the
// coefficient of the edge i->j.
struct GaussianModel {
  Eigen::MatrixXd b;
  Eigen::MatrixXd omega;
  Eigen::MatrixXd sigma;
};

struct SimulationResult {
  Eigen::MatrixXd data;  // one sample per row
  GaussianModel model;
  std::uint64_t seed = 0;
};

// Sample size with mean vector and MLE-normalized (divisor n) covariance.
struct SampleMoments {
  long n = 0;
  Eigen::VectorXd mean;
  Eigen::MatrixXd s;
};

struct ScoreResult {
  double score = 0.0;
  double loglik = 0.0;
  long dimension = 0;
  double penalty = 0.0;
};

namespace detail {

inline std::string subset_label(const std::vector<std::string>& names, VSet s) {
  std::string out = "{";
  bool first = true;
  for (Vertex v : vertices(s)) {
    if (!first) out += ",";
    out += names[v];
    first = false;
  }
  return out + "}";
}

inline bool spd_llt(const Eigen::MatrixXd& m, Eigen::LLT<Eigen::MatrixXd>& llt) {
  llt.compute(m);
  return llt.info() == Eigen::Success;
}

inline Eigen::MatrixXd sub_block(const Eigen::MatrixXd& m, VSet rows, VSet cols) {
  Eigen::MatrixXd out(set_size(rows), set_size(cols));
  int i = 0;
  for (Vertex r : vertices(rows)) {
    int j = 0;
    for (Vertex c : vertices(cols)) out(i, j++) = m(r, c);
    ++i;
  }
  return out;
}

}  // namespace detail

// Coefficient draw for the linear structural equation model of any ADMG;
// the sampler below restricts its use to directed MAGs.
inline GaussianModel draw_model(const Admg& g, std::mt19937_64& rng) {
  const int p = g.p();
  std::uniform_real_distribution<double> diag(1.0, 3.0);
  std::uniform_real_distribution<double> mag(0.3, 0.7);
  std::bernoulli_distribution coin(0.5);
  auto weight = [&] { return (coin(rng) ? 1.0 : -1.0) * mag(rng); };

  GaussianModel m;
  m.omega.setZero(p, p);
  Eigen::LLT<Eigen::MatrixXd> llt;
  bool pd = false;
  for (int attempt = 0; attempt < 10000 && !pd; ++attempt) {
    for (int i = 0; i < p; ++i) m.omega(i, i) = diag(rng);
    for (int i = 0; i < p; ++i)
      for (int j = i + 1; j < p; ++j) {
        double w = contains(g.sib_[i], j) ? weight() : 0.0;
        m.omega(i, j) = w;
        m.omega(j, i) = w;
      }
    pd = detail::spd_llt(m.omega, llt);
  }
  if (!pd) throw NumericalError("no positive-definite error covariance found in 10000 draws");

  m.b.setZero(p, p);
  for (int a = 0; a < p; ++a)
    for (int c = 0; c < p; ++c)
      if (contains(g.ch_[a], c)) m.b(c, a) = weight();

  Eigen::MatrixXd imb = Eigen::MatrixXd::Identity(p, p) - m.b;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(imb);
  m.sigma = lu.solve(m.omega) * lu.inverse().transpose();
  m.sigma = ((m.sigma + m.sigma.transpose()) / 2.0).eval();
  return m;
}

// Draws model coefficients, then n zero-mean rows from the implied law.
inline SimulationResult simulate(const Admg& g, long n, std::uint64_t seed) {
  if (n < 1) throw ValidationError("sample count must be at least 1");
  std::string violation = directed_mag_violation(g);
  if (!violation.empty()) throw ValidationError(violation);
  std::mt19937_64 rng(seed);
  SimulationResult res;
  res.seed = seed;
  res.model = draw_model(g, rng);
  const int p = g.p();

  Eigen::LLT<Eigen::MatrixXd> llt(res.model.omega);
  Eigen::MatrixXd chol = llt.matrixL();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(Eigen::MatrixXd::Identity(p, p) - res.model.b);
  std::normal_distribution<double> gauss(0.0, 1.0);
  res.data.resize(n, p);
  Eigen::VectorXd z(p);
  for (long r = 0; r < n; ++r) {
    for (int i = 0; i < p; ++i) z(i) = gauss(rng);
    res.data.row(r) = lu.solve(chol * z).transpose();
  }
  return res;
}

inline SampleMoments moments_from_data(const Eigen::MatrixXd& x) {
  if (x.rows() < 1) throw ValidationError("data matrix has no rows");
  SampleMoments m;
  m.n = static_cast<long>(x.rows());
  m.mean = x.colwise().mean();
  Eigen::MatrixXd centered = x.rowwise() - m.mean.transpose();
  m.s = centered.adjoint() * centered / static_cast<double>(m.n);
  return m;
}

inline SampleMoments moments_from_covariance(const Eigen::MatrixXd& s, long n) {
  if (n < 1) throw ValidationError("sample count must be at least 1");
  if (s.rows() != s.cols()) throw ValidationError("covariance matrix must be square");
  SampleMoments m;
  m.n = n;
  m.mean = Eigen::VectorXd::Zero(s.rows());
  m.s = ((s + s.transpose()) / 2.0).eval();
  return m;
}

// DAG with pa(b) = the Markov blanket of b in the induced prefix graph.
inline Admg dominating_dag(const Admg& g, const TotalOrder& order) {
  if (!order_consistent(g, order))
    throw ValidationError("order is not consistent with the graph");
  Admg d(g.names);
  for (Vertex b = 0; b < g.p(); ++b)
    for (Vertex a : vertices(g.markov_blanket(b, order.pre(b)))) d.add_directed(a, b);
  d.declared_order = order.seq;
  return d;
}

namespace detail {

// Least-squares coefficients and residual variance of b on its parents.
struct Regression {
  Eigen::VectorXd beta;
  double resid = 0.0;
};

inline Regression regress(const Admg& d, Vertex b, const Eigen::MatrixXd& s) {
  Regression out;
  VSet pa = d.pa_[b];
  if (pa == 0) {
    out.resid = s(b, b);
  } else {
    Eigen::MatrixXd spp = sub_block(s, pa, pa);
    Eigen::MatrixXd spb = sub_block(s, pa, bit(b));
    Eigen::LLT<Eigen::MatrixXd> llt;
    if (!spd_llt(spp, llt))
      throw NumericalError("covariance block " + subset_label(d.names, pa) +
                           " is not positive definite");
    out.beta = llt.solve(spb).col(0);
    out.resid = s(b, b) - spb.col(0).dot(out.beta);
  }
  if (!(out.resid > 0.0))
    throw NumericalError("residual variance of '" + d.names[b] + "' is not positive");
  return out;
}

}  // namespace detail

// Implied covariance of the Gaussian DAG model fitted to the moments; the
// conditional of each vertex given its parents matches the sample regression.
inline Eigen::MatrixXd dag_mle_sigma(const Admg& d, const SampleMoments& moments) {
  const int p = d.p();
  if (moments.s.rows() != p) throw ValidationError("moments do not match the graph");
  for (Vertex v = 0; v < p; ++v)
    if (d.sib_[v] != 0) throw ValidationError("input graph has bidirected edges");
  Eigen::MatrixXd bhat = Eigen::MatrixXd::Zero(p, p);
  Eigen::MatrixXd ohat = Eigen::MatrixXd::Zero(p, p);
  for (Vertex b = 0; b < p; ++b) {
    detail::Regression reg = detail::regress(d, b, moments.s);
    int j = 0;
    for (Vertex a : vertices(d.pa_[b])) bhat(b, a) = reg.beta(j++);
    ohat(b, b) = reg.resid;
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(Eigen::MatrixXd::Identity(p, p) - bhat);
  Eigen::MatrixXd sigma = lu.solve(ohat) * lu.inverse().transpose();
  return ((sigma + sigma.transpose()) / 2.0).eval();
}

// Sum over samples of the log marginal density on the subset, profiled at
// the sample mean, via -(n/2)[k log 2pi + log det + trace].
inline double gaussian_marginal_loglik_sum(VSet subset, const Eigen::MatrixXd& sigmaHat,
                                           const SampleMoments& moments) {
  if (subset == 0) return 0.0;
  const int k = set_size(subset);
  Eigen::MatrixXd sig = detail::sub_block(sigmaHat, subset, subset);
  Eigen::MatrixXd smp = detail::sub_block(moments.s, subset, subset);
  Eigen::LLT<Eigen::MatrixXd> llt;
  if (!detail::spd_llt(sig, llt))
    throw NumericalError("model covariance block is not positive definite");
  Eigen::MatrixXd l = llt.matrixL();
  double logdet = 0.0;
  for (int i = 0; i < k; ++i) logdet += 2.0 * std::log(l(i, i));
  double trace = llt.solve(smp).trace();
  constexpr double kLog2Pi = 1.8378770664093454836;
  return -(static_cast<double>(moments.n) / 2.0) * (k * kLog2Pi + logdet + trace);
}

namespace detail {

struct MarginalCache {
  const Eigen::MatrixXd& sigmaHat;
  const SampleMoments& moments;
  std::vector<double> memo;

  MarginalCache(int p, const Eigen::MatrixXd& sig, const SampleMoments& m)
      : sigmaHat(sig), moments(m) {
    memo.assign(std::size_t{1} << p, std::numeric_limits<double>::quiet_NaN());
  }

  double operator()(VSet s) {
    double& slot = memo[s];
    if (std::isnan(slot)) slot = gaussian_marginal_loglik_sum(s, sigmaHat, moments);
    return slot;
  }

  // Moebius transform of the marginal sums at one subset.
  double phi(VSet a) {
    double acc = 0.0;
    for (VSet s : subsets_of(a)) acc += (set_size(a & ~s) % 2 ? -1.0 : 1.0) * (*this)(s);
    return acc;
  }
};

}  // namespace detail

// Approximate maximum log-likelihood of the m-connecting factorization at
// the dominating-DAG estimate. Small parameterizing sets allow the direct
// head-grouped sum; otherwise the inclusion-adjusted form is used.
inline double approx_loglik(const Admg& g, const TotalOrder& order,
                            const Eigen::MatrixXd& sigmaHat, const SampleMoments& moments) {
  if (!order_consistent(g, order))
    throw ValidationError("order is not consistent with the graph");
  if (moments.s.rows() != g.p()) throw ValidationError("moments do not match the graph");
  ParamFamily fam = parameterizing_sets(g);
  int maxM = 0;
  for (VSet s : fam.sets) maxM = std::max(maxM, set_size(s));
  detail::MarginalCache marg(g.p(), sigmaHat, moments);

  if (maxM <= 5) {
    double total = 0.0;
    for (VSet h : heads(g)) {
      VSet t = tail(g, h);
      for (VSet s : subsets_of(h))
        total += (set_size(h & ~s) % 2 ? -1.0 : 1.0) * marg(s | t);
    }
    return total;
  }

  NieResult adj = nie(g, order);
  double total = 0.0;
  for (Vertex b = 0; b < g.p(); ++b) {
    VSet pad = g.markov_blanket(b, order.pre(b));
    total += marg(bit(b) | pad) - marg(pad);
    for (VSet s : subsets_of(pad)) {
      std::int64_t w = adj.inclusion[bit(b) | s];
      if (w != 0) total -= static_cast<double>(w) * marg.phi(bit(b) | s);
    }
  }
  return total;
}

// Dimension of the Gaussian model: one mean per vertex plus the
// parameterizing singletons and pairs.
inline long gaussian_dimension(const Admg& g) {
  ParamFamily fam = parameterizing_sets(g);
  long count = 0;
  for (VSet s : fam.sets) {
    int k = set_size(s);
    if (k == 1 || k == 2) ++count;
  }
  return g.p() + count;
}

// Dimension of the multinomial model: per head, the tail state count times
// the product of head cardinalities less one.
inline long multinomial_dimension(const Admg& g, const std::vector<long>& cards) {
  if (static_cast<int>(cards.size()) != g.p())
    throw ValidationError("need one cardinality per vertex");
  for (long c : cards)
    if (c < 2) throw ValidationError("vertex cardinalities must be at least 2");
  long total = 0;
  for (VSet h : heads(g)) {
    long term = 1;
    for (Vertex v : vertices(tail(g, h))) term *= cards[v];
    for (Vertex v : vertices(h)) term *= cards[v] - 1;
    total += term;
  }
  return total;
}

inline ScoreResult bic_mf(const Admg& g, const TotalOrder& order, const SampleMoments& moments) {
  Admg d = dominating_dag(g, order);
  Eigen::MatrixXd sigmaHat = dag_mle_sigma(d, moments);
  ScoreResult r;
  r.loglik = approx_loglik(g, order, sigmaHat, moments);
  r.dimension = gaussian_dimension(g);
  r.penalty = 0.5 * static_cast<double>(r.dimension) * std::log(static_cast<double>(moments.n));
  r.score = r.loglik - r.penalty;
  return r;
}

// Exact Gaussian DAG BIC through the per-vertex residual variances; an
// independent reference for the DAG case of the factorized score.
inline ScoreResult dag_bic(const Admg& d, const SampleMoments& moments) {
  const int p = d.p();
  if (moments.s.rows() != p) throw ValidationError("moments do not match the graph");
  for (Vertex v = 0; v < p; ++v)
    if (d.sib_[v] != 0) throw ValidationError("input graph has bidirected edges");
  consistent_order(d);
  constexpr double kLog2Pi = 1.8378770664093454836;
  ScoreResult r;
  long edges = 0;
  for (Vertex b = 0; b < p; ++b) {
    detail::Regression reg = detail::regress(d, b, moments.s);
    r.loglik += -(static_cast<double>(moments.n) / 2.0) * (kLog2Pi + std::log(reg.resid) + 1.0);
    edges += set_size(d.pa_[b]);
  }
  r.dimension = 2L * p + edges;
  r.penalty = 0.5 * static_cast<double>(r.dimension) * std::log(static_cast<double>(moments.n));
  r.score = r.loglik - r.penalty;
  return r;
}

}  // namespace mci
