#include "plsv/map_baseline.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "json.hpp"
#include "plsv/parallel.h"
#include "plsv/rng.h"

namespace plsv {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// In-place log-softmax of a row; returns the log normalizer.
double LogNormalize(std::span<double> v) {
  double mx = kNegInf;
  for (double a : v) mx = std::max(mx, a);
  if (mx == kNegInf) {
    const double u = -std::log(static_cast<double>(v.size()));
    for (double& a : v) a = u;
    return kNegInf;
  }
  double s = 0;
  for (double a : v) s += std::exp(a - mx);
  const double lse = mx + std::log(s);
  for (double& a : v) a -= lse;
  return lse;
}

double SquaredNorm(const Matrix<double>& m) {
  double s = 0;
  for (double v : m.values()) s += v * v;
  return s;
}

Matrix<double> LogBetaTransposed(const Matrix<double>& beta) {
  Matrix<double> out(beta.cols(), beta.rows());
  for (size_t z = 0; z < beta.rows(); ++z)
    for (size_t v = 0; v < beta.cols(); ++v)
      out(v, z) = beta(z, v) > 0 ? std::log(beta(z, v)) : kNegInf;
  return out;
}

void RequireCompatible(const MapParams& params, const SparseCounts& counts) {
  if (params.x.rows() != counts.rows())
    throw std::invalid_argument("MAP: X has " + std::to_string(params.x.rows()) +
                                " rows but the corpus has " +
                                std::to_string(counts.rows()) + " documents");
  if (params.beta.cols() != counts.cols())
    throw std::invalid_argument("MAP: beta/corpus vocabulary mismatch");
  if (params.beta.rows() != params.phi.rows() ||
      params.x.cols() != params.phi.cols())
    throw std::invalid_argument("MAP: inconsistent parameter shapes");
}

}  // namespace

double MapConfig::ResolvedVarphi(size_t num_docs) const {
  if (varphi > 0) return varphi;
  return static_cast<double>(num_docs) / static_cast<double>(topics);
}

void MapConfig::Validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("MapConfig: ") + what);
  };
  require(topics >= 1, "topics must be >= 1");
  require(dim >= 1, "dim must be >= 1");
  require(lambda >= 0, "lambda must be non-negative");
  require(gamma > 0, "gamma must be positive");
  require(varphi >= 0, "varphi must be non-negative");
  require(inner_lr > 0, "inner_lr must be positive");
  require(threads >= 1, "threads must be >= 1");
}

std::string MapConfigToJson(const MapConfig& c) {
  nlohmann::ordered_json j;
  j["topics"] = c.topics;
  j["dim"] = c.dim;
  j["em_iters"] = c.em_iters;
  j["inner_iters"] = c.inner_iters;
  j["lambda"] = c.lambda;
  j["gamma"] = c.gamma;
  j["varphi"] = c.varphi;
  j["inner_lr"] = c.inner_lr;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  return j.dump(2);
}

MapConfig MapConfigFromJson(std::string_view text, const MapConfig& defaults) {
  const auto j = nlohmann::json::parse(text);
  if (!j.is_object())
    throw std::invalid_argument("map config: expected a JSON object");
  MapConfig c = defaults;
  for (const auto& [key, value] : j.items()) {
    if (key == "topics") c.topics = value.get<size_t>();
    else if (key == "dim") c.dim = value.get<size_t>();
    else if (key == "em_iters") c.em_iters = value.get<size_t>();
    else if (key == "inner_iters") c.inner_iters = value.get<size_t>();
    else if (key == "lambda") c.lambda = value.get<double>();
    else if (key == "gamma") c.gamma = value.get<double>();
    else if (key == "varphi") c.varphi = value.get<double>();
    else if (key == "inner_lr") c.inner_lr = value.get<double>();
    else if (key == "seed") c.seed = value.get<uint64_t>();
    else if (key == "threads") c.threads = value.get<int>();
    else throw std::invalid_argument("map config: unknown key '" + key + "'");
  }
  return c;
}

Matrix<double> MapLogTheta(const Matrix<double>& x, const Matrix<double>& phi) {
  if (x.cols() != phi.cols())
    throw std::invalid_argument("MapLogTheta: dimension mismatch");
  Matrix<double> out(x.rows(), phi.rows());
  for (size_t n = 0; n < x.rows(); ++n) {
    auto row = out.row(n);
    for (size_t z = 0; z < phi.rows(); ++z) {
      double r2 = 0;
      for (size_t i = 0; i < x.cols(); ++i) {
        const double diff = x(n, i) - phi(z, i);
        r2 += diff * diff;
      }
      row[z] = -0.5 * r2;
    }
    LogNormalize(row);
  }
  return out;
}

Responsibilities EStep(const MapParams& params, const SparseCounts& counts,
                       int threads) {
  RequireCompatible(params, counts);
  const size_t topics = params.beta.rows();
  const Matrix<double> log_theta = MapLogTheta(params.x, params.phi);
  const Matrix<double> log_beta_t = LogBetaTransposed(params.beta);
  Responsibilities resp{Matrix<double>(counts.nnz(), topics)};
  ParallelFor(counts.rows(), threads, [&](size_t begin, size_t end) {
    for (size_t n = begin; n < end; ++n) {
      const auto lt = log_theta.row(n);
      for (size_t k = counts.row_begin(n); k < counts.row_end(n); ++k) {
        const auto lb = log_beta_t.row(counts.col_at(k));
        auto r = resp.r.row(k);
        for (size_t z = 0; z < topics; ++z) r[z] = lt[z] + lb[z];
        LogNormalize(r);
        for (double& v : r) v = std::exp(v);
      }
    }
  });
  return resp;
}

Matrix<double> MStepBeta(const Responsibilities& resp,
                         const SparseCounts& counts, size_t topics,
                         double lambda) {
  RequireShape(resp.r, counts.nnz(), topics, "MStepBeta responsibilities");
  if (lambda < 0) throw std::invalid_argument("MStepBeta: negative lambda");
  Matrix<double> beta(topics, counts.cols(), lambda);
  for (size_t k = 0; k < counts.nnz(); ++k) {
    const double c = counts.count_at(k);
    const uint32_t v = counts.col_at(k);
    const auto r = resp.r.row(k);
    for (size_t z = 0; z < topics; ++z) beta(z, v) += c * r[z];
  }
  for (size_t z = 0; z < topics; ++z) {
    auto row = beta.row(z);
    double s = 0;
    for (double b : row) s += b;
    if (s > 0) {
      for (double& b : row) b /= s;
    } else {
      std::fill(row.begin(), row.end(), 1.0 / static_cast<double>(row.size()));
    }
  }
  return beta;
}

CoordTarget AggregateResponsibilities(const Responsibilities& resp,
                                      const SparseCounts& counts) {
  const size_t topics = resp.r.cols();
  if (resp.r.rows() != counts.nnz())
    throw std::invalid_argument("AggregateResponsibilities: nnz mismatch");
  CoordTarget t{Matrix<double>(counts.rows(), topics),
                std::vector<double>(counts.rows(), 0.0)};
  for (size_t n = 0; n < counts.rows(); ++n) {
    auto w = t.weight.row(n);
    for (size_t k = counts.row_begin(n); k < counts.row_end(n); ++k) {
      const double c = counts.count_at(k);
      const auto r = resp.r.row(k);
      for (size_t z = 0; z < topics; ++z) w[z] += c * r[z];
      t.lengths[n] += c;
    }
  }
  return t;
}

double CoordObjective(const CoordTarget& target, const Matrix<double>& x,
                      const Matrix<double>& phi, double gamma, double varphi,
                      Matrix<double>* dx, Matrix<double>* dphi) {
  const size_t n_docs = x.rows(), topics = phi.rows(), d = x.cols();
  RequireShape(target.weight, n_docs, topics, "CoordObjective weights");
  const Matrix<double> log_theta = MapLogTheta(x, phi);
  double q = 0;
  for (size_t i = 0; i < log_theta.size(); ++i)
    q += target.weight[i] * log_theta[i];
  q -= SquaredNorm(x) / (2 * gamma) + SquaredNorm(phi) / (2 * varphi);
  if (!std::isfinite(q)) throw NonFiniteError("MAP: non-finite coordinate objective");
  if (dx == nullptr && dphi == nullptr) return q;

  Matrix<double> gx(n_docs, d), gphi(topics, d);
  for (size_t n = 0; n < n_docs; ++n) {
    for (size_t z = 0; z < topics; ++z) {
      // d/d(logit_nz) of sum_z W_nz log theta_nz.
      const double g = target.weight(n, z) -
                       target.lengths[n] * std::exp(log_theta(n, z));
      for (size_t i = 0; i < d; ++i) {
        const double diff = phi(z, i) - x(n, i);
        gx(n, i) += g * diff;
        gphi(z, i) -= g * diff;
      }
    }
  }
  for (size_t i = 0; i < gx.size(); ++i) gx[i] -= x[i] / gamma;
  for (size_t i = 0; i < gphi.size(); ++i) gphi[i] -= phi[i] / varphi;
  if (dx) *dx = std::move(gx);
  if (dphi) *dphi = std::move(gphi);
  return q;
}

double MStepCoords(MapParams& params, const CoordTarget& target,
                   const MapConfig& config, double varphi,
                   Adam<double>& optimizer) {
  Matrix<double> best_x = params.x, best_phi = params.phi;
  double best_q = kNegInf;
  Matrix<double> gx, gphi;
  for (size_t it = 0; it <= config.inner_iters; ++it) {
    const bool last = it == config.inner_iters;
    const double q = CoordObjective(target, params.x, params.phi, config.gamma,
                                    varphi, last ? nullptr : &gx,
                                    last ? nullptr : &gphi);
    if (q > best_q) {
      best_q = q;
      best_x = params.x;
      best_phi = params.phi;
    }
    if (last) break;
    for (double& g : gx.values()) g = -g;
    for (double& g : gphi.values()) g = -g;
    const ParamBlock<double> blocks[] = {
        {"map.x", params.x.values(), gx.values()},
        {"map.phi", params.phi.values(), gphi.values()}};
    optimizer.Step(blocks);
  }
  params.x = std::move(best_x);
  params.phi = std::move(best_phi);
  return best_q;
}

double MapObjective(const MapParams& params, const SparseCounts& counts,
                    double lambda, double gamma, double varphi) {
  RequireCompatible(params, counts);
  const size_t topics = params.beta.rows();
  const Matrix<double> log_theta = MapLogTheta(params.x, params.phi);
  const Matrix<double> log_beta_t = LogBetaTransposed(params.beta);
  std::vector<double> scratch(topics);
  double ll = 0;
  for (size_t n = 0; n < counts.rows(); ++n) {
    const auto lt = log_theta.row(n);
    for (size_t k = counts.row_begin(n); k < counts.row_end(n); ++k) {
      const auto lb = log_beta_t.row(counts.col_at(k));
      for (size_t z = 0; z < topics; ++z) scratch[z] = lt[z] + lb[z];
      ll += counts.count_at(k) * LogNormalize(scratch);
    }
  }
  double prior = -SquaredNorm(params.x) / (2 * gamma) -
                 SquaredNorm(params.phi) / (2 * varphi);
  if (lambda > 0) {
    double lb = 0;
    for (double b : params.beta.values()) lb += std::log(b);
    prior += lambda * lb;
  }
  return ll + prior;
}

MapParams InitMapParams(const MapConfig& config, size_t num_docs,
                        size_t vocab_size) {
  config.Validate();
  if (vocab_size == 0) throw std::invalid_argument("InitMapParams: empty vocabulary");
  const Rng root(config.seed);
  MapParams p{Matrix<double>(num_docs, config.dim),
              Matrix<double>(config.topics, config.dim),
              Matrix<double>(config.topics, vocab_size)};
  const double sd = std::sqrt(0.1);
  Rng rx = root.Split(1), rphi = root.Split(2), rbeta = root.Split(3);
  for (double& v : p.x.values()) v = sd * rx.Normal();
  for (double& v : p.phi.values()) v = sd * rphi.Normal();
  for (size_t z = 0; z < config.topics; ++z) {
    auto row = p.beta.row(z);
    for (double& v : row) v = rbeta.Normal();
    LogNormalize(row);
    for (double& v : row) v = std::exp(v);
  }
  return p;
}

MapModel MapTrain(const SparseCounts& counts, const MapConfig& config,
                  const MapObserver& observer) {
  config.Validate();
  if (counts.rows() == 0) throw std::invalid_argument("MapTrain: empty corpus");
  MapModel model;
  model.config = config;
  model.params = InitMapParams(config, counts.rows(), counts.cols());
  const double varphi = config.ResolvedVarphi(counts.rows());
  Adam<double> optimizer(AdamOptions{.lr = config.inner_lr});
  for (size_t it = 0; it < config.em_iters; ++it) {
    const auto started = std::chrono::steady_clock::now();
    const Responsibilities resp = EStep(model.params, counts, config.threads);
    model.params.beta = MStepBeta(resp, counts, config.topics, config.lambda);
    const CoordTarget target = AggregateResponsibilities(resp, counts);
    MStepCoords(model.params, target, config, varphi, optimizer);
    const double seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - started)
                               .count();
    const double obj = MapObjective(model.params, counts, config.lambda,
                                    config.gamma, varphi);
    if (!std::isfinite(obj))
      throw NonFiniteError("MAP: non-finite objective at EM iteration " +
                           std::to_string(it));
    model.objective.push_back(obj);
    if (observer) observer(MapIterationReport{it, obj, seconds, model.params, resp});
  }
  return model;
}

}  // namespace plsv
