#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "plsv/adam.h"
#include "plsv/matrix.h"
#include "plsv/sparse.h"

namespace plsv {

// MAP estimate of the original model: document coordinates X, topic
// coordinates phi and topic-word distributions beta. Gaussian kernel.
struct MapParams {
  Matrix<double> x;     // N x d
  Matrix<double> phi;   // Z x d
  Matrix<double> beta;  // Z x V, rows on the simplex

  bool operator==(const MapParams& o) const {
    return x.BitwiseEqual(o.x) && phi.BitwiseEqual(o.phi) &&
           beta.BitwiseEqual(o.beta);
  }
};

struct MapConfig {
  size_t topics = 50;
  size_t dim = 2;
  size_t em_iters = 200;
  size_t inner_iters = 10;
  double lambda = 0.01;
  double gamma = 1.0;
  // Prior variance of the topic coordinates. 0 selects N / Z.
  double varphi = 0.0;
  double inner_lr = 0.05;
  uint64_t seed = 0;
  int threads = 1;

  double ResolvedVarphi(size_t num_docs) const;
  void Validate() const;
  bool operator==(const MapConfig&) const = default;
};

std::string MapConfigToJson(const MapConfig& config);
MapConfig MapConfigFromJson(std::string_view json,
                            const MapConfig& defaults = {});

// Posterior over the topic of each observed (document, word) pair. Row k
// belongs to the k-th nonzero of the count matrix.
struct Responsibilities {
  Matrix<double> r;  // nnz x Z
};

// Sufficient statistics of the coordinate subproblem: weight_nz is the
// expected number of tokens of document n drawn from topic z.
struct CoordTarget {
  Matrix<double> weight;        // N x Z
  std::vector<double> lengths;  // N
};

// log theta for the Gaussian kernel, N x Z.
Matrix<double> MapLogTheta(const Matrix<double>& x, const Matrix<double>& phi);

Responsibilities EStep(const MapParams& params, const SparseCounts& counts,
                       int threads = 1);

// beta_zv proportional to lambda + sum_n c_nv r_nvz.
Matrix<double> MStepBeta(const Responsibilities& resp,
                         const SparseCounts& counts, size_t topics,
                         double lambda);

CoordTarget AggregateResponsibilities(const Responsibilities& resp,
                                      const SparseCounts& counts);

// Q(X, phi) = sum c r log theta - |X|^2 / 2 gamma - |phi|^2 / 2 varphi.
// Writes dQ/dX and dQ/dphi when the pointers are non-null.
double CoordObjective(const CoordTarget& target, const Matrix<double>& x,
                      const Matrix<double>& phi, double gamma, double varphi,
                      Matrix<double>* dx = nullptr,
                      Matrix<double>* dphi = nullptr);

// inner_iters Adam ascent steps on Q. Keeps the best iterate seen, so Q
// never decreases. Returns the final Q.
double MStepCoords(MapParams& params, const CoordTarget& target,
                   const MapConfig& config, double varphi,
                   Adam<double>& optimizer);

// Penalized log-likelihood: sum c log(theta beta) - |X|^2 / 2 gamma
// - |phi|^2 / 2 varphi + lambda sum log beta, dropping constants.
double MapObjective(const MapParams& params, const SparseCounts& counts,
                    double lambda, double gamma, double varphi);

MapParams InitMapParams(const MapConfig& config, size_t num_docs,
                        size_t vocab_size);

struct MapIterationReport {
  size_t iteration;
  double objective;
  double seconds;
  const MapParams& params;
  const Responsibilities& resp;
};

using MapObserver = std::function<void(const MapIterationReport&)>;

struct MapModel {
  MapParams params;
  MapConfig config;
  // Objective after each EM iteration.
  std::vector<double> objective;
};

MapModel MapTrain(const SparseCounts& counts, const MapConfig& config,
                  const MapObserver& observer = {});

}  // namespace plsv
