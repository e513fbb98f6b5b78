#include "gelato/simulate.hpp"

#include <cmath>
#include <limits>

namespace gelato {

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * factor;
  has_spare_ = true;
  return u * factor;
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw Error(ErrorKind::invalid_argument, "empty range");
  // Rejection keeps the draw unbiased.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return mix_seed(mix_seed(master) ^ mix_seed(stream + 0x632be59bd9b4e019ULL));
}

const char* to_string(ModelFamily family) {
  switch (family) {
    case ModelFamily::ar1_block: return "ar1_block";
    case ModelFamily::random_precision: return "random_precision";
    case ModelFamily::exp_decay: return "exp_decay";
  }
  return "unknown";
}

ModelFamily parse_model_family(const std::string& name) {
  if (name == "ar1_block") return ModelFamily::ar1_block;
  if (name == "random_precision") return ModelFamily::random_precision;
  if (name == "exp_decay") return ModelFamily::exp_decay;
  throw Error(ErrorKind::config_error, "unknown model family '" + name + "'");
}

void validate(const ModelSpec& spec) {
  if (spec.p < 2) throw Error(ErrorKind::config_error, "model needs p >= 2");
  switch (spec.family) {
    case ModelFamily::ar1_block: {
      const Index b = spec.block_size == 0 ? spec.p : spec.block_size;
      if (b < 1 || spec.p % b != 0) {
        throw Error(ErrorKind::config_error, "block size must divide p");
      }
      if (!(spec.rho > 0.0 && spec.rho < 1.0)) {
        throw Error(ErrorKind::config_error, "rho must lie in (0, 1)");
      }
      break;
    }
    case ModelFamily::random_precision:
      if (!(spec.pi > 0.0 && spec.pi <= 1.0)) {
        throw Error(ErrorKind::config_error, "pi must lie in (0, 1]");
      }
      break;
    case ModelFamily::exp_decay:
      break;
  }
}

TrueModel gen_ar1_block(Index p, Index block_size, double rho) {
  validate(ModelSpec{ModelFamily::ar1_block, p, block_size, rho});
  const Index b = block_size == 0 ? p : block_size;
  Matrix block(b, b);
  for (Index i = 0; i < b; ++i) {
    for (Index j = 0; j < b; ++j) block(i, j) = std::pow(rho, static_cast<double>(std::abs(i - j)));
  }
  const Matrix block_inv = inverse_spd(block);
  Matrix sigma = Matrix::Zero(p, p);
  Matrix theta = Matrix::Zero(p, p);
  EdgeSet edges(p);
  for (Index start = 0; start < p; start += b) {
    sigma.block(start, start, b, b) = block;
    theta.block(start, start, b, b) = block_inv;
    for (Index i = start; i + 1 < start + b; ++i) edges.add(i, i + 1);
  }
  return TrueModel{SymMatrix(sigma, MatrixRole::covariance), SymMatrix(theta, MatrixRole::precision),
                   std::move(edges)};
}

TrueModel gen_random_precision(Index p, double pi, double entry_value, std::uint64_t seed) {
  validate(ModelSpec{ModelFamily::random_precision, p, 0, 0.9, pi, entry_value, seed});
  Rng rng(seed);
  Matrix b = Matrix::Zero(p, p);
  EdgeSet edges(p);
  for (Index i = 0; i < p; ++i) {
    for (Index j = i + 1; j < p; ++j) {
      if (rng.uniform() < pi) {
        b(i, j) = entry_value;
        b(j, i) = entry_value;
        if (entry_value != 0.0) edges.add(i, j);
      }
    }
  }
  if (b.isZero(0.0)) {
    throw Error(ErrorKind::degenerate_draw,
                "random precision draw has no nonzero entries; condition number p is unattainable, "
                "choose another seed");
  }
  const Vector eig = symmetric_eigenvalues(b);
  const double lo = eig(0);
  const double hi = eig(eig.size() - 1);
  const double pd = static_cast<double>(p);
  // (hi + delta) / (lo + delta) = p
  const double delta = (hi - pd * lo) / (pd - 1.0);
  Matrix theta = b + delta * Matrix::Identity(p, p);
  SymMatrix theta0(theta, MatrixRole::precision);
  SymMatrix sigma0 = inverse(theta0);
  return TrueModel{std::move(sigma0), std::move(theta0), std::move(edges)};
}

TrueModel gen_exp_decay(Index p) {
  validate(ModelSpec{ModelFamily::exp_decay, p});
  Matrix theta(p, p);
  for (Index i = 0; i < p; ++i) {
    for (Index j = 0; j < p; ++j) theta(i, j) = std::exp(-2.0 * static_cast<double>(std::abs(i - j)));
  }
  SymMatrix theta0(theta, MatrixRole::precision);
  SymMatrix sigma0 = inverse(theta0);
  return TrueModel{std::move(sigma0), std::move(theta0), EdgeSet::complete(p)};
}

TrueModel generate_model(const ModelSpec& spec) {
  validate(spec);
  switch (spec.family) {
    case ModelFamily::ar1_block: return gen_ar1_block(spec.p, spec.block_size, spec.rho);
    case ModelFamily::random_precision:
      return gen_random_precision(spec.p, spec.pi, spec.entry_value, spec.seed);
    case ModelFamily::exp_decay: return gen_exp_decay(spec.p);
  }
  throw Error(ErrorKind::config_error, "unknown model family");
}

Matrix sample_gaussian_raw(const SymMatrix& sigma0, Index n, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorKind::invalid_argument, "sample size must be positive");
  const CholeskyFactor f = cholesky(sigma0);
  const Index p = sigma0.dim();
  Rng rng(seed);
  Matrix z(n, p);
  for (Index r = 0; r < n; ++r) {
    for (Index j = 0; j < p; ++j) z(r, j) = rng.normal();
  }
  // Row r is (L z_r)^T = z_r^T L^T.
  return z * f.lower().transpose();
}

DataSet sample_gaussian(const SymMatrix& sigma0, Index n, std::uint64_t seed) {
  return standardize(DataSet(sample_gaussian_raw(sigma0, n, seed)));
}

}  // namespace gelato
