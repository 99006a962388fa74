#include "fedcache/workload.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "fedcache/rng.hpp"

namespace fedcache {

std::string_view to_string(Task t) {
  switch (t) {
    case Task::LinearRegression:   return "linear-regression";
    case Task::LogisticBinary:     return "logistic-binary";
    case Task::LogisticMulticlass: return "logistic-multiclass";
  }
  return "?";
}

Task parse_task(std::string_view s) {
  if (s == "linear-regression")   return Task::LinearRegression;
  if (s == "logistic-binary")     return Task::LogisticBinary;
  if (s == "logistic-multiclass") return Task::LogisticMulticlass;
  throw std::invalid_argument(
      "unknown task '" + std::string(s) +
      "' (expected linear-regression|logistic-binary|logistic-multiclass)");
}

void validate(const WorkloadSpec& spec, int n_clients) {
  auto fail = [](const std::string& msg) {
    throw std::invalid_argument("workload." + msg);
  };
  if (n_clients < 1) fail("n_clients: must be >= 1");
  if (spec.dim < 1) fail("dim: must be >= 1");
  if (spec.task == Task::LogisticBinary && spec.classes != 2) {
    fail("classes: logistic-binary requires classes = 2");
  }
  if (spec.task == Task::LogisticMulticlass && spec.classes < 2) {
    fail("classes: must be >= 2");
  }
  if (spec.samples_per_client.empty() ||
      (spec.samples_per_client.size() != 1 &&
       spec.samples_per_client.size() != static_cast<std::size_t>(n_clients))) {
    fail("samples_per_client: need one value or one per client");
  }
  for (int n : spec.samples_per_client) {
    if (n < 1) fail("samples_per_client: every value must be >= 1");
    if (spec.task != Task::LinearRegression && spec.classes > n) {
      fail("samples_per_client: fewer samples than classes");
    }
  }
  if (!(spec.heterogeneity >= 0.0 && spec.heterogeneity <= 1.0)) {
    fail("heterogeneity: must lie in [0, 1]");
  }
  if (spec.local_epochs < 1) fail("local_epochs: must be >= 1");
  if (spec.batch_size < 1) fail("batch_size: must be >= 1");
  if (!(spec.learning_rate >= 0.0) || !std::isfinite(spec.learning_rate)) {
    fail("learning_rate: must be finite and >= 0");
  }
  if (!(spec.noise_std >= 0.0) || !std::isfinite(spec.noise_std)) {
    fail("noise_std: must be finite and >= 0");
  }
}

int param_dim(const WorkloadSpec& spec) {
  const int per_output = spec.dim + 1;  // weights + bias
  return spec.task == Task::LogisticMulticlass ? spec.classes * per_output
                                               : per_output;
}

int samples_for_client(const WorkloadSpec& spec, int client_id) {
  if (spec.samples_per_client.size() == 1) {
    return spec.samples_per_client.front();
  }
  return spec.samples_per_client.at(static_cast<std::size_t>(client_id));
}

GlobalModel make_initial_model(const WorkloadSpec& spec) {
  GlobalModel m;
  m.params.assign(static_cast<std::size_t>(param_dim(spec)), 0.0);
  m.round = 0;
  return m;
}

namespace {

constexpr double kRegressionBandFloor = 1e-9;
constexpr double kCenterScale = 3.0;

// Planted linear parameters [w, b] with ||w|| ~ 1.
std::vector<double> draw_linear_truth(Rng& rng, int dim) {
  std::vector<double> p(static_cast<std::size_t>(dim) + 1);
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  for (int j = 0; j < dim; ++j) {
    p[static_cast<std::size_t>(j)] = scale * rng.normal();
  }
  p.back() = 0.1 * rng.normal();
  return p;
}

// Class centers with ||mu_k|| ~ kCenterScale, one row per class.
std::vector<std::vector<double>> draw_centers(Rng& rng, int classes, int dim) {
  std::vector<std::vector<double>> centers(static_cast<std::size_t>(classes));
  const double scale = kCenterScale / std::sqrt(static_cast<double>(dim));
  for (auto& c : centers) {
    c.resize(static_cast<std::size_t>(dim));
    for (auto& v : c) v = scale * rng.normal();
  }
  return centers;
}

// Contiguous label shard for a client; when there are fewer classes than
// clients the shard collapses to a single anchored class.
std::vector<int> label_shard(int client_id, int n_clients, int classes) {
  std::vector<int> shard;
  for (int k = 0; k < classes; ++k) {
    if (static_cast<long long>(k) * n_clients / classes == client_id) {
      shard.push_back(k);
    }
  }
  if (shard.empty()) {
    shard.push_back(client_id % classes);
  }
  return shard;
}

struct ClientTruth {
  std::vector<double> linear;          // regression / binary
  std::vector<int> shard;              // multiclass
};

void generate_split(const WorkloadSpec& spec, const ClientTruth& truth,
                    const std::vector<std::vector<double>>& centers, Rng& rng,
                    int n_samples, std::vector<double>& xs,
                    std::vector<double>& ys) {
  const int dim = spec.dim;
  xs.resize(static_cast<std::size_t>(n_samples) * dim);
  ys.resize(static_cast<std::size_t>(n_samples));

  for (int i = 0; i < n_samples; ++i) {
    double* row = xs.data() + static_cast<std::size_t>(i) * dim;
    switch (spec.task) {
      case Task::LinearRegression: {
        double z = truth.linear.back();
        for (int j = 0; j < dim; ++j) {
          row[j] = rng.normal();
          z += truth.linear[static_cast<std::size_t>(j)] * row[j];
        }
        ys[static_cast<std::size_t>(i)] = z + spec.noise_std * rng.normal();
        break;
      }
      case Task::LogisticBinary: {
        double z = truth.linear.back();
        for (int j = 0; j < dim; ++j) {
          row[j] = rng.normal();
          z += truth.linear[static_cast<std::size_t>(j)] * row[j];
        }
        z += spec.noise_std * rng.normal();
        ys[static_cast<std::size_t>(i)] = z >= 0.0 ? 1.0 : 0.0;
        break;
      }
      case Task::LogisticMulticlass: {
        int label;
        if (rng.uniform() < spec.heterogeneity) {
          label = truth.shard[static_cast<std::size_t>(
              rng.below(truth.shard.size()))];
        } else {
          label = static_cast<int>(
              rng.below(static_cast<std::uint64_t>(spec.classes)));
        }
        const auto& mu = centers[static_cast<std::size_t>(label)];
        for (int j = 0; j < dim; ++j) {
          row[j] = mu[static_cast<std::size_t>(j)] + spec.noise_std * rng.normal();
        }
        ys[static_cast<std::size_t>(i)] = static_cast<double>(label);
        break;
      }
    }
  }
}

// Per-sample loss and (optionally) gradient accumulation. Gradients target
// the same mean loss mean_loss reports.
double sample_loss_grad(const WorkloadSpec& spec,
                        const std::vector<double>& params, const double* x,
                        double y, std::vector<double>* grad,
                        std::vector<double>& logit_scratch) {
  const int dim = spec.dim;
  switch (spec.task) {
    case Task::LinearRegression: {
      double p = params.back();
      for (int j = 0; j < dim; ++j) p += params[static_cast<std::size_t>(j)] * x[j];
      const double r = p - y;
      if (grad) {
        for (int j = 0; j < dim; ++j) (*grad)[static_cast<std::size_t>(j)] += 2.0 * r * x[j];
        grad->back() += 2.0 * r;
      }
      return r * r;
    }
    case Task::LogisticBinary: {
      double z = params.back();
      for (int j = 0; j < dim; ++j) z += params[static_cast<std::size_t>(j)] * x[j];
      // max(z,0) - z*y + log(1 + exp(-|z|)) is the stable cross-entropy
      const double loss = std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::abs(z)));
      if (grad) {
        const double sigma = 1.0 / (1.0 + std::exp(-z));
        const double g = sigma - y;
        for (int j = 0; j < dim; ++j) (*grad)[static_cast<std::size_t>(j)] += g * x[j];
        grad->back() += g;
      }
      return loss;
    }
    case Task::LogisticMulticlass: {
      const int k_classes = spec.classes;
      const int stride = dim + 1;
      auto& z = logit_scratch;
      z.resize(static_cast<std::size_t>(k_classes));
      double zmax = -std::numeric_limits<double>::infinity();
      for (int k = 0; k < k_classes; ++k) {
        const double* row = params.data() + static_cast<std::size_t>(k) * stride;
        double v = row[dim];
        for (int j = 0; j < dim; ++j) v += row[j] * x[j];
        z[static_cast<std::size_t>(k)] = v;
        zmax = std::max(zmax, v);
      }
      double sum = 0.0;
      for (int k = 0; k < k_classes; ++k) {
        sum += std::exp(z[static_cast<std::size_t>(k)] - zmax);
      }
      const double lse = zmax + std::log(sum);
      const int label = static_cast<int>(y);
      if (grad) {
        for (int k = 0; k < k_classes; ++k) {
          const double p = std::exp(z[static_cast<std::size_t>(k)] - lse);
          const double g = p - (k == label ? 1.0 : 0.0);
          double* grow = grad->data() + static_cast<std::size_t>(k) * stride;
          for (int j = 0; j < dim; ++j) grow[j] += g * x[j];
          grow[dim] += g;
        }
      }
      return lse - z[static_cast<std::size_t>(label)];
    }
  }
  return 0.0;
}

bool sample_correct(const WorkloadSpec& spec, const std::vector<double>& params,
                    const double* x, double y) {
  const int dim = spec.dim;
  switch (spec.task) {
    case Task::LinearRegression: {
      double p = params.back();
      for (int j = 0; j < dim; ++j) p += params[static_cast<std::size_t>(j)] * x[j];
      return std::abs(p - y) <= std::max(spec.noise_std, kRegressionBandFloor);
    }
    case Task::LogisticBinary: {
      double z = params.back();
      for (int j = 0; j < dim; ++j) z += params[static_cast<std::size_t>(j)] * x[j];
      return (z >= 0.0) == (y == 1.0);
    }
    case Task::LogisticMulticlass: {
      const int stride = dim + 1;
      int best = 0;
      double best_z = -std::numeric_limits<double>::infinity();
      for (int k = 0; k < spec.classes; ++k) {
        const double* row = params.data() + static_cast<std::size_t>(k) * stride;
        double v = row[dim];
        for (int j = 0; j < dim; ++j) v += row[j] * x[j];
        if (v > best_z) {  // ties resolve to the lowest class index
          best_z = v;
          best = k;
        }
      }
      return best == static_cast<int>(y);
    }
  }
  return false;
}

void check_block(const WorkloadSpec& spec, const std::vector<double>& params,
                 const std::vector<double>& x, const std::vector<double>& y,
                 const char* who) {
  if (params.size() != static_cast<std::size_t>(param_dim(spec))) {
    throw std::invalid_argument(std::string(who) + ": params dimension " +
                                std::to_string(params.size()) + ", expected " +
                                std::to_string(param_dim(spec)));
  }
  if (x.size() != y.size() * static_cast<std::size_t>(spec.dim)) {
    throw std::invalid_argument(std::string(who) + ": feature block shape mismatch");
  }
  if (y.empty()) {
    throw std::invalid_argument(std::string(who) + ": empty sample block");
  }
}

}  // namespace

Federation generate_federation(const WorkloadSpec& spec, std::uint64_t seed,
                               int n_clients) {
  validate(spec, n_clients);

  Federation fed;
  fed.spec = spec;
  fed.seed = seed;

  std::vector<double> global_linear;
  std::vector<std::vector<double>> centers;
  if (spec.task == Task::LogisticMulticlass) {
    Rng rng = substream(seed, "centers");
    centers = draw_centers(rng, spec.classes, spec.dim);
    // Nearest-center classifier: row k = [mu_k, -||mu_k||^2 / 2].
    fed.true_params.reserve(static_cast<std::size_t>(param_dim(spec)));
    for (const auto& mu : centers) {
      double sq = 0.0;
      for (double v : mu) sq += v * v;
      fed.true_params.insert(fed.true_params.end(), mu.begin(), mu.end());
      fed.true_params.push_back(-0.5 * sq);
    }
  } else {
    Rng rng = substream(seed, "truth");
    global_linear = draw_linear_truth(rng, spec.dim);
    fed.true_params = global_linear;
  }

  fed.clients.reserve(static_cast<std::size_t>(n_clients));
  for (int c = 0; c < n_clients; ++c) {
    ClientTruth truth;
    if (spec.task == Task::LogisticMulticlass) {
      truth.shard = label_shard(c, n_clients, spec.classes);
    } else {
      Rng rng = substream(seed, "truth-client", static_cast<std::uint64_t>(c));
      const auto local = draw_linear_truth(rng, spec.dim);
      truth.linear.resize(global_linear.size());
      const double h = spec.heterogeneity;
      for (std::size_t j = 0; j < global_linear.size(); ++j) {
        truth.linear[j] = (1.0 - h) * global_linear[j] + h * local[j];
      }
    }

    ClientDataset ds;
    ds.client_id = c;
    ds.n_features = spec.dim;
    ds.seed = seed;

    const int n_train = samples_for_client(spec, c);
    const int n_held = std::max(1, n_train / 5);
    Rng train_rng = substream(seed, "data", static_cast<std::uint64_t>(c), 0);
    Rng held_rng = substream(seed, "data", static_cast<std::uint64_t>(c), 1);
    generate_split(spec, truth, centers, train_rng, n_train, ds.train_x, ds.train_y);
    generate_split(spec, truth, centers, held_rng, n_held, ds.held_x, ds.held_y);
    fed.clients.push_back(std::move(ds));
  }
  return fed;
}

double mean_loss(const WorkloadSpec& spec, const std::vector<double>& params,
                 const std::vector<double>& x, const std::vector<double>& y) {
  check_block(spec, params, x, y, "mean_loss");
  std::vector<double> scratch;
  double total = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    total += sample_loss_grad(spec, params, x.data() + i * spec.dim, y[i],
                              nullptr, scratch);
  }
  return total / static_cast<double>(y.size());
}

std::vector<double> mean_gradient(const WorkloadSpec& spec,
                                  const std::vector<double>& params,
                                  const std::vector<double>& x,
                                  const std::vector<double>& y) {
  check_block(spec, params, x, y, "mean_gradient");
  std::vector<double> grad(params.size(), 0.0);
  std::vector<double> scratch;
  for (std::size_t i = 0; i < y.size(); ++i) {
    sample_loss_grad(spec, params, x.data() + i * spec.dim, y[i], &grad, scratch);
  }
  const double inv_n = 1.0 / static_cast<double>(y.size());
  for (auto& g : grad) g *= inv_n;
  return grad;
}

double mean_accuracy(const WorkloadSpec& spec, const std::vector<double>& params,
                     const std::vector<double>& x, const std::vector<double>& y) {
  check_block(spec, params, x, y, "mean_accuracy");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (sample_correct(spec, params, x.data() + i * spec.dim, y[i])) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(y.size());
}

ClientUpdate local_train(const ClientDataset& dataset, const GlobalModel& model,
                         const WorkloadSpec& spec) {
  if (model.params.size() != static_cast<std::size_t>(param_dim(spec))) {
    throw std::invalid_argument("local_train: model dimension " +
                                std::to_string(model.params.size()) +
                                ", expected " + std::to_string(param_dim(spec)));
  }

  std::vector<double> params = model.params;
  std::vector<double> grad(params.size());
  std::vector<double> scratch;
  const int n = dataset.n_train();
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);

  Rng rng = substream(dataset.seed, "shuffle",
                      static_cast<std::uint64_t>(dataset.client_id),
                      static_cast<std::uint64_t>(model.round));

  for (int epoch = 0; epoch < spec.local_epochs; ++epoch) {
    for (int i = n - 1; i > 0; --i) {
      const auto j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
      std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
    }
    for (int start = 0; start < n; start += spec.batch_size) {
      const int stop = std::min(start + spec.batch_size, n);
      const int bn = stop - start;
      std::fill(grad.begin(), grad.end(), 0.0);
      double batch_loss = 0.0;
      for (int i = start; i < stop; ++i) {
        const auto row = static_cast<std::size_t>(order[static_cast<std::size_t>(i)]);
        batch_loss += sample_loss_grad(spec, params,
                                       dataset.train_x.data() + row * spec.dim,
                                       dataset.train_y[row], &grad, scratch);
      }
      if (!std::isfinite(batch_loss)) {
        throw std::runtime_error(
            "local_train: non-finite loss for client " +
            std::to_string(dataset.client_id) + " at round " +
            std::to_string(model.round));
      }
      const double step = spec.learning_rate / static_cast<double>(bn);
      for (std::size_t j = 0; j < params.size(); ++j) {
        params[j] -= step * grad[j];
      }
    }
  }

  ClientUpdate u;
  u.client_id = dataset.client_id;
  u.round_produced = model.round;
  u.delta.resize(params.size());
  for (std::size_t j = 0; j < params.size(); ++j) {
    u.delta[j] = params[j] - model.params[j];
  }
  u.significance = compute_significance(u.delta, model);
  u.size_bytes = update_size_bytes(params.size());
  u.sample_count = n;
  u.reported_accuracy =
      mean_accuracy(spec, params, dataset.held_x, dataset.held_y);
  return u;
}

EvalResult evaluate_global(const GlobalModel& model, const Federation& fed) {
  if (model.params.size() != static_cast<std::size_t>(param_dim(fed.spec))) {
    throw std::invalid_argument("evaluate_global: model dimension mismatch");
  }
  EvalResult r;
  double loss_weighted = 0.0;
  long long total_held = 0;
  for (const auto& ds : fed.clients) {
    r.accuracy += mean_accuracy(fed.spec, model.params, ds.held_x, ds.held_y);
    loss_weighted += static_cast<double>(ds.n_held()) *
                     mean_loss(fed.spec, model.params, ds.held_x, ds.held_y);
    total_held += ds.n_held();
  }
  r.accuracy /= static_cast<double>(fed.clients.size());
  r.loss = loss_weighted / static_cast<double>(total_held);
  return r;
}

}  // namespace fedcache
