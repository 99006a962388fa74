#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "fedcache/model.hpp"

namespace fedcache {

enum class Task { LinearRegression, LogisticBinary, LogisticMulticlass };

std::string_view to_string(Task t);
Task parse_task(std::string_view s);  // throws std::invalid_argument

// Synthetic federated workload description. heterogeneity interpolates
// between a shared data distribution (0) and fully client-specific
// parameters / disjoint label shards (1).
struct WorkloadSpec {
  Task task = Task::LogisticMulticlass;
  int dim = 50;      // feature dimension
  int classes = 4;   // multiclass only
  std::vector<int> samples_per_client = {200};  // single value broadcasts to all
  double heterogeneity = 0.5;
  int local_epochs = 1;
  double learning_rate = 0.1;
  int batch_size = 32;
  double noise_std = 1.5;
};

// Throws std::invalid_argument naming the offending field.
void validate(const WorkloadSpec& spec, int n_clients);

// Model parameter dimension for the task: weights plus bias per output.
int param_dim(const WorkloadSpec& spec);

int samples_for_client(const WorkloadSpec& spec, int client_id);

// One client's private data. Features are row-major n x dim; targets are
// real values (regression) or class indices stored as doubles. The held-out
// split is disjoint from training and feeds reported_accuracy.
struct ClientDataset {
  int client_id = 0;
  int n_features = 0;
  std::vector<double> train_x;
  std::vector<double> train_y;
  std::vector<double> held_x;
  std::vector<double> held_y;
  std::uint64_t seed = 0;  // federation seed, keys the local-training substreams

  int n_train() const { return static_cast<int>(train_y.size()); }
  int n_held() const { return static_cast<int>(held_y.size()); }
};

struct Federation {
  WorkloadSpec spec;
  std::uint64_t seed = 0;
  std::vector<ClientDataset> clients;
  std::vector<double> true_params;  // planted optimum, length param_dim(spec)
};

// Deterministic per (spec, seed, n_clients). IID mode draws every client
// from one global distribution; non-IID mode skews per-client parameters
// (regression, binary) or label shards (multiclass) by `heterogeneity`.
Federation generate_federation(const WorkloadSpec& spec, std::uint64_t seed,
                               int n_clients);

// Zero-initialized model of the right dimension, round 0.
GlobalModel make_initial_model(const WorkloadSpec& spec);

// Mean loss / gradient / accuracy over a whole row-major sample block.
// These are the exact quantities local_train descends on, exposed so tests
// can check the analytic gradient against finite differences.
// Loss: MSE (regression) or cross-entropy (classification). Accuracy:
// correct-class rate, or for regression the fraction of predictions within
// max(noise_std, 1e-9) of the target.
double mean_loss(const WorkloadSpec& spec, const std::vector<double>& params,
                 const std::vector<double>& x, const std::vector<double>& y);
std::vector<double> mean_gradient(const WorkloadSpec& spec,
                                  const std::vector<double>& params,
                                  const std::vector<double>& x,
                                  const std::vector<double>& y);
double mean_accuracy(const WorkloadSpec& spec, const std::vector<double>& params,
                     const std::vector<double>& x, const std::vector<double>& y);

// Runs local_epochs of minibatch gradient descent from the global
// parameters and packages the resulting delta. Deterministic per
// (dataset, model, spec). Throws std::runtime_error naming the client and
// round if the loss turns non-finite.
ClientUpdate local_train(const ClientDataset& dataset, const GlobalModel& model,
                         const WorkloadSpec& spec);

struct EvalResult {
  double accuracy = 0.0;  // macro average over clients, in [0, 1]
  double loss = 0.0;      // sample-weighted mean held-out loss
};

EvalResult evaluate_global(const GlobalModel& model, const Federation& fed);

}  // namespace fedcache
