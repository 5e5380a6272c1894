#include "exo/core.hpp"

#include <cmath>
#include <string>

#include "exo/errors.hpp"

namespace exo {

namespace {

constexpr double kRowTolerance = 1e-12;

std::string dims_string(int a, int b, int c) {
  return std::to_string(a) + "x" + std::to_string(b) + "x" + std::to_string(c);
}

}  // namespace

void check_probability_vector(std::span<const double> p, const char* what) {
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw InvalidInput(std::string(what) + ": entry outside [0,1]");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > kRowTolerance) {
    throw InvalidInput(std::string(what) + ": row sums to " + std::to_string(sum));
  }
}

ExoKernel::ExoKernel(int stages, int num_xi, std::vector<double> probs)
    : stages_(stages), num_xi_(num_xi), probs_(std::move(probs)) {
  if (stages < 0 || num_xi < 1) throw InvalidInput("ExoKernel: bad shape");
  const auto expected = static_cast<std::size_t>(stages) * num_xi * num_xi;
  if (probs_.size() != expected) {
    throw InvalidInput("ExoKernel: expected " + std::to_string(expected) + " entries, got " +
                       std::to_string(probs_.size()));
  }
  for (int t = 0; t < stages_; ++t) {
    for (int i = 0; i < num_xi_; ++i) check_probability_vector(row(t, i), "ExoKernel");
  }
}

ExoKernel ExoKernel::uniform(int stages, int num_xi) {
  std::vector<double> p(static_cast<std::size_t>(stages) * num_xi * num_xi, 1.0 / num_xi);
  return ExoKernel(stages, num_xi, std::move(p));
}

ExoKernel ExoKernel::homogeneous(int stages, int num_xi, std::span<const double> matrix) {
  if (matrix.size() != static_cast<std::size_t>(num_xi) * num_xi) {
    throw InvalidInput("ExoKernel::homogeneous: matrix is not num_xi x num_xi");
  }
  std::vector<double> p;
  p.reserve(static_cast<std::size_t>(stages) * matrix.size());
  for (int t = 0; t < stages; ++t) p.insert(p.end(), matrix.begin(), matrix.end());
  return ExoKernel(stages, num_xi, std::move(p));
}

std::span<const double> ExoKernel::row(int stage, int xi) const {
  const auto offset = (static_cast<std::size_t>(stage) * num_xi_ + xi) * num_xi_;
  return {probs_.data() + offset, static_cast<std::size_t>(num_xi_)};
}

TabularExoMdp::TabularExoMdp(TabularDims dims, std::vector<double> reward,
                             std::vector<int> endo_map, ExoKernel true_kernel,
                             std::vector<double> init_dist)
    : dims_(dims),
      reward_(std::move(reward)),
      endo_map_(std::move(endo_map)),
      kernel_(std::move(true_kernel)),
      init_dist_(std::move(init_dist)) {
  if (dims_.horizon < 1 || dims_.num_x < 1 || dims_.num_xi < 1 || dims_.num_a < 1) {
    throw InvalidInput("TabularExoMdp: all sizes must be positive");
  }
  const auto cells = static_cast<std::size_t>(dims_.num_x) * dims_.num_a * dims_.num_xi;
  if (reward_.size() != cells || endo_map_.size() != cells) {
    throw InvalidInput("TabularExoMdp: reward/endo_map must have " +
                       dims_string(dims_.num_x, dims_.num_a, dims_.num_xi) + " entries");
  }
  for (int next : endo_map_) {
    if (next < 0 || next >= dims_.num_x) throw InvalidInput("TabularExoMdp: endo_map out of range");
  }
  if (kernel_.num_xi() != dims_.num_xi || kernel_.stages() != dims_.horizon - 1) {
    throw InvalidInput("TabularExoMdp: kernel must have horizon-1 stages over num_xi states");
  }
  if (init_dist_.empty()) {
    init_dist_.assign(static_cast<std::size_t>(dims_.num_xi), 1.0 / dims_.num_xi);
  } else if (init_dist_.size() != static_cast<std::size_t>(dims_.num_xi)) {
    throw InvalidInput("TabularExoMdp: init_dist has wrong length");
  }
  check_probability_vector(init_dist_, "TabularExoMdp init_dist");
}

void TabularExoMdp::check_state(int x, int xi) const {
  if (x < 0 || x >= dims_.num_x) throw InvalidInput("endogenous index out of range");
  if (xi < 0 || xi >= dims_.num_xi) throw InvalidInput("exogenous index out of range");
}

TabularPolicy::TabularPolicy(const TabularDims& dims, int fill)
    : dims_(dims),
      actions_(static_cast<std::size_t>(dims.horizon) * dims.num_x * dims.num_xi, fill) {
  if (fill < 0 || fill >= dims.num_a) throw InvalidInput("TabularPolicy: fill action out of range");
}

TabularPolicy::TabularPolicy(const TabularDims& dims, std::vector<int> actions)
    : dims_(dims), actions_(std::move(actions)) {
  if (actions_.size() != static_cast<std::size_t>(dims.horizon) * dims.num_x * dims.num_xi) {
    throw InvalidInput("TabularPolicy: wrong number of entries");
  }
  for (int a : actions_) {
    if (a < 0 || a >= dims.num_a) throw InvalidInput("TabularPolicy: action out of range");
  }
}

void TabularPolicy::set(int h, int x, int xi, int a) {
  if (a < 0 || a >= dims_.num_a) throw InvalidInput("TabularPolicy: action out of range");
  actions_[index(h, x, xi)] = a;
}

ValueTable::ValueTable(const TabularDims& dims)
    : dims_(dims),
      v_(static_cast<std::size_t>(dims.horizon + 1) * dims.num_x * dims.num_xi, 0.0) {}

std::span<const double> ValueTable::stage(int h) const {
  const auto n = static_cast<std::size_t>(dims_.num_x) * dims_.num_xi;
  return {v_.data() + static_cast<std::size_t>(h) * n, n};
}

ExoTrace sample_trace(const ExoKernel& kernel, int horizon, int xi1, Rng& rng) {
  if (xi1 < 0 || xi1 >= kernel.num_xi()) throw InvalidInput("sample_trace: xi1 out of range");
  if (kernel.stages() < horizon - 1) throw InvalidInput("sample_trace: kernel too short");
  ExoTrace trace;
  trace.xi.reserve(static_cast<std::size_t>(horizon));
  trace.xi.push_back(xi1);
  for (int t = 0; t + 1 < horizon; ++t) {
    trace.xi.push_back(static_cast<int>(sample_categorical(kernel.row(t, trace.xi.back()), rng)));
  }
  return trace;
}

EpisodeLog simulate_episode(const TabularExoMdp& mdp, const TabularPolicy& policy, int x1, int xi1,
                            Rng& rng) {
  mdp.check_state(x1, xi1);
  if (!(policy.dims() == mdp.dims())) throw InvalidInput("simulate_episode: policy shape mismatch");

  EpisodeLog log;
  log.trace = sample_trace(mdp.true_kernel(), mdp.horizon(), xi1, rng);
  const auto H = static_cast<std::size_t>(mdp.horizon());
  log.endo.reserve(H);
  log.actions.reserve(H);
  log.rewards.reserve(H);

  int x = x1;
  for (int h = 0; h < mdp.horizon(); ++h) {
    const int xi = log.trace.xi[static_cast<std::size_t>(h)];
    const int a = policy(h, x, xi);
    log.endo.push_back(x);
    log.actions.push_back(a);
    log.rewards.push_back(mdp.reward(x, a, xi));
    if (h + 1 < mdp.horizon()) x = mdp.next_x(x, a, log.trace.xi[static_cast<std::size_t>(h) + 1]);
  }
  return log;
}

double hindsight_value(const TabularExoMdp& mdp, const TabularPolicy& policy, int x1,
                       const ExoTrace& trace) {
  if (trace.xi.size() != static_cast<std::size_t>(mdp.horizon())) {
    throw InvalidInput("hindsight_value: trace length must equal the horizon");
  }
  for (int xi : trace.xi) mdp.check_state(x1, xi);
  double total = 0.0;
  int x = x1;
  for (int h = 0; h < mdp.horizon(); ++h) {
    const int xi = trace.xi[static_cast<std::size_t>(h)];
    const int a = policy(h, x, xi);
    total += mdp.reward(x, a, xi);
    if (h + 1 < mdp.horizon()) x = mdp.next_x(x, a, trace.xi[static_cast<std::size_t>(h) + 1]);
  }
  return total;
}

}  // namespace exo
