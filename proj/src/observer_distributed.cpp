#include "ssobs/observer_distributed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace ssobs {

void AdmmConfig::validate() const {
  if (rho_init <= 0.0) throw std::invalid_argument("rho_init must be positive");
  if (nu <= 1.0) throw std::invalid_argument("nu must be > 1");
  if (mu1 <= 1.0 || mu2 <= 1.0) throw std::invalid_argument("mu1, mu2 must be > 1");
  if (alpha <= 0.0 || beta <= 0.0) {
    throw std::invalid_argument("residual tolerances must be positive");
  }
  if (eta <= 0.0 || eta >= 1.0) {
    throw std::invalid_argument("contraction factor eta must be in (0, 1)");
  }
  if (max_inner_rounds < 1 || max_time_steps < 1) {
    throw std::invalid_argument("iteration caps must be >= 1");
  }
}

Eigen::VectorXd linear_term(const Eigen::VectorXd& lambda_self,
                            const std::vector<Eigen::VectorXd>& lambda_neighbors,
                            MultiplierForm form) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(lambda_self.size());
  switch (form) {
    case MultiplierForm::ReplicatedSelf:
      // The self multiplier is counted once per neighbour, so it vanishes
      // from the updates of an isolated node.
      for (const auto& l : lambda_neighbors) out += l + lambda_self;
      break;
    case MultiplierForm::SingleSelf:
      out = lambda_self;
      for (const auto& l : lambda_neighbors) out += l;
      break;
  }
  return out;
}

Eigen::VectorXd b_update(const std::vector<Eigen::VectorXd>& x_closed,
                         const Eigen::VectorXd& lambda_lin, double rho) {
  if (x_closed.empty()) throw std::invalid_argument("need at least one estimate");
  if (rho <= 0.0) throw std::invalid_argument("rho must be positive");
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(lambda_lin.size());
  for (const auto& x : x_closed) sum += x;
  const double m = static_cast<double>(x_closed.size());
  return sum / m + lambda_lin / (rho * m);
}

double penalty_update(double rho, double r, double s, const AdmmConfig& cfg) {
  if (r > cfg.mu1 * s) return rho * cfg.nu;
  if (s > cfg.mu2 * r) return rho / cfg.nu;
  return rho;
}

MessageBoard::MessageBoard(const Topology& topo)
    : topo_(&topo),
      x_(topo.size()),
      rho_(topo.size(), 0.0),
      b_(topo.size()),
      x_set_(topo.size(), false),
      b_set_(topo.size(), false) {}

void MessageBoard::post_x(int node, const Eigen::VectorXd& x, double rho) {
  x_[node] = x;
  rho_[node] = rho;
  x_set_[node] = true;
  messages_ += topo_->degree(node);
}

void MessageBoard::post_b(int node, const Eigen::VectorXd& b) {
  b_[node] = b;
  b_set_[node] = true;
  messages_ += topo_->degree(node);
}

void MessageBoard::check_edge(int reader, int owner) const {
  if (reader != owner && topo_->adjacency()(reader, owner) == 0) {
    throw std::logic_error("read across a missing communication edge");
  }
}

const Eigen::VectorXd& MessageBoard::x_of(int reader, int owner) const {
  check_edge(reader, owner);
  if (!x_set_[owner]) throw std::logic_error("estimate not posted yet");
  return x_[owner];
}

double MessageBoard::rho_of(int reader, int owner) const {
  check_edge(reader, owner);
  if (!x_set_[owner]) throw std::logic_error("estimate not posted yet");
  return rho_[owner];
}

const Eigen::VectorXd& MessageBoard::b_of(int reader, int owner) const {
  check_edge(reader, owner);
  if (!b_set_[owner]) throw std::logic_error("consensus variable not posted yet");
  return b_[owner];
}

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

ObserverNode::ObserverNode(int index, StackedLocalModel local,
                           std::vector<int> neighbors, const AdmmConfig& cfg,
                           const InnerSolverConfig& inner)
    : index_(index),
      local_(std::move(local)),
      neighbors_(std::move(neighbors)),
      cfg_(cfg),
      window_(local_.p_i, local_.tau),
      solver_(local_.O, inner),
      x_(Eigen::VectorXd::Zero(local_.n)),
      attack_window_(Eigen::VectorXd::Zero(local_.p_i * local_.tau)),
      b_(Eigen::VectorXd::Zero(local_.n)),
      b_prev_(Eigen::VectorXd::Zero(local_.n)),
      lambda_self_(Eigen::VectorXd::Zero(local_.n)),
      rho_(cfg.rho_init),
      r_(kInf),
      s_(kInf),
      r_prev_(kInf),
      s_prev_(kInf) {
  cfg_.validate();
  for (int j : neighbors_) {
    lambda_nb_[j] = Eigen::VectorXd::Zero(local_.n);
    lambda_in_[j] = Eigen::VectorXd::Zero(local_.n);
  }
}

Eigen::VectorXd ObserverNode::lifted_estimate() const {
  Eigen::VectorXd z(local_.dim());
  z.head(local_.n) = x_;
  z.tail(local_.p_i * local_.tau) = attack_window_;
  return z;
}

void ObserverNode::prime(const Eigen::VectorXd& y) {
  window_.push(y);
}

void ObserverNode::begin_time_step(const Eigen::VectorXd& y,
                                   MessageBoard& board) {
  const Eigen::VectorXd z_T = time_update(local_, lifted_estimate(), y);
  window_.push(y);
  x_ = z_T.head(local_.n);
  attack_window_ = z_T.tail(local_.p_i * local_.tau);
  b_ = x_;
  b_prev_ = b_;
  board.post_b(index_, b_);
}

void ObserverNode::begin_static(MessageBoard& board) {
  if (!window_.primed()) {
    throw std::logic_error("static estimation needs a full measurement window");
  }
  x_.setZero();
  attack_window_.setZero();
  b_.setZero();
  b_prev_.setZero();
  board.post_b(index_, b_);
}

bool ObserverNode::z_phase(MessageBoard& board) {
  std::vector<Eigen::VectorXd> b_closed;
  b_closed.reserve(neighbors_.size() + 1);
  b_closed.push_back(board.b_of(index_, index_));
  for (int j : neighbors_) b_closed.push_back(board.b_of(index_, j));

  std::vector<Eigen::VectorXd> lambda_nb;
  lambda_nb.reserve(neighbors_.size());
  for (int j : neighbors_) lambda_nb.push_back(lambda_nb_.at(j));
  const Eigen::VectorXd lam =
      linear_term(lambda_self_, lambda_nb, cfg_.multiplier_form);

  const NodeSubproblemResult res =
      solver_.solve(b_closed, lam, rho_, window_.stacked(), x_);
  x_ = res.x;
  attack_window_ = res.attack_window;
  board.post_x(index_, x_, rho_);
  return res.converged;
}

void ObserverNode::b_phase(MessageBoard& board) {
  // b_i minimizes -(lambda_ii + sum_j lambda_ji)' b
  // + (rho_i/2)||x_i - b||^2 + sum_j (rho_j/2)||x_j - b||^2, i.e. it gathers
  // the multipliers pointing AT this node (the mirrored copies) and weights
  // each estimate by its sender's penalty. With equal penalties this is
  // mean(x) + lambda/(rho m).
  b_prev_ = b_;
  Eigen::VectorXd num = rho_ * x_ + lambda_self_;
  double den = rho_;
  for (int j : neighbors_) {
    const double rho_j = board.rho_of(index_, j);
    num += rho_j * board.x_of(index_, j) + lambda_in_.at(j);
    den += rho_j;
  }
  b_ = num / den;
  board.post_b(index_, b_);
}

void ObserverNode::dual_phase(const MessageBoard& board) {
  const Eigen::VectorXd& b_own = board.b_of(index_, index_);
  lambda_self_ += rho_ * (x_ - b_own);
  double r = (x_ - b_own).norm();
  for (int j : neighbors_) {
    const Eigen::VectorXd& b_j = board.b_of(index_, j);
    lambda_nb_.at(j) += rho_ * (x_ - b_j);
    // Mirror neighbour j's update of lambda_ji: it uses j's posted penalty
    // and estimate against this node's own b, so both copies stay equal.
    lambda_in_.at(j) +=
        board.rho_of(index_, j) * (board.x_of(index_, j) - b_own);
    r += (x_ - b_j).norm();
  }
  r_ = r;
  s_ = rho_ * (b_ - b_prev_).norm();
  if (cfg_.adapt_penalty) {
    rho_ = penalty_update(rho_, r_, s_, cfg_);
  }
}

bool ObserverNode::contracted() const {
  if (r_ < cfg_.alpha && s_ < cfg_.beta) return true;
  return r_ < cfg_.eta * r_prev_ && s_ < cfg_.eta * s_prev_;
}

bool ObserverNode::within_tolerance() const {
  return r_ < cfg_.alpha && s_ < cfg_.beta;
}

void ObserverNode::end_time_step() {
  r_prev_ = r_;
  s_prev_ = s_;
}

DistributedObserver::DistributedObserver(const PlantModel& plant, Topology topo,
                                         int tau, AdmmConfig cfg,
                                         InnerSolverConfig inner)
    : plant_(plant), topo_(std::move(topo)), tau_(tau), cfg_(cfg), board_(topo_) {
  plant_.validate();
  cfg_.validate();
  inner.validate();
  if (topo_.size() != plant_.num_observers()) {
    throw std::invalid_argument("topology size must match the observer count");
  }
  nodes_.reserve(topo_.size());
  for (int i = 0; i < topo_.size(); ++i) {
    nodes_.emplace_back(i, build_local(plant_, tau, i), topo_.neighbors(i), cfg_,
                        inner);
  }
}

Eigen::VectorXd DistributedObserver::node_measurement(
    const PlantTrajectory& traj, int node, int t) const {
  return traj.outputs[t].segment(plant_.sensor_offset(node),
                                 plant_.partition[node]);
}

RoundStats DistributedObserver::admm_round(const std::vector<int>& order) {
  std::vector<int> seq = order;
  if (seq.empty()) {
    seq.resize(nodes_.size());
    std::iota(seq.begin(), seq.end(), 0);
  }
  std::vector<bool> seen(nodes_.size(), false);
  for (int i : seq) {
    if (i < 0 || i >= static_cast<int>(nodes_.size()) || seen[i]) {
      throw std::invalid_argument("order must mention every node exactly once");
    }
    seen[i] = true;
  }
  if (seq.size() != nodes_.size()) {
    throw std::invalid_argument("order must mention every node exactly once");
  }
  RoundStats stats;
  // Each phase completes for every node before the next begins, so reads in a
  // phase only see values posted by earlier phases.
  for (int i : seq) {
    if (!nodes_[i].z_phase(board_)) stats.solvers_converged = false;
  }
  for (int i : seq) nodes_[i].b_phase(board_);
  for (int i : seq) nodes_[i].dual_phase(board_);
  return stats;
}

TraceRecord DistributedObserver::make_record(const PlantTrajectory& traj,
                                             int t, int truth_index, int rounds,
                                             long messages) const {
  TraceRecord rec;
  rec.t = t;
  const int N = static_cast<int>(nodes_.size());
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(plant_.n());
  for (const auto& node : nodes_) mean += node.state_estimate();
  mean /= static_cast<double>(N);
  const Eigen::VectorXd& truth = traj.states[truth_index];
  for (const auto& node : nodes_) {
    rec.err.push_back((node.state_estimate() - truth).norm());
    rec.cons.push_back((node.state_estimate() - mean).norm());
    rec.r.push_back(node.primal_residual());
    rec.s.push_back(node.dual_residual());
    rec.rho.push_back(node.rho());
  }
  rec.inner_rounds = rounds;
  rec.messages = messages;
  return rec;
}

RunResult DistributedObserver::run(const PlantTrajectory& traj) {
  if (traj.length() < tau_ + 1) {
    throw std::invalid_argument("trajectory shorter than the priming window");
  }
  for (int t = 0; t < tau_; ++t) {
    for (auto& node : nodes_) node.prime(node_measurement(traj, node.index(), t));
  }

  RunResult out;
  out.trace.num_nodes = static_cast<int>(nodes_.size());
  out.summary.termination = "capped";

  // The observer is an online estimator: it consumes every measurement it is
  // given. Run health is judged at the end, by whether the final time step
  // closed with all residuals inside tolerance.
  int steps = 0;
  bool final_within = false;
  for (int t = tau_; t < traj.length() && steps < cfg_.max_time_steps; ++t) {
    for (auto& node : nodes_) {
      node.begin_time_step(node_measurement(traj, node.index(), t), board_);
    }
    int rounds = 0;
    bool all_contracted = false;
    while (!all_contracted && rounds < cfg_.max_inner_rounds) {
      const RoundStats stats = admm_round();
      ++rounds;
      if (!stats.solvers_converged) ++out.summary.solver_nonconverged_rounds;
      all_contracted = true;
      for (const auto& node : nodes_) all_contracted &= node.contracted();
    }
    if (!all_contracted) ++out.summary.inner_cap_hits;
    out.summary.total_inner_rounds += rounds;
    ++steps;
    out.trace.records.push_back(
        make_record(traj, t, t - tau_ + 1, rounds, board_.messages_sent()));

    final_within = true;
    for (const auto& node : nodes_) final_within &= node.within_tolerance();
    for (auto& node : nodes_) node.end_time_step();
  }
  if (final_within) out.summary.termination = "converged";

  out.summary.time_steps = steps;
  out.summary.mean_inner_rounds =
      steps > 0 ? static_cast<double>(out.summary.total_inner_rounds) / steps
                : 0.0;
  finalize_summary(out);
  return out;
}

RunResult DistributedObserver::run_dsse(const PlantTrajectory& traj) {
  if (traj.length() < tau_) {
    throw std::invalid_argument("trajectory shorter than the measurement batch");
  }
  for (int t = 0; t < tau_; ++t) {
    for (auto& node : nodes_) node.prime(node_measurement(traj, node.index(), t));
  }
  for (auto& node : nodes_) node.begin_static(board_);

  RunResult out;
  out.trace.num_nodes = static_cast<int>(nodes_.size());
  out.summary.termination = "capped";

  int rounds = 0;
  while (rounds < cfg_.max_inner_rounds) {
    const RoundStats stats = admm_round();
    ++rounds;
    if (!stats.solvers_converged) ++out.summary.solver_nonconverged_rounds;
    out.trace.records.push_back(
        make_record(traj, rounds, 0, 1, board_.messages_sent()));
    bool done = true;
    for (const auto& node : nodes_) done &= node.within_tolerance();
    if (done) {
      out.summary.termination = "converged";
      break;
    }
  }

  out.summary.total_inner_rounds = rounds;
  out.summary.mean_inner_rounds = rounds;
  out.summary.time_steps = 1;
  finalize_summary(out);
  return out;
}

void DistributedObserver::finalize_summary(RunResult& out) const {
  if (out.trace.records.empty()) return;
  const TraceRecord& last = out.trace.records.back();
  out.summary.final_max_error = *std::max_element(last.err.begin(), last.err.end());
  out.summary.final_max_consensus =
      *std::max_element(last.cons.begin(), last.cons.end());
}

}  // namespace ssobs
