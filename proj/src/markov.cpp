#include "relay/markov.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace relay {

double TransitionMatrix::entry(std::uint64_t j, std::uint64_t i) const {
  const auto& col = cols[i];
  auto it = std::lower_bound(col.begin(), col.end(), j,
                             [](const auto& e, std::uint64_t row) { return e.first < row; });
  if (it != col.end() && it->first == j) return it->second;
  return 0.0;
}

double TransitionMatrix::column_sum(std::uint64_t i) const {
  double s = 0.0;
  for (const auto& [j, p] : cols[i]) s += p;
  return s;
}

double state_outage_prob(const SystemState& s, const NetworkConfig& cfg) {
  if (const auto q = edge_state_relay(s, cfg)) {
    // Outage unless the lone source link supports the rate AND at least one
    // other relay harvests a full energy unit.
    const double ok = 1.0 - cfg.link_outage({LinkDir::SourceToRelay, *q});
    double none_charged = 1.0;
    for (int k = 0; k < cfg.num_relays; ++k) {
      if (k == *q) continue;
      none_charged *=
          charge_prob(0, cfg.storage_capacity, cfg.mean_gain_source[k], cfg.power);
    }
    return 1.0 - ok * (1.0 - none_charged);
  }
  const auto links = available_links(s, cfg);
  if (links.empty()) return 1.0;  // deadlock
  double p = 1.0;
  for (const LinkId l : links) p *= cfg.link_outage(l);
  return p;
}

namespace {

// Enumerates increment vectors over `relays` with per-relay probability
// tables, accumulating base * prod(table[k][m_k]) onto successor indices.
// Zero-probability branches are pruned, so only positive entries are emitted.
struct IncrementEnumerator {
  const std::vector<int>* relays;                        // relay ids, enumeration order
  const std::vector<std::vector<double>>* tables;        // per relay: prob of m = 0..headroom
  const std::vector<std::uint64_t>* energy_weight;       // mixed-radix weight per relay
  std::vector<std::pair<std::uint32_t, double>>* out;
  bool require_some_charge = false;                      // edge rule: skip the all-zero vector

  void run(std::uint64_t base_index, double base_prob) const {
    descend(0, base_index, base_prob, false);
  }

 private:
  void descend(std::size_t level, std::uint64_t index, double prob, bool charged) const {
    if (prob <= 0.0) return;
    if (level == relays->size()) {
      if (require_some_charge && !charged) return;
      out->emplace_back(static_cast<std::uint32_t>(index), prob);
      return;
    }
    const int k = (*relays)[level];
    const auto& table = (*tables)[level];
    for (std::size_t m = 0; m < table.size(); ++m) {
      if (table[m] <= 0.0) continue;
      descend(level + 1, index + m * (*energy_weight)[k], prob * table[m], charged || m > 0);
    }
  }
};

}  // namespace

std::vector<std::pair<std::uint32_t, double>> transition_column(const SystemState& s,
                                                                const NetworkConfig& cfg,
                                                                const StateIndexer& indexer) {
  const int K = cfg.num_relays;
  const std::uint64_t self = indexer.index_of(s);
  std::vector<std::pair<std::uint32_t, double>> terms;

  const StateDecision decision = make_decision(s, cfg);
  if (decision.deadlock) {
    terms.emplace_back(static_cast<std::uint32_t>(self), 1.0);
    return terms;
  }

  const double xi_s = cfg.xi(LinkDir::SourceToRelay);
  const double xi_r = cfg.xi(LinkDir::RelayToDestination);

  // Mixed-radix digit weights matching StateIndexer.
  std::vector<std::uint64_t> energy_weight(K), data_weight(K);
  {
    std::uint64_t w = 1;
    for (int k = K - 1; k >= 0; --k) {
      energy_weight[k] = w;
      w *= cfg.storage_capacity + 1;
    }
    for (int k = K - 1; k >= 0; --k) {
      data_weight[k] = w;
      w *= cfg.buffer_capacity + 1;
    }
  }

  if (decision.edge_relay >= 0) {
    // Lone link s->q; a success needs the rate supported and at least one
    // other relay charged, so the all-zero increment vector is excluded.
    const int q = decision.edge_relay;
    const double ok = 1.0 - exp_cdf(xi_s, cfg.mean_gain_source[q]);
    std::vector<int> others;
    std::vector<std::vector<double>> tables;
    for (int k = 0; k < K; ++k) {
      if (k == q) continue;
      others.push_back(k);
      std::vector<double> t(cfg.storage_capacity + 1);
      for (int m = 0; m <= cfg.storage_capacity; ++m)
        t[m] = charge_prob(m, cfg.storage_capacity, cfg.mean_gain_source[k], cfg.power);
      tables.push_back(std::move(t));
    }
    IncrementEnumerator en{&others, &tables, &energy_weight, &terms, true};
    en.run(self + data_weight[q], ok);
  } else {
    // Walk the priority ranking. A link is selected when it supports the rate
    // and every higher-priority link is in outage; for higher-priority source
    // links the outage event is carried jointly with their harvest amount.
    double relay_outage_prefix = 1.0;
    std::vector<char> source_is_higher(K, 0);
    for (const LinkId q : decision.ranked) {
      if (q.dir == LinkDir::RelayToDestination) {
        double p = (1.0 - exp_cdf(xi_r, cfg.mean_gain_relay[q.relay])) * relay_outage_prefix;
        for (int k = 0; k < K; ++k)
          if (source_is_higher[k]) p *= exp_cdf(xi_s, cfg.mean_gain_source[k]);
        if (p > 0.0) {
          const std::uint64_t succ = self - data_weight[q.relay] - energy_weight[q.relay];
          terms.emplace_back(static_cast<std::uint32_t>(succ), p);
        }
        relay_outage_prefix *= exp_cdf(xi_r, cfg.mean_gain_relay[q.relay]);
      } else {
        const double base =
            (1.0 - exp_cdf(xi_s, cfg.mean_gain_source[q.relay])) * relay_outage_prefix;
        std::vector<int> others;
        std::vector<std::vector<double>> tables;
        for (int k = 0; k < K; ++k) {
          if (k == q.relay) continue;
          others.push_back(k);
          const int headroom = cfg.storage_capacity - s.energy[k];
          std::vector<double> t(headroom + 1);
          for (int m = 0; m <= headroom; ++m)
            t[m] = source_is_higher[k]
                       ? charge_and_outage_prob(m, headroom, cfg.mean_gain_source[k], xi_s,
                                                cfg.power)
                       : charge_prob(m, headroom, cfg.mean_gain_source[k], cfg.power);
          tables.push_back(std::move(t));
        }
        IncrementEnumerator en{&others, &tables, &energy_weight, &terms, false};
        en.run(self + data_weight[q.relay], base);
        source_is_higher[q.relay] = 1;
      }
    }
  }

  const double diag = state_outage_prob(s, cfg);
  if (diag > 0.0) terms.emplace_back(static_cast<std::uint32_t>(self), diag);

  std::sort(terms.begin(), terms.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  // Merge duplicates (none expected, but keep the column canonical).
  std::vector<std::pair<std::uint32_t, double>> merged;
  merged.reserve(terms.size());
  for (const auto& t : terms) {
    if (!merged.empty() && merged.back().first == t.first)
      merged.back().second += t.second;
    else
      merged.push_back(t);
  }
  return merged;
}

TransitionMatrix build_transition_matrix(const NetworkConfig& cfg, bool parallel,
                                         std::uint64_t cap) {
  cfg.validate();
  const StateIndexer indexer(cfg);
  if (indexer.count() > cap) {
    std::ostringstream os;
    os << "state count " << indexer.count() << " exceeds analytical cap " << cap;
    throw StateCapExceeded(os.str());
  }
  TransitionMatrix A;
  A.dim = indexer.count();
  A.cols.resize(A.dim);
  const std::int64_t n = static_cast<std::int64_t>(A.dim);
  if (parallel) {
#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t i = 0; i < n; ++i)
      A.cols[i] = transition_column(indexer.state_of(i), cfg, indexer);
  } else {
    for (std::int64_t i = 0; i < n; ++i)
      A.cols[i] = transition_column(indexer.state_of(i), cfg, indexer);
  }
  return A;
}

void dump_matrix(const TransitionMatrix& A, std::ostream& os) {
  char buf[64];
  for (std::uint64_t i = 0; i < A.dim; ++i) {
    for (const auto& [j, p] : A.cols[i]) {
      std::snprintf(buf, sizeof buf, "%.17g", p);
      os << i << ' ' << j << ' ' << buf << '\n';
    }
  }
}

std::vector<std::uint32_t> reachable_states(const TransitionMatrix& A, std::uint64_t from) {
  std::vector<char> seen(A.dim, 0);
  std::vector<std::uint32_t> stack{static_cast<std::uint32_t>(from)};
  seen[from] = 1;
  std::vector<std::uint32_t> out;
  while (!stack.empty()) {
    const std::uint32_t v = stack.back();
    stack.pop_back();
    out.push_back(v);
    for (const auto& [j, p] : A.cols[v]) {
      if (!seen[j]) {
        seen[j] = 1;
        stack.push_back(j);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Iterative Tarjan SCC over the subgraph induced by `verts`.
struct SccResult {
  std::vector<std::int32_t> comp;  // per local vertex
  std::int32_t count = 0;
};

SccResult strongly_connected_components(const TransitionMatrix& A,
                                        const std::vector<std::uint32_t>& verts,
                                        const std::vector<std::int32_t>& local) {
  const std::size_t n = verts.size();
  SccResult res;
  res.comp.assign(n, -1);
  std::vector<std::int32_t> index(n, -1), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<std::uint32_t> scc_stack;
  std::int32_t next_index = 0;

  struct Frame {
    std::uint32_t v;
    std::size_t edge;
  };
  std::vector<Frame> call;

  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    call.push_back({static_cast<std::uint32_t>(root), 0});
    while (!call.empty()) {
      Frame& f = call.back();
      const std::uint32_t v = f.v;
      if (f.edge == 0) {
        index[v] = low[v] = next_index++;
        scc_stack.push_back(v);
        on_stack[v] = 1;
      }
      const auto& col = A.cols[verts[v]];
      bool descended = false;
      while (f.edge < col.size()) {
        const std::int32_t w = local[col[f.edge].first];
        ++f.edge;
        if (w < 0) continue;  // outside the induced subgraph (cannot happen for closed sets)
        if (index[w] < 0) {
          call.push_back({static_cast<std::uint32_t>(w), 0});
          descended = true;
          break;
        }
        if (on_stack[w]) low[v] = std::min(low[v], index[w]);
      }
      if (descended) continue;
      if (low[v] == index[v]) {
        while (true) {
          const std::uint32_t w = scc_stack.back();
          scc_stack.pop_back();
          on_stack[w] = 0;
          res.comp[w] = res.count;
          if (w == v) break;
        }
        ++res.count;
      }
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
    }
  }
  return res;
}

}  // namespace

std::vector<std::uint32_t> recurrent_class(const TransitionMatrix& A, std::uint64_t from) {
  const auto verts = reachable_states(A, from);
  std::vector<std::int32_t> local(A.dim, -1);
  for (std::size_t i = 0; i < verts.size(); ++i) local[verts[i]] = static_cast<std::int32_t>(i);

  const SccResult scc = strongly_connected_components(A, verts, local);

  std::vector<char> has_exit(scc.count, 0);
  for (std::size_t v = 0; v < verts.size(); ++v) {
    for (const auto& [j, p] : A.cols[verts[v]]) {
      const std::int32_t w = local[j];
      if (w >= 0 && scc.comp[w] != scc.comp[v]) has_exit[scc.comp[v]] = 1;
    }
  }
  std::vector<std::int32_t> recurrent;
  for (std::int32_t c = 0; c < scc.count; ++c)
    if (!has_exit[c]) recurrent.push_back(c);

  if (recurrent.size() != 1) {
    std::ostringstream os;
    os << "chain reachable from state " << from << " has " << recurrent.size()
       << " closed classes; stationary distribution is not unique";
    throw ReducibleChainError(os.str());
  }

  std::vector<std::uint32_t> cls;
  for (std::size_t v = 0; v < verts.size(); ++v)
    if (scc.comp[v] == recurrent[0]) cls.push_back(verts[v]);
  std::sort(cls.begin(), cls.end());
  return cls;
}

namespace {

constexpr std::size_t kDenseSolveLimit = 5000;
constexpr double kPowerResidual = 1e-12;
constexpr std::uint64_t kPowerMaxIterations = 5'000'000;

Eigen::VectorXd dense_solve(const TransitionMatrix& A,
                            const std::vector<std::uint32_t>& cls,
                            const std::vector<std::int32_t>& local) {
  const std::size_t n = cls.size();
  // M = A - I + B restricted to the class, with B the all-ones matrix.
  Eigen::MatrixXd M = Eigen::MatrixXd::Ones(n, n) - Eigen::MatrixXd::Identity(n, n);
  for (std::size_t c = 0; c < n; ++c)
    for (const auto& [j, p] : A.cols[cls[c]])
      if (local[j] >= 0) M(local[j], c) += p;
  const Eigen::VectorXd b = Eigen::VectorXd::Ones(n);
  Eigen::VectorXd x = M.partialPivLu().solve(b);
  const double residual = (M * x - b).lpNorm<Eigen::Infinity>();
  if (!(residual < 1e-8))
    throw std::runtime_error("stationary solve: dense system residual too large");
  return x;
}

}  // namespace

StationaryResult stationary_distribution(const TransitionMatrix& A, std::uint64_t from,
                                         StationaryMethod method) {
  StationaryResult res;
  res.support = recurrent_class(A, from);
  const std::size_t n = res.support.size();
  std::vector<std::int32_t> local(A.dim, -1);
  for (std::size_t i = 0; i < n; ++i) local[res.support[i]] = static_cast<std::int32_t>(i);

  const bool dense = method == StationaryMethod::Dense ||
                     (method == StationaryMethod::Auto && n <= kDenseSolveLimit);

  std::vector<double> pi_local(n, 0.0);
  if (dense) {
    const Eigen::VectorXd x = dense_solve(A, res.support, local);
    res.raw_solution.assign(x.data(), x.data() + n);
    res.raw_is_dense = true;
    for (std::size_t i = 0; i < n; ++i) pi_local[i] = x[i];
  } else {
    // Lazy power iteration x <- (x + Ax)/2 on the restricted columns; the
    // residual is always measured against the plain chain.
    std::vector<double> x(n, 1.0 / static_cast<double>(n)), y(n);
    std::uint64_t it = 0;
    while (true) {
      std::fill(y.begin(), y.end(), 0.0);
      for (std::size_t c = 0; c < n; ++c) {
        const double xc = x[c];
        if (xc == 0.0) continue;
        for (const auto& [j, p] : A.cols[res.support[c]])
          if (local[j] >= 0) y[local[j]] += p * xc;
      }
      double residual = 0.0;
      for (std::size_t i = 0; i < n; ++i) residual = std::max(residual, std::abs(y[i] - x[i]));
      ++it;
      if (residual <= kPowerResidual) {
        x = y;
        break;
      }
      if (it >= kPowerMaxIterations)
        throw std::runtime_error("stationary solve: power iteration did not converge");
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        x[i] = 0.5 * (x[i] + y[i]);
        sum += x[i];
      }
      for (double& v : x) v /= sum;
    }
    res.iterations = it;
    res.raw_solution = x;
    pi_local = std::move(x);
  }

  // Clamp solver noise and renormalize; entries are probabilities.
  double sum = 0.0;
  for (double& v : pi_local) {
    if (v < 0.0) {
      if (v < -1e-9) throw std::runtime_error("stationary solve: negative mass");
      v = 0.0;
    }
    sum += v;
  }
  if (!(std::abs(sum - 1.0) < 1e-8))
    throw std::runtime_error("stationary solve: mass does not sum to one");
  res.pi.assign(A.dim, 0.0);
  for (std::size_t i = 0; i < n; ++i) res.pi[res.support[i]] = pi_local[i] / sum;
  return res;
}

OutageAnalysis analyze_outage(const NetworkConfig& cfg, double snr_db, std::uint64_t cap,
                              StationaryMethod method) {
  const NetworkConfig at = with_snr(cfg, snr_db);
  const TransitionMatrix A = build_transition_matrix(at, true, cap);
  const StateIndexer indexer(at);
  const std::uint64_t start = indexer.index_of(all_empty_state(at));

  const StationaryResult st = stationary_distribution(A, start, method);

  OutageAnalysis out;
  out.num_states = A.dim;
  out.class_size = st.support.size();
  for (const std::uint32_t i : st.support) out.p_out += st.pi[i] * A.diagonal(i);

  if (st.support.size() <= kDenseSolveLimit) {
    std::vector<double> raw;
    if (st.raw_is_dense) {
      raw = st.raw_solution;
    } else {
      std::vector<std::int32_t> local(A.dim, -1);
      for (std::size_t i = 0; i < st.support.size(); ++i)
        local[st.support[i]] = static_cast<std::int32_t>(i);
      const Eigen::VectorXd x = dense_solve(A, st.support, local);
      raw.assign(x.data(), x.data() + st.support.size());
    }
    for (std::size_t i = 0; i < st.support.size(); ++i)
      out.p_out_direct += A.diagonal(st.support[i]) * raw[i];
    out.direct_checked = true;
    if (!(std::abs(out.p_out - out.p_out_direct) <= 1e-10))
      throw std::runtime_error("overall outage: stationary and direct forms disagree");
  }
  return out;
}

double overall_outage(const NetworkConfig& cfg, double snr_db, std::uint64_t cap) {
  return analyze_outage(cfg, snr_db, cap).p_out;
}

double estimate_diversity(const OutageCurve& curve, double snr_lo, double snr_hi) {
  if (!(snr_hi > snr_lo)) throw std::invalid_argument("estimate_diversity: need hi > lo");
  double p_lo = -1.0, p_hi = -1.0;
  for (const CurvePoint& pt : curve.points) {
    if (std::abs(pt.snr_db - snr_lo) < 1e-9) p_lo = pt.p_out;
    if (std::abs(pt.snr_db - snr_hi) < 1e-9) p_hi = pt.p_out;
  }
  if (p_lo < 0.0 || p_hi < 0.0)
    throw std::invalid_argument("estimate_diversity: SNR point missing from curve");
  if (!(p_lo > 0.0) || !(p_hi > 0.0))
    throw std::invalid_argument("estimate_diversity: outage probabilities must be positive");
  return (std::log10(p_lo) - std::log10(p_hi)) / ((snr_hi - snr_lo) / 10.0);
}

}  // namespace relay
