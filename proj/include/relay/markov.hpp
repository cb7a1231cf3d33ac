#pragma once
// Exact outage analysis: state transition matrix assembled from the
// closed-form link probabilities, stationary distribution on the recurrent
// class, overall outage probability, and diversity-order estimation.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "relay/policy.hpp"
#include "relay/state.hpp"

namespace relay {

// Column-stochastic sparse transition matrix; cols[i] holds the nonzero
// entries (j, A_ji) of P(s(j) | s(i)), sorted by j. Every column sums to 1.
struct TransitionMatrix {
  std::uint64_t dim = 0;
  std::vector<std::vector<std::pair<std::uint32_t, double>>> cols;

  double entry(std::uint64_t j, std::uint64_t i) const;
  double diagonal(std::uint64_t i) const { return entry(i, i); }
  double column_sum(std::uint64_t i) const;
};

// Outage probability of one state: product of the availability-set outage
// terms for non-edge states, the no-rate-or-no-charge form for edge states,
// and 1 for the deadlock state.
double state_outage_prob(const SystemState& s, const NetworkConfig& cfg);

// One matrix column: every positive-probability successor of `s` under the
// proposed selection rule, with the diagonal entry last merged in.
std::vector<std::pair<std::uint32_t, double>> transition_column(const SystemState& s,
                                                                const NetworkConfig& cfg,
                                                                const StateIndexer& indexer);

// Builds all columns; the parallel path distributes columns over OpenMP
// threads and is bit-identical to the serial one.
TransitionMatrix build_transition_matrix(const NetworkConfig& cfg, bool parallel = true,
                                         std::uint64_t cap = kDefaultStateCap);

// Sparse triplet text dump "i j prob", one line per entry, for golden tests.
void dump_matrix(const TransitionMatrix& A, std::ostream& os);

struct ReducibleChainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// States reachable from `from` along positive-probability transitions.
std::vector<std::uint32_t> reachable_states(const TransitionMatrix& A, std::uint64_t from);

// The unique recurrent communicating class reachable from `from`; throws
// ReducibleChainError when the reachable chain has several closed classes.
std::vector<std::uint32_t> recurrent_class(const TransitionMatrix& A, std::uint64_t from);

enum class StationaryMethod { Auto, Dense, PowerIteration };

struct StationaryResult {
  std::vector<double> pi;               // full dimension, exactly 0 off the class
  std::vector<std::uint32_t> support;   // the recurrent class, ascending
  std::vector<double> raw_solution;     // x solving (A - I + B) x = b on the class
  bool raw_is_dense = false;
  std::uint64_t iterations = 0;         // power-iteration count, 0 for dense
};

// Solves (A - I + B) pi = b restricted to the recurrent class: direct dense
// solve up to 5000 states, power iteration to a 1e-12 residual above.
StationaryResult stationary_distribution(const TransitionMatrix& A, std::uint64_t from,
                                         StationaryMethod method = StationaryMethod::Auto);

struct OutageAnalysis {
  double p_out = 0.0;          // sum_i pi_i A_ii
  double p_out_direct = 0.0;   // diag(A)^T (A - I + B)^{-1} b on the class
  bool direct_checked = false; // dense-solve path only
  std::uint64_t num_states = 0;
  std::uint64_t class_size = 0;
};

// Full analytical pipeline at one SNR point, starting from the all-empty
// state. The two outage formulas must agree to 1e-10 whenever both run.
OutageAnalysis analyze_outage(const NetworkConfig& cfg, double snr_db,
                              std::uint64_t cap = kDefaultStateCap,
                              StationaryMethod method = StationaryMethod::Auto);

double overall_outage(const NetworkConfig& cfg, double snr_db,
                      std::uint64_t cap = kDefaultStateCap);

struct CurvePoint {
  double snr_db = 0.0;
  double p_out = 0.0;
  double ci_halfwidth = 0.0;  // 95% binomial half-width; 0 for analytical rows
};

struct OutageCurve {
  std::string policy;  // e.g. "proposed"
  std::string source;  // "analytical" or "simulated"
  std::vector<CurvePoint> points;  // strictly increasing snr_db
};

// dB-domain diversity slope (log10 p(lo) - log10 p(hi)) / ((hi - lo)/10).
double estimate_diversity(const OutageCurve& curve, double snr_lo, double snr_hi);

}  // namespace relay
