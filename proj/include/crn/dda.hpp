#ifndef CRN_DDA_HPP
#define CRN_DDA_HPP

// Distributed dynamic negotiation between PTs and STs: a deferred-acceptance
// loop where a rejected (or displaced) PT concedes price or time through the
// proposal update rule and re-enters the tail of the unmatched queue.

#include <deque>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "crn/grid.hpp"
#include "crn/market.hpp"
#include "crn/prefs.hpp"

namespace crn {

// Which offers a concession applies to. per_pair keeps one (xi, beta) state
// for every (PT, ST) pair; per_pu shares a single state across all of a PT's
// offers.
enum class ConcessionScope { per_pair, per_pu };

std::string_view to_string(ConcessionScope s);
ConcessionScope parse_concession_scope(std::string_view s);

struct DdaOptions {
  AllocationGrid grid{0.99, 0.05, 0.99, 0.05};
  ConcessionScope scope = ConcessionScope::per_pair;

  static DdaOptions from_params(const ScenarioParams& p,
                                ConcessionScope scope = ConcessionScope::per_pair) {
    return {AllocationGrid::from_params(p), scope};
  }
};

/// Grid address of an allocation: xi = xi_init - xi_steps * delta, etc.
struct StepIndex {
  int xi_steps = 0;
  int beta_steps = 0;
  friend bool operator==(const StepIndex&, const StepIndex&) = default;
};

inline Allocation allocation_at(const AllocationGrid& g, StepIndex s) {
  return {g.xi(s.xi_steps), g.beta(s.beta_steps)};
}

enum class PuuBranch {
  price_exhausted = 1,  // xi - delta <= 0: concede time, keep price
  rate_floor = 2,       // one more time step would break the PU requirement: concede price
  concede_time = 3,     // losing epsilon of time costs less utility than losing delta of price
  concede_price = 4,
  exhausted = 5,        // nothing left to concede (xi at its floor and beta already 0)
};

/// One application of the proposal update rule to `idx` for pair (l, q).
PuuBranch concession_rule(StepIndex& idx, int l, int q, const Market& market, const AllocationGrid& grid);

enum class EventKind { offer, accept, reject, displace, puu, prune, exit };
std::string_view to_string(EventKind k);

struct TraceEvent {
  EventKind kind = EventKind::offer;
  int pu = -1;
  int su = -1;
  double xi = 0.0;
  double beta = 0.0;
  long iteration = 0;
  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

struct EngineTrace {
  std::vector<TraceEvent> events;
  long offers = 0;
  long responses = 0;
  long packets = 0;     // one per offer plus one per response
  long iterations = 0;  // one per processed offer
  std::vector<int> puu_count;  // per PU
  friend bool operator==(const EngineTrace&, const EngineTrace&) = default;
};

/// Writes one JSON object per line: kind, l, q, xi, beta, iteration.
void write_trace_jsonl(const EngineTrace& trace, std::ostream& out);

struct MatchingOutcome {
  Eigen::MatrixXi match;   // L_PU x L_SU, 0/1
  Eigen::MatrixXd price;   // G: xi of matched pairs, 0 elsewhere
  Eigen::MatrixXd time;    // B: beta of matched pairs, 0 elsewhere
  std::vector<int> pu_partner;  // SU of each PU or -1
  std::vector<int> su_partner;  // PU of each SU or -1

  static MatchingOutcome empty(int l_pu, int l_su);
  void assign(int l, int q, Allocation a);
  Allocation allocation_of_pu(int l) const { return {price(l, pu_partner[l]), time(l, pu_partner[l])}; }
  int matched_count() const;
  /// Sum of PU utilities over matched pairs, evaluated in `market`.
  double sum_pu_utility(const Market& market) const;
  double sum_pu_rate(const Market& market) const;
  double sum_su_rate(const Market& market) const;
};

struct EngineState {
  std::deque<int> queue;  // unmatched PTs still negotiating
  std::vector<int> pu_partner;
  std::vector<int> su_partner;
  std::vector<Allocation> held;                    // per SU: accepted offer
  std::vector<std::vector<StepIndex>> concession;  // [l][q]
  std::vector<std::vector<bool>> exhausted;        // [l][q]: no concession left
  std::vector<PuPreferenceList> pulists;
  std::vector<std::vector<Allocation>> offer_book;  // [q][l]: latest offer seen by SU q
  std::vector<SuPreferenceList> sulists;
  EngineTrace trace;

  bool terminal() const { return queue.empty(); }
  Allocation current_offer(int l, int q, const AllocationGrid& grid) const {
    return allocation_at(grid, concession[l][q]);
  }
  friend bool operator==(const EngineState&, const EngineState&) = default;
};

EngineState initial_state(const Market& market, const DdaOptions& options);

/// One offer/response round (or the exit of a PT with an empty list), in place.
void advance(EngineState& state, const Market& market, const DdaOptions& options);

/// Value form of advance; a terminal state is returned unchanged.
EngineState step(EngineState state, const Market& market, const DdaOptions& options);

/// Concession after rejection or displacement of PT l by ST q: update rule,
/// preference-list rebuild, move to the tail of the unmatched queue.
PuuBranch puu(EngineState& state, int l, int q, const Market& market, const DdaOptions& options);

MatchingOutcome outcome_of(const EngineState& state, const Market& market);

struct DdaResult {
  MatchingOutcome outcome;
  EngineTrace trace;
};

DdaResult run(const Market& market, const DdaOptions& options);

}  // namespace crn

#endif  // CRN_DDA_HPP
