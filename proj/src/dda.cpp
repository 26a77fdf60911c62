#include "crn/dda.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace crn {

std::string_view to_string(ConcessionScope s) { return s == ConcessionScope::per_pair ? "per-pair" : "per-pu"; }

ConcessionScope parse_concession_scope(std::string_view s) {
  if (s == "per-pair") return ConcessionScope::per_pair;
  if (s == "per-pu") return ConcessionScope::per_pu;
  throw std::invalid_argument("unknown concession scope '" + std::string(s) + "'");
}

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::offer: return "offer";
    case EventKind::accept: return "accept";
    case EventKind::reject: return "reject";
    case EventKind::displace: return "displace";
    case EventKind::puu: return "puu";
    case EventKind::prune: return "prune";
    case EventKind::exit: return "exit";
  }
  return "?";
}

void write_trace_jsonl(const EngineTrace& trace, std::ostream& out) {
  for (const auto& e : trace.events) {
    nlohmann::json j = {{"kind", std::string(to_string(e.kind))},
                        {"l", e.pu},
                        {"q", e.su},
                        {"xi", e.xi},
                        {"beta", e.beta},
                        {"iteration", e.iteration}};
    out << j.dump() << '\n';
  }
}

// ---- MatchingOutcome

MatchingOutcome MatchingOutcome::empty(int l_pu, int l_su) {
  MatchingOutcome o;
  o.match = Eigen::MatrixXi::Zero(l_pu, l_su);
  o.price = Eigen::MatrixXd::Zero(l_pu, l_su);
  o.time = Eigen::MatrixXd::Zero(l_pu, l_su);
  o.pu_partner.assign(static_cast<std::size_t>(l_pu), -1);
  o.su_partner.assign(static_cast<std::size_t>(l_su), -1);
  return o;
}

void MatchingOutcome::assign(int l, int q, Allocation a) {
  if (pu_partner[l] >= 0 || su_partner[q] >= 0) throw std::logic_error("matching must stay injective");
  match(l, q) = 1;
  price(l, q) = a.xi;
  time(l, q) = a.beta;
  pu_partner[l] = q;
  su_partner[q] = l;
}

int MatchingOutcome::matched_count() const {
  return static_cast<int>(std::count_if(pu_partner.begin(), pu_partner.end(), [](int q) { return q >= 0; }));
}

double MatchingOutcome::sum_pu_utility(const Market& market) const {
  double s = 0.0;
  for (int l = 0; l < static_cast<int>(pu_partner.size()); ++l)
    if (pu_partner[l] >= 0) s += market.pu_utility(l, pu_partner[l], allocation_of_pu(l));
  return s;
}

double MatchingOutcome::sum_pu_rate(const Market& market) const {
  double s = 0.0;
  for (int l = 0; l < static_cast<int>(pu_partner.size()); ++l)
    if (pu_partner[l] >= 0) s += market.pu_rate(l, pu_partner[l], time(l, pu_partner[l]));
  return s;
}

double MatchingOutcome::sum_su_rate(const Market& market) const {
  double s = 0.0;
  for (int l = 0; l < static_cast<int>(pu_partner.size()); ++l)
    if (pu_partner[l] >= 0) s += market.su_rate(pu_partner[l], l, time(l, pu_partner[l]));
  return s;
}

// ---- concession rule

PuuBranch concession_rule(StepIndex& idx, int l, int q, const Market& market, const AllocationGrid& grid) {
  const double xi = grid.xi(idx.xi_steps);
  const double beta = grid.beta(idx.beta_steps);
  const double xi_less = grid.xi(idx.xi_steps + 1);
  const double beta_less = grid.beta(idx.beta_steps + 1);

  if (xi_less <= 0.0) {
    if (beta <= 0.0) return PuuBranch::exhausted;
    ++idx.beta_steps;
    return PuuBranch::price_exhausted;
  }
  const double req = market.pu_requirement()(l);
  if (market.pu_rate(l, q, beta_less) <= req + kRateTolerance * std::max(1.0, req)) {
    ++idx.xi_steps;
    return PuuBranch::rate_floor;
  }
  if (market.pu_utility(l, q, {xi_less, beta}) < market.pu_utility(l, q, {xi, beta_less})) {
    ++idx.beta_steps;
    return PuuBranch::concede_time;
  }
  ++idx.xi_steps;
  return PuuBranch::concede_price;
}

// ---- engine

namespace {

void log_event(EngineState& s, EventKind kind, int l, int q, Allocation a) {
  s.trace.events.push_back({kind, l, q, a.xi, a.beta, s.trace.iterations});
}

PuPreferenceList rebuild_pulist(const EngineState& s, int l, const Market& market, const DdaOptions& options) {
  std::vector<Allocation> basis(static_cast<std::size_t>(market.l_su()));
  for (int q = 0; q < market.l_su(); ++q) basis[q] = s.current_offer(l, q, options.grid);
  PuPreferenceList list = build_pulist(l, basis, market);
  std::erase_if(list.members, [&](int q) { return s.exhausted[l][q]; });
  return list;
}

void move_to_tail(std::deque<int>& queue, int l) {
  if (auto it = std::find(queue.begin(), queue.end(), l); it != queue.end()) queue.erase(it);
  queue.push_back(l);
}

}  // namespace

EngineState initial_state(const Market& market, const DdaOptions& options) {
  const int l_pu = market.l_pu();
  const int l_su = market.l_su();
  const Allocation init{options.grid.xi_init(), options.grid.beta_init()};
  EngineState s;
  for (int l = 0; l < l_pu; ++l) s.queue.push_back(l);
  s.pu_partner.assign(static_cast<std::size_t>(l_pu), -1);
  s.su_partner.assign(static_cast<std::size_t>(l_su), -1);
  s.held.assign(static_cast<std::size_t>(l_su), Allocation{});
  s.concession.assign(static_cast<std::size_t>(l_pu), std::vector<StepIndex>(static_cast<std::size_t>(l_su)));
  s.exhausted.assign(static_cast<std::size_t>(l_pu), std::vector<bool>(static_cast<std::size_t>(l_su), false));
  s.offer_book.assign(static_cast<std::size_t>(l_su), std::vector<Allocation>(static_cast<std::size_t>(l_pu), init));
  for (int l = 0; l < l_pu; ++l) s.pulists.push_back(build_pulist(l, init, market));
  for (int q = 0; q < l_su; ++q) s.sulists.push_back(build_sulist(q, s.offer_book[q], market));
  s.trace.puu_count.assign(static_cast<std::size_t>(l_pu), 0);
  return s;
}

PuuBranch puu(EngineState& s, int l, int q, const Market& market, const DdaOptions& options) {
  StepIndex idx = s.concession[l][q];
  const PuuBranch branch = concession_rule(idx, l, q, market, options.grid);
  if (branch == PuuBranch::exhausted) {
    s.exhausted[l][q] = true;
  } else if (options.scope == ConcessionScope::per_pu) {
    for (auto& pair_idx : s.concession[l]) pair_idx = idx;
  } else {
    s.concession[l][q] = idx;
  }
  ++s.trace.puu_count[l];
  log_event(s, EventKind::puu, l, q, s.current_offer(l, q, options.grid));

  PuPreferenceList rebuilt = rebuild_pulist(s, l, market, options);
  for (int member : s.pulists[l].members)
    if (std::find(rebuilt.members.begin(), rebuilt.members.end(), member) == rebuilt.members.end())
      log_event(s, EventKind::prune, l, member, s.current_offer(l, member, options.grid));
  s.pulists[l] = std::move(rebuilt);
  move_to_tail(s.queue, l);
  return branch;
}

void advance(EngineState& s, const Market& market, const DdaOptions& options) {
  if (s.queue.empty()) return;
  const int l = s.queue.front();
  if (s.pulists[l].empty()) {
    s.queue.pop_front();
    log_event(s, EventKind::exit, l, -1, {});
    return;
  }
  const int q = s.pulists[l].members.front();
  const Allocation offer = s.current_offer(l, q, options.grid);

  ++s.trace.iterations;
  ++s.trace.offers;
  ++s.trace.packets;
  log_event(s, EventKind::offer, l, q, offer);

  s.offer_book[q][l] = offer;
  s.sulists[q] = build_sulist(q, s.offer_book[q], market);

  std::optional<Proposal> incumbent;
  if (s.su_partner[q] >= 0) incumbent = Proposal{s.su_partner[q], s.held[q]};
  const bool accepted = su_prefers(q, {l, offer}, incumbent, market);

  ++s.trace.responses;
  ++s.trace.packets;
  if (accepted) {
    s.queue.pop_front();
    s.pu_partner[l] = q;
    s.su_partner[q] = l;
    s.held[q] = offer;
    log_event(s, EventKind::accept, l, q, offer);
    if (incumbent) {
      s.pu_partner[incumbent->pu] = -1;
      log_event(s, EventKind::displace, incumbent->pu, q, incumbent->offer);
      puu(s, incumbent->pu, q, market, options);
    }
  } else {
    log_event(s, EventKind::reject, l, q, offer);
    puu(s, l, q, market, options);
  }
}

EngineState step(EngineState state, const Market& market, const DdaOptions& options) {
  advance(state, market, options);
  return state;
}

MatchingOutcome outcome_of(const EngineState& s, const Market& market) {
  MatchingOutcome o = MatchingOutcome::empty(market.l_pu(), market.l_su());
  for (int q = 0; q < market.l_su(); ++q)
    if (s.su_partner[q] >= 0) o.assign(s.su_partner[q], q, s.held[q]);
  return o;
}

DdaResult run(const Market& market, const DdaOptions& options) {
  EngineState s = initial_state(market, options);
  while (!s.terminal()) advance(s, market, options);
  return {outcome_of(s, market), std::move(s.trace)};
}

}  // namespace crn
