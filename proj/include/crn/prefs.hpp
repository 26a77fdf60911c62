#ifndef CRN_PREFS_HPP
#define CRN_PREFS_HPP

#include <optional>
#include <span>
#include <vector>

#include "crn/market.hpp"

namespace crn {

/// SUs acceptable to PU `owner`, best first.
struct PuPreferenceList {
  int owner = -1;
  std::vector<int> members;
  std::vector<Allocation> basis;  // indexed by SU: allocation each SU was evaluated at

  bool empty() const { return members.empty(); }
  friend bool operator==(const PuPreferenceList&, const PuPreferenceList&) = default;
};

/// PUs acceptable to SU `owner`, best first.
struct SuPreferenceList {
  int owner = -1;
  std::vector<int> members;
  std::vector<Allocation> evaluation;  // indexed by PU: latest offer from that PU

  friend bool operator==(const SuPreferenceList&, const SuPreferenceList&) = default;
};

// A PU lists an SU when the pair has a non-empty feasibility window and the
// PU's rate at the basis allocation meets its requirement. Ordered by
// descending PU utility, ties to the lower SU index.
PuPreferenceList build_pulist(int l, std::span<const Allocation> basis, const Market& market);
PuPreferenceList build_pulist(int l, Allocation basis, const Market& market);

// An SU lists a PU when the PU's latest offer meets the SU rate requirement
// with non-negative SU utility. Ordered by descending SU utility, ties to the
// lower PU index.
SuPreferenceList build_sulist(int q, std::span<const Allocation> offer_book, const Market& market);

struct Proposal {
  int pu = -1;
  Allocation offer;
};

/// True iff the challenger is acceptable to SU q and strictly better than the
/// incumbent (if any). Equal utilities keep the incumbent.
bool su_prefers(int q, const Proposal& challenger, const std::optional<Proposal>& incumbent,
                const Market& market);

}  // namespace crn

#endif  // CRN_PREFS_HPP
