#include "crn/prefs.hpp"

#include <algorithm>
#include <stdexcept>

namespace crn {

PuPreferenceList build_pulist(int l, std::span<const Allocation> basis, const Market& market) {
  if (static_cast<int>(basis.size()) != market.l_su())
    throw std::invalid_argument("PU preference basis needs one allocation per SU");
  PuPreferenceList list;
  list.owner = l;
  list.basis.assign(basis.begin(), basis.end());
  for (int q = 0; q < market.l_su(); ++q)
    if (market.pair_feasible(l, q) && market.pu_rate_ok(l, q, basis[q].beta)) list.members.push_back(q);
  std::stable_sort(list.members.begin(), list.members.end(), [&](int a, int b) {
    return market.pu_utility(l, a, basis[a]) > market.pu_utility(l, b, basis[b]);
  });
  return list;
}

PuPreferenceList build_pulist(int l, Allocation basis, const Market& market) {
  const std::vector<Allocation> uniform(static_cast<std::size_t>(market.l_su()), basis);
  return build_pulist(l, uniform, market);
}

SuPreferenceList build_sulist(int q, std::span<const Allocation> offer_book, const Market& market) {
  if (static_cast<int>(offer_book.size()) != market.l_pu())
    throw std::invalid_argument("SU offer book needs one allocation per PU");
  SuPreferenceList list;
  list.owner = q;
  list.evaluation.assign(offer_book.begin(), offer_book.end());
  for (int l = 0; l < market.l_pu(); ++l)
    if (market.su_accepts(q, l, offer_book[l])) list.members.push_back(l);
  std::stable_sort(list.members.begin(), list.members.end(), [&](int a, int b) {
    return market.su_utility(q, a, offer_book[a]) > market.su_utility(q, b, offer_book[b]);
  });
  return list;
}

bool su_prefers(int q, const Proposal& challenger, const std::optional<Proposal>& incumbent,
                const Market& market) {
  if (!market.su_accepts(q, challenger.pu, challenger.offer)) return false;
  if (!incumbent) return true;
  return market.su_utility(q, challenger.pu, challenger.offer) >
         market.su_utility(q, incumbent->pu, incumbent->offer);
}

}  // namespace crn
