#ifndef CRN_TOPOLOGY_HPP
#define CRN_TOPOLOGY_HPP

#include <Eigen/Dense>

#include "crn/params.hpp"
#include "crn/radio.hpp"
#include "crn/rng.hpp"

namespace crn {

// Points are stored column-wise (2 x N). PTs sit on the left edge of the
// [-1, 1]^2 square with their PR straight across on the right edge; STs and
// SRs are uniform in the inner square [-0.5, 0.5]^2.
struct Placement {
  Eigen::Matrix2Xd pt_pos;
  Eigen::Matrix2Xd pr_pos;
  Eigen::Matrix2Xd st_pos;
  Eigen::Matrix2Xd sr_pos;
};

struct ChannelRealization {
  ChannelGainsd gains;
  LinkDistancesd distances;
  LinkSnrsd snr;
};

/// Coincidence threshold under which a placement is redrawn.
inline constexpr double kMinDistance = 1e-6;

Placement place_users(const ScenarioParams& params, RandomStream& rng);

LinkDistancesd link_distances(const Placement& placement);

ChannelRealization draw_channels(const ScenarioParams& params, const Placement& placement,
                                 RandomStream& rng);

/// Placement followed by fading, from a single stream.
ChannelRealization draw_realization(const ScenarioParams& params, RandomStream& rng);

}  // namespace crn

#endif  // CRN_TOPOLOGY_HPP
