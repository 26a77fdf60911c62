#include "crn/topology.hpp"

namespace crn {

namespace {

double min_coeff(const Eigen::MatrixXd& m) { return m.size() == 0 ? 1.0 : m.minCoeff(); }

bool degenerate(const LinkDistancesd& d) {
  return min_coeff(d.pt_st) < kMinDistance || min_coeff(d.st_pr) < kMinDistance ||
         min_coeff(d.st_sr) < kMinDistance;
}

void fill_inner_square(Eigen::Matrix2Xd& pts, RandomStream& rng) {
  for (Eigen::Index i = 0; i < pts.cols(); ++i) {
    pts(0, i) = rng.uniform(-0.5, 0.5);
    pts(1, i) = rng.uniform(-0.5, 0.5);
  }
}

}  // namespace

Placement place_users(const ScenarioParams& params, RandomStream& rng) {
  Placement p;
  p.pt_pos.resize(2, params.l_pu);
  p.pr_pos.resize(2, params.l_pu);
  p.st_pos.resize(2, params.l_su);
  p.sr_pos.resize(2, params.l_su);
  for (;;) {
    for (int l = 0; l < params.l_pu; ++l) {
      const double y = rng.uniform(-1.0, 1.0);
      p.pt_pos.col(l) << -1.0, y;
      p.pr_pos.col(l) << 1.0, y;
    }
    fill_inner_square(p.st_pos, rng);
    fill_inner_square(p.sr_pos, rng);
    if (!degenerate(link_distances(p))) return p;
  }
}

LinkDistancesd link_distances(const Placement& placement) {
  const Eigen::Index l_pu = placement.pt_pos.cols();
  const Eigen::Index l_su = placement.st_pos.cols();
  LinkDistancesd d;
  d.pt_pr = (placement.pt_pos - placement.pr_pos).colwise().norm().transpose();
  d.st_sr = (placement.st_pos - placement.sr_pos).colwise().norm().transpose();
  d.pt_st.resize(l_pu, l_su);
  d.st_pr.resize(l_pu, l_su);
  for (Eigen::Index l = 0; l < l_pu; ++l) {
    for (Eigen::Index q = 0; q < l_su; ++q) {
      d.pt_st(l, q) = (placement.pt_pos.col(l) - placement.st_pos.col(q)).norm();
      d.st_pr(l, q) = (placement.st_pos.col(q) - placement.pr_pos.col(l)).norm();
    }
  }
  return d;
}

ChannelRealization draw_channels(const ScenarioParams& params, const Placement& placement,
                                 RandomStream& rng) {
  const int l_pu = params.l_pu;
  const int l_su = params.l_su;
  ChannelRealization r;
  r.distances = link_distances(placement);

  auto& g = r.gains;
  g.pt_pr.resize(l_pu);
  g.pt_st.resize(l_pu, l_su);
  g.st_pr.resize(l_pu, l_su);
  g.st_sr.resize(l_su, l_pu);
  for (int l = 0; l < l_pu; ++l) g.pt_pr(l) = rng.exponential();
  for (int l = 0; l < l_pu; ++l)
    for (int q = 0; q < l_su; ++q) g.pt_st(l, q) = rng.exponential();
  for (int l = 0; l < l_pu; ++l)
    for (int q = 0; q < l_su; ++q) g.st_pr(l, q) = rng.exponential();
  for (int q = 0; q < l_su; ++q) {
    if (params.su_channel_per_band) {
      for (int l = 0; l < l_pu; ++l) g.st_sr(q, l) = rng.exponential();
    } else {
      g.st_sr.row(q).setConstant(rng.exponential());
    }
  }

  r.snr = compute_snrs(params, r.gains, r.distances);
  return r;
}

ChannelRealization draw_realization(const ScenarioParams& params, RandomStream& rng) {
  const Placement placement = place_users(params, rng);
  return draw_channels(params, placement, rng);
}

}  // namespace crn
