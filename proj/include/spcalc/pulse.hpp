#pragma once

#include "spcalc/symbols.hpp"

namespace spcalc {

// <theta>-weighted boundedness of a pulse profile and its derivatives.
// Growth is detected by comparing the sup over the inner half box with the
// sup over the full box: a weighted profile decays, a non-decaying one grows
// linearly with the box and fails.
struct ProfileCheckEntry {
  int dx_order = 0;
  int dtheta_order = 0;
  double sup_inner = 0.0;
  double sup_full = 0.0;
  double growth = 1.0;
  bool pass = true;
};

struct ProfileCheckReport {
  std::string profile;
  std::vector<ProfileCheckEntry> entries;
  bool pass = true;
  int failed_dx = -1, failed_dtheta = -1;  // offending derivative on failure
};

ProfileCheckReport pulse_profile_check(const Profile& V, const GridSpec& g,
                                       int max_order);

// Empirical sup over the theta box of <omega-theta> * int_0^1
// <theta + t(omega-theta)>^{-2} dt: the weight shape behind the pulse
// remainder estimate. Finite and small (= 2 asymptotically).
double theta_weight_shape_sup(const GridSpec& g, int samples = 64);

// Same shape test through a catalog profile pair: the <.>-weighted product
// along the Taylor path integrates to a <omega-theta>^{-1} envelope.
double profile_pair_shape_sup(const Profile& V, const Profile& W, const GridSpec& g,
                              int samples = 48);

}  // namespace spcalc
