#pragma once

#include "spcalc/calculus.hpp"

namespace spcalc {

// Grids and knobs shared by all registered estimates.
struct EstimateContext {
  // sweep-scale grids (operator-norm sweeps over the (eps, gamma) lattice)
  GridSpec wav_sweep = GridSpec::wavetrain(1, kPi, 16, 4);
  GridSpec pul_sweep = GridSpec::pulse(1, kPi, 8, 8.0, 32);
  // oracle-scale grids (dense identities)
  GridSpec wav_small = GridSpec::wavetrain(1, kPi, 8, 3);
  GridSpec pul_small = GridSpec::pulse(1, kPi, 8, 8.0, 16);
  // desk-scale grids (transform exactness, quantization identities)
  GridSpec wav_desk = GridSpec::wavetrain(1, kPi, 128, 32);
  GridSpec pul_desk = GridSpec::pulse(1, kPi, 128, 16.0, 128);

  SweepSpec sweep = SweepSpec::standard();
  MeasureOptions opt;
  std::uint64_t seed = 1234;
  int probes = 10;
  bool oracle = true;  // include DenseSVD cross-checks where budgeted
};

struct EstimateDef {
  std::string id;
  Geometry geometry;
  std::string twin;  // id of the other-geometry counterpart, "" if none
  std::string doc;
  std::function<DefectReport(const EstimateContext&)> run;
};

const std::vector<EstimateDef>& estimate_registry();
const EstimateDef& find_estimate(const std::string& id);
std::vector<std::string> estimate_ids();

// standard profile/symbol families per geometry (shared by registry entries
// and the test suites)
SymbolFamily standard_symbol_family(const std::string& symbol, const Params& pars,
                                    const GridSpec& g);
AmplitudeFamily standard_amplitude_family(const std::string& amp, const Params& pars,
                                          const GridSpec& g);

}  // namespace spcalc
