// CSV writers for the ad-hoc analysis commands. Same conventions as the
// experiment files: '#' metadata and summary lines, 17 significant digits,
// 1-based node numbers.

#ifndef AOI_REPORT_HPP
#define AOI_REPORT_HPP

#include <iosfwd>

#include "aoi/optimize.hpp"
#include "aoi/sim.hpp"
#include "aoi/symmetric.hpp"

namespace aoi {

void write_sf_analysis(std::ostream& out, const SfConfig& cfg);

void write_aloha_analysis(std::ostream& out, const AlohaConfig& cfg);

/// Numeric optimum (exact closed form as well when M = 2) next to the
/// large-M approximation. With `multistart`, the solver is also started
/// from the uniform vector 1/M and any disagreement is written to `log`.
void write_tau_optimization(std::ostream& out, std::ostream& log,
                            const ChannelProfile& profile,
                            const TauSolverOptions& options, bool multistart);

void write_symmetric(std::ostream& out, const ChannelProfile& profile);

/// One row per node with empirical statistics and the analytic age. With
/// replications > 1, statistics are pooled across independent runs seeded
/// cfg.seed, cfg.seed + 1, ...
SimResult write_simulation(std::ostream& out, const SimConfig& cfg,
                           int replications = 1);

}  // namespace aoi

#endif  // AOI_REPORT_HPP
