#pragma once

#include <stdexcept>
#include <string>

#include "nshyd/scenario.hpp"
#include "nshyd/table.hpp"

namespace nshyd::runner {

/// A solver gave up mid-run; the message carries the step and the state.
class SolverFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// NSHYD_THREADS if set (positive integer, ConfigError otherwise), else
/// the hardware concurrency.
int sweep_threads();

/// One row per (command, other-actuator velocity, v) in that nesting order.
/// Rows are computed in parallel on up to `threads` threads; the table does
/// not depend on the thread count.
Table run_sweep(const scenario::Scenario& sc);
Table run_sweep(const scenario::Scenario& sc, int threads);

/// One row per output step k = every, 2 every, ..., T/h; t = k h.
Table run_simulation(const scenario::Scenario& sc);

/// Runs the scenario's mode and applies the output column selection.
Table run(const scenario::Scenario& sc);

}  // namespace nshyd::runner
