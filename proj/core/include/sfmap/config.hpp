// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

#include "sfmap/roomsim.hpp"

namespace sfmap {

/// Configuration or schema problem; the CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  TrialConfig trial;
  ExperimentSpec experiment;
};

/// Parse the JSON run configuration. Sections: room, sources (required),
/// stft, encoder, solver, pipeline, metrics, experiment (optional, with
/// defaults). Unknown keys are rejected; messages carry the offending
/// section/key and, for syntax errors, the line number.
RunConfig load_config(const std::string& path);

/// Built-in defaults (no file).
RunConfig default_config();

}  // namespace sfmap
