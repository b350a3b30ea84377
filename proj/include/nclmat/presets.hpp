#pragma once

#include <vector>

#include "nclmat/experiment.hpp"

namespace nclmat {

// Canned system-identification scenarios 1..9 over the standard 5-tap
// plant [0.0227, 0.46, 0.688, 0.46, 0.227]. Scenario 6 compares one filter
// across four noise families and therefore expands to four runs; preset()
// returns the first.
ExperimentConfig preset(int figure_id);
std::vector<ExperimentConfig> preset_runs(int figure_id);

constexpr int kFirstPreset = 1;
constexpr int kLastPreset = 9;

}  // namespace nclmat
