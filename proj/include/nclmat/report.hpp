#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "json.hpp"
#include "nclmat/experiment.hpp"

namespace nclmat {

// CSV schema: iteration,algorithm,msd_db,mse,alpha_k,lambda_k and, when an
// overlay is present, a trailing theory_msd_db column filled on the overlay
// entry's rows. Full double precision; non-finite values print as empty
// cells.
void write_csv(const ExperimentResult& result, std::ostream& os);

// Steady-state numbers (means over the final 10%), divergence counts, and
// both analytical steady-state values.
nlohmann::json summarize(const ExperimentResult& result);

// Writes <stem>.csv and <stem>_summary.json under dir, creating it if
// needed. Returns the CSV path.
std::filesystem::path write_outputs(const ExperimentResult& result,
                                    const std::filesystem::path& dir, const std::string& stem);

}  // namespace nclmat
