#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "nclmat/experiment.hpp"

namespace nclmat {

// Malformed experiment configuration (file syntax, unknown keys, invalid
// values). The CLI maps this to its configuration-error exit code.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat key = value format, one entry per line, '#' starts a comment.
// Repeated `algorithm` keys append entries; see the README for the schema.
ExperimentConfig load_config(std::istream& in);
ExperimentConfig load_config_file(const std::string& path);

}  // namespace nclmat
