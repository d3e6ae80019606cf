#pragma once

#include <istream>
#include <string>
#include <utility>
#include <vector>

#include "randopt/experiment.hpp"

namespace randopt {

/// Parses the flat `key = value` experiment format.
///
/// One assignment per line; `#` starts a comment; list values are comma
/// separated. Unknown keys, repeated keys and malformed values raise
/// ConfigError with the line number.
ExperimentSpec parse_config(std::istream& in);
ExperimentSpec parse_config_string(const std::string& text);
ExperimentSpec load_config(const std::string& path);

/// Every accepted key with a one-line description.
const std::vector<std::pair<std::string, std::string>>& config_keys();

}  // namespace randopt
