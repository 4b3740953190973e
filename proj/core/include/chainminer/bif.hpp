#pragma once

#include <string>
#include <vector>

#include "chainminer/network.hpp"

namespace chainminer {

// Parses the network description grammar documented in docs/formats.md.
// Rows whose probabilities sum to 1 within 1e-6 are renormalized; worse
// violations raise ParseError.
BayesianNetwork parse_network(const std::string& text);
BayesianNetwork parse_network_file(const std::string& path);

// Canonical text form. parse_network(serialize_network(n)) reconstructs n
// exactly, table bits included.
std::string serialize_network(const BayesianNetwork& net);

// Networks compiled into the library. Lookup is case-insensitive.
const std::vector<std::string>& bundled_network_names();
bool is_bundled_network(const std::string& name);
const std::string& bundled_network_text(const std::string& name);
BayesianNetwork load_bundled(const std::string& name);

// Count of free parameters: sum over variables of
// (num_states - 1) * product of parent state counts.
long long parameter_count(const BayesianNetwork& net);

// A --network argument: either a bundled name or a filesystem path.
struct NetworkSource {
  std::string given;    // as typed
  std::string label;    // bundled key, or the file stem; used in file names
  bool bundled = false;
};

NetworkSource resolve_network_source(const std::string& name_or_path);
BayesianNetwork open_network(const NetworkSource& source);

}  // namespace chainminer
