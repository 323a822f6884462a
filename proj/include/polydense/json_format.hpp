#pragma once

#include <string>

#include "json.hpp"

namespace polydense {

/// 17 significant digits (%.17g); non-finite values render as `null`.
std::string format_double(double value);

/// Serializes with insertion-ordered keys and format_double for every float,
/// so equal values always produce byte-identical text.
std::string dump_json(const nlohmann::ordered_json& value, int indent = 2);

}  // namespace polydense
