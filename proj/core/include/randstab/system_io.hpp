#pragma once

#include "randstab/dynamics.hpp"
#include "randstab/riccati.hpp"

#include <filesystem>
#include <string>

namespace randstab {

/// A plant together with the costs used for gain design.
struct SystemDescription {
    DynamicsParameter plant;
    CostPair costs;
};

/// Parses a system description:
///   {"p": 3, "r": 3, "A": [[...], ...], "B": [[...], ...], "Q": [[...]], "R": [[...]]}
/// Matrices are row-major nested arrays; Q and R are optional and default to identities.
/// Throws IoError for unreadable files or malformed JSON, DimensionMismatch or
/// InvalidArgument for inconsistent contents.
[[nodiscard]] SystemDescription parse_system_json(const std::string& text);
[[nodiscard]] SystemDescription load_system_json(const std::filesystem::path& path);

/// "preset" selects the built-in benchmark; anything else is a JSON path.
[[nodiscard]] SystemDescription load_system(const std::string& source);

[[nodiscard]] std::string to_system_json(const SystemDescription& system);

}  // namespace randstab
