#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "silt/fw_transform.hpp"

namespace silt {

/// Parameters shared by every subcommand. Unset optionals take
/// model-dependent defaults.
struct RunConfig {
    std::string model = "wiener";
    std::optional<double> T;  ///< default: pi/2 for perturbed:sl, 1 otherwise
    std::size_t n = 512;
    std::optional<double> min_gap;  ///< default: max(1e-6, 2 T / n)
    int levels = 6;
    std::uint64_t seed = 0;
    Normalization normalization = Normalization::paper;
    std::string out;  ///< empty: stdout
    std::optional<unsigned> threads;

    double length() const;
    double effective_min_gap() const;
};

/// INI-style text with sections [grid] (T, n), [model] (name) and
/// [run] (seed, normalization, levels, min_gap, out, threads).
/// Errors carry `source:line` and name the offending key or value.
RunConfig parse_config(std::istream& in, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);

}  // namespace silt
