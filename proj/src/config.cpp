#include "silt/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "silt/errors.hpp"
#include "silt/process_models.hpp"

namespace silt {

double RunConfig::length() const { return T ? *T : default_length(model); }

double RunConfig::effective_min_gap() const
{
    return min_gap ? *min_gap : std::max(1e-6, 2.0 * length() / static_cast<double>(n));
}

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

RunConfig parse_config(std::istream& in, const std::string& source)
{
    RunConfig cfg;
    std::string section;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string where = source + ":" + std::to_string(line_no);
        std::string line = trim(raw.substr(0, raw.find_first_of("#;")));
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ValidationError(where + ": malformed section header '" + line + "'");
            }
            section = trim(line.substr(1, line.size() - 2));
            if (section != "grid" && section != "model" && section != "run") {
                throw ValidationError(where + ": unknown section '" + section + "'");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ValidationError(where + ": expected 'key = value', got '" + line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty()) {
            throw ValidationError(where + ": key '" + key + "' appears before any section");
        }
        auto number = [&]() {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(value, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != value.size() || value.empty() || !std::isfinite(v)) {
                throw ValidationError(where + ": key '" + key + "' has non-numeric value '" + value + "'");
            }
            return v;
        };
        auto integer = [&](double lo) {
            const double v = number();
            if (v != std::floor(v) || v < lo) {
                throw ValidationError(where + ": key '" + key + "' needs an integer >= " +
                                      std::to_string(static_cast<long long>(lo)));
            }
            return v;
        };
        const std::string full = section + "." + key;
        if (full == "grid.T") {
            cfg.T = number();
        } else if (full == "grid.n") {
            cfg.n = static_cast<std::size_t>(integer(2));
        } else if (full == "model.name") {
            cfg.model = value;
        } else if (full == "run.seed") {
            cfg.seed = static_cast<std::uint64_t>(integer(0));
        } else if (full == "run.normalization") {
            try {
                cfg.normalization = parse_normalization(value);
            } catch (const ValidationError& e) {
                throw ValidationError(where + ": " + e.what());
            }
        } else if (full == "run.levels") {
            cfg.levels = static_cast<int>(integer(2));
        } else if (full == "run.min_gap") {
            cfg.min_gap = number();
        } else if (full == "run.out") {
            cfg.out = value;
        } else if (full == "run.threads") {
            cfg.threads = static_cast<unsigned>(integer(1));
        } else {
            throw ValidationError(where + ": unknown key '" + key + "' in section [" + section + "]");
        }
    }
    return cfg;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open config file '" + path + "'");
    }
    return parse_config(in, path);
}

}  // namespace silt
