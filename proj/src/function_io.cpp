#include "silt/function_io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "silt/errors.hpp"

namespace silt {

namespace {

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) {
        out.push_back(item);
    }
    if (!s.empty() && s.back() == sep) {
        out.emplace_back();
    }
    return out;
}

double to_real(const std::string& token, const std::string& context)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(token, &used);
    } catch (const std::exception&) {
        throw ValidationError("malformed number '" + token + "' in '" + context + "'");
    }
    if (used != token.size() || !std::isfinite(v)) {
        throw ValidationError("malformed number '" + token + "' in '" + context + "'");
    }
    return v;
}

}  // namespace

std::vector<double> parse_real_list(const std::string& text)
{
    std::vector<double> out;
    for (const auto& token : split(text, ',')) {
        out.push_back(to_real(token, text));
    }
    if (out.empty()) {
        throw ValidationError("empty list");
    }
    return out;
}

std::vector<std::size_t> parse_index_list(const std::string& text)
{
    std::vector<std::size_t> out;
    if (text.empty()) {
        return out;
    }
    for (const auto& token : split(text, ',')) {
        const double v = to_real(token, text);
        if (v < 1.0 || v != std::floor(v)) {
            throw ValidationError("index '" + token + "' must be a positive integer (1-based)");
        }
        out.push_back(static_cast<std::size_t>(v) - 1);
    }
    return out;
}

GridFunction parse_function(const std::string& spec, const Grid& grid, std::size_t aux_dim)
{
    const auto parts = split(spec, ':');
    const std::string& name = parts.empty() ? spec : parts[0];
    auto expect_args = [&](std::size_t n) {
        if (parts.size() != n + 1) {
            throw ValidationError("function '" + spec + "' expects " + std::to_string(n) + " argument(s)");
        }
    };
    const double T = grid.length();

    if (name == "const1") {
        expect_args(0);
        return sample(grid, [](double) { return 1.0; }, aux_dim);
    }
    if (name == "zero") {
        expect_args(0);
        return GridFunction(grid, aux_dim);
    }
    if (name == "indicator") {
        expect_args(2);
        const double a = to_real(parts[1], spec);
        const double b = to_real(parts[2], spec);
        if (!(0.0 <= a && a <= b && b <= T)) {
            throw ValidationError("indicator bounds in '" + spec + "' must satisfy 0 <= a <= b <= T");
        }
        return GridFunction::interval(grid, a, b, 1.0, aux_dim);
    }
    if (name == "sin") {
        expect_args(1);
        const double m = to_real(parts[1], spec);
        GridFunction f = sample(grid, [&](double s) { return std::sin(m * std::numbers::pi * s / T); }, aux_dim);
        const double norm = f.norm();
        if (!(norm > 0.0)) {
            throw ValidationError("function '" + spec + "' vanishes on the grid");
        }
        return (1.0 / norm) * f;
    }
    if (name == "hat") {
        expect_args(2);
        const double c = to_real(parts[1], spec);
        const double w = to_real(parts[2], spec);
        if (!(w > 0.0)) {
            throw ValidationError("hat width in '" + spec + "' must be positive");
        }
        return sample(grid, [&](double s) { return std::max(0.0, 1.0 - std::abs(s - c) / w); }, aux_dim);
    }
    if (name == "e" || name == "aux") {
        std::size_t j = 0;
        if (name == "aux") {
            expect_args(1);
            const double v = to_real(parts[1], spec);
            if (v < 0.0 || v != std::floor(v)) {
                throw ValidationError("auxiliary index in '" + spec + "' must be a nonnegative integer");
            }
            j = static_cast<std::size_t>(v);
        } else {
            expect_args(0);
        }
        if (j >= aux_dim) {
            throw ValidationError("function '" + spec + "' needs an auxiliary direction; the model has " +
                                  std::to_string(aux_dim));
        }
        return aux_direction(grid, aux_dim, j);
    }
    std::string path;
    if (name == "file") {
        path = spec.substr(5);
    } else if (spec.size() > 4 && spec.substr(spec.size() - 4) == ".csv") {
        path = spec;
    }
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) {
            throw ValidationError("cannot open function file '" + path + "'");
        }
        return read_function_csv(in, grid, aux_dim, path);
    }
    throw ValidationError("unknown function '" + spec +
                          "' (expected const1 | zero | indicator:a:b | sin:m | hat:c:w | e | aux:j | file:<path>)");
}

void write_function_csv(std::ostream& out, const GridFunction& f)
{
    const auto values = f.cell_averages();
    out << std::setprecision(17);
    out << "node,value\n";
    for (std::size_t i = 0; i < values.size(); ++i) {
        out << f.grid().node(i) << ',' << values[i] << '\n';
    }
    if (f.aux_dim() > 0) {
        out << "aux,value\n";
        for (std::size_t j = 0; j < f.aux_dim(); ++j) {
            out << j << ',' << f.aux()[j] << '\n';
        }
    }
}

GridFunction read_function_csv(std::istream& in, const Grid& grid, std::size_t aux_dim, const std::string& source)
{
    std::vector<double> values;
    std::vector<double> aux(aux_dim, 0.0);
    enum class Block { none, nodes, aux } block = Block::none;
    std::string line;
    int line_no = 0;
    auto fail = [&](const std::string& what) {
        return ValidationError(source + ":" + std::to_string(line_no) + ": " + what);
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line[0] == '#') {
            continue;
        }
        if (line == "node,value") {
            block = Block::nodes;
            continue;
        }
        if (line == "aux,value") {
            block = Block::aux;
            continue;
        }
        const auto cells = split(line, ',');
        if (cells.size() != 2) {
            throw fail("expected two columns, got '" + line + "'");
        }
        double key = 0.0;
        double value = 0.0;
        try {
            key = to_real(cells[0], line);
            value = to_real(cells[1], line);
        } catch (const ValidationError& e) {
            throw fail(e.what());
        }
        if (block == Block::nodes) {
            const std::size_t i = values.size();
            if (i >= grid.size() || std::abs(key - grid.node(i)) > 0.5 * grid.weight()) {
                throw fail("node " + cells[0] + " does not match grid cell " + std::to_string(i));
            }
            values.push_back(value);
        } else if (block == Block::aux) {
            if (key < 0.0 || key != std::floor(key) || key >= static_cast<double>(aux_dim)) {
                throw fail("auxiliary index " + cells[0] + " out of range");
            }
            aux[static_cast<std::size_t>(key)] = value;
        } else {
            throw fail("data before a 'node,value' header");
        }
    }
    if (values.size() != grid.size()) {
        throw ValidationError(source + ": expected " + std::to_string(grid.size()) + " node rows, got " +
                              std::to_string(values.size()));
    }
    return GridFunction::from_values(grid, std::move(values), std::move(aux));
}

}  // namespace silt
