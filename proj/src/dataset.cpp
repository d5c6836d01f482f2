#include "isoclust/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <string_view>
#include <unordered_map>

namespace isoclust {
namespace {

std::string position_suffix(std::size_t row, std::size_t column) {
    std::string s;
    if (row) s += " (row " + std::to_string(row);
    if (column) s += (row ? ", column " : " (column ") + std::to_string(column);
    if (row || column) s += ")";
    return s;
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_cells(std::string_view line, TextFormat format) {
    std::vector<std::string_view> cells;
    if (format == TextFormat::csv) {
        std::size_t start = 0;
        for (;;) {
            const auto comma = line.find(',', start);
            cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
    } else {
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
            if (i == line.size()) break;
            std::size_t j = i;
            while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
            cells.push_back(line.substr(i, j - i));
            i = j;
        }
    }
    return cells;
}

class LabelInterner {
public:
    int intern(std::string_view name) {
        auto [it, inserted] = index_.try_emplace(std::string(name), static_cast<int>(names_.size()));
        if (inserted) names_.emplace_back(name);
        return it->second;
    }

    ClassLabels finish(std::vector<int> labels) && {
        ClassLabels out;
        out.labels = std::move(labels);
        out.class_count = static_cast<int>(names_.size());
        out.names = std::move(names_);
        return out;
    }

private:
    std::unordered_map<std::string, int> index_;
    std::vector<std::string> names_;
};

}  // namespace

DataError::DataError(const std::string& what, std::size_t row, std::size_t column)
    : std::runtime_error(what + position_suffix(row, column)), row_(row), column_(column) {}

LoadedData parse_points(std::istream& in, const LoadOptions& options) {
    LoadedData out;
    LabelInterner interner;
    std::vector<int> labels;
    std::size_t width = 0;
    std::size_t row = 0;
    std::size_t points = 0;
    bool skipped_header = !options.header;
    std::string line;

    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        if (!skipped_header) {
            skipped_header = true;
            continue;
        }
        const auto cells = split_cells(line, options.format);
        if (width == 0) {
            width = cells.size();
            if (options.label_column && *options.label_column >= width)
                throw DataError("label column out of range", row, *options.label_column + 1);
            out.data.d = width - (options.label_column ? 1 : 0);
            if (out.data.d == 0) throw DataError("no feature columns", row);
        } else if (cells.size() != width) {
            throw DataError("ragged row: expected " + std::to_string(width) + " columns, found " +
                                std::to_string(cells.size()),
                            row);
        }
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const auto cell = cells[c];
            if (options.label_column && c == *options.label_column) {
                if (cell.empty()) throw DataError("empty label cell", row, c + 1);
                labels.push_back(interner.intern(cell));
                continue;
            }
            double value = 0.0;
            const char* first = cell.data();
            const char* last = cell.data() + cell.size();
            if (!cell.empty() && *first == '+') ++first;
            auto [ptr, ec] = std::from_chars(first, last, value);
            if (cell.empty() || ec != std::errc{} || ptr != last || !std::isfinite(value))
                throw DataError("non-numeric cell '" + std::string(cell) + "'", row, c + 1);
            out.data.points.push_back(value);
        }
        ++points;
    }
    if (in.bad()) throw DataError("read failure");
    if (points < 2) throw DataError("need at least 2 points, found " + std::to_string(points));
    out.data.n = points;
    if (options.label_column) out.labels = std::move(interner).finish(std::move(labels));
    return out;
}

LoadedData load_points(const std::filesystem::path& path, const LoadOptions& options) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    return parse_points(in, options);
}

ClassLabels parse_labels(std::istream& in) {
    LabelInterner interner;
    std::vector<int> labels;
    std::string line;
    while (std::getline(in, line)) {
        const auto name = trim(line);
        if (name.empty()) continue;
        labels.push_back(interner.intern(name));
    }
    if (in.bad()) throw DataError("read failure");
    return std::move(interner).finish(std::move(labels));
}

ClassLabels load_labels(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    return parse_labels(in);
}

void write_points(std::ostream& out, const DataSet& data, TextFormat format) {
    const char sep = format == TextFormat::csv ? ',' : ' ';
    char buf[64];
    for (std::size_t i = 0; i < data.n; ++i) {
        for (std::size_t j = 0; j < data.d; ++j) {
            if (j) out.put(sep);
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, data.at(i, j));
            out.write(buf, ptr - buf);
        }
        out.put('\n');
    }
}

void standardize(DataSet& data) {
    for (std::size_t j = 0; j < data.d; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < data.n; ++i) mean += data.at(i, j);
        mean /= static_cast<double>(data.n);
        double var = 0.0;
        for (std::size_t i = 0; i < data.n; ++i) {
            const double dev = data.at(i, j) - mean;
            var += dev * dev;
        }
        const double sd = std::sqrt(var / static_cast<double>(data.n));
        for (std::size_t i = 0; i < data.n; ++i) {
            double& x = data.points[i * data.d + j];
            x = sd > 0.0 ? (x - mean) / sd : 0.0;
        }
    }
}

GeneratedData generate_random(const GeneratorSpec& spec) {
    if (spec.d < 1) throw std::invalid_argument("generate_random: d must be >= 1");
    if (spec.k < 1 || spec.n < spec.k) throw std::invalid_argument("generate_random: need n >= k >= 1");
    if (spec.n < 2) throw std::invalid_argument("generate_random: need n >= 2");
    if (!(spec.spread > 0.0) || !std::isfinite(spec.spread))
        throw std::invalid_argument("generate_random: spread must be positive");

    std::mt19937_64 engine(spec.seed);
    auto uniform = [&engine] { return static_cast<double>(engine() >> 11) * 0x1.0p-53; };

    std::vector<double> centers(spec.k * spec.d);
    for (auto& c : centers) c = 10.0 * uniform();

    bool have_spare = false;
    double spare = 0.0;
    auto gaussian = [&] {
        if (have_spare) {
            have_spare = false;
            return spare;
        }
        const double radius = std::sqrt(-2.0 * std::log(1.0 - uniform()));
        const double angle = 2.0 * std::numbers::pi * uniform();
        spare = radius * std::sin(angle);
        have_spare = true;
        return radius * std::cos(angle);
    };

    GeneratedData out;
    out.data.n = spec.n;
    out.data.d = spec.d;
    out.data.points.resize(spec.n * spec.d);
    out.labels.labels.resize(spec.n);
    out.labels.class_count = static_cast<int>(spec.k);
    for (std::size_t c = 0; c < spec.k; ++c) out.labels.names.push_back(std::to_string(c));
    for (std::size_t i = 0; i < spec.n; ++i) {
        const std::size_t c = i % spec.k;
        out.labels.labels[i] = static_cast<int>(c);
        for (std::size_t j = 0; j < spec.d; ++j)
            out.data.points[i * spec.d + j] = centers[c * spec.d + j] + spec.spread * gaussian();
    }
    return out;
}

}  // namespace isoclust
