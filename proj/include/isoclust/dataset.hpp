#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace isoclust {

/// n points in d dimensions, stored row-major.
struct DataSet {
    std::size_t n = 0;
    std::size_t d = 0;
    std::vector<double> points;

    std::span<const double> row(std::size_t i) const { return {points.data() + i * d, d}; }
    double at(std::size_t i, std::size_t j) const { return points[i * d + j]; }

    bool operator==(const DataSet&) const = default;
};

/// Class identifiers mapped to 0..class_count-1 in order of first appearance.
/// names[c] keeps the original identifier text of class c.
struct ClassLabels {
    std::vector<int> labels;
    int class_count = 0;
    std::vector<std::string> names;
};

/// Parse failure carrying a 1-based row and column (0 when not applicable).
class DataError : public std::runtime_error {
public:
    DataError(const std::string& what, std::size_t row = 0, std::size_t column = 0);

    std::size_t row() const noexcept { return row_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

enum class TextFormat { csv, whitespace };

struct LoadOptions {
    TextFormat format = TextFormat::csv;
    std::optional<std::size_t> label_column;  // 0-based
    bool header = false;
};

struct LoadedData {
    DataSet data;
    std::optional<ClassLabels> labels;
};

LoadedData parse_points(std::istream& in, const LoadOptions& options);
LoadedData load_points(const std::filesystem::path& path, const LoadOptions& options);

/// One identifier per line; blank lines are skipped.
ClassLabels parse_labels(std::istream& in);
ClassLabels load_labels(const std::filesystem::path& path);

/// Shortest round-trip decimal representation of every coordinate.
void write_points(std::ostream& out, const DataSet& data, TextFormat format = TextFormat::csv);

/// In-place per-column z-scoring (population standard deviation). Constant
/// columns become all zeros.
void standardize(DataSet& data);

struct GeneratorSpec {
    std::size_t n = 0;
    std::size_t d = 0;
    std::size_t k = 1;
    std::uint64_t seed = 0;
    double spread = 1.0;
};

struct GeneratedData {
    DataSet data;
    ClassLabels labels;
};

/// Synthetic Gaussian blobs.
///
/// The stream is std::mt19937_64 seeded with `seed`. A uniform double in
/// [0, 1) is (draw >> 11) * 2^-53. The k centers are drawn first, coordinate
/// by coordinate, as 10 * uniform. Point i belongs to center i mod k and its
/// coordinates are center + spread * z, where z comes from the Box-Muller
/// transform: each pair (u1, u2) yields sqrt(-2 ln(1 - u1)) * cos(2 pi u2)
/// and then the matching sine term, consumed in that order.
GeneratedData generate_random(const GeneratorSpec& spec);

}  // namespace isoclust
