#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace disct {

enum class ColumnKind { Continuous, Discretized };

// Columns inferred as Discretized when they carry at most this many
// distinct values (CSV loading without declared kinds).
inline constexpr std::size_t kDiscreteDistinctMax = 20;

// Zero-mean, unit-variance rescale (variance denominator n).
// Throws DegenerateColumn when the column is constant.
std::vector<double> standardize(const std::vector<double>& v);

// Column-major sample table. Continuous columns are standardized on
// construction; discretized columns keep their level codes untouched.
class DataMatrix {
public:
    DataMatrix(std::vector<std::vector<double>> columns, std::vector<ColumnKind> kinds,
               std::vector<std::string> names);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return columns_.size(); }

    const std::vector<double>& column(std::size_t j) const;
    ColumnKind kind(std::size_t j) const;
    const std::string& name(std::size_t j) const;

    // index of a named column; throws InvalidArgument when absent
    std::size_t column_index(const std::string& name) const;

    const std::vector<std::string>& names() const { return names_; }

private:
    std::vector<std::vector<double>> columns_;
    std::vector<ColumnKind> kinds_;
    std::vector<std::string> names_;
    std::size_t rows_ = 0;
};

// Loads a headered numeric CSV. When discrete_cols is set, exactly those
// columns become Discretized; otherwise kinds are inferred from the
// distinct-value count. Missing or non-numeric cells are rejected.
DataMatrix load_csv(const std::string& path,
                    const std::optional<std::vector<std::string>>& discrete_cols);

void write_csv(const DataMatrix& data, const std::string& path);

} // namespace disct
