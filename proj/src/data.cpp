#include "data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "error.hpp"

namespace disct {

std::vector<double> standardize(const std::vector<double>& v) {
    if (v.empty()) fail(ErrorCode::Shape, "standardize: empty column");
    const double n = static_cast<double>(v.size());
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / n);
    if (!(sd > 1e-12)) fail(ErrorCode::DegenerateColumn, "standardize: zero-variance column");
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - mean) / sd;
    return out;
}

DataMatrix::DataMatrix(std::vector<std::vector<double>> columns, std::vector<ColumnKind> kinds,
                       std::vector<std::string> names)
    : columns_(std::move(columns)), kinds_(std::move(kinds)), names_(std::move(names)) {
    if (columns_.empty()) fail(ErrorCode::Shape, "data must have at least one column");
    if (kinds_.size() != columns_.size() || names_.size() != columns_.size())
        fail(ErrorCode::Shape, "kinds/names do not match column count");
    rows_ = columns_[0].size();
    if (rows_ < 2) fail(ErrorCode::Shape, "data must have at least two rows");
    for (const auto& c : columns_)
        if (c.size() != rows_) fail(ErrorCode::Shape, "ragged columns");
    for (std::size_t j = 0; j < columns_.size(); ++j)
        if (kinds_[j] == ColumnKind::Continuous) columns_[j] = standardize(columns_[j]);
}

const std::vector<double>& DataMatrix::column(std::size_t j) const {
    if (j >= columns_.size()) fail(ErrorCode::InvalidArgument, "column index out of range");
    return columns_[j];
}

ColumnKind DataMatrix::kind(std::size_t j) const {
    if (j >= kinds_.size()) fail(ErrorCode::InvalidArgument, "column index out of range");
    return kinds_[j];
}

const std::string& DataMatrix::name(std::size_t j) const {
    if (j >= names_.size()) fail(ErrorCode::InvalidArgument, "column index out of range");
    return names_[j];
}

std::size_t DataMatrix::column_index(const std::string& name) const {
    const auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) fail(ErrorCode::InvalidArgument, "no column named '" + name + "'");
    return static_cast<std::size_t>(it - names_.begin());
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    for (auto& s : out) {
        const auto b = s.find_first_not_of(" \t");
        const auto e = s.find_last_not_of(" \t");
        s = (b == std::string::npos) ? std::string() : s.substr(b, e - b + 1);
    }
    return out;
}

double parse_cell(const std::string& s, std::size_t row, std::size_t col) {
    if (s.empty())
        fail(ErrorCode::Parse, "missing value at row " + std::to_string(row) + ", column " +
                                   std::to_string(col));
    const char* begin = s.data();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end != begin + s.size() || !std::isfinite(v))
        fail(ErrorCode::Parse,
             "bad numeric cell '" + s + "' at row " + std::to_string(row));
    return v;
}

} // namespace

DataMatrix load_csv(const std::string& path,
                    const std::optional<std::vector<std::string>>& discrete_cols) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::Io, "cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) fail(ErrorCode::Parse, "empty file '" + path + "'");
    const std::vector<std::string> names = split_csv_line(line);
    for (const auto& nm : names)
        if (nm.empty()) fail(ErrorCode::Parse, "empty column name in header");

    std::vector<std::vector<double>> columns(names.size());
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++row;
        const auto cells = split_csv_line(line);
        if (cells.size() != names.size())
            fail(ErrorCode::Parse, "row " + std::to_string(row) + " has " +
                                       std::to_string(cells.size()) + " cells, expected " +
                                       std::to_string(names.size()));
        for (std::size_t j = 0; j < cells.size(); ++j)
            columns[j].push_back(parse_cell(cells[j], row, j));
    }
    if (row == 0) fail(ErrorCode::Parse, "no data rows in '" + path + "'");

    std::vector<ColumnKind> kinds(names.size(), ColumnKind::Continuous);
    if (discrete_cols) {
        std::set<std::string> declared(discrete_cols->begin(), discrete_cols->end());
        for (const auto& d : declared)
            if (std::find(names.begin(), names.end(), d) == names.end())
                fail(ErrorCode::InvalidArgument, "declared discrete column '" + d + "' not in header");
        for (std::size_t j = 0; j < names.size(); ++j)
            if (declared.count(names[j])) kinds[j] = ColumnKind::Discretized;
    } else {
        for (std::size_t j = 0; j < names.size(); ++j) {
            std::set<double> distinct(columns[j].begin(), columns[j].end());
            if (distinct.size() <= kDiscreteDistinctMax) kinds[j] = ColumnKind::Discretized;
        }
    }
    return DataMatrix(std::move(columns), std::move(kinds), std::move(names));
}

void write_csv(const DataMatrix& data, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail(ErrorCode::Io, "cannot write '" + path + "'");
    for (std::size_t j = 0; j < data.cols(); ++j)
        out << (j ? "," : "") << data.name(j);
    out << "\n";
    std::ostringstream num;
    num.precision(17);
    for (std::size_t i = 0; i < data.rows(); ++i) {
        for (std::size_t j = 0; j < data.cols(); ++j) {
            num.str("");
            num << data.column(j)[i];
            out << (j ? "," : "") << num.str();
        }
        out << "\n";
    }
    if (!out) fail(ErrorCode::Io, "write failed for '" + path + "'");
}

} // namespace disct
