#include "bistoch/csv.hpp"

#include <cstdio>
#include <istream>
#include <ostream>

#include "bistoch/errors.hpp"

namespace bistoch::csv {

std::string format(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::vector<std::string> split(std::string_view line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.emplace_back(line.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    for (auto& f : out) {
        while (!f.empty() && (f.back() == '\r' || f.back() == ' ')) f.pop_back();
        while (!f.empty() && f.front() == ' ') f.erase(f.begin());
    }
    return out;
}

double parse_double(const std::string& field) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(field, &used);
    } catch (const std::exception&) {
        throw DomainError("not a number: '" + field + "'");
    }
    if (used != field.size()) throw DomainError("not a number: '" + field + "'");
    return v;
}

namespace {

bool is_numeric_row(const std::vector<std::string>& fields) {
    for (const auto& f : fields) {
        try {
            parse_double(f);
        } catch (const DomainError&) {
            return false;
        }
    }
    return true;
}

}  // namespace

void write_matrix(std::ostream& out, const Matrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? ",c" : "c") << (j + 1);
    out << '\n';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << format(m(i, j));
        out << '\n';
    }
}

Matrix read_matrix(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        auto fields = split(line);
        if (first) {
            first = false;
            if (!is_numeric_row(fields)) continue;
        }
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& f : fields) row.push_back(parse_double(f));
        if (!rows.empty() && row.size() != rows.front().size())
            throw DomainError("ragged matrix CSV");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw DomainError("empty matrix CSV");
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    return m;
}

}  // namespace bistoch::csv
