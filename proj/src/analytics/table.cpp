#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "mprad/analytics.hpp"
#include "mprad/error.hpp"
#include "mprad/io.hpp"

namespace mprad::analytics {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return cells;
}

double parse_number(std::string_view s, std::size_t line, std::string_view column) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw Error(Errc::parse, "line " + std::to_string(line) + ": column \"" + std::string(column) +
                                     "\" has non-numeric value \"" + std::string(s) + "\"");
    }
    return v;
}

}  // namespace

int parse_label(std::string_view text) {
    std::string s(trim(text));
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (s == "1" || s == "positive" || s == "pos" || s == "true") return 1;
    if (s == "0" || s == "negative" || s == "neg" || s == "false") return 0;
    throw Error(Errc::parse, "unrecognised class label \"" + std::string(text) + "\"");
}

FeatureTable parse_feature_table(std::string_view csv, std::string_view label_column, std::string_view id_column) {
    FeatureTable table;
    std::size_t line_no = 0, pos = 0;
    std::vector<std::string_view> header;
    std::ptrdiff_t label_idx = -1, id_idx = -1;
    std::vector<std::size_t> feature_idx;
    while (pos < csv.size()) {
        std::size_t end = csv.find('\n', pos);
        if (end == std::string_view::npos) end = csv.size();
        const std::string_view line = trim(csv.substr(pos, end - pos));
        pos = end + 1;
        ++line_no;
        if (line.empty()) continue;
        auto cells = split(line);
        if (header.empty()) {
            header = cells;
            for (std::size_t i = 0; i < header.size(); ++i) {
                if (header[i] == label_column) label_idx = static_cast<std::ptrdiff_t>(i);
                else if (header[i] == id_column) id_idx = static_cast<std::ptrdiff_t>(i);
                else {
                    feature_idx.push_back(i);
                    table.feature_names.emplace_back(header[i]);
                }
            }
            if (label_idx < 0) throw Error(Errc::parse, "feature table has no \"" + std::string(label_column) + "\" column");
            continue;
        }
        if (cells.size() != header.size()) {
            throw Error(Errc::parse, "line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                                         " fields, header has " + std::to_string(header.size()));
        }
        table.labels.push_back(parse_label(cells[static_cast<std::size_t>(label_idx)]));
        table.subject_ids.emplace_back(id_idx >= 0 ? std::string(cells[static_cast<std::size_t>(id_idx)])
                                                   : std::to_string(table.rows.size() + 1));
        std::vector<double> row;
        row.reserve(feature_idx.size());
        for (std::size_t i : feature_idx) row.push_back(parse_number(cells[i], line_no, header[i]));
        table.rows.push_back(std::move(row));
    }
    if (header.empty()) throw Error(Errc::parse, "feature table is empty");
    return table;
}

FeatureTable read_feature_table(const std::filesystem::path& path, std::string_view label_column,
                                std::string_view id_column) {
    return parse_feature_table(io::read_text_file(path), label_column, id_column);
}

std::string feature_table_csv(const FeatureTable& table) {
    std::string out = "subject_id,label";
    for (const auto& name : table.feature_names) out += "," + name;
    out += '\n';
    char buf[32];
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        out += table.subject_ids[i];
        out += table.labels[i] == 1 ? ",1" : ",0";
        for (double v : table.rows[i]) {
            std::snprintf(buf, sizeof buf, ",%.17g", v);
            out += buf;
        }
        out += '\n';
    }
    return out;
}

std::vector<double> FeatureTable::column(std::string_view name) const {
    const auto it = std::find(feature_names.begin(), feature_names.end(), name);
    if (it == feature_names.end()) throw Error(Errc::invalid_argument, "no feature column \"" + std::string(name) + "\"");
    const auto j = static_cast<std::size_t>(it - feature_names.begin());
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) out.push_back(row[j]);
    return out;
}

Eigen::MatrixXd FeatureTable::matrix() const {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(feature_names.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < feature_names.size(); ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return m;
}

}  // namespace mprad::analytics
