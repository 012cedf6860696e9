#include "restrictml/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "restrictml/rng.hpp"

namespace restrictml {

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_double(const std::string& text, std::size_t line_no) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ParseError("invalid numeric field '" + text + "'", line_no);
    }
}

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

// Half-up rounding of size * ratio for the true-class quota.
std::size_t true_quota(std::size_t size, double ratio) {
    return static_cast<std::size_t>(std::floor(static_cast<double>(size) * ratio + 0.5));
}

}  // namespace

std::size_t LabeledDataset::true_count() const {
    std::size_t n = 0;
    for (const FeatureVector& fv : rows) {
        if (fv.label.value_or(false)) ++n;
    }
    return n;
}

std::size_t LabeledDataset::false_count() const { return rows.size() - true_count(); }

std::pair<LabeledDataset, LabeledDataset> stratified_sample(const LabeledDataset& pool,
                                                            const SplitSpec& spec) {
    if (spec.train_true_ratio < 0.0 || spec.train_true_ratio > 1.0 ||
        spec.test_true_ratio < 0.0 || spec.test_true_ratio > 1.0) {
        throw ValueError("class ratios must lie in [0, 1]");
    }

    std::vector<std::size_t> trues;
    std::vector<std::size_t> falses;
    for (std::size_t i = 0; i < pool.rows.size(); ++i) {
        if (!pool.rows[i].label.has_value()) {
            throw ValueError("pool row " + std::to_string(i) + " has no label");
        }
        (*pool.rows[i].label ? trues : falses).push_back(i);
    }

    const std::size_t train_true = true_quota(spec.train_size, spec.train_true_ratio);
    const std::size_t train_false = spec.train_size - train_true;
    const std::size_t test_true = true_quota(spec.test_size, spec.test_true_ratio);
    const std::size_t test_false = spec.test_size - test_true;

    if (trues.size() < train_true + test_true) {
        throw ValueError("insufficient true-class entries: need " +
                         std::to_string(train_true + test_true) + ", pool has " +
                         std::to_string(trues.size()));
    }
    if (falses.size() < train_false + test_false) {
        throw ValueError("insufficient false-class entries: need " +
                         std::to_string(train_false + test_false) + ", pool has " +
                         std::to_string(falses.size()));
    }

    Rng rng(spec.seed);
    rng.shuffle(trues);
    rng.shuffle(falses);

    auto take = [&pool](const std::vector<std::size_t>& trues_src,
                        const std::vector<std::size_t>& falses_src,
                        std::size_t true_offset, std::size_t n_true,
                        std::size_t false_offset, std::size_t n_false) {
        LabeledDataset out;
        out.seq_width = pool.seq_width;
        out.rows.reserve(n_true + n_false);
        for (std::size_t i = 0; i < n_true; ++i) {
            out.rows.push_back(pool.rows[trues_src[true_offset + i]]);
        }
        for (std::size_t i = 0; i < n_false; ++i) {
            out.rows.push_back(pool.rows[falses_src[false_offset + i]]);
        }
        return out;
    };

    LabeledDataset train = take(trues, falses, 0, train_true, 0, train_false);
    LabeledDataset test =
        take(trues, falses, train_true, test_true, train_false, test_false);
    return {std::move(train), std::move(test)};
}

std::vector<std::string> feature_column_names(std::size_t width) {
    std::vector<std::string> names;
    names.reserve(feature_column_count(width));
    for (std::size_t i = 1; i <= width; ++i) names.push_back("n" + std::to_string(i));
    for (const char* name : {"len", "pa", "pt", "pc", "pg", "rpa", "rpt", "rpc", "rpg",
                             "r1s", "r2s", "r1r", "r2r", "c", "ezy"}) {
        names.push_back(name);
    }
    return names;
}

namespace {

void fill_feature_row(const FeatureVector& fv, std::span<double> row) {
    std::size_t k = 0;
    for (const double v : fv.seq_encoded) row[k++] = v;
    row[k++] = fv.len;
    for (const double v : fv.sub_props) row[k++] = v;
    for (const double v : fv.ref_props) row[k++] = v;
    row[k++] = fv.sub_r1;
    row[k++] = fv.sub_r2;
    row[k++] = fv.ref_r1;
    row[k++] = fv.ref_r2;
    row[k++] = fv.c;
    row[k++] = fv.ezy;
}

}  // namespace

Matrix feature_matrix(const LabeledDataset& data) {
    Matrix m(data.rows.size(), feature_column_count(data.seq_width));
    for (std::size_t r = 0; r < data.rows.size(); ++r) {
        fill_feature_row(data.rows[r], m.row(r));
    }
    return m;
}

std::vector<int> labels01(const LabeledDataset& data) {
    std::vector<int> y(data.rows.size());
    for (std::size_t r = 0; r < data.rows.size(); ++r) {
        if (!data.rows[r].label.has_value()) {
            throw ValueError("row " + std::to_string(r) + " has no label");
        }
        y[r] = *data.rows[r].label ? 1 : 0;
    }
    return y;
}

Matrix seq_matrix(const LabeledDataset& data) {
    Matrix m(data.rows.size(), data.seq_width);
    for (std::size_t r = 0; r < data.rows.size(); ++r) {
        const auto& enc = data.rows[r].seq_encoded;
        std::copy(enc.begin(), enc.end(), m.row(r).begin());
    }
    return m;
}

Matrix correlation_matrix(const LabeledDataset& data) {
    if (data.rows.size() < 2) {
        throw ValueError("correlation requires at least 2 rows");
    }
    const Matrix x = feature_matrix(data);
    const std::size_t n = x.rows;
    const std::size_t d = x.cols;

    std::vector<double> mean(d, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < d; ++c) mean[c] += x.at(r, c);
    }
    for (double& m : mean) m /= static_cast<double>(n);

    // Centered second moments in one pass over the rows.
    Matrix cov(d, d);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t i = 0; i < d; ++i) {
            const double xi = x.at(r, i) - mean[i];
            for (std::size_t j = i; j < d; ++j) {
                cov.at(i, j) += xi * (x.at(r, j) - mean[j]);
            }
        }
    }

    Matrix corr(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        corr.at(i, i) = 1.0;
        for (std::size_t j = i + 1; j < d; ++j) {
            const double denom = std::sqrt(cov.at(i, i) * cov.at(j, j));
            const double value = denom > 0.0 ? cov.at(i, j) / denom : 0.0;
            corr.at(i, j) = value;
            corr.at(j, i) = value;
        }
    }
    return corr;
}

std::vector<std::pair<std::size_t, std::size_t>> redundant_pairs(const Matrix& corr,
                                                                 double threshold) {
    if (corr.rows != corr.cols) {
        throw ValueError("correlation matrix must be square");
    }
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < corr.rows; ++i) {
        for (std::size_t j = i + 1; j < corr.cols; ++j) {
            if (std::fabs(corr.at(i, j)) > threshold) {
                pairs.emplace_back(i, j);
            }
        }
    }
    return pairs;
}

void save_dataset_csv(const LabeledDataset& data, std::ostream& out) {
    const auto names = feature_column_names(data.seq_width);
    for (const auto& name : names) out << name << ',';
    out << "label\n";

    std::vector<double> row(feature_column_count(data.seq_width));
    for (const FeatureVector& fv : data.rows) {
        if (!fv.label.has_value()) {
            throw ValueError("cannot persist an unlabeled row");
        }
        fill_feature_row(fv, row);
        for (const double v : row) out << format_double(v) << ',';
        out << (*fv.label ? 1 : 0) << '\n';
    }
}

void save_dataset_csv(const LabeledDataset& data, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open for writing: " + path);
    }
    save_dataset_csv(data, out);
    if (!out) {
        throw IoError("write failed: " + path);
    }
}

LabeledDataset load_dataset_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line)) {
        throw ParseError("dataset CSV is empty");
    }
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_commas(line);

    // Width is recovered from the n1..nW prefix.
    std::size_t width = 0;
    while (width < header.size() && header[width] == "n" + std::to_string(width + 1)) {
        ++width;
    }
    const auto expected = feature_column_names(width);
    if (header.size() != expected.size() + 1 || header.back() != "label" ||
        !std::equal(expected.begin(), expected.end(), header.begin())) {
        throw ParseError("dataset CSV header does not match the expected schema", 1);
    }

    LabeledDataset data;
    data.seq_width = width;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_commas(line);
        if (fields.size() != header.size()) {
            throw ParseError("expected " + std::to_string(header.size()) +
                             " fields, got " + std::to_string(fields.size()), line_no);
        }
        FeatureVector fv;
        std::size_t k = 0;
        fv.seq_encoded.resize(width);
        for (std::size_t i = 0; i < width; ++i) {
            fv.seq_encoded[i] = parse_double(fields[k++], line_no);
        }
        fv.len = static_cast<std::uint32_t>(parse_double(fields[k++], line_no));
        for (double& v : fv.sub_props) v = parse_double(fields[k++], line_no);
        for (double& v : fv.ref_props) v = parse_double(fields[k++], line_no);
        fv.sub_r1 = parse_double(fields[k++], line_no);
        fv.sub_r2 = parse_double(fields[k++], line_no);
        fv.ref_r1 = parse_double(fields[k++], line_no);
        fv.ref_r2 = parse_double(fields[k++], line_no);
        fv.c = static_cast<std::uint32_t>(parse_double(fields[k++], line_no));
        fv.ezy = static_cast<std::uint32_t>(parse_double(fields[k++], line_no));
        const std::string& label = fields[k];
        if (label == "0") {
            fv.label = false;
        } else if (label == "1") {
            fv.label = true;
        } else {
            throw ParseError("label must be 0 or 1, got '" + label + "'", line_no);
        }
        data.rows.push_back(std::move(fv));
    }
    return data;
}

LabeledDataset load_dataset_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open dataset: " + path);
    }
    return load_dataset_csv(in);
}

}  // namespace restrictml
