#include "iadmm/data.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

namespace iadmm {

namespace {

std::string stem_of(const std::string& path) {
    const auto slash = path.find_last_of("/\\");
    std::string base = (slash == std::string::npos) ? path : path.substr(slash + 1);
    const auto dot = base.find_last_of('.');
    if (dot != std::string::npos && dot > 0) {
        base = base.substr(0, dot);
    }
    return base;
}

bool is_blank(const std::string& s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

double parse_number(const std::string& token, const std::string& path, long line) {
    const char* begin = token.c_str();
    char* end = nullptr;
    errno = 0;
    const double value = std::strtod(begin, &end);
    while (end && *end != '\0' && std::isspace(static_cast<unsigned char>(*end))) {
        ++end;
    }
    if (end == begin || (end && *end != '\0')) {
        throw ParseError(path, line, "not a number: '" + token + "'");
    }
    if (!std::isfinite(value)) {
        throw ParseError(path, line, "non-finite value: '" + token + "'");
    }
    return value;
}

}  // namespace

ParseError::ParseError(std::string path, long line, const std::string& what)
    : std::runtime_error(path + (line > 0 ? ":" + std::to_string(line) : "") + ": " + what),
      path_(std::move(path)),
      line_(line) {}

Dataset load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError(path, 0, "cannot open file");
    }
    std::vector<std::vector<double>> rows;
    std::string line_text;
    long line_no = 0;
    std::size_t width = 0;
    while (std::getline(in, line_text)) {
        ++line_no;
        if (is_blank(line_text)) {
            continue;
        }
        std::vector<double> row;
        std::stringstream ss(line_text);
        std::string token;
        while (std::getline(ss, token, ',')) {
            row.push_back(parse_number(token, path, line_no));
        }
        if (line_text.back() == ',') {
            throw ParseError(path, line_no, "trailing comma");
        }
        if (row.size() < 2) {
            throw ParseError(path, line_no, "need at least one feature column plus the response");
        }
        if (width == 0) {
            width = row.size();
        } else if (row.size() != width) {
            throw ParseError(path, line_no,
                             "expected " + std::to_string(width) + " columns, got " + std::to_string(row.size()));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw ParseError(path, 0, "no data rows");
    }
    const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
    const Eigen::Index d = static_cast<Eigen::Index>(width) - 1;
    Eigen::MatrixXd A(n, d);
    Eigen::VectorXd b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            A(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
        b[i] = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(d)];
    }
    return Dataset{stem_of(path), std::move(A), Vec(std::move(b))};
}

Dataset load_libsvm(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError(path, 0, "cannot open file");
    }
    struct Entry {
        long row;
        long col;  // 0-based
        double value;
    };
    std::vector<Entry> entries;
    std::vector<double> labels;
    std::string line_text;
    long line_no = 0;
    long max_col = -1;
    while (std::getline(in, line_text)) {
        ++line_no;
        if (is_blank(line_text)) {
            continue;
        }
        std::stringstream ss(line_text);
        std::string token;
        if (!(ss >> token)) {
            continue;
        }
        const long row = static_cast<long>(labels.size());
        labels.push_back(parse_number(token, path, line_no));
        while (ss >> token) {
            const auto colon = token.find(':');
            if (colon == std::string::npos || colon == 0 || colon + 1 == token.size()) {
                throw ParseError(path, line_no, "malformed feature 'index:value' pair: '" + token + "'");
            }
            const std::string idx_text = token.substr(0, colon);
            char* end = nullptr;
            const long idx = std::strtol(idx_text.c_str(), &end, 10);
            if (end == idx_text.c_str() || *end != '\0' || idx < 1) {
                throw ParseError(path, line_no, "feature index must be a positive integer: '" + idx_text + "'");
            }
            const double value = parse_number(token.substr(colon + 1), path, line_no);
            entries.push_back({row, idx - 1, value});
            max_col = std::max(max_col, idx - 1);
        }
    }
    if (labels.empty()) {
        throw ParseError(path, 0, "no data rows");
    }
    if (max_col < 0) {
        throw ParseError(path, 0, "no features present in any row");
    }
    const Eigen::Index n = static_cast<Eigen::Index>(labels.size());
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, max_col + 1);
    Eigen::VectorXd b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        b[i] = labels[static_cast<std::size_t>(i)];
    }
    for (const auto& e : entries) {
        A(e.row, e.col) = e.value;
    }
    return Dataset{stem_of(path), std::move(A), Vec(std::move(b))};
}

Preprocessed preprocess(Dataset data) {
    Preprocessed out;
    out.data = std::move(data);
    Eigen::MatrixXd& A = out.data.A;
    bool any_nonzero = false;
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
        const double norm = A.col(j).norm();
        if (norm == 0.0) {
            out.zero_columns.push_back(j);
        } else {
            A.col(j) /= norm;
            any_nonzero = true;
        }
    }
    if (!any_nonzero) {
        throw ConfigError("preprocess: design matrix is identically zero");
    }
    const double b_norm = out.data.b.norm();
    if (b_norm > 0.0) {
        out.data.b = (1.0 / b_norm) * out.data.b;
    }
    out.nu = 0.1 * Vec(A.transpose() * out.data.b.data()).linf_norm();
    if (!(out.nu > 0.0)) {
        throw ConfigError("preprocess: A'b is zero, the derived penalty weight would vanish");
    }
    return out;
}

SyntheticInstance gen_synthetic(const SyntheticSpec& spec) {
    if (spec.n < 1 || spec.d < 1) {
        throw ConfigError("gen_synthetic: dimensions must be at least 1");
    }
    if (!(spec.sparsity >= 0.0 && spec.sparsity <= 1.0)) {
        throw ConfigError("gen_synthetic: sparsity must lie in [0, 1]");
    }
    if (!(spec.noise_sd >= 0.0) || !std::isfinite(spec.noise_sd)) {
        throw ConfigError("gen_synthetic: noise_sd must be nonnegative and finite");
    }
    std::mt19937_64 rng(spec.seed);
    // Uniform and normal draws are produced by hand (Box-Muller) instead of
    // through std::*_distribution, whose output differs across standard
    // libraries for the same seed.
    auto uniform = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    bool have_spare = false;
    double spare = 0.0;
    auto normal = [&]() {
        if (have_spare) {
            have_spare = false;
            return spare;
        }
        double u1 = uniform();
        while (u1 <= 0.0) {
            u1 = uniform();
        }
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double phi = 2.0 * M_PI * uniform();
        spare = r * std::sin(phi);
        have_spare = true;
        return r * std::cos(phi);
    };

    Eigen::MatrixXd A(spec.n, spec.d);
    for (Eigen::Index i = 0; i < spec.n; ++i) {
        for (Eigen::Index j = 0; j < spec.d; ++j) {
            A(i, j) = normal();
        }
    }

    const Eigen::Index k = static_cast<Eigen::Index>(std::ceil(spec.sparsity * static_cast<double>(spec.d)));
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(spec.d));
    for (Eigen::Index j = 0; j < spec.d; ++j) {
        perm[static_cast<std::size_t>(j)] = j;
    }
    for (Eigen::Index j = spec.d - 1; j > 0; --j) {
        const auto r = static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(j + 1));
        std::swap(perm[static_cast<std::size_t>(j)], perm[static_cast<std::size_t>(r)]);
    }
    Eigen::VectorXd x_true = Eigen::VectorXd::Zero(spec.d);
    for (Eigen::Index i = 0; i < k; ++i) {
        const double sign = (uniform() < 0.5) ? -1.0 : 1.0;
        // Magnitudes bounded away from zero keep the support unambiguous.
        x_true[perm[static_cast<std::size_t>(i)]] = sign * (1.0 + std::abs(normal()));
    }

    Eigen::VectorXd noise(spec.n);
    for (Eigen::Index i = 0; i < spec.n; ++i) {
        noise[i] = spec.noise_sd * normal();
    }
    Eigen::VectorXd b = A * x_true + noise;

    std::ostringstream name;
    name << "synthetic-n" << spec.n << "-d" << spec.d << "-s" << spec.seed;
    return SyntheticInstance{Dataset{name.str(), std::move(A), Vec(std::move(b))}, Vec(std::move(x_true))};
}

}  // namespace iadmm
