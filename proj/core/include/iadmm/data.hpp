#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "iadmm/spaces.hpp"

namespace iadmm {

/// Regression instance: n x d design matrix plus right-hand side.
struct Dataset {
    std::string name;
    Eigen::MatrixXd A;
    Vec b = Vec::zeros(1);

    Eigen::Index rows() const { return A.rows(); }
    Eigen::Index cols() const { return A.cols(); }
};

/// Raised by the file loaders; carries the path and 1-based line number
/// (0 when the failure is not tied to a particular line).
class ParseError : public std::runtime_error {
public:
    ParseError(std::string path, long line, const std::string& what);

    const std::string& path() const { return path_; }
    long line() const { return line_; }

private:
    std::string path_;
    long line_;
};

/// Comma-separated numeric table; the last column is the right-hand side,
/// the rest form the design matrix. Blank lines are skipped.
Dataset load_csv(const std::string& path);

/// Sparse "label index:value ..." rows with 1-based indices; the label
/// column becomes the right-hand side and absent indices are zero.
Dataset load_libsvm(const std::string& path);

struct Preprocessed {
    Dataset data;
    double nu = 0.0;
    std::vector<Eigen::Index> zero_columns;  // left untouched by scaling
};

/// Scales every nonzero column of A and the right-hand side to unit length,
/// then sets nu = 0.1 ||A'b||_inf on the scaled instance. Errors when A is
/// identically zero or the resulting nu would vanish.
Preprocessed preprocess(Dataset data);

struct SyntheticSpec {
    Eigen::Index n = 50;
    Eigen::Index d = 100;
    double sparsity = 0.1;  // fraction of ground-truth nonzeros, ceil(sparsity * d)
    double noise_sd = 0.05;
    std::uint64_t seed = 1;
};

struct SyntheticInstance {
    Dataset data;
    Vec x_true = Vec::zeros(1);
};

/// Gaussian design with a sparse ground truth and additive noise. The
/// generator is seeded and self-contained so instances are identical across
/// platforms and standard-library versions.
SyntheticInstance gen_synthetic(const SyntheticSpec& spec);

}  // namespace iadmm
