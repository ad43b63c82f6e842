#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "helpers.hpp"
#include "iadmm/data.hpp"

using namespace iadmm;

namespace {

// Writes content to a unique temp file and removes it on scope exit.
struct TempFile {
    std::filesystem::path path;

    TempFile(const std::string& tag, const std::string& content) {
        path = std::filesystem::temp_directory_path() / ("iadmm_test_" + tag + ".txt");
        std::ofstream out(path);
        out << content;
    }
    ~TempFile() {
        std::error_code ec;
        std::filesystem::remove(path, ec);
    }
    std::string str() const { return path.string(); }
};

}  // namespace

TEST_SUITE("data") {

TEST_CASE("csv loading") {
    SUBCASE("values land in the right places") {
        const TempFile f("csv_ok", "1.0,2.0,3.0\n4.0,5.0,6.0\n\n7,8,9\n");
        const Dataset ds = load_csv(f.str());
        CHECK(ds.rows() == 3);
        CHECK(ds.cols() == 2);
        CHECK(ds.A(0, 0) == 1.0);
        CHECK(ds.A(1, 1) == 5.0);
        CHECK(ds.A(2, 0) == 7.0);
        CHECK(ds.b[0] == 3.0);
        CHECK(ds.b[2] == 9.0);
        CHECK(ds.name == "iadmm_test_csv_ok");
    }
    SUBCASE("whitespace and scientific notation are fine") {
        const TempFile f("csv_ws", " 1e-2 , -3.5E+1 , 0.0\n");
        const Dataset ds = load_csv(f.str());
        CHECK(ds.A(0, 0) == 0.01);
        CHECK(ds.A(0, 1) == -35.0);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_csv("/nonexistent/path.csv"), ParseError);
    }
    SUBCASE("empty file") {
        const TempFile f("csv_empty", "\n\n");
        CHECK_THROWS_AS(load_csv(f.str()), ParseError);
    }
    SUBCASE("ragged rows point at the offending line") {
        const TempFile f("csv_ragged", "1,2,3\n4,5\n");
        try {
            load_csv(f.str());
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 2);
            CHECK(std::string(e.what()).find(":2:") != std::string::npos);
        }
    }
    SUBCASE("non-numeric tokens are rejected with their line") {
        const TempFile f("csv_alpha", "1,2,3\n1,x,3\n");
        try {
            load_csv(f.str());
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 2);
        }
    }
    SUBCASE("non-finite values are rejected") {
        const TempFile f("csv_inf", "1,inf,3\n");
        CHECK_THROWS_AS(load_csv(f.str()), ParseError);
    }
    SUBCASE("a single column cannot split into features and response") {
        const TempFile f("csv_single", "1\n2\n");
        CHECK_THROWS_AS(load_csv(f.str()), ParseError);
    }
}

TEST_CASE("libsvm loading") {
    SUBCASE("sparse entries expand against a zero background") {
        const TempFile f("svm_ok", "1.5 1:2.0 3:4.0\n-0.5 2:1.0\n");
        const Dataset ds = load_libsvm(f.str());
        CHECK(ds.rows() == 2);
        CHECK(ds.cols() == 3);
        CHECK(ds.b[0] == 1.5);
        CHECK(ds.b[1] == -0.5);
        CHECK(ds.A(0, 0) == 2.0);
        CHECK(ds.A(0, 1) == 0.0);
        CHECK(ds.A(0, 2) == 4.0);
        CHECK(ds.A(1, 1) == 1.0);
    }
    SUBCASE("label-only rows are allowed when others carry features") {
        const TempFile f("svm_label_only", "1.0\n2.0 1:3.0\n");
        const Dataset ds = load_libsvm(f.str());
        CHECK(ds.rows() == 2);
        CHECK(ds.cols() == 1);
        CHECK(ds.A(0, 0) == 0.0);
    }
    SUBCASE("malformed pairs carry the line number") {
        const TempFile f("svm_pair", "1.0 1:2.0\n1.0 oops\n");
        try {
            load_libsvm(f.str());
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 2);
        }
    }
    SUBCASE("indices start at one") {
        const TempFile f("svm_zero_idx", "1.0 0:2.0\n");
        CHECK_THROWS_AS(load_libsvm(f.str()), ParseError);
    }
    SUBCASE("no features at all") {
        const TempFile f("svm_no_feat", "1.0\n2.0\n");
        CHECK_THROWS_AS(load_libsvm(f.str()), ParseError);
    }
}

TEST_CASE("preprocessing scales columns and derives the penalty") {
    Eigen::MatrixXd A(2, 1);
    A << 3.0, 4.0;
    Eigen::VectorXd b(2);
    b << 0.0, 5.0;
    const Preprocessed pre = preprocess(Dataset{"toy", A, Vec(b)});
    CHECK(pre.data.A(0, 0) == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(pre.data.A(1, 0) == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(pre.data.b[1] == doctest::Approx(1.0).epsilon(1e-15));
    // A'b = 0.8 after scaling, so nu = 0.08.
    CHECK(pre.nu == doctest::Approx(0.08).epsilon(1e-14));
    CHECK(pre.zero_columns.empty());
}

TEST_CASE("zero columns are flagged and left untouched") {
    Eigen::MatrixXd A(2, 3);
    A << 1.0, 0.0, 2.0, 1.0, 0.0, 0.0;
    Eigen::VectorXd b(2);
    b << 1.0, 1.0;
    const Preprocessed pre = preprocess(Dataset{"zc", A, Vec(b)});
    REQUIRE(pre.zero_columns.size() == 1);
    CHECK(pre.zero_columns[0] == 1);
    CHECK(pre.data.A.col(1).norm() == 0.0);
    CHECK(pre.data.A.col(0).norm() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("degenerate inputs are rejected") {
    Eigen::MatrixXd zeroA = Eigen::MatrixXd::Zero(2, 2);
    Eigen::VectorXd b(2);
    b << 1.0, 1.0;
    CHECK_THROWS_AS(preprocess(Dataset{"allzero", zeroA, Vec(b)}), ConfigError);

    Eigen::MatrixXd A(2, 1);
    A << 1.0, 0.0;
    Eigen::VectorXd zerob = Eigen::VectorXd::Zero(2);
    CHECK_THROWS_AS(preprocess(Dataset{"zerob", A, Vec(zerob)}), ConfigError);

    // b orthogonal to the column space also kills the derived penalty.
    Eigen::VectorXd orth(2);
    orth << 0.0, 1.0;
    CHECK_THROWS_AS(preprocess(Dataset{"orth", A, Vec(orth)}), ConfigError);
}

TEST_CASE("synthetic generation is deterministic and shaped as requested") {
    SyntheticSpec spec;
    spec.n = 8;
    spec.d = 12;
    spec.sparsity = 0.25;
    spec.noise_sd = 0.1;
    spec.seed = 77;
    const SyntheticInstance a = gen_synthetic(spec);
    const SyntheticInstance b = gen_synthetic(spec);
    CHECK((a.data.A - b.data.A).norm() == 0.0);
    CHECK((a.data.b - b.data.b).norm() == 0.0);
    CHECK((a.x_true - b.x_true).norm() == 0.0);
    CHECK(a.data.rows() == 8);
    CHECK(a.data.cols() == 12);
    CHECK(a.data.name == "synthetic-n8-d12-s77");

    int nonzeros = 0;
    for (Eigen::Index i = 0; i < 12; ++i) {
        if (a.x_true[i] != 0.0) {
            ++nonzeros;
            CHECK(std::abs(a.x_true[i]) >= 1.0);
        }
    }
    CHECK(nonzeros == 3);  // ceil(0.25 * 12)

    spec.seed = 78;
    const SyntheticInstance c = gen_synthetic(spec);
    CHECK((a.data.A - c.data.A).norm() > 0.0);
}

TEST_CASE("synthetic noise level zero reproduces the clean model") {
    SyntheticSpec spec;
    spec.n = 6;
    spec.d = 4;
    spec.sparsity = 0.5;
    spec.noise_sd = 0.0;
    spec.seed = 5;
    const SyntheticInstance inst = gen_synthetic(spec);
    const Eigen::VectorXd clean = inst.data.A * inst.x_true.data();
    CHECK((inst.data.b.data() - clean).norm() == 0.0);
}

TEST_CASE("synthetic parameter validation") {
    SyntheticSpec spec;
    spec.n = 0;
    CHECK_THROWS_AS(gen_synthetic(spec), ConfigError);
    spec.n = 5;
    spec.sparsity = 1.5;
    CHECK_THROWS_AS(gen_synthetic(spec), ConfigError);
    spec.sparsity = 0.5;
    spec.noise_sd = -1.0;
    CHECK_THROWS_AS(gen_synthetic(spec), ConfigError);
}

}  // TEST_SUITE
