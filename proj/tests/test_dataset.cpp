#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "predclusters/dataset.hpp"
#include "test_util.hpp"

using namespace predclusters;
namespace fs = std::filesystem;

TEST_CASE("csv loading splits features from the chosen outcome column") {
    const auto dir = testutil::fresh_dir("dataset");
    const auto path = dir / "small.csv";
    testutil::write_text(path, "a,b,c\n1,2,3\n4,5,6\n7,8,9\n");

    SUBCASE("last column by default") {
        const Dataset ds = load_csv(path.string(), TargetSelector::last());
        CHECK(ds.n() == 3);
        CHECK(ds.dims() == 2);
        CHECK(ds.outcome_name == "c");
        CHECK(ds.outcome_index == 2);
        CHECK(ds.feature_names == std::vector<std::string>{"a", "b"});
        CHECK(ds.features(1, 0) == 4.0);
        CHECK(ds.features(1, 1) == 5.0);
        CHECK(ds.outcome(2) == 9.0);
    }
    SUBCASE("by name keeps remaining columns in file order") {
        const Dataset ds = load_csv(path.string(), TargetSelector::by_name("a"));
        CHECK(ds.outcome_name == "a");
        CHECK(ds.outcome_index == 0);
        CHECK(ds.feature_names == std::vector<std::string>{"b", "c"});
        CHECK(ds.outcome(0) == 1.0);
        CHECK(ds.features(0, 0) == 2.0);
    }
    SUBCASE("by zero-based index") {
        const Dataset ds = load_csv(path.string(), TargetSelector::by_index(1));
        CHECK(ds.outcome_name == "b");
        CHECK(ds.outcome(1) == 5.0);
    }
}

TEST_CASE("selector strings parse as last, index, or name") {
    CHECK(TargetSelector::parse("last").kind == TargetSelector::Kind::Last);
    const auto idx = TargetSelector::parse("2");
    CHECK(idx.kind == TargetSelector::Kind::Index);
    CHECK(idx.index == 2);
    const auto name = TargetSelector::parse("y");
    CHECK(name.kind == TargetSelector::Kind::Name);
    CHECK(name.name == "y");
    // a negative number is not a column index, treat it as a name
    CHECK(TargetSelector::parse("-1").kind == TargetSelector::Kind::Name);
}

TEST_CASE("loader rejects broken input with precise errors") {
    const auto dir = testutil::fresh_dir("dataset_err");

    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_csv((dir / "nope.csv").string(), TargetSelector::last()),
                        FileNotFoundError);
    }
    SUBCASE("non-numeric cell reports row and column") {
        const auto path = dir / "bad.csv";
        testutil::write_text(path, "a,b\n1,2\n3,oops\n");
        try {
            load_csv(path.string(), TargetSelector::last());
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.row == 3);
            CHECK(e.col == 2);
        }
    }
    SUBCASE("ragged row") {
        const auto path = dir / "ragged.csv";
        testutil::write_text(path, "a,b\n1,2\n3\n");
        CHECK_THROWS_AS(load_csv(path.string(), TargetSelector::last()), ParseError);
    }
    SUBCASE("unknown target column") {
        const auto path = dir / "ok.csv";
        testutil::write_text(path, "a,b\n1,2\n3,4\n");
        CHECK_THROWS_AS(load_csv(path.string(), TargetSelector::by_name("zz")), TargetNotFoundError);
        CHECK_THROWS_AS(load_csv(path.string(), TargetSelector::by_index(5)), TargetNotFoundError);
    }
    SUBCASE("fewer than two rows") {
        const auto path = dir / "tiny.csv";
        testutil::write_text(path, "a,b\n1,2\n");
        CHECK_THROWS_AS(load_csv(path.string(), TargetSelector::last()), EmptyDatasetError);
    }
    SUBCASE("non-finite value") {
        const auto path = dir / "inf.csv";
        testutil::write_text(path, "a,b\n1,2\ninf,4\n");
        CHECK_THROWS_AS(load_csv(path.string(), TargetSelector::last()), ParseError);
    }
}

TEST_CASE("min-max rescales each feature to the unit interval") {
    const auto dir = testutil::fresh_dir("dataset_norm");
    const auto path = dir / "mm.csv";
    testutil::write_text(path, "x,y\n0,1\n5,2\n10,3\n");
    const Dataset ds = load_csv(path.string(), TargetSelector::last(), Normalization::MinMax);
    CHECK(ds.features(0, 0) == doctest::Approx(0.0));
    CHECK(ds.features(1, 0) == doctest::Approx(0.5));
    CHECK(ds.features(2, 0) == doctest::Approx(1.0));
    CHECK(ds.outcome(0) == 1.0);  // outcome is never rescaled
    CHECK(ds.normalization.mode == Normalization::MinMax);
}

TEST_CASE("z-score centers and scales by the population deviation") {
    const auto dir = testutil::fresh_dir("dataset_z");
    const auto path = dir / "z.csv";
    testutil::write_text(path, "x,y\n2,0\n4,0\n6,0\n");
    const Dataset ds = load_csv(path.string(), TargetSelector::last(), Normalization::ZScore);
    const double sd = std::sqrt(8.0 / 3.0);  // population deviation of {2,4,6}
    CHECK(ds.features(0, 0) == doctest::Approx(-2.0 / sd).epsilon(1e-12));
    CHECK(ds.features(1, 0) == doctest::Approx(0.0));
    CHECK(ds.features(2, 0) == doctest::Approx(2.0 / sd).epsilon(1e-12));
}

TEST_CASE("constant feature columns normalize to zero instead of dividing by zero") {
    const auto dir = testutil::fresh_dir("dataset_const");
    const auto path = dir / "c.csv";
    testutil::write_text(path, "x,k,y\n1,7,0\n2,7,0\n3,7,0\n");
    for (const auto mode : {Normalization::ZScore, Normalization::MinMax}) {
        const Dataset ds = load_csv(path.string(), TargetSelector::last(), mode);
        CHECK(ds.features(0, 1) == 0.0);
        CHECK(ds.features(2, 1) == 0.0);
        CHECK(ds.normalization.scale[1] == 0.0);
    }
}

TEST_CASE("save and reload reproduces every value bit for bit") {
    const auto dir = testutil::fresh_dir("dataset_rt");
    predclusters::RandomStream rng(11);
    Dataset ds = testutil::random_dataset(rng, 40, 3);
    ds.outcome_index = 1;  // outcome embedded in the middle of the row
    ds.feature_names = {"alpha", "beta", "gamma"};
    ds.outcome_name = "target";

    const auto path = dir / "roundtrip.csv";
    save_csv(ds, path.string());
    const Dataset back = load_csv(path.string(), TargetSelector::by_name("target"));

    REQUIRE(back.n() == ds.n());
    REQUIRE(back.dims() == ds.dims());
    CHECK(back.outcome_index == 1);
    CHECK(back.feature_names == ds.feature_names);
    for (int i = 0; i < ds.n(); ++i) {
        CHECK(back.outcome(i) == ds.outcome(i));
        for (int j = 0; j < ds.dims(); ++j) CHECK(back.features(i, j) == ds.features(i, j));
    }
}

TEST_CASE("normalization mode names round-trip through strings") {
    for (const auto mode : {Normalization::None, Normalization::ZScore, Normalization::MinMax}) {
        CHECK(normalization_from_string(to_string(mode)) == mode);
    }
    CHECK_THROWS_AS(normalization_from_string("sigmoid"), std::invalid_argument);
}
