#include <gtest/gtest.h>

#include <random>
#include <string>

#include "greenfab/concurrency.hpp"
#include "greenfab/dataset.hpp"

using namespace greenfab;

namespace {

std::string fixture(const std::string& name) {
    return read_file(std::string(GREENFAB_FIXTURE_DIR) + "/" + name);
}

// Runs fn and returns the error it raised, failing the test if none.
Error error_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e;
    }
    ADD_FAILURE() << "no error thrown";
    return Error(ErrorCode::ParseError, "");
}

bool mentions(const Error& e, const std::string& text) {
    return std::string(e.what()).find(text) != std::string::npos;
}

}  // namespace

TEST(Builtin, Contents) {
    const auto ds = builtin_paper_dataset();
    ASSERT_EQ(ds.kernels.size(), 8u);
    EXPECT_EQ(ds.find("Stencil3D")->memory_kb, 256.0);
    EXPECT_EQ(ds.find("GeMM")->utilization, 1.0);
    EXPECT_FALSE(ds.find("FIR")->estimated);
    EXPECT_TRUE(ds.find("KNN")->estimated);
    EXPECT_TRUE(ds.has_estimates());
    EXPECT_EQ(ds.find("Sobel"), nullptr);
    EXPECT_EQ(ds.fabric.grid.pe_count(), 64);
    EXPECT_EQ(ds.fabric.memory_kb, 256.0);
    EXPECT_TRUE(validate_dataset(ds).empty());
}

TEST(Builtin, PinnedMeans) {
    const auto ds = builtin_paper_dataset();
    const auto agg = aggregate(ds.kernels);
    EXPECT_NEAR(agg.area, 0.275, 1e-12);
    EXPECT_NEAR(agg.energy, 0.34375, 1e-12);
    EXPECT_NEAR(agg.utilization, 0.64, 1e-12);
    int under_half = 0;
    for (const auto& k : ds.kernels) under_half += k.utilization < 0.5;
    EXPECT_EQ(under_half, 4);
}

TEST(RoundTrip, BuiltinBothFormats) {
    const auto ds = builtin_paper_dataset();
    for (auto fmt : {DataFormat::csv, DataFormat::json}) {
        const auto text = serialize_dataset(ds, fmt);
        EXPECT_EQ(load_dataset(text, fmt), ds);
        EXPECT_EQ(serialize_dataset(load_dataset(text, fmt), fmt), text);
    }
}

TEST(RoundTrip, RandomDatasets) {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> ratio(1e-4, 3.0), util(1e-3, 1.0), mem(0.0, 200.0);
    for (int i = 0; i < 200; ++i) {
        KernelDataset ds;
        ds.provenance = i % 2 ? "lab run, \"batch\" 7" : "";
        ds.fabric.grid = {1 + i % 9, 1 + i % 5};
        ds.fabric.memory_kb = 256.0 + i;
        ds.fabric.clock_mhz = 50.0 + 0.1 * i;
        const int m = 1 + i % 10;
        for (int j = 0; j < m; ++j) {
            ds.kernels.push_back({"k" + std::to_string(j), j % 3 ? "dom, with comma" : "d",
                                  ratio(rng), ratio(rng), util(rng), mem(rng), j % 2 == 0});
        }
        for (auto fmt : {DataFormat::csv, DataFormat::json}) {
            EXPECT_EQ(load_dataset(serialize_dataset(ds, fmt), fmt), ds);
        }
    }
}

TEST(Load, UtilizationOutOfRange) {
    const auto e = error_of([] { load_dataset(fixture("util_out_of_range.csv"), DataFormat::csv); });
    EXPECT_EQ(e.code(), ErrorCode::ValidationError);
    EXPECT_TRUE(mentions(e, "utilization out of (0,1]"));
    EXPECT_TRUE(mentions(e, "GeMM"));
}

TEST(Load, DuplicateName) {
    const auto e = error_of([] { load_dataset(fixture("duplicate_name.csv"), DataFormat::csv); });
    EXPECT_EQ(e.code(), ErrorCode::ValidationError);
    EXPECT_TRUE(mentions(e, "duplicate kernel name 'GeMM'"));
}

TEST(Load, ZeroArea) {
    const auto e = error_of([] { load_dataset(fixture("zero_area.csv"), DataFormat::csv); });
    EXPECT_EQ(e.code(), ErrorCode::ValidationError);
    EXPECT_TRUE(mentions(e, "area_norm"));
}

TEST(Load, FabricMemoryBelowLargestKernel) {
    const auto e = error_of([] { load_dataset(fixture("small_fabric_memory.csv"), DataFormat::csv); });
    EXPECT_EQ(e.code(), ErrorCode::ValidationError);
    EXPECT_TRUE(mentions(e, "fabric memory below largest kernel"));

    auto ds = builtin_paper_dataset();
    ds.fabric.memory_kb = 100;
    const auto v = validate_dataset(ds);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0].record, "fabric");
}

TEST(Load, ValidateDoesNotMutate) {
    auto ds = builtin_paper_dataset();
    ds.kernels[0].area_norm = 0;
    const auto copy = ds;
    EXPECT_EQ(validate_dataset(ds).size(), 1u);
    EXPECT_EQ(ds, copy);
}

TEST(Load, ParseErrorCarriesPosition) {
    const auto e = error_of([] { load_dataset(fixture("bad_number.csv"), DataFormat::csv); });
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_TRUE(mentions(e, "line 3, column 23")) << e.what();

    const auto j = error_of([] { load_dataset(fixture("truncated.json"), DataFormat::json); });
    EXPECT_EQ(j.code(), ErrorCode::ParseError);
    EXPECT_TRUE(mentions(j, "line ")) << j.what();
}

TEST(Load, MissingHeaderColumn) {
    const auto e = error_of([] { load_dataset("name,area_norm\nx,1\n", DataFormat::csv); });
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_TRUE(mentions(e, "domain"));
}

TEST(Load, UnterminatedQuote) {
    const std::string src =
        "name,domain,area_norm,energy_norm,utilization,memory_kb,estimated\n"
        "\"GeMM,x,0.4,0.5,1,1,0\n";
    EXPECT_EQ(error_of([&] { load_dataset(src, DataFormat::csv); }).code(), ErrorCode::ParseError);
}

TEST(Load, EmptyAndUnsupported) {
    EXPECT_EQ(error_of([] { load_dataset(fixture("empty.csv"), DataFormat::csv); }).code(),
              ErrorCode::EmptyInput);
    EXPECT_EQ(error_of([] { load_dataset("  \n", DataFormat::json); }).code(), ErrorCode::EmptyInput);
    EXPECT_EQ(error_of([] { load_dataset(fixture("future_version.json"), DataFormat::json); }).code(),
              ErrorCode::UnsupportedVersion);
    EXPECT_EQ(error_of([] { load_dataset("# version: 2\nname\n", DataFormat::csv); }).code(),
              ErrorCode::UnsupportedVersion);
}

TEST(Breakdowns, Fixtures) {
    const auto ok = load_breakdowns(fixture("breakdowns.csv"), DataFormat::csv);
    ASSERT_EQ(ok.size(), 1u);
    EXPECT_EQ(ok[0].production_pct, 80);
    const auto bad = error_of([] { load_breakdowns(fixture("breakdown_bad_sum.csv"), DataFormat::csv); });
    EXPECT_EQ(bad.code(), ErrorCode::ValidationError);
    EXPECT_TRUE(mentions(bad, "sum"));
    EXPECT_EQ(error_of([] { load_breakdowns(fixture("empty.csv"), DataFormat::csv); }).code(),
              ErrorCode::EmptyInput);
    for (auto fmt : {DataFormat::csv, DataFormat::json}) {
        EXPECT_EQ(load_breakdowns(serialize_breakdowns(ok, fmt), fmt)[0].use_pct, 15);
    }
}

TEST(TechNodes, Fixtures) {
    const auto anchor = load_tech_nodes(fixture("tech_anchor_only.csv"), DataFormat::csv);
    ASSERT_EQ(anchor.size(), 1u);
    EXPECT_EQ(embodied_intensity(anchor[0]), 1.0);
    EXPECT_EQ(error_of([] { load_tech_nodes(fixture("tech_missing_anchor.csv"), DataFormat::csv); }).code(),
              ErrorCode::ValidationError);
    EXPECT_EQ(error_of([] { load_tech_nodes(fixture("tech_negative.csv"), DataFormat::csv); }).code(),
              ErrorCode::ValidationError);
    const std::vector<TechNodeRecord> nodes{{"28nm", 1, 1}, {"7nm", 0.2, 0.5}};
    for (auto fmt : {DataFormat::csv, DataFormat::json}) {
        const auto back = load_tech_nodes(serialize_tech_nodes(nodes, fmt), fmt);
        ASSERT_EQ(back.size(), 2u);
        EXPECT_EQ(back[1].node_name, "7nm");
        EXPECT_EQ(back[1].rel_embodied_per_cell, 0.5);
    }
}

TEST(Formats, FromPath) {
    EXPECT_EQ(format_from_path("a/b.json"), DataFormat::json);
    EXPECT_EQ(format_from_path("kernels.csv"), DataFormat::csv);
    EXPECT_EQ(format_from_path("noext"), DataFormat::csv);
    EXPECT_EQ(parse_data_format("json"), DataFormat::json);
    EXPECT_THROW(parse_data_format("xml"), Error);
}
