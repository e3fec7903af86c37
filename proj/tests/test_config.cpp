#include <gtest/gtest.h>

#include <sstream>

#include "dtcover/config.hpp"

using namespace dtcover;

namespace {

const char* kI2 = R"({
  "graph": {"vertices": [{"id": "a", "h_deg": 1}, {"id": "b", "h_deg": 2, "omega_deg": 3}],
            "edges": [["a", "b"], ["b", "a"]]},
  "geometry": "surface-type"
})";

}  // namespace

TEST(Config, ParsesGraph) {
    const auto cfg = parse_config_string(kI2);
    ASSERT_EQ(cfg.graph->vertex_count(), 2u);
    EXPECT_EQ(cfg.graph->edge_count(), 2u);
    EXPECT_EQ(cfg.graph->vertex(1).omega_deg, 3);
    EXPECT_EQ(cfg.graph->vertex(1).h_deg, 2);
    EXPECT_TRUE(cfg.graph->vertex(0).rational);
    EXPECT_EQ(cfg.geometry, GeometryKind::SurfaceType);
    EXPECT_EQ(cfg.weight, WeightKind::Behrend);
    EXPECT_EQ(genus(*cfg.graph), 1);
    std::istringstream in(kI2);
    EXPECT_EQ(*parse_config(in).graph, *cfg.graph);
}

TEST(Config, IntegerIdsAndFlags) {
    const auto cfg = parse_config_string(R"({
      "graph": {"vertices": [{"id": 1, "h_deg": 0, "rational": false}], "edges": [[1, 1]]},
      "geometry": "super-rigid", "weight": "euler"})");
    EXPECT_EQ(cfg.graph->vertex(0).name, "1");
    EXPECT_FALSE(cfg.graph->vertex(0).rational);
    EXPECT_EQ(cfg.weight, WeightKind::Euler);
}

TEST(Config, Errors) {
    const char* bad[] = {
        "not json",
        "[]",
        R"({"geometry": "super-rigid"})",
        R"({"graph": {"vertices": [{"id": "a"}]}, "geometry": "super-rigid"})",
        R"({"graph": {"vertices": [{"id": "a", "h_deg": 1}, {"id": "a", "h_deg": 1}]}, "geometry": "super-rigid"})",
        R"({"graph": {"vertices": [{"id": "a", "h_deg": 1}], "edges": [["a", "z"]]}, "geometry": "super-rigid"})",
        R"({"graph": {"vertices": [{"id": "a", "h_deg": 1}], "edges": [["a"]]}, "geometry": "super-rigid"})",
        R"({"graph": {"vertices": [{"id": "a", "h_deg": 1}]}, "geometry": "flat"})",
        R"({"graph": {"vertices": [{"id": "a", "h_deg": 1}]}, "geometry": "super-rigid", "weight": "x"})",
        R"({"graph": {"vertices": [{"id": "a", "h_deg": 1}]}})",
        R"({"graph": {"vertices": [{"id": "a", "h_deg": -1}]}, "geometry": "super-rigid"})",
        R"({"graph": {"vertices": [{"id": "a", "h_deg": 1.5}]}, "geometry": "super-rigid"})",
        R"({"graph": {"vertices": [{"id": "a", "h_deg": 1}]}, "geometry": "super-rigid",
            "base_table": [{"gamma": "1", "value": 0.5}]})",
        R"({"graph": {"vertices": [{"id": "a", "h_deg": 1}]}, "geometry": "super-rigid",
            "base_table": [{"gamma": "1,1", "value": "1"}]})",
        R"({"graph": {"vertices": [{"id": "a", "h_deg": 1}], "edges": [["a", "a"]]}, "geometry": "super-rigid",
            "base_table": [{"gamma": "1", "value": "1"}]})",
    };
    for (const char* text : bad) EXPECT_THROW(parse_config_string(text), ConfigError) << text;
}

TEST(Config, BaseTableFeedsProvider) {
    const auto cfg = parse_config_string(R"({
      "graph": {"vertices": [{"id": "c", "h_deg": 1}, {"id": "x", "h_deg": 1}, {"id": "y", "h_deg": 1},
                             {"id": "z", "h_deg": 1}],
                "edges": [["c", "x"], ["c", "y"], ["c", "z"]]},
      "geometry": "surface-type",
      "base_table": [{"gamma": "2,1,1,1", "value": "-3/2"}, {"gamma": "1,1,1,1", "n": 0, "value": "7"}]})");
    EXPECT_EQ(cfg.base_table->size(), 2u);
    const auto p = cfg.provider();
    const auto& g = *cfg.graph;
    EXPECT_EQ(reduce_and_compute(g, CurveClass{2, 1, 1, 1}, 1, cfg.geometry, cfg.weight, p).value, Rational(-3, 2));
    // The reduction only queries n = 1, so an entry pinned to n = 0 is never used.
    EXPECT_THROW(reduce_and_compute(g, CurveClass{1, 1, 1, 1}, 0, cfg.geometry, cfg.weight, p), MissingBaseError);
    EXPECT_THROW(parse_class_for(g, "1,1"), ConfigError);
    EXPECT_EQ(parse_class_for(g, "0,1,0,0"), (CurveClass{0, 1, 0, 0}));
}
