#include <gtest/gtest.h>

#include <filesystem>

#include "fixtures.hpp"

using namespace lsqlab;
using fixtures::graph_of;

namespace {

std::filesystem::path scratch(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("lsqlab_io_test_" + name);
}

}  // namespace

TEST(GraphJson, RoundTrip) {
  for (const auto& g : {graph_of(GraphKind::grid, 4), graph_of(GraphKind::barbell, 8),
                        graph_of(GraphKind::hypercube, 3)}) {
    const Graph back = graph_from_json(Json::parse(dump(to_json(g))));
    EXPECT_EQ(back.size(), g.size());
    EXPECT_EQ(back.edges(), g.edges());
  }
}

TEST(GraphJson, Layout) {
  const Json j = to_json(fixtures::path_graph(3));
  EXPECT_EQ(j.dump(), R"({"n":3,"edges":[[1,2],[2,3]]})");
}

TEST(GraphJson, RejectsBadInput) {
  EXPECT_THROW(graph_from_json(Json::parse(R"({"edges":[]})")), ValidationError);
  EXPECT_THROW(graph_from_json(Json::parse(R"({"n":"three","edges":[]})")), ValidationError);
  EXPECT_THROW(graph_from_json(Json::parse(R"({"n":3,"edges":[[1,2,3]]})")), ValidationError);
  EXPECT_THROW(graph_from_json(Json::parse(R"({"n":3,"edges":[[1,2]]})")), ValidationError);
  EXPECT_THROW(graph_from_json(Json::parse(R"({"n":2,"edges":[[1,5]]})")), ValidationError);
}

TEST(PathSystemJson, RoundTrip) {
  const Graph g = graph_of(GraphKind::grid, 3);
  const PathSystem ps = shortest_path_system(g);
  const PathSystem back = path_system_from_json(Json::parse(dump(to_json(ps))));
  EXPECT_EQ(back.table(), ps.table());
  back.validate(g);
}

TEST(PathSystemJson, RejectsIncompleteOrDuplicate) {
  Json j = to_json(shortest_path_system(fixtures::path_graph(2)));
  Json missing = j;
  missing["paths"].erase(missing["paths"].begin());
  EXPECT_THROW(path_system_from_json(missing), ValidationError);
  Json dup = j;
  dup["paths"][1] = dup["paths"][0];
  EXPECT_THROW(path_system_from_json(dup), ValidationError);
  Json out_of_range = j;
  out_of_range["paths"][0]["u"] = 7;
  EXPECT_THROW(path_system_from_json(out_of_range), ValidationError);
}

TEST(InstanceJson, RoundTrip) {
  InstanceFile inst;
  inst.graph_path = "g.json";
  inst.paths_path = "p.json";
  inst.milestones = MilestoneSequence({1, 6, 11, 16});
  inst.bit = 1;
  inst.values = ValueFunction(std::vector<std::int64_t>{3, -2, 5});
  inst.flags = VertexMap<int>(std::vector<int>{-1, 1, -1});
  const InstanceFile back = instance_from_json(Json::parse(dump(to_json(inst))));
  EXPECT_EQ(back.graph_path, "g.json");
  EXPECT_EQ(back.paths_path, "p.json");
  EXPECT_EQ(back.milestones.values(), inst.milestones.values());
  EXPECT_EQ(back.bit, 1);
  ASSERT_TRUE(back.values && back.flags);
  EXPECT_EQ(back.values->values(), inst.values->values());
  EXPECT_EQ(back.flags->values(), inst.flags->values());

  inst.values.reset();
  inst.flags.reset();
  const InstanceFile lean = instance_from_json(to_json(inst));
  EXPECT_FALSE(lean.values);
  EXPECT_FALSE(lean.flags);
}

TEST(InstanceJson, RejectsBadFields) {
  const Json ok = Json::parse(R"({"graph":"g","paths":"p","milestones":[1,2],"bit":0})");
  EXPECT_NO_THROW(instance_from_json(ok));
  Json bad_bit = ok;
  bad_bit["bit"] = 2;
  EXPECT_THROW(instance_from_json(bad_bit), ValidationError);
  Json bad_start = ok;
  bad_start["milestones"] = {2, 1};
  EXPECT_THROW(instance_from_json(bad_start), ValidationError);
  Json no_graph = ok;
  no_graph.erase("graph");
  EXPECT_THROW(instance_from_json(no_graph), ValidationError);
}

TEST(ArrangementJson, RoundTrip) {
  const PathArrangement pa = grid_path_arrangement(3);
  const Json j = to_json(pa);
  EXPECT_EQ(j.at("inter_paths").size(), 27u);
  const PathArrangement back = arrangement_from_json(Json::parse(dump(j)));
  EXPECT_EQ(to_json(back), j);
  EXPECT_TRUE(verify_arrangement(back, graph_of(GraphKind::grid, 3)));
}

TEST(ArrangementJson, RejectsBadInput) {
  Json j = to_json(grid_path_arrangement(2));
  Json no_paths = j;
  no_paths.erase("inter_paths");
  EXPECT_THROW(arrangement_from_json(no_paths), ValidationError);
  Json bad_index = j;
  bad_index["inter_paths"][0]["k"] = 9;
  EXPECT_THROW(arrangement_from_json(bad_index), ValidationError);
}

TEST(TranscriptJson, RoundTrip) {
  const std::vector<QueryRecord> t{{4, 7, -1}, {2, -30, 1}, {9, 0, 0}};
  const Json j = to_json(t);
  EXPECT_EQ(j.dump(), R"({"queries":[[4,7,-1],[2,-30,1],[9,0,0]]})");
  EXPECT_EQ(transcript_from_json(j), t);
  EXPECT_THROW(transcript_from_json(Json::parse(R"({"queries":[[1,2]]})")), ValidationError);
}

TEST(BoundReportJson, RationalStrings) {
  const MatrixGame game = family_matrix_game(3);
  BoundReport report{"matrix-game k=3", game.family.size(),
                     variant_bound_exhaustive(game.family, game.relation),
                     aaronson_vmin(game.family, game.relation)};
  const Json j = to_json(report);
  EXPECT_EQ(j.at("min_ratio"), "9/5");
  EXPECT_EQ(j.at("variant_bound"), "9/500");
  EXPECT_EQ(j.at("vmin"), "1/1");
  EXPECT_EQ(j.at("aaronson_bound"), "1/5");
  EXPECT_EQ(j.at("size"), 6);
}

TEST(Files, ReadWriteAndErrors) {
  const auto path = scratch("graph.json");
  write_text_file(path, dump(to_json(graph_of(GraphKind::ring, 5))));
  EXPECT_EQ(graph_from_json(read_json_file(path)).size(), 5);
  write_text_file(path, "{ not json");
  EXPECT_THROW(read_json_file(path), ValidationError);
  std::filesystem::remove(path);
  EXPECT_THROW(read_json_file(path), ArgumentError);
}
