#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "fixtures.hpp"
#include "levelblend/blend.hpp"
#include "levelblend/pathing.hpp"
#include "levelblend/render.hpp"
#include "levelblend/tiles.hpp"

namespace levelblend {
namespace {

std::unique_ptr<Vae> tiny_model(ModelKind kind) {
  ModelConfig c;
  c.kind = kind;
  c.latent = 3;
  c.hidden = {16, 8};
  c.encoder_layers = 1;
  c.encoder_hidden = 6;
  c.decoder_layers = 1;
  c.decoder_hidden = 6;
  auto m = make_model(c);
  m->initialize(77);
  return m;
}

std::vector<Segment> toy_pool() {
  std::vector<Segment> out;
  for (const auto& g : kGameIds) {
    for (int i = 0; i < 4; ++i) {
      Segment s;
      s.game = g;
      s.annotated = true;
      for (int c = 0; c < kSegmentCols; ++c) s.grid.at(14, c) = 'X';
      s.grid.at(13 - i, static_cast<int>(g.size()) + 3 * i) = 'S';
      out.push_back(s);
    }
  }
  return out;
}

TEST(Interpolate, EndpointsAndMidpoint) {
  const LatentCode a{{0.0, 2.0}, "A"}, b{{4.0, -2.0}, "B"};
  EXPECT_EQ(interpolate(a, b, 0.0).values, a.values);
  EXPECT_EQ(interpolate(a, b, 1.0).values, b.values);
  EXPECT_EQ(interpolate(a, b, 0.5).values, (std::vector<double>{2.0, 0.0}));
  EXPECT_THROW(interpolate(a, b, 1.5), Error);
  EXPECT_THROW(interpolate(a, LatentCode{{1.0}, "C"}, 0.5), Error);
}

TEST(Blend, MirrorAndSeedSymmetry) {
  const BlendSpec s{"CV", 2, "MM", 7, 0.25};
  EXPECT_EQ(mirrored(s), (BlendSpec{"MM", 7, "CV", 2, 0.75}));
  EXPECT_EQ(mirrored(mirrored(s)), s);
  EXPECT_EQ(blend_seed(9, s), blend_seed(9, mirrored(s)));
  EXPECT_NE(blend_seed(9, s), blend_seed(9, BlendSpec{"CV", 2, "MM", 7, 0.5}));
  EXPECT_NE(blend_seed(9, s), blend_seed(10, s));
}

TEST(Blend, AlphaEndpointsReproduceSingleSegmentReconstruction) {
  for (ModelKind kind : {ModelKind::kLinear, ModelKind::kGru}) {
    const auto model = tiny_model(kind);
    const auto pool = toy_pool();
    const Segment& a = pool[0];
    const Segment& b = pool[5];
    EXPECT_EQ(blend_generate(*model, a, b, 0.0, 3).grid, reconstruct(*model, a, 3).grid);
    EXPECT_EQ(blend_generate(*model, a, b, 1.0, 3).grid, reconstruct(*model, b, 3).grid);
  }
}

TEST(Blend, SelectionIsDistinctPerGameAndSeeded) {
  const auto pool = toy_pool();
  const Selection sel = select_segments(pool, kGameIds, 3, 8);
  ASSERT_EQ(sel.size(), 5u);
  for (const auto& [g, segs] : sel) {
    ASSERT_EQ(segs.size(), 3u);
    std::set<std::string> grids;
    for (const auto& s : segs) {
      EXPECT_EQ(s.game, g);
      grids.insert(std::string(s.grid.cells()));
    }
    EXPECT_EQ(grids.size(), 3u);
  }
  const Selection again = select_segments(pool, kGameIds, 3, 8);
  for (const auto& g : kGameIds) {
    for (int i = 0; i < 3; ++i) EXPECT_EQ(again.at(g)[static_cast<std::size_t>(i)].grid, sel.at(g)[static_cast<std::size_t>(i)].grid);
  }
  EXPECT_THROW(select_segments(pool, kGameIds, 5, 8), Error);
}

TEST(Blend, ProtocolSpecCounts) {
  BlendProtocol p;
  p.per_domain = 10;
  EXPECT_EQ(protocol_specs(kGameIds, p).size(), 25u * 100u * 5u);
  p.pairing = Pairing::kMatched;
  const auto matched = protocol_specs(kGameIds, p);
  EXPECT_EQ(matched.size(), 25u * 10u * 5u);
  for (const auto& s : matched) EXPECT_EQ(s.seg_a, s.seg_b);
}

TEST(Blend, MeanSdOfKnownValues) {
  const auto [m, sd] = mean_sd({2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0});
  EXPECT_DOUBLE_EQ(m, 5.0);
  EXPECT_NEAR(sd, std::sqrt(32.0 / 7.0), 1e-12);
  EXPECT_EQ(mean_sd({3.0}).second, 0.0);
}

TEST(Blend, NamesAndLabels) {
  EXPECT_EQ(blend_file_name({"CV", 3, "MM", 7, 0.25}), "CV-03_MM-07_a0.25.txt");
  ModelConfig c;
  c.latent = 64;
  EXPECT_EQ(model_label(c), "LIN-64");
  c.kind = ModelKind::kGru;
  EXPECT_EQ(model_label(c), "GRU-64");
}

TEST(Blend, GameLatentNeedsTwoSegments) {
  const auto model = tiny_model(ModelKind::kLinear);
  const auto pool = toy_pool();
  const std::vector<Segment> one(pool.begin(), pool.begin() + 1);
  EXPECT_THROW(fit_game_latent(*model, one, "CV"), Error);
  const std::vector<Segment> four(pool.begin(), pool.begin() + 4);
  const auto dist = fit_game_latent(*model, four, "CV");
  EXPECT_EQ(dist.mean.size(), 3u);
  for (double v : dist.variance) EXPECT_GE(v, 0.0);
  Rng rng = make_rng(1, "draw");
  EXPECT_EQ(draw_latent(dist, rng).values.size(), 3u);
  EXPECT_EQ(conditional_sample(*model, dist, 5).grid, conditional_sample(*model, dist, 5).grid);
}

TEST(Blend, GenerateBatchIsSeeded) {
  const auto model = tiny_model(ModelKind::kGru);
  const auto a = generate_batch(*model, 3, 4);
  const auto b = generate_batch(*model, 3, 4);
  ASSERT_EQ(a.size(), 3u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].grid, b[i].grid);
    EXPECT_NO_THROW(a[i].validate());
  }
}

TEST(Blend, EvaluationReportShape) {
  const auto model = tiny_model(ModelKind::kLinear);
  const Selection sel = select_segments(toy_pool(), kGameIds, 2, 3);
  BlendProtocol p;
  p.per_domain = 2;
  p.pairing = Pairing::kMatched;
  const std::vector<std::string> games = {"CV", "SMB"};
  const auto specs = protocol_specs(games, p);
  PhysicsTable physics;
  for (const auto& g : games) physics[g] = load_physics(fixture::data_dir() / "physics", g);
  const BlendReport report = evaluate_blend(*model, sel, specs, physics, 6);
  ASSERT_EQ(report.records.size(), specs.size());
  ASSERT_EQ(report.cells.size(), 4u);
  for (const auto& cell : report.cells) {
    EXPECT_EQ(cell.attempts, cell.game_a == cell.game_b ? 10u : 20u);
    EXPECT_LE(cell.failures, cell.attempts);
    EXPECT_DOUBLE_EQ(cell.failure_rate, 100.0 * static_cast<double>(cell.failures) / static_cast<double>(cell.attempts));
  }
  const std::string table = blend_table_csv("LIN-3", report);
  EXPECT_EQ(table.rfind("model,game_a,game_b,mean_frechet,sd_frechet,failure_rate\n", 0), 0u);
  EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 5);
  const std::string manifest = blend_manifest_csv(report.records);
  EXPECT_EQ(std::count(manifest.begin(), manifest.end(), '\n'), static_cast<long>(specs.size()) + 1);
  const std::string paths = path_report_csv("LIN-3", report, games);
  EXPECT_EQ(std::count(paths.begin(), paths.end(), '\n'), 4);
}

TEST(Report, TileReportHasAnAllRowAndOnePerGame) {
  const auto pool = toy_pool();
  const std::vector<Segment> gen(pool.begin(), pool.begin() + 6);
  const auto rows = tile_report(gen, pool, kGameIds, 20, 1);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0].domain, "ALL");
  EXPECT_EQ(rows[0].reference_count, pool.size());
  const std::string csv = tile_report_csv("LIN-3", rows);
  EXPECT_EQ(csv.rfind("model,metric,ALL,CV,MM,Met,SMB,NG\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}

TEST(Render, PpmHeaderAndPixelCount) {
  TileGrid g(2, 3, '-');
  g.at(0, 0) = 'X';
  const std::string ppm = render_ppm(g, 2);
  EXPECT_EQ(ppm.rfind("P3\n6 4\n255\n", 0), 0u);
  EXPECT_EQ(render_ascii(g), "X--\n---\n");
  EXPECT_NE(tile_color('X'), tile_color('-'));
  EXPECT_EQ(tile_color('%'), (Rgb{255, 0, 255}));
  const std::vector<TileGrid> frames = {g, g};
  EXPECT_EQ(render_strip_ppm(frames, 1).rfind("P3\n3 5\n255\n", 0), 0u);
  const std::vector<TileGrid> mixed = {g, TileGrid(3, 3, '-')};
  EXPECT_THROW(render_strip_ppm(mixed, 1), Error);
}

TEST(Render, EveryTileHasItsOwnColor) {
  std::set<Rgb> colors;
  for (char c : tiles::kAlphabet) colors.insert(tile_color(c));
  EXPECT_EQ(colors.size(), tiles::kAlphabet.size());
}

}  // namespace
}  // namespace levelblend
