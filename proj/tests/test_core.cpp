#include <gtest/gtest.h>

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "eegintent/core/dataset_io.hpp"
#include "eegintent/core/montage.hpp"
#include "eegintent/core/split.hpp"
#include "eegintent/synth/generator.hpp"

using namespace eegintent;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("eegintent_core_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Dataset small_dataset(int per_class = 4, std::uint64_t seed = 3) {
  synth::SynthConfig cfg;
  cfg.n_trials_per_class = per_class;
  cfg.seed = seed;
  return synth::generate_dataset(cfg);
}

Dataset labelled_only(const std::vector<std::pair<int, Domain>>& labels) {
  Dataset ds;
  ds.spec.sample_rate_hz = 10.0;
  ds.spec.trial_seconds = 0.2;
  ds.spec.n_channels = 1;
  ds.spec.band_low_hz = 1.0;
  ds.spec.band_high_hz = 5.0;
  ds.channel_names = {"Cz"};
  std::uint64_t id = 0;
  for (auto [c, d] : labels) ds.trials.push_back({id++, c, d, 1, 2, {0.0f, 0.0f}});
  return ds;
}

}  // namespace

TEST(AcquisitionSpec, DefaultsGive1500Samples) {
  AcquisitionSpec spec;
  EXPECT_EQ(spec.n_samples(), 1500u);
  EXPECT_NO_THROW(spec.validate());
}

TEST(AcquisitionSpec, RejectsBandAboveNyquist) {
  AcquisitionSpec spec;
  spec.band_high_hz = 300.0;
  EXPECT_THROW(spec.validate(), Error);
}

TEST(Montage, Has64UniqueChannels) {
  const auto& m = Montage::standard64();
  ASSERT_EQ(m.size(), 64u);
  std::set<std::string> names;
  for (const auto& e : m.entries()) {
    names.insert(e.name);
    EXPECT_GE(e.pos.x, -1.0);
    EXPECT_LE(e.pos.x, 1.0);
    EXPECT_GE(e.pos.y, -1.0);
    EXPECT_LE(e.pos.y, 1.0);
  }
  EXPECT_EQ(names.size(), 64u);
}

TEST(Montage, RegionSetsContainRequiredSites) {
  const auto& m = Montage::standard64();
  for (auto n : {"Fz", "FCz", "FC1", "FC2", "Cz", "C1", "C2"})
    EXPECT_EQ(channel_position(m, n).region, Region::FrontalCentral) << n;
  for (auto n : {"T7", "T8", "FT7", "FT8", "TP7", "TP8"}) EXPECT_EQ(channel_position(m, n).region, Region::Temporal) << n;
  EXPECT_EQ(channel_position(m, "O1").region, Region::Other);
}

TEST(Montage, VertexAtOrigin) {
  const auto cz = channel_position(Montage::standard64(), "Cz");
  EXPECT_EQ(cz.x, 0.0);
  EXPECT_EQ(cz.y, 0.0);
  EXPECT_EQ(cz.region, Region::FrontalCentral);
}

TEST(Montage, T7OnLeftRing) {
  const auto t7 = channel_position(Montage::standard64(), "T7");
  EXPECT_NEAR(t7.x, -0.9, 1e-12);
  EXPECT_NEAR(t7.y, 0.0, 1e-12);
  EXPECT_EQ(t7.region, Region::Temporal);
}

TEST(Montage, LeftRightMirror) {
  const auto& m = Montage::standard64();
  for (auto [l, r] : {std::pair{"F3", "F4"}, {"FC5", "FC6"}, {"PO7", "PO8"}, {"Fp1", "Fp2"}, {"AF3", "AF4"}}) {
    const auto a = channel_position(m, l), b = channel_position(m, r);
    EXPECT_NEAR(a.x, -b.x, 1e-12) << l;
    EXPECT_NEAR(a.y, b.y, 1e-12) << l;
    EXPECT_LT(a.x, 0.0) << l;
  }
  EXPECT_GT(channel_position(m, "Fz").y, 0.0);
  EXPECT_LT(channel_position(m, "Pz").y, 0.0);
}

TEST(Montage, UnknownChannelThrows) {
  try {
    channel_position(Montage::standard64(), "XX");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownChannel);
  }
}

TEST(DatasetIo, RoundTripIsBitExact) {
  const auto dir = temp_dir("roundtrip");
  const auto ds = small_dataset();
  save_dataset(ds, dir / "d.json");
  const auto back = load_dataset(dir / "d.json");
  EXPECT_EQ(back, ds);
  // Byte oracle: the blob is exactly the concatenated little-endian floats.
  std::ifstream is(dir / "d.bin", std::ios::binary);
  std::vector<char> bytes((std::istreambuf_iterator<char>(is)), {});
  ASSERT_EQ(bytes.size(), ds.trials.size() * 64 * 1500 * 4);
  float first;
  std::memcpy(&first, bytes.data(), 4);
  EXPECT_EQ(std::bit_cast<std::uint32_t>(first), std::bit_cast<std::uint32_t>(ds.trials[0].samples[0]));
}

TEST(DatasetIo, FullSizeSyntheticRoundTrip) {
  const auto dir = temp_dir("full");
  synth::SynthConfig cfg;
  const auto ds = synth::generate_dataset(cfg);
  ASSERT_EQ(ds.trials.size(), 200u);
  save_dataset(ds, dir / "d.json");
  const auto back = load_dataset(dir / "d.json");
  ASSERT_EQ(back.trials.size(), 200u);
  EXPECT_EQ(back, ds);
}

TEST(DatasetIo, EmptyTrialList) {
  const auto dir = temp_dir("empty");
  Dataset ds{AcquisitionSpec{}, Montage::standard64().channel_names(), {}};
  save_dataset(ds, dir / "d.json");
  const auto j = nlohmann::json::parse(io::read_text(dir / "d.json"));
  EXPECT_EQ(j.at("trial_count").get<int>(), 0);
  EXPECT_EQ(load_dataset(dir / "d.json"), ds);
}

TEST(DatasetIo, RejectsShortBlobWithDimensionMismatch) {
  const auto dir = temp_dir("mismatch");
  save_dataset(small_dataset(2), dir / "d.json");
  auto j = nlohmann::json::parse(io::read_text(dir / "d.json"));
  j["trials"][3]["byte_length"] = 63 * 1500 * 4;
  io::write_text(dir / "d.json", j.dump());
  try {
    load_dataset(dir / "d.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
    EXPECT_EQ(e.trial_id(), j["trials"][3]["trial_id"].get<std::uint64_t>());
  }
}

TEST(DatasetIo, RejectsNonFiniteSample) {
  const auto dir = temp_dir("nonfinite");
  save_dataset(small_dataset(2), dir / "d.json");
  auto bytes = io::read_file(dir / "d.bin");
  const auto j = nlohmann::json::parse(io::read_text(dir / "d.json"));
  const auto offset = j["trials"][5]["byte_offset"].get<std::size_t>();
  const float nan = std::numeric_limits<float>::quiet_NaN();
  std::memcpy(bytes.data() + offset + 40, &nan, 4);
  io::write_file(dir / "d.bin", bytes);
  try {
    load_dataset(dir / "d.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonFiniteSample);
    EXPECT_EQ(e.trial_id(), j["trials"][5]["trial_id"].get<std::uint64_t>());
  }
}

TEST(DatasetIo, MissingAndMalformed) {
  const auto dir = temp_dir("missing");
  try {
    load_dataset(dir / "nope.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingFile);
  }
  io::write_text(dir / "bad.json", "{ not json");
  try {
    load_dataset(dir / "bad.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MalformedManifest);
  }
}

TEST(DatasetIo, UnwritableDirectoryIsIoFailure) {
  try {
    save_dataset(small_dataset(1), "/nonexistent_dir_eegintent/sub/d.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IoFailure);
  }
}

TEST(Split, BalancedCellsGiveFivePerCell) {
  std::vector<std::pair<int, Domain>> labels;
  for (int c = 0; c < 4; ++c)
    for (auto d : {Domain::Correct, Domain::Misarticulated})
      for (int i = 0; i < 25; ++i) labels.emplace_back(c, d);
  const auto ds = labelled_only(labels);
  const auto [train, test] = stratified_split(ds, 0.2, 42);
  EXPECT_EQ(test.trials.size(), 40u);
  EXPECT_EQ(train.trials.size(), 160u);
  std::map<std::pair<int, Domain>, int> per_cell;
  for (const auto& t : test.trials) ++per_cell[{t.class_label, t.domain}];
  for (const auto& [cell, n] : per_cell) EXPECT_EQ(n, 5);
  EXPECT_EQ(per_cell.size(), 8u);
}

TEST(Split, DeterministicAndPartitioning) {
  const auto ds = small_dataset(12, 9);
  const auto a = stratified_split(ds, 0.25, 7);
  const auto b = stratified_split(ds, 0.25, 7);
  EXPECT_EQ(a.first, b.first);
  EXPECT_EQ(a.second, b.second);
  std::set<std::uint64_t> ids;
  for (const auto& t : a.first.trials) ids.insert(t.trial_id);
  for (const auto& t : a.second.trials) EXPECT_TRUE(ids.insert(t.trial_id).second);
  EXPECT_EQ(ids.size(), ds.trials.size());
}

TEST(Split, ClampsSmallCells) {
  // Cells of 2: round(2 * 0.2) = 0 is clamped up to 1; fraction 0.9 on a cell of 2 clamps to 1 as well.
  std::vector<std::pair<int, Domain>> labels;
  for (int c = 0; c < 4; ++c)
    for (auto d : {Domain::Correct, Domain::Misarticulated}) labels.insert(labels.end(), 2, {c, d});
  const auto ds = labelled_only(labels);
  EXPECT_EQ(stratified_split(ds, 0.2, 1).second.trials.size(), 8u);
  EXPECT_EQ(stratified_split(ds, 0.9, 1).second.trials.size(), 8u);
}

TEST(Split, CellTooSmall) {
  std::vector<std::pair<int, Domain>> labels;
  for (int c = 0; c < 4; ++c)
    for (auto d : {Domain::Correct, Domain::Misarticulated}) labels.insert(labels.end(), 3, {c, d});
  labels.erase(labels.begin() + 3, labels.begin() + 5);  // class 0 misarticulated keeps one trial
  try {
    stratified_split(labelled_only(labels), 0.2, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CellTooSmall);
    EXPECT_NE(std::string(e.what()).find("class 0, domain misarticulated"), std::string::npos);
  }
}

TEST(Split, DifferentSeedsUsuallyDiffer) {
  const auto ds = small_dataset(12, 9);
  EXPECT_NE(stratified_split(ds, 0.25, 1).second, stratified_split(ds, 0.25, 2).second);
}
