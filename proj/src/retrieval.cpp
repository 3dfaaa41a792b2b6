#include "imgrank/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

#include "imgrank/binary_io.hpp"
#include "imgrank/degrade.hpp"
#include "imgrank/error.hpp"
#include "imgrank/parallel.hpp"

namespace imgrank {

namespace {

constexpr std::string_view kIndexMagic = "IMGRKIDX";

int quantize4(double unit) { return std::clamp(static_cast<int>(std::floor(unit * 4.0)), 0, 3); }

void normalize_l1(std::span<double> v) {
  const double total = std::accumulate(v.begin(), v.end(), 0.0);
  if (total <= 0.0) return;
  for (double& x : v) x /= total;
}

double round_f32(double x) {
  volatile float narrow = static_cast<float>(x);
  return narrow;
}

std::vector<double> round_f32(std::vector<double> v) {
  for (double& x : v) x = static_cast<double>(static_cast<float>(x));
  return v;
}

}  // namespace

std::vector<double> build_descriptor(const RgbImage& img) {
  std::vector<double> desc(kDescriptorDim, 0.0);
  const std::span<double> opponent(desc.data(), kOpponentBins);
  const std::span<double> gradient(desc.data() + kOpponentBins, kGradientBins);

  const double sqrt2 = std::numbers::sqrt2;
  const double sqrt6 = std::sqrt(6.0);
  const double sqrt3 = std::numbers::sqrt3;
  auto px = img.data();
  for (std::size_t i = 0; i < px.size(); i += 3) {
    const double r = px[i];
    const double g = px[i + 1];
    const double b = px[i + 2];
    // Opponent axes, each mapped onto [0, 1] by its value range.
    const double o1 = ((r - g) / sqrt2 + 1.0 / sqrt2) / sqrt2;
    const double o2 = ((r + g - 2.0 * b) / sqrt6 + 2.0 / sqrt6) / (4.0 / sqrt6);
    const double o3 = ((r + g + b) / sqrt3) / sqrt3;
    opponent[static_cast<std::size_t>((quantize4(o1) * 4 + quantize4(o2)) * 4 + quantize4(o3))] += 1.0;
  }
  normalize_l1(opponent);

  const std::vector<double> gray = grayscale(img);
  const int w = img.width();
  const int h = img.height();
  const double sector = 2.0 * std::numbers::pi / kOrientationBins;
  for (int y = 1; y + 1 < h; ++y) {
    for (int x = 1; x + 1 < w; ++x) {
      const auto at = [&](int xx, int yy) { return gray[static_cast<std::size_t>(yy) * w + xx]; };
      const double gx = at(x + 1, y) - at(x - 1, y);
      const double gy = at(x, y + 1) - at(x, y - 1);
      const double mag = std::hypot(gx, gy);
      if (mag <= 1e-12) continue;
      double angle = std::atan2(gy, gx);
      if (angle < 0.0) angle += 2.0 * std::numbers::pi;
      const auto bin = std::min<std::size_t>(kOrientationBins - 1, static_cast<std::size_t>(angle / sector));
      gradient[bin] += mag;
      const auto quadrant = static_cast<std::size_t>((y * 2 / h) * 2 + (x * 2 / w));
      gradient[kOrientationBins * (1 + quadrant) + bin] += mag;
    }
  }
  normalize_l1(gradient.subspan(0, kOrientationBins));
  normalize_l1(gradient.subspan(kOrientationBins));
  return desc;
}

double descriptor_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::DimensionMismatch, "retrieval", "descriptor lengths differ");
  }
  // L1 over both parts in sequence equals the sum of the per-part L1s.
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) total += std::abs(a[i] - b[i]);
  return total;
}

IndexEntry make_index_entry(std::int64_t id, std::string path, const RgbImage& img, const HueBinTable& bins,
                            int canonical_size) {
  IndexEntry entry;
  entry.id = id;
  entry.path = std::move(path);
  entry.descriptor = round_f32(build_descriptor(auto_enhance(img)));
  FeatureBlock fb = extract_features(img, bins, canonical_size);
  entry.features.visual = round_f32(std::move(fb.visual));
  for (int n = 1; n <= static_cast<int>(kParamCount); ++n) entry.features.param(n) = round_f32(std::move(fb.param(n)));
  const ParamTriple p = scalar_params(img);
  entry.params = ParamTriple{round_f32(p.s), round_f32(p.b), round_f32(p.c)};
  return entry;
}

IndexBuildResult build_index(const std::vector<ManifestEntry>& manifest, const HueBinTable& bins,
                             const IndexBuildOptions& options) {
  struct Job {
    std::int64_t id;
    std::filesystem::path path;
  };
  std::vector<Job> jobs;
  std::set<std::int64_t> seen;
  for (std::size_t i = 0; i < manifest.size(); ++i) {
    const auto& m = manifest[i];
    if (m.quality != Quality::High) continue;
    const std::int64_t id = m.id.value_or(static_cast<std::int64_t>(i));
    if (!seen.insert(id).second) {
      throw Error(ErrorKind::InvalidArgument, "retrieval", "duplicate id " + std::to_string(id) + " in manifest");
    }
    jobs.push_back({id, m.path});
  }

  std::vector<std::optional<IndexEntry>> built(jobs.size());
  std::vector<std::string> failures(jobs.size());
  parallel_for(jobs.size(), options.jobs, [&](std::size_t i) {
    try {
      const RgbImage img = load_image(jobs[i].path);
      built[i] = make_index_entry(jobs[i].id, jobs[i].path.generic_string(), img, bins, options.canonical_size);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::DimensionMismatch) throw;
      failures[i] = e.what();
    }
  });

  IndexBuildResult result;
  result.index.hue_bins = bins;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (built[i]) {
      result.index.entries.push_back(std::move(*built[i]));
    } else {
      ++result.skipped;
      result.warnings.push_back("skipped " + jobs[i].path.generic_string() + " (" + failures[i] + ")");
    }
  }
  if (result.index.entries.empty()) {
    throw Error(ErrorKind::EmptyInput, "retrieval", "no readable high-quality images in manifest");
  }
  return result;
}

std::string serialize_index(const CorpusIndex& index) {
  ByteWriter out;
  out.bytes(kIndexMagic);
  out.u32(index.format_version);
  out.u32(static_cast<std::uint32_t>(index.entries.size()));
  out.u32(static_cast<std::uint32_t>(kDescriptorDim));
  out.u32(static_cast<std::uint32_t>(kDim3176));
  out.u32(static_cast<std::uint32_t>(index.hue_bins.bin_count()));
  out.f32s(index.hue_bins.boundaries());

  std::string paths;
  for (const auto& e : index.entries) {
    if (e.descriptor.size() != kDescriptorDim) {
      throw Error(ErrorKind::DimensionMismatch, "retrieval", "entry descriptor has the wrong length");
    }
    out.i64(e.id);
    out.u64(paths.size());
    out.u32(static_cast<std::uint32_t>(e.path.size()));
    out.u32(0);
    out.f32s(e.descriptor);
    out.f32s(concat_3176(e.features));
    out.f32(static_cast<float>(e.params.s));
    out.f32(static_cast<float>(e.params.b));
    out.f32(static_cast<float>(e.params.c));
    paths += e.path;
  }
  out.bytes(paths);
  return out.buffer();
}

CorpusIndex deserialize_index(std::string_view bytes) {
  ByteReader in(bytes, "retrieval", "index file");
  if (in.bytes(kIndexMagic.size()) != kIndexMagic) in.fail("bad magic");
  CorpusIndex index;
  index.format_version = in.u32();
  if (index.format_version != kIndexFormatVersion) {
    in.fail("unsupported format version " + std::to_string(index.format_version));
  }
  const std::uint32_t count = in.u32();
  const std::uint32_t desc_len = in.u32();
  const std::uint32_t feat_len = in.u32();
  if (desc_len != kDescriptorDim || feat_len != kDim3176) in.fail("unexpected record layout");
  const std::uint32_t hue_count = in.u32();
  if (hue_count == 0 || hue_count > 360) in.fail("bad hue-bin count");
  index.hue_bins = HueBinTable(in.f32s(hue_count));

  struct PathRef {
    std::uint64_t offset;
    std::uint32_t length;
  };
  std::vector<PathRef> refs;
  const std::size_t stride = 24 + 4 * (kDescriptorDim + kDim3176 + 3);
  if (count > in.remaining() / stride) in.fail("truncated");
  index.entries.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    IndexEntry e;
    e.id = in.i64();
    const std::uint64_t offset = in.u64();
    const std::uint32_t length = in.u32();
    in.u32();
    refs.push_back({offset, length});
    e.descriptor = in.f32s(kDescriptorDim);
    e.features.visual = in.f32s(kVisualDim);
    for (int n = 1; n <= static_cast<int>(kParamCount); ++n) e.features.param(n) = in.f32s(kParamDim);
    e.params.s = in.f32();
    e.params.b = in.f32();
    e.params.c = in.f32();
    index.entries.push_back(std::move(e));
  }
  const std::string_view blob = in.bytes(in.remaining());
  for (std::size_t i = 0; i < refs.size(); ++i) {
    if (refs[i].offset > blob.size() || refs[i].length > blob.size() - refs[i].offset) in.fail("bad path offset");
    index.entries[i].path = std::string(blob.substr(refs[i].offset, refs[i].length));
  }
  return index;
}

void save_index(const CorpusIndex& index, const std::filesystem::path& path) {
  write_file_atomic(path, serialize_index(index), "retrieval");
}

CorpusIndex load_index(const std::filesystem::path& path) { return deserialize_index(read_file(path, "retrieval")); }

RetrievalResult retrieve_by_descriptor(const CorpusIndex& index, std::span<const double> descriptor, std::size_t k) {
  if (index.entries.empty()) throw Error(ErrorKind::EmptyInput, "retrieval", "index is empty");
  if (k == 0) throw Error(ErrorKind::InvalidArgument, "retrieval", "k must be at least 1");
  RetrievalResult result;
  result.hits.reserve(index.entries.size());
  for (std::size_t i = 0; i < index.entries.size(); ++i) {
    result.hits.push_back({i, descriptor_distance(descriptor, index.entries[i].descriptor)});
  }
  std::sort(result.hits.begin(), result.hits.end(), [&](const RetrievalHit& a, const RetrievalHit& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return index.entries[a.entry].id < index.entries[b.entry].id;
  });
  if (k > result.hits.size()) {
    result.warnings.push_back("requested " + std::to_string(k) + " neighbours but the index holds only " +
                              std::to_string(result.hits.size()));
  } else {
    result.hits.resize(k);
  }
  return result;
}

RetrievalResult retrieve(const CorpusIndex& index, const RgbImage& query, std::size_t k) {
  if (index.entries.empty()) throw Error(ErrorKind::EmptyInput, "retrieval", "index is empty");
  const auto desc = round_f32(build_descriptor(auto_enhance(query)));
  return retrieve_by_descriptor(index, desc, k);
}

}  // namespace imgrank
