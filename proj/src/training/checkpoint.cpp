#include "aam/training/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <map>
#include <span>
#include <sstream>

namespace aam::training {
namespace {

class Writer {
 public:
  void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void str(std::string_view s) {
    u64(s.size());
    buf_.append(s);
  }
  void doubles(std::span<const double> v) {
    u64(v.size());
    for (double x : v) f64(x);
  }
  void raw(std::string_view s) { buf_.append(s); }
  void section(std::string_view tag, const Writer& payload) {
    raw(tag);
    u64(payload.buf_.size());
    raw(payload.buf_);
  }
  const std::string& bytes() const { return buf_; }

 private:
  std::string buf_;
};

class Reader {
 public:
  Reader(std::string_view bytes, std::string what) : b_(bytes), what_(std::move(what)) {}

  bool done() const { return pos_ == b_.size(); }
  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(b_[pos_++]);
  }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(u8()) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(u8()) << (8 * i);
    return v;
  }
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string_view raw(std::size_t n) {
    need(n);
    auto s = b_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::string str() { return std::string(raw(length(1))); }
  std::vector<double> doubles() {
    const std::size_t n = length(8);
    std::vector<double> v(n);
    for (auto& x : v) x = f64();
    return v;
  }
  // A count whose elements occupy at least `unit` bytes each.
  std::size_t length(std::size_t unit) {
    const std::uint64_t n = u64();
    if (n > (b_.size() - pos_) / unit) fail("length exceeds remaining data");
    return static_cast<std::size_t>(n);
  }
  void expect_done() {
    if (!done()) fail("trailing bytes");
  }
  [[noreturn]] void fail(const std::string& msg) const { throw CheckpointError("checkpoint " + what_ + ": " + msg); }

 private:
  void need(std::size_t n) const {
    if (b_.size() - pos_ < n) fail("truncated");
  }
  std::string_view b_;
  std::size_t pos_ = 0;
  std::string what_;
};

void write_forest(Writer& w, const baselines::RandomForest& f) {
  w.u64(f.trees.size());
  for (const auto& t : f.trees) {
    w.u64(t.nodes.size());
    for (const auto& n : t.nodes) {
      w.i64(static_cast<int>(n.feature));
      w.f64(n.threshold);
      w.i64(n.left);
      w.i64(n.right);
      w.f64(n.value);
    }
  }
}

baselines::RandomForest read_forest(Reader& r) {
  baselines::RandomForest f;
  f.trees.resize(r.length(8));
  for (auto& t : f.trees) {
    t.nodes.resize(r.length(40));
    for (auto& n : t.nodes) {
      const auto feature = r.i64();
      if (feature < -1 || feature > 1) r.fail("bad tree feature");
      n.feature = static_cast<baselines::SplitFeature>(feature);
      n.threshold = r.f64();
      n.left = static_cast<int>(r.i64());
      n.right = static_cast<int>(r.i64());
      n.value = r.f64();
      const auto count = static_cast<std::int64_t>(t.nodes.size());
      if (n.feature != baselines::SplitFeature::leaf &&
          (n.left <= 0 || n.right <= 0 || n.left >= count || n.right >= count)) {
        r.fail("bad tree child index");
      }
    }
  }
  return f;
}

bool needs_aam(ModelKind k) { return k == ModelKind::aam || k == ModelKind::aam_demo; }

}  // namespace

std::string_view to_string(ModelKind k) {
  switch (k) {
    case ModelKind::aam: return "aam";
    case ModelKind::aam_demo: return "aam_demo";
    case ModelKind::mean_agg: return "mean_agg";
    case ModelKind::mean_agg_demo: return "mean_agg_demo";
    case ModelKind::rf_demo: return "rf_demo";
  }
  return "?";
}

std::optional<ModelKind> parse_model_kind(std::string_view s) {
  for (auto k : {ModelKind::aam, ModelKind::aam_demo, ModelKind::mean_agg, ModelKind::mean_agg_demo,
                 ModelKind::rf_demo}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

std::vector<std::string> current_metric_vocabulary() {
  std::vector<std::string> v;
  for (auto m : dataset::all_metrics()) v.emplace_back(dataset::to_string(m));
  return v;
}

std::string serialize_checkpoint(const Checkpoint& c) {
  if (needs_aam(c.kind) && !c.aam) throw std::invalid_argument("AAM checkpoint without model parameters");
  Writer out;
  out.raw(kCheckpointMagic);
  out.u32(kCheckpointVersion);

  Writer kind;
  kind.str(to_string(c.kind));
  out.section("MODL", kind);

  if (c.aam) {
    const auto& h = c.aam->hyperparams();
    Writer hy;
    hy.i64(h.hidden_units);
    hy.i64(h.layers);
    hy.f64(h.dropout);
    hy.f64(h.l2);
    hy.u8(h.use_demographics ? 1 : 0);
    hy.u32(c.batch_size);
    out.section("HYPR", hy);
    Writer pa;
    pa.doubles(c.aam->parameters());
    out.section("PARM", pa);
  }

  Writer norm;
  norm.u64(c.normalizer.ranges.size());
  for (const auto& r : c.normalizer.ranges) {
    norm.f64(r.min);
    norm.f64(r.max);
  }
  norm.f64(c.normalizer.t_max);
  out.section("NORM", norm);

  Writer vocab;
  vocab.u64(c.metric_vocabulary.size());
  for (const auto& m : c.metric_vocabulary) vocab.str(m);
  out.section("VOCB", vocab);

  Writer seed;
  seed.u64(c.training_seed);
  out.section("SEED", seed);

  Writer thr;
  thr.f64(c.threshold);
  out.section("THRS", thr);

  Writer kmax;
  kmax.u64(c.k_max);
  out.section("KMAX", kmax);

  Writer split;
  split.u64(c.split_seed);
  split.u64(c.min_tests);
  split.f64(c.ratios.train);
  split.f64(c.ratios.validation);
  split.f64(c.ratios.test);
  out.section("SPLT", split);

  Writer magg;
  magg.u8(c.mean_agg.flipped ? 1 : 0);
  out.section("MAGG", magg);

  Writer logi;
  logi.doubles(c.mean_agg_demo.head.coefficients);
  logi.f64(c.mean_agg_demo.head.intercept);
  logi.i64(c.mean_agg_demo.head.iterations);
  logi.f64(c.mean_agg_demo.head.final_loss);
  out.section("LOGI", logi);

  Writer rf;
  write_forest(rf, c.forest);
  out.section("RFST", rf);

  Writer ids;
  ids.u64(c.training_ids.size());
  for (const auto& id : c.training_ids) ids.str(id);
  out.section("TRID", ids);

  return out.bytes();
}

Checkpoint deserialize_checkpoint(std::string_view bytes) {
  Reader top(bytes, "header");
  if (bytes.size() < kCheckpointMagic.size() || top.raw(kCheckpointMagic.size()) != kCheckpointMagic) {
    top.fail("bad magic (not a checkpoint file)");
  }
  const std::uint32_t version = top.u32();
  if (version != kCheckpointVersion) {
    throw CheckpointError("checkpoint version " + std::to_string(version) + " is not supported (expected " +
                          std::to_string(kCheckpointVersion) + ")");
  }
  std::map<std::string, std::string_view, std::less<>> sections;
  while (!top.done()) {
    std::string tag(top.raw(4));
    const std::size_t len = top.length(1);
    if (!sections.emplace(tag, top.raw(len)).second) top.fail("duplicate section " + tag);
  }
  auto section = [&](const std::string& tag) {
    auto it = sections.find(tag);
    if (it == sections.end()) throw CheckpointError("checkpoint: missing section " + tag);
    return Reader(it->second, "section " + tag);
  };

  Checkpoint c;
  {
    auto r = section("MODL");
    auto k = parse_model_kind(r.str());
    if (!k) r.fail("unknown model kind");
    c.kind = *k;
    r.expect_done();
  }
  if (needs_aam(c.kind)) {
    auto r = section("HYPR");
    model::Hyperparams h;
    h.hidden_units = static_cast<int>(r.i64());
    h.layers = static_cast<int>(r.i64());
    h.dropout = r.f64();
    h.l2 = r.f64();
    h.use_demographics = r.u8() != 0;
    c.batch_size = r.u32();
    r.expect_done();
    auto p = section("PARM");
    auto params = p.doubles();
    p.expect_done();
    try {
      c.aam.emplace(h, std::move(params));
    } catch (const std::invalid_argument& e) {
      throw CheckpointError(std::string("checkpoint: ") + e.what());
    }
  }
  {
    auto r = section("NORM");
    if (r.u64() != c.normalizer.ranges.size()) r.fail("metric count mismatch");
    for (auto& range : c.normalizer.ranges) {
      range.min = r.f64();
      range.max = r.f64();
    }
    c.normalizer.t_max = r.f64();
    r.expect_done();
  }
  {
    auto r = section("VOCB");
    c.metric_vocabulary.resize(r.length(8));
    for (auto& m : c.metric_vocabulary) m = r.str();
    r.expect_done();
    if (c.metric_vocabulary != current_metric_vocabulary()) {
      throw CheckpointError("checkpoint: metric vocabulary differs from this build");
    }
  }
  {
    auto r = section("SEED");
    c.training_seed = r.u64();
    r.expect_done();
  }
  {
    auto r = section("THRS");
    c.threshold = r.f64();
    r.expect_done();
  }
  {
    auto r = section("KMAX");
    c.k_max = r.u64();
    r.expect_done();
  }
  {
    auto r = section("SPLT");
    c.split_seed = r.u64();
    c.min_tests = r.u64();
    c.ratios.train = r.f64();
    c.ratios.validation = r.f64();
    c.ratios.test = r.f64();
    r.expect_done();
  }
  {
    auto r = section("MAGG");
    c.mean_agg.flipped = r.u8() != 0;
    r.expect_done();
  }
  {
    auto r = section("LOGI");
    c.mean_agg_demo.head.coefficients = r.doubles();
    c.mean_agg_demo.head.intercept = r.f64();
    c.mean_agg_demo.head.iterations = static_cast<int>(r.i64());
    c.mean_agg_demo.head.final_loss = r.f64();
    r.expect_done();
  }
  {
    auto r = section("RFST");
    c.forest = read_forest(r);
    r.expect_done();
  }
  {
    auto r = section("TRID");
    c.training_ids.resize(r.length(8));
    for (auto& id : c.training_ids) id = r.str();
    r.expect_done();
  }
  return c;
}

void save_checkpoint(const Checkpoint& c, const std::string& path) {
  const std::string bytes = serialize_checkpoint(c);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("failed writing checkpoint: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return deserialize_checkpoint(ss.str());
}

std::vector<double> score_samples(const Checkpoint& c, const std::vector<dataset::Sample>& samples) {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) {
    if (s.features.empty()) {
      out.push_back(0.5);
      continue;
    }
    switch (c.kind) {
      case ModelKind::aam:
      case ModelKind::aam_demo: {
        std::optional<dataset::Demographics> demo;
        if (c.aam->hyperparams().use_demographics) demo = s.demographics;
        out.push_back(c.aam->predict(s.features, demo).score);
        break;
      }
      case ModelKind::mean_agg: out.push_back(c.mean_agg.score(s.features)); break;
      case ModelKind::mean_agg_demo: out.push_back(c.mean_agg_demo.score(s)); break;
      case ModelKind::rf_demo:
        out.push_back(c.forest.predict(s.demographics.age * 100.0, static_cast<int>(s.demographics.sex)));
        break;
    }
  }
  return out;
}

model::Prediction predict_with_attention(const Checkpoint& c, const dataset::Sample& s) {
  if (!c.aam) throw std::invalid_argument("attention export needs an AAM checkpoint");
  std::optional<dataset::Demographics> demo;
  if (c.aam->hyperparams().use_demographics) demo = s.demographics;
  return c.aam->predict(s.features, demo);
}

}  // namespace aam::training
