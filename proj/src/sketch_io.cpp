#include "ersketch/sketch_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "ersketch/errors.hpp"
#include "json.hpp"

namespace ersketch {

namespace {

static_assert(std::endian::native == std::endian::little,
              "sketch encoding assumes a little-endian host");

class Writer {
 public:
  template <class T>
  void put(T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    const auto* p = reinterpret_cast<const std::uint8_t*>(&value);
    bytes_.insert(bytes_.end(), p, p + sizeof(T));
  }
  std::vector<std::uint8_t> take() { return std::move(bytes_); }

 private:
  std::vector<std::uint8_t> bytes_;
};

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

  template <class T>
  T get() {
    if (pos_ + sizeof(T) > bytes_.size()) throw ValidationError("sketch file is truncated");
    T value;
    std::memcpy(&value, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }
  bool done() const noexcept { return pos_ == bytes_.size(); }

 private:
  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_sketch(const SigmaSketch& sketch) {
  Writer w;
  const auto& p = sketch.params();
  w.put<std::uint32_t>(kSketchMagic);
  w.put<std::uint32_t>(kSketchVersion);
  w.put<std::uint64_t>(sketch.vertex_count());
  w.put<double>(p.epsilon);
  w.put<double>(p.nu2);
  w.put<std::uint64_t>(p.t0);
  w.put<std::uint64_t>(p.walks);
  w.put<double>(p.threshold);
  w.put<std::uint64_t>(sketch.seed());
  for (Vertex u = 0; u < sketch.vertex_count(); ++u) {
    const auto row = sketch.sorted_row(u);
    w.put<std::uint32_t>(u);
    w.put<double>(sketch.degree(u));
    w.put<std::uint32_t>(static_cast<std::uint32_t>(row.size()));
    for (const auto& [v, x] : row) {
      w.put<std::uint32_t>(v);
      w.put<double>(x);
    }
  }
  return w.take();
}

SigmaSketch decode_sketch(const std::vector<std::uint8_t>& bytes) {
  Reader r(bytes);
  if (r.get<std::uint32_t>() != kSketchMagic) throw ValidationError("not a sketch file (bad magic)");
  if (const auto version = r.get<std::uint32_t>(); version != kSketchVersion) {
    throw ValidationError("unsupported sketch version " + std::to_string(version));
  }
  const auto n = r.get<std::uint64_t>();
  SketchParams p;
  p.epsilon = r.get<double>();
  p.nu2 = r.get<double>();
  p.t0 = r.get<std::uint64_t>();
  p.walks = r.get<std::uint64_t>();
  p.threshold = r.get<double>();
  const auto seed = r.get<std::uint64_t>();
  if (n > (std::uint64_t{1} << 32)) throw ValidationError("sketch vertex count too large");

  std::vector<double> degrees(n);
  std::vector<SparseVector> sigma(n);
  for (std::uint64_t u = 0; u < n; ++u) {
    if (r.get<std::uint32_t>() != u) throw ValidationError("sketch records out of order");
    degrees[u] = r.get<double>();
    const auto count = r.get<std::uint32_t>();
    std::int64_t previous = -1;
    for (std::uint32_t k = 0; k < count; ++k) {
      const auto v = r.get<std::uint32_t>();
      const auto x = r.get<double>();
      if (static_cast<std::int64_t>(v) <= previous) throw ValidationError("sketch entries not sorted");
      previous = v;
      sigma[u].emplace(v, x);
    }
  }
  if (!r.done()) throw ValidationError("trailing bytes after sketch records");
  return SigmaSketch(p, seed, std::move(degrees), std::move(sigma));
}

void write_sketch_binary(std::ostream& out, const SigmaSketch& sketch) {
  const auto bytes = encode_sketch(sketch);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

SigmaSketch read_sketch_binary(std::istream& in) {
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_sketch(bytes);
}

std::string sketch_to_json(const SigmaSketch& sketch) {
  using nlohmann::ordered_json;
  const auto& p = sketch.params();
  ordered_json doc;
  doc["magic"] = "SGSK";
  doc["version"] = kSketchVersion;
  doc["n"] = sketch.vertex_count();
  doc["epsilon"] = p.epsilon;
  doc["nu2"] = p.nu2;
  doc["t0"] = p.t0;
  doc["s"] = p.walks;
  doc["threshold"] = p.threshold;
  doc["seed"] = sketch.seed();
  ordered_json rows = ordered_json::array();
  for (Vertex u = 0; u < sketch.vertex_count(); ++u) {
    ordered_json entries = ordered_json::array();
    for (const auto& [v, x] : sketch.sorted_row(u)) entries.push_back(ordered_json::array({v, x}));
    rows.push_back({{"u", u}, {"degree", sketch.degree(u)}, {"entries", std::move(entries)}});
  }
  doc["vertices"] = std::move(rows);
  return doc.dump();
}

SigmaSketch sketch_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
    if (doc.at("magic") != "SGSK") throw ValidationError("not a sketch document");
    if (doc.at("version").get<std::uint32_t>() != kSketchVersion) {
      throw ValidationError("unsupported sketch version");
    }
    SketchParams p;
    p.epsilon = doc.at("epsilon").get<double>();
    p.nu2 = doc.at("nu2").get<double>();
    p.t0 = doc.at("t0").get<std::size_t>();
    p.walks = doc.at("s").get<std::size_t>();
    p.threshold = doc.at("threshold").get<double>();
    const auto n = doc.at("n").get<std::size_t>();
    const auto& rows = doc.at("vertices");
    if (rows.size() != n) throw ValidationError("sketch document has wrong number of vertices");
    std::vector<double> degrees(n);
    std::vector<SparseVector> sigma(n);
    for (std::size_t u = 0; u < n; ++u) {
      const auto& row = rows[u];
      if (row.at("u").get<std::size_t>() != u) throw ValidationError("sketch records out of order");
      degrees[u] = row.at("degree").get<double>();
      for (const auto& entry : row.at("entries")) {
        sigma[u].emplace(entry.at(0).get<Vertex>(), entry.at(1).get<double>());
      }
    }
    return SigmaSketch(p, doc.at("seed").get<std::uint64_t>(), std::move(degrees), std::move(sigma));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed sketch JSON: ") + e.what());
  }
}

void save_sketch(const std::string& path, const SigmaSketch& sketch) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open " + path + " for writing");
  write_sketch_binary(out, sketch);
  if (!out) throw ValidationError("failed writing " + path);
}

SigmaSketch load_sketch(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  return read_sketch_binary(in);
}

}  // namespace ersketch
