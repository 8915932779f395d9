#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ersketch/sketch.hpp"

namespace ersketch {

/// Binary sketch layout, all little-endian:
///
///   header  : magic "SGSK" (4 bytes), version u32, n u64, epsilon f64,
///             nu2 f64, t0 u64, s u64, threshold f64, seed u64
///   per u   : u u32, degree f64, entry_count u32,
///             entry_count x (vertex u32, value f64), sorted by vertex
///
/// Reading then writing reproduces the input bytes exactly.
inline constexpr std::uint32_t kSketchMagic = 0x4b534753;  // "SGSK"
inline constexpr std::uint32_t kSketchVersion = 1;

void write_sketch_binary(std::ostream& out, const SigmaSketch& sketch);
SigmaSketch read_sketch_binary(std::istream& in);

std::vector<std::uint8_t> encode_sketch(const SigmaSketch& sketch);
SigmaSketch decode_sketch(const std::vector<std::uint8_t>& bytes);

/// JSON mirror with the same fields. Doubles are written in shortest
/// round-trip form, so decoding is lossless.
std::string sketch_to_json(const SigmaSketch& sketch);
SigmaSketch sketch_from_json(const std::string& text);

void save_sketch(const std::string& path, const SigmaSketch& sketch);
SigmaSketch load_sketch(const std::string& path);

}  // namespace ersketch
