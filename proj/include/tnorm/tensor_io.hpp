#pragma once

// Tensor file format, version 1. A single JSON object:
//
//   {"format":"tnorm.tensor","version":1,"order":K,"dims":[n_1,...,n_K],
//    "dtype":"f64","layout":"row-major","encoding":"json","entries":[...]}
//
// or, with "encoding":"base64-le", a "payload" string holding the entries as
// IEEE-754 binary64 little-endian bytes, base64 encoded (RFC 4648, padded).
// Entries are row-major (last index fastest) in both encodings. Readers
// reject unknown formats, versions, dtypes, layouts and encodings.

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tnorm/tensor.hpp"

namespace tnorm::io {

enum class Encoding { automatic, json, base64 };

/// Tensors up to this many entries are written inline when `automatic`.
inline constexpr std::size_t kInlineEntryLimit = 4096;

std::string encode_tensor(const DenseTensor& x, Encoding encoding = Encoding::automatic);
DenseTensor decode_tensor(std::string_view text);

void write_tensor(const std::filesystem::path& path, const DenseTensor& x,
                  Encoding encoding = Encoding::automatic);
DenseTensor read_tensor(const std::filesystem::path& path);

std::string base64_encode(std::span<const unsigned char> bytes);
std::vector<unsigned char> base64_decode(std::string_view text);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace tnorm::io
