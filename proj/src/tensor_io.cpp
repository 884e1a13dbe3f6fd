#include "tnorm/tensor_io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "tnorm/errors.hpp"

namespace tnorm::io {

namespace {

constexpr std::string_view kAlphabet =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

int decode_char(char c) {
  if (c >= 'A' && c <= 'Z') return c - 'A';
  if (c >= 'a' && c <= 'z') return c - 'a' + 26;
  if (c >= '0' && c <= '9') return c - '0' + 52;
  if (c == '+') return 62;
  if (c == '/') return 63;
  return -1;
}

std::vector<unsigned char> to_le_bytes(std::span<const double> values) {
  std::vector<unsigned char> bytes(values.size() * 8);
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto bits = std::bit_cast<std::uint64_t>(values[i]);
    for (int b = 0; b < 8; ++b) bytes[i * 8 + b] = static_cast<unsigned char>(bits >> (8 * b));
  }
  return bytes;
}

std::vector<double> from_le_bytes(std::span<const unsigned char> bytes) {
  if (bytes.size() % 8 != 0) throw std::runtime_error("payload length is not a multiple of 8");
  std::vector<double> values(bytes.size() / 8);
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= std::uint64_t{bytes[i * 8 + b]} << (8 * b);
    values[i] = std::bit_cast<double>(bits);
  }
  return values;
}

void expect(const nlohmann::json& doc, const char* key, std::string_view value) {
  if (!doc.contains(key) || doc[key] != value)
    throw std::runtime_error(std::string("tensor file: expected ") + key + " = \"" +
                             std::string(value) + "\"");
}

}  // namespace

std::string base64_encode(std::span<const unsigned char> bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 3 <= bytes.size(); i += 3) {
    const std::uint32_t w = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
    out += kAlphabet[(w >> 18) & 63];
    out += kAlphabet[(w >> 12) & 63];
    out += kAlphabet[(w >> 6) & 63];
    out += kAlphabet[w & 63];
  }
  const std::size_t rest = bytes.size() - i;
  if (rest > 0) {
    std::uint32_t w = bytes[i] << 16;
    if (rest == 2) w |= bytes[i + 1] << 8;
    out += kAlphabet[(w >> 18) & 63];
    out += kAlphabet[(w >> 12) & 63];
    out += rest == 2 ? kAlphabet[(w >> 6) & 63] : '=';
    out += '=';
  }
  return out;
}

std::vector<unsigned char> base64_decode(std::string_view text) {
  if (text.size() % 4 != 0) throw std::runtime_error("base64 length is not a multiple of 4");
  std::vector<unsigned char> out;
  out.reserve(text.size() / 4 * 3);
  for (std::size_t i = 0; i < text.size(); i += 4) {
    std::array<int, 4> v{};
    int pad = 0;
    for (int k = 0; k < 4; ++k) {
      const char c = text[i + k];
      if (c == '=' && i + 4 == text.size() && k >= 2) {
        v[k] = 0;
        ++pad;
        continue;
      }
      if (pad > 0) throw std::runtime_error("malformed base64 padding");
      v[k] = decode_char(c);
      if (v[k] < 0) throw std::runtime_error("invalid base64 character");
    }
    const std::uint32_t w = (v[0] << 18) | (v[1] << 12) | (v[2] << 6) | v[3];
    out.push_back(static_cast<unsigned char>(w >> 16));
    if (pad < 2) out.push_back(static_cast<unsigned char>(w >> 8));
    if (pad < 1) out.push_back(static_cast<unsigned char>(w));
  }
  return out;
}

std::string encode_tensor(const DenseTensor& x, Encoding encoding) {
  if (x.order() == 0) throw DimensionError("cannot serialize a 0-way tensor");
  if (encoding == Encoding::automatic)
    encoding = x.size() <= kInlineEntryLimit ? Encoding::json : Encoding::base64;
  nlohmann::ordered_json doc;
  doc["format"] = "tnorm.tensor";
  doc["version"] = 1;
  doc["order"] = x.order();
  doc["dims"] = x.shape().dims();
  doc["dtype"] = "f64";
  doc["layout"] = "row-major";
  if (encoding == Encoding::json) {
    doc["encoding"] = "json";
    doc["entries"] = std::vector<double>(x.entries().begin(), x.entries().end());
  } else {
    doc["encoding"] = "base64-le";
    doc["payload"] = base64_encode(to_le_bytes(x.entries()));
  }
  return doc.dump() + "\n";
}

DenseTensor decode_tensor(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(std::string("tensor file is not valid JSON: ") + e.what());
  }
  expect(doc, "format", "tnorm.tensor");
  if (doc.value("version", 0) != 1) throw std::runtime_error("unsupported tensor file version");
  expect(doc, "dtype", "f64");
  expect(doc, "layout", "row-major");
  Shape shape(doc.at("dims").get<std::vector<std::size_t>>());
  if (doc.at("order").get<std::size_t>() != shape.order())
    throw DimensionError("tensor file: order does not match dims");
  const std::string encoding = doc.at("encoding").get<std::string>();
  std::vector<double> entries;
  if (encoding == "json") {
    entries = doc.at("entries").get<std::vector<double>>();
  } else if (encoding == "base64-le") {
    entries = from_le_bytes(base64_decode(doc.at("payload").get<std::string>()));
  } else {
    throw std::runtime_error("unknown tensor encoding '" + encoding + "'");
  }
  return DenseTensor(std::move(shape), std::move(entries));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

void write_tensor(const std::filesystem::path& path, const DenseTensor& x, Encoding encoding) {
  write_file(path, encode_tensor(x, encoding));
}

DenseTensor read_tensor(const std::filesystem::path& path) { return decode_tensor(read_file(path)); }

}  // namespace tnorm::io
