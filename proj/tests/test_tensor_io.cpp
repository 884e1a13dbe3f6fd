#include <doctest.h>

#include <filesystem>

#include <json.hpp>

#include "test_util.hpp"
#include "tnorm/tensor_io.hpp"

using namespace tnorm;

TEST_CASE("base64 known vectors") {
  auto enc = [](std::string_view s) {
    return io::base64_encode({reinterpret_cast<const unsigned char*>(s.data()), s.size()});
  };
  CHECK(enc("") == "");
  CHECK(enc("f") == "Zg==");
  CHECK(enc("fo") == "Zm8=");
  CHECK(enc("foo") == "Zm9v");
  CHECK(enc("foobar") == "Zm9vYmFy");
  const auto d = io::base64_decode("Zm9vYmE=");
  CHECK(std::string(d.begin(), d.end()) == "fooba");
  CHECK_THROWS(io::base64_decode("Zm9"));
  CHECK_THROWS(io::base64_decode("Zm9*"));
}

TEST_CASE("tensor round trip is bit-exact in both encodings") {
  std::mt19937_64 gen(11);
  DenseTensor x = testing::gaussian_tensor(gen, {3, 5, 2});
  for (auto enc : {io::Encoding::json, io::Encoding::base64, io::Encoding::automatic}) {
    const DenseTensor y = io::decode_tensor(io::encode_tensor(x, enc));
    CHECK(y.shape() == x.shape());
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(y[i] == x[i]);
  }
  const DenseTensor tiny(Shape({3}), {5e-324, -0.0, 1.7976931348623157e308});
  const DenseTensor back = io::decode_tensor(io::encode_tensor(tiny, io::Encoding::json));
  CHECK(back[0] == 5e-324);
  CHECK(std::signbit(back[1]));
  CHECK(back[2] == 1.7976931348623157e308);
}

TEST_CASE("automatic encoding switches on size") {
  const auto small = nlohmann::json::parse(io::encode_tensor(DenseTensor::zeros(Shape({16, 16}))));
  CHECK(small["encoding"] == "json");
  const auto big = nlohmann::json::parse(io::encode_tensor(DenseTensor::zeros(Shape({65, 64}))));
  CHECK(big["encoding"] == "base64-le");
  CHECK(big["payload"].get<std::string>().size() == (65 * 64 * 8 + 2) / 3 * 4);
}

TEST_CASE("reader rejects malformed files") {
  const std::string good = io::encode_tensor(DenseTensor(Shape({2}), {1.0, 2.0}), io::Encoding::json);
  auto mutate = [&](const std::string& key, nlohmann::json value) {
    auto doc = nlohmann::json::parse(good);
    doc[key] = std::move(value);
    return doc.dump();
  };
  CHECK_NOTHROW(io::decode_tensor(good));
  CHECK_THROWS(io::decode_tensor("not json"));
  CHECK_THROWS(io::decode_tensor(mutate("format", "npy")));
  CHECK_THROWS(io::decode_tensor(mutate("version", 2)));
  CHECK_THROWS(io::decode_tensor(mutate("dtype", "f32")));
  CHECK_THROWS(io::decode_tensor(mutate("layout", "column-major")));
  CHECK_THROWS(io::decode_tensor(mutate("encoding", "hex")));
  CHECK_THROWS(io::decode_tensor(mutate("order", 2)));
  CHECK_THROWS(io::decode_tensor(mutate("entries", nlohmann::json::array({1.0}))));
}

TEST_CASE("file round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "tnorm_test_io";
  std::filesystem::create_directories(dir);
  std::mt19937_64 gen(12);
  const DenseTensor x = testing::gaussian_tensor(gen, {20, 20, 20});
  io::write_tensor(dir / "x.json", x);
  const DenseTensor y = io::read_tensor(dir / "x.json");
  CHECK(y.shape() == x.shape());
  CHECK(std::equal(x.entries().begin(), x.entries().end(), y.entries().begin()));
  CHECK_THROWS(io::read_tensor(dir / "missing.json"));
  std::filesystem::remove_all(dir);
}
