#include "tornado/checkpoint.hpp"

#include "tornado/vtk.hpp"

#include <bit>
#include <cstring>

namespace tornado {

static_assert(std::endian::native == std::endian::little, "checkpoint format assumes little-endian hosts");

namespace {

std::uint64_t fnv1a(const char* data, std::size_t n) {
  std::uint64_t h = 1469598103934665603ull;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= static_cast<unsigned char>(data[i]);
    h *= 1099511628211ull;
  }
  return h;
}

template <class T> void put(std::string& out, const T& v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

class Reader {
public:
  Reader(const std::string& bytes, const std::string& source) : bytes_(bytes), source_(source) {}

  template <class T> T get() {
    if (pos_ + sizeof(T) > bytes_.size()) throw IoError(source_ + ": truncated checkpoint");
    T v;
    std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

private:
  const std::string& bytes_;
  const std::string& source_;
  std::size_t pos_ = 0;
};

} // namespace

std::string encode_checkpoint(const FieldState& s) {
  if (s.pressure.size() != s.velocity.size()) throw InvalidArgument("checkpoint: velocity/pressure size mismatch");
  std::string out;
  out.reserve(48 + s.velocity.size() * 32);
  out.append(kCheckpointMagic, sizeof(kCheckpointMagic));
  put(out, kCheckpointVersion);
  put(out, std::uint32_t{0});
  put(out, static_cast<std::int64_t>(s.step));
  put(out, s.time);
  put(out, static_cast<std::uint64_t>(s.velocity.size()));
  for (const auto& v : s.velocity) {
    put(out, v.x());
    put(out, v.y());
    put(out, v.z());
  }
  for (double p : s.pressure) put(out, p);
  put(out, fnv1a(out.data(), out.size()));
  return out;
}

FieldState decode_checkpoint(const std::string& bytes, const std::string& source) {
  if (bytes.size() < sizeof(kCheckpointMagic) || std::memcmp(bytes.data(), kCheckpointMagic, 8) != 0)
    throw IoError(source + ": not a checkpoint file");
  Reader r(bytes, source);
  r.get<std::uint64_t>(); // magic
  const auto version = r.get<std::uint32_t>();
  if (version != kCheckpointVersion)
    throw IoError(source + ": unsupported checkpoint version " + std::to_string(version));
  r.get<std::uint32_t>();
  FieldState s;
  s.step = static_cast<int>(r.get<std::int64_t>());
  s.time = r.get<double>();
  const auto n = r.get<std::uint64_t>();
  if (n > r.remaining() / 32) throw IoError(source + ": truncated checkpoint");
  s.velocity.resize(n);
  s.pressure.resize(n);
  for (auto& v : s.velocity) {
    const double x = r.get<double>(), y = r.get<double>(), z = r.get<double>();
    v = Vec3(x, y, z);
  }
  for (auto& p : s.pressure) p = r.get<double>();
  const std::size_t body = r.pos();
  const auto hash = r.get<std::uint64_t>();
  if (r.remaining() != 0) throw IoError(source + ": trailing bytes in checkpoint");
  if (hash != fnv1a(bytes.data(), body)) throw IoError(source + ": checkpoint checksum mismatch");
  return s;
}

void write_checkpoint(const std::filesystem::path& path, const FieldState& state) {
  write_file_atomic(path, encode_checkpoint(state));
}

FieldState read_checkpoint(const std::filesystem::path& path) {
  return decode_checkpoint(read_file(path), path.string());
}

} // namespace tornado
